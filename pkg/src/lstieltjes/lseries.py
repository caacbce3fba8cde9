"""L(s, f) for periodic f, its derivatives, and its closed forms.

Evaluation goes through L(s, f) = q^-s sum_a f(a) zeta(s, a/q). When the
values of f sum to zero the regularized Hurwitz engine is used, so the
1/(s-1) parts cancel analytically and s = 1 is an ordinary point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath

from .errors import DomainError, HypothesisError, PoleError
from .hurwitz import euler_gamma, hurwitz_zeta_derivs, log_gamma, MAX_DERIVATIVE
from .periodic import PeriodicFunction, b1, fourier_transform, is_even, is_odd
from .precision import DEFAULT_CONTEXT, PrecisionContext
from .stieltjes import StieltjesKey, stieltjes_em


@dataclass(frozen=True)
class LSeriesEvaluation:
    s: object
    value: Optional[object]
    deriv_order: int
    pole_flag: bool = False
    residue: Optional[object] = None


def _sum_vanishes(f: PeriodicFunction, ctx: PrecisionContext) -> bool:
    if f.exact is not None:
        return sum(f.exact) == 0
    return abs(f.total()) <= ctx.equality_tolerance


def _require_zero_sum(f: PeriodicFunction, ctx: PrecisionContext, what: str) -> None:
    if not _sum_vanishes(f, ctx):
        raise HypothesisError(f"{what} requires sum_a f(a) = 0")


def l_eval(
    f: PeriodicFunction,
    s,
    k: int = 0,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    allow_pole: bool = False,
) -> LSeriesEvaluation:
    """k-th derivative of L(s, f).

    At s = 1 with a nonzero period sum this raises :class:`PoleError`, or
    returns an evaluation flagged as a pole (carrying the residue) when
    ``allow_pole`` is set.
    """
    if not 0 <= k <= MAX_DERIVATIVE:
        raise DomainError(f"derivative order must lie in 0..{MAX_DERIVATIVE}, got {k}")
    q = f.q
    with ctx.activated():
        s = mpmath.mpmathify(s)
        if isinstance(s, mpmath.mpc) and s.imag == 0:
            s = s.real
        regularized = _sum_vanishes(f, ctx)
        if s == 1 and not regularized:
            residue = f.total() / q
            if allow_pole:
                return LSeriesEvaluation(s, None, k, True, residue)
            raise PoleError(f"L(s, f) has a pole at s = 1 with residue {mpmath.nstr(residue, 15)}", residue)

        # S_j = sum_a f(a) zeta^(j)(s, a/q)
        sums = [mpmath.mpf(0)] * (k + 1)
        for a in range(1, q + 1):
            fa = f(a)
            if fa == 0:
                continue
            derivs = hurwitz_zeta_derivs(s, Fraction(a, q), k, ctx, regularized=regularized)
            for j in range(k + 1):
                sums[j] += fa * derivs[j]
        minus_log_q = -mpmath.log(q)
        # d^k/ds^k [q^-s S(s)] = q^-s sum_j C(k, j) (-log q)^(k-j) S^(j)(s)
        total = mpmath.fsum(mpmath.binomial(k, j) * minus_log_q ** (k - j) * sums[j] for j in range(k + 1))
        value = mpmath.power(q, -s) * total
        return LSeriesEvaluation(s, _tidy(value), k)


def _tidy(z):
    """Drop an exactly-zero imaginary part."""
    if isinstance(z, mpmath.mpc) and z.imag == 0:
        return z.real
    return z


def _real_for_real_odd(f: PeriodicFunction, z):
    """For real odd f, f_hat is purely imaginary and the closed forms below
    are real; drop the round-off imaginary part."""
    if f.exact is not None and isinstance(z, mpmath.mpc):
        return z.real
    return _tidy(z)


def l_value(f: PeriodicFunction, s, k: int = 0, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Shorthand for ``l_eval(...).value``."""
    return l_eval(f, s, k, ctx).value


def _check_odd(f: PeriodicFunction, ctx: PrecisionContext) -> None:
    if not is_odd(f, ctx):
        raise HypothesisError("f must be odd: f(q - n) = -f(n)")


def l1_odd_closed(f: PeriodicFunction, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """L(1, f) = -(i pi / q) B_{1, f_hat} for odd f."""
    _check_odd(f, ctx)
    with ctx.activated():
        fh = fourier_transform(f, ctx)
        if abs(fh(f.q)) > ctx.equality_tolerance:
            raise HypothesisError("f_hat(q) must vanish")
        return _real_for_real_odd(f, -1j * mpmath.pi / f.q * b1(fh))


def l_prime_0(f: PeriodicFunction, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """L'(0, f) = (log q / q) B_{1,f} + sum_b f(b) log Gamma(b/q).

    log Gamma comes from the Stirling-series implementation, so this route is
    independent of the Hurwitz derivative engine.
    """
    _require_zero_sum(f, ctx, "L'(0, f) closed form")
    q = f.q
    with ctx.activated():
        value = mpmath.log(q) / q * b1(f) + mpmath.fsum(
            f(b) * log_gamma(Fraction(b, q), ctx) for b in range(1, q + 1) if f(b) != 0
        )
        return _tidy(value)


def odd_closed_form_constant(q: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(1 + 1/q) log q - log 2 pi - gamma, recomputed for each context."""
    with ctx.activated():
        return (1 + mpmath.mpf(1) / q) * mpmath.log(q) - mpmath.log(2 * mpmath.pi) - euler_gamma(ctx)


def _check_odd_closed_form_hypotheses(f: PeriodicFunction, ctx: PrecisionContext) -> PeriodicFunction:
    _check_odd(f, ctx)
    tol = ctx.equality_tolerance
    if abs(f(f.q)) > tol:
        raise HypothesisError("f(q) must vanish")
    fh = fourier_transform(f, ctx)
    if abs(fh(f.q)) > tol:
        raise HypothesisError("f_hat(q) must vanish")
    return fh


def _log_gamma_pairing(g: PeriodicFunction, ctx: PrecisionContext):
    q = g.q
    return mpmath.fsum(g(b) * log_gamma(Fraction(b, q), ctx) for b in range(1, q + 1) if g(b) != 0)


def l_prime_1_odd(f: PeriodicFunction, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """L'(1, f) for odd f with f(q) = f_hat(q) = 0.

    Differentiating the odd functional equation for f_hat at s = 1, and using
    that transforming an odd f twice gives -f/q, yields

        L'(1, f) = -i pi L'(0, f_hat) - (log(q / 2pi) - gamma) L(1, f).

    Both terms have closed forms (B_{1, f_hat} and log Gamma(b/q)), giving

        L'(1, f) = (i pi / q) [ -(log 2pi + gamma) B_{1, f_hat}
                                - q sum_b f_hat(b) log Gamma(b/q) ].
    """
    with ctx.activated():
        fh = _check_odd_closed_form_hypotheses(f, ctx)
        q = f.q
        c = -mpmath.log(2 * mpmath.pi) - euler_gamma(ctx)
        return _real_for_real_odd(f, 1j * mpmath.pi / q * (c * b1(fh) - q * _log_gamma_pairing(fh, ctx)))


def l_prime_1_odd_unnormalized(f: PeriodicFunction, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(i pi / q) [C B_{1, f_hat} + sum_b f_hat(b) log Gamma(b/q)] with
    C = (1 + 1/q) log q - log 2 pi - gamma.

    This is what the derivation produces if the double transform of f is
    taken to be f itself instead of -f/q. It does not equal L'(1, f); it is
    kept so the harness can report how far off it is.
    """
    with ctx.activated():
        fh = _check_odd_closed_form_hypotheses(f, ctx)
        q = f.q
        return _tidy(1j * mpmath.pi / q * (odd_closed_form_constant(q, ctx) * b1(fh) + _log_gamma_pairing(fh, ctx)))


def functional_equation_rhs(f: PeriodicFunction, s, parity: str, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Right-hand side of the functional equation for L(1 - s, f).

    even: 2 Gamma(s) (q / 2pi)^s cos(pi s / 2) L(s, f_hat)
    odd:  2 i Gamma(s) (q / 2pi)^s sin(pi s / 2) L(s, f_hat)
    """
    if parity == "even":
        if not is_even(f, ctx):
            raise HypothesisError("f is not even")
    elif parity == "odd":
        if not is_odd(f, ctx):
            raise HypothesisError("f is not odd")
    else:
        raise DomainError(f"parity must be 'odd' or 'even', got {parity!r}")
    q = f.q
    with ctx.activated():
        s = mpmath.mpmathify(s)
        if s.imag == 0 and s.real <= 0 and s.real == mpmath.floor(s.real):
            raise PoleError(f"Gamma(s) has a pole at s = {s.real}")
        fh = fourier_transform(f, ctx)
        l_hat = l_eval(fh, s, 0, ctx).value
        factor = 2 * mpmath.gamma(s) * mpmath.power(q / (2 * mpmath.pi), s)
        if parity == "even":
            return _tidy(factor * mpmath.cospi(s / 2) * l_hat)
        return _tidy(1j * factor * mpmath.sinpi(s / 2) * l_hat)


def l_deriv_via_stieltjes(f: PeriodicFunction, k: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(-1)^k sum_a f(a) gamma_k(a, q), which equals L^(k)(1, f) when the
    period sum of f vanishes."""
    _require_zero_sum(f, ctx, "the Stieltjes expansion of L^(k)(1, f)")
    q = f.q
    with ctx.activated():
        total = mpmath.fsum(
            f(a) * stieltjes_em(StieltjesKey(k, a, q), ctx).value for a in range(1, q + 1) if f(a) != 0
        )
        return _tidy((-1) ** k * total)
