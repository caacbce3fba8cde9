"""Hurwitz zeta, its s-derivatives, log-Gamma and Euler's constant.

The zeta engine is Euler-Maclaurin summation in n,

    zeta(s, x) = sum_{n<N} (n+x)^-s + (N+x)^(1-s)/(s-1) + (N+x)^-s / 2
                 + sum_{j=1}^M B_2j/(2j)! (s)_{2j-1} (N+x)^(-s-2j+1) + R,

differentiated term by term in s. The "regularized" variant replaces the
pole term by its finite part, (w^(1-s) - 1)/(s-1), which is exactly
zeta(s, x) - 1/(s-1) and stays finite at s = 1.

log_gamma is an independent Stirling-series implementation; it never calls
the zeta engine.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Union

import mpmath
from mpmath import mp

from .errors import ConvergenceError, DomainError, PoleError
from .precision import (
    BERNOULLI,
    DEFAULT_CONTEXT,
    MAX_BERNOULLI_TERMS,
    PrecisionContext,
    as_mpf,
)

MAX_DERIVATIVE = 8

RealArg = Union[int, Fraction, "mpmath.mpf"]


def _normalize_s(s):
    s = mpmath.mpmathify(s)
    if isinstance(s, mpmath.mpc) and s.imag == 0:
        s = s.real
    return s


def _normalize_x(x) -> Union[Fraction, "mpmath.mpf"]:
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
    elif isinstance(x, str):
        x = Fraction(x)
    else:
        x = mpmath.mpf(x)
    if not 0 < x <= 1:
        raise DomainError(f"x must lie in (0, 1], got {x}")
    return x


def _pole_term_derivs(s, w, logw, kmax, regularized, tol):
    """Derivatives 0..kmax in s of w^(1-s)/(s-1), or of its finite part."""
    if regularized:
        d = s - 1
        if d == 0 or abs(d) * max(logw, 1) <= 1:
            # (w^(1-s) - 1)/(s-1) = sum_m (-L)^(m+1) (s-1)^m / (m+1)!
            out = []
            for k in range(kmax + 1):
                total = mpmath.mpf(0)
                m = k
                while True:
                    term = (-logw) ** (m + 1) / mpmath.factorial(m + 1) * mpmath.ff(m, k)
                    if d != 0:
                        term *= d ** (m - k)
                    total += term
                    if d == 0 or (m > k + 2 and abs(term) < tol * 1e-10):
                        break
                    m += 1
                out.append(total)
            return out
    d = s - 1
    if d == 0:
        raise PoleError("zeta(s, x) has a pole at s = 1")
    w1s = mpmath.power(w, 1 - s)
    out = []
    for k in range(kmax + 1):
        total = 0
        for j in range(k + 1):
            total += mpmath.binomial(k, j) * (-logw) ** (k - j) * (-1) ** j * mpmath.factorial(j) / d ** (j + 1)
        total *= w1s
        if regularized:
            total -= (-1) ** k * mpmath.factorial(k) / d ** (k + 1)
        out.append(total)
    return out


def _em_tail(s, w, kmax, regularized, tol, max_terms, require_convergence):
    """Euler-Maclaurin tail at w = N + x. Returns (derivs, converged)."""
    logw = mpmath.log(w)
    ws = mpmath.power(w, -s)
    neg_log_pow = [(-logw) ** i for i in range(kmax + 1)]
    out = _pole_term_derivs(s, w, logw, kmax, regularized, tol)
    for k in range(kmax + 1):
        out[k] += ws * neg_log_pow[k] / 2

    # Taylor coefficients in t of the Pochhammer symbol (s + t)_{2j-1}
    poch = ([s, mpmath.mpf(1)] + [mpmath.mpf(0)] * kmax)[: kmax + 1]
    w_inv2 = 1 / (w * w)
    power = ws / w  # w^(-s-2j+1) for j = 1
    fact = 2  # (2j)!
    converged = False
    for j in range(1, max_terms + 1):
        coeff = as_mpf(BERNOULLI[2 * j]) / fact
        biggest = 0
        for k in range(kmax + 1):
            term = 0
            for i in range(k + 1):
                if i < len(poch):
                    term += mpmath.binomial(k, i) * mpmath.factorial(i) * poch[i] * neg_log_pow[k - i]
            term *= coeff * power
            out[k] += term
            biggest = max(biggest, abs(term))
        if require_convergence and biggest < tol:
            converged = True
            break
        # advance to j + 1: multiply by (s + 2j - 1 + t)(s + 2j + t), truncate at degree kmax
        for shift in (2 * j - 1, 2 * j):
            a = s + shift
            new = [a * poch[0]]
            for i in range(1, kmax + 1):
                new.append(a * poch[i] + poch[i - 1])
            poch = new
        power *= w_inv2
        fact *= (2 * j + 1) * (2 * j + 2)
    return out, converged or not require_convergence


@lru_cache(maxsize=8192)
def _hurwitz_derivs_cached(s, x, kmax, regularized, dps, tol_exp, em_terms, em_bernoulli):
    with mp.workdps(dps):
        tol = mpmath.mpf(10) ** (-tol_exp)
        xm = as_mpf(x)
        imag = s.imag if isinstance(s, mpmath.mpc) else 0
        n_terms = em_terms or max(math.ceil(dps * math.log(10) / math.log(2)), math.ceil(2 * abs(float(imag))))
        max_b = em_bernoulli or MAX_BERNOULLI_TERMS
        require = em_bernoulli is None
        while True:
            head = [mpmath.mpf(0)] * (kmax + 1)
            for n in range(n_terms):
                u = n + xm
                lu = mpmath.log(u)
                p = mpmath.power(u, -s)
                for k in range(kmax + 1):
                    head[k] += p
                    p *= -lu
            tail, ok = _em_tail(s, n_terms + xm, kmax, regularized, tol, max_b, require)
            if ok:
                return tuple(h + t for h, t in zip(head, tail))
            if em_terms is not None:
                raise ConvergenceError(f"Euler-Maclaurin with N={em_terms} did not reach 1e-{tol_exp}")
            n_terms *= 2


def hurwitz_zeta_derivs(s, x, kmax: int, ctx: PrecisionContext = DEFAULT_CONTEXT, regularized: bool = False):
    """Derivatives 0..kmax of zeta(s, x) in s, as a list.

    With ``regularized=True`` the values are those of zeta(s, x) - 1/(s-1),
    which is entire; this is how pole cancellation at s = 1 is handled.
    """
    if not 0 <= kmax <= MAX_DERIVATIVE:
        raise DomainError(f"derivative order must lie in 0..{MAX_DERIVATIVE}, got {kmax}")
    x = _normalize_x(x)
    with ctx.activated():
        s = _normalize_s(s)
        if s == 1 and not regularized:
            raise PoleError("zeta(s, x) has a pole at s = 1 with residue 1", residue=1)
        values = _hurwitz_derivs_cached(
            s, x, kmax, regularized, ctx.working_digits, ctx.digits + ctx.guard // 2,
            ctx.em_terms, ctx.em_bernoulli,
        )
        return [+v for v in values]


def hurwitz_zeta(s, x, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """zeta(s, x) for x in (0, 1] and s != 1."""
    return hurwitz_zeta_derivs(s, x, 0, ctx)[0]


def hurwitz_zeta_deriv(s, x, k: int, ctx: PrecisionContext = DEFAULT_CONTEXT, regularized: bool = False):
    """k-th s-derivative of zeta(s, x), 0 <= k <= 8."""
    return hurwitz_zeta_derivs(s, x, k, ctx, regularized)[k]


def riemann_zeta(s, ctx: PrecisionContext = DEFAULT_CONTEXT):
    return hurwitz_zeta(s, 1, ctx)


def digamma(x, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """psi(x) as minus the constant term of zeta(s, x) at s = 1."""
    return -hurwitz_zeta_derivs(1, x, 0, ctx, regularized=True)[0]


def euler_gamma(ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Euler's constant, computed as -psi(1)."""
    return -digamma(1, ctx)


@lru_cache(maxsize=4096)
def _log_gamma_cached(x, dps):
    with mp.workdps(dps):
        tol = mpmath.mpf(10) ** (-(dps - 10))
        shift = max(10, math.ceil(0.6 * dps))
        while True:
            # log Gamma(x) = log Gamma(x + shift) - log prod_{j<shift} (x + j)
            if isinstance(x, Fraction):
                num, den = x.numerator, x.denominator
                prod = 1
                for j in range(shift):
                    prod *= num + j * den
                log_prod = mpmath.log(prod) - shift * mpmath.log(den)
            else:
                log_prod = mpmath.log(mpmath.fprod(x + j for j in range(shift)))
            z = as_mpf(x) + shift
            total = (z - mpmath.mpf(0.5)) * mpmath.log(z) - z + mpmath.log(2 * mpmath.pi) / 2
            zpow = z
            z2 = z * z
            for j in range(1, MAX_BERNOULLI_TERMS + 1):
                term = as_mpf(BERNOULLI[2 * j]) / (2 * j * (2 * j - 1) * zpow)
                if abs(term) < tol:
                    # for real z > 0 the remainder is bounded by the first omitted term
                    return total - log_prod
                total += term
                zpow *= z2
            shift *= 2


def log_gamma(x, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """log Gamma(x) for real x > 0 via argument raising and Stirling's series."""
    if isinstance(x, (int, Fraction, str)):
        x = Fraction(x)
        if x <= 0:
            raise DomainError(f"log_gamma needs x > 0, got {x}")
        if x in (1, 2):
            return mpmath.mpf(0)
    with ctx.activated():
        if not isinstance(x, Fraction):
            x = mpmath.mpf(x)
            if x <= 0:
                raise DomainError(f"log_gamma needs x > 0, got {x}")
        return +_log_gamma_cached(x, ctx.working_digits)
