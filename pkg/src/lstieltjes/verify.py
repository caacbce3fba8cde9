"""Identity harness: evaluates both sides of each identity by independent
routes over random admissible inputs and records the residuals."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath

from .characters import dirichlet_characters
from .errors import DomainError, HypothesisError
from .formatting import residual_string
from .hurwitz import log_gamma
from .lseries import (
    functional_equation_rhs,
    l_deriv_via_stieltjes,
    l_eval,
    l_prime_0,
    l_prime_1_odd,
    l_prime_1_odd_unnormalized,
)
from .periodic import (
    PeriodicFunction,
    b1,
    exact_b1_hat,
    fourier_transform,
    group_ring_mul,
    group_ring_sub,
    inverse_fourier,
    exact_fourier,
    is_dirichlet_type,
    is_odd,
    is_zero_exact,
)
from .precision import DEFAULT_CONTEXT, PrecisionContext, as_mpc
from .stieltjes import StieltjesKey, stieltjes_em

IDENTITIES = (
    "lemma1_even",
    "lemma1_odd",
    "lemma2",
    "lemma3",
    "identity_lemma_k",
    "residue_sum",
    "fourier_roundtrip",
    "pole_residue",
    "d_kl_expansion",
)
PARITY_DEPENDENT = {"lemma1_even", "lemma1_odd", "lemma3", "d_kl_expansion"}
DEFAULT_ORDERS = (0, 1, 2)


@dataclass
class IdentityReport:
    identity_id: str
    q: int
    instances: int
    max_residual: object
    worst_case: dict
    digits: int
    seed: int
    k: Optional[int] = None
    notes: dict = field(default_factory=dict)

    @property
    def threshold(self):
        return mpmath.mpf(10) ** (-mpmath.mpf(self.digits) / 2)

    @property
    def passed(self) -> bool:
        return self.max_residual < self.threshold

    def as_dict(self) -> dict:
        out = {
            "identity_id": self.identity_id,
            "q": self.q,
            "instances": self.instances,
            "max_residual": residual_string(self.max_residual),
            "threshold": residual_string(self.threshold),
            "verdict": "PASS" if self.passed else "FAIL",
            "worst_case": self.worst_case,
            "digits": self.digits,
            "seed": self.seed,
        }
        if self.k is not None:
            out["k"] = self.k
        if self.notes:
            out["notes"] = self.notes
        return out

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


# -- random admissible inputs -------------------------------------------------

def _rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-100, 100), rng.randint(1, 100))


def _nonzero(make, rng):
    while True:
        table = make(rng)
        if any(table):
            return table


def random_zero_sum(q: int, rng: random.Random, ctx: PrecisionContext) -> PeriodicFunction:
    """Random rational f with sum_a f(a) = 0, solved exactly for f(q)."""
    def make(rng):
        head = [_rational(rng) for _ in range(q - 1)]
        return head + [-sum(head, Fraction(0))]
    return PeriodicFunction.from_values(_nonzero(make, rng), ctx)


def random_nonzero_sum(q: int, rng: random.Random, ctx: PrecisionContext) -> PeriodicFunction:
    while True:
        table = [_rational(rng) for _ in range(q)]
        if sum(table) != 0:
            return PeriodicFunction.from_values(table, ctx)


def _odd_table(q: int, rng: random.Random, allowed=lambda a: True) -> list:
    table = [Fraction(0)] * q
    for a in range(1, (q - 1) // 2 + 1):
        if allowed(a):
            v = _rational(rng)
            table[a - 1] = v
            table[q - a - 1] = -v
    return table


def random_odd(q: int, rng: random.Random, ctx: PrecisionContext) -> PeriodicFunction:
    if q < 3:
        raise HypothesisError("odd functions with nonzero values need q >= 3")
    return PeriodicFunction.from_values(_nonzero(lambda r: _odd_table(q, r), rng), ctx)


def random_even(q: int, rng: random.Random, ctx: PrecisionContext) -> PeriodicFunction:
    def make(rng):
        table = [Fraction(0)] * q
        for a in range(1, q // 2 + 1):
            v = _rational(rng)
            table[a - 1] = v
            table[q - a - 1] = v
        table[q - 1] = _rational(rng)
        return table
    return PeriodicFunction.from_values(_nonzero(make, rng), ctx)


def random_odd_dirichlet_hat(q: int, rng: random.Random, ctx: PrecisionContext) -> PeriodicFunction:
    """Odd f whose transform is of Dirichlet type.

    Built as the inverse transform of a random odd rational table supported
    on residues coprime to q, so the transform is known exactly.
    """
    if q < 3:
        raise HypothesisError("odd functions with nonzero values need q >= 3")
    table = _nonzero(lambda r: _odd_table(q, r, lambda a: math.gcd(a, q) == 1), rng)
    return inverse_fourier(PeriodicFunction.from_values(table, ctx), ctx)


def random_complex(q: int, rng: random.Random, ctx: PrecisionContext) -> PeriodicFunction:
    table = [(_rational(rng), _rational(rng)) for _ in range(q)]
    with ctx.activated():
        values = tuple(as_mpc(pair) for pair in table)
    return PeriodicFunction(q, values)


def random_s(rng: random.Random, ctx: PrecisionContext):
    """Random complex s with 1.2 <= Re s <= 3.5 and |Im s| <= 3, as an exact
    decimal so every precision sees the same point."""
    re = Fraction(rng.randint(1200, 3500), 1000)
    im = Fraction(rng.randint(-3000, 3000), 1000)
    with ctx.activated():
        return mpmath.mpc(mpmath.mpf(re.numerator) / re.denominator, mpmath.mpf(im.numerator) / im.denominator)


# -- d_{k,l} -------------------------------------------------------------------

@dataclass
class DklResult:
    value: object
    expansion_value: object
    coefficients: tuple
    c_coefficient: object
    c_coefficient_exact: Optional[tuple]
    exact_coefficients: Optional[tuple] = None

    @property
    def residual(self):
        return abs(self.value - self.expansion_value)

    @property
    def c_cancels(self) -> bool:
        if self.c_coefficient_exact is not None:
            return is_zero_exact(self.c_coefficient_exact)
        return self.c_coefficient == 0


def _check_dkl_hypotheses(f: PeriodicFunction, fh: PeriodicFunction, ctx: PrecisionContext):
    if not is_odd(f, ctx):
        raise HypothesisError("d_kl needs odd functions")
    tol = ctx.equality_tolerance
    if abs(f(f.q)) > tol or abs(fh(f.q)) > tol:
        raise HypothesisError("d_kl needs f(q) = f_hat(q) = 0")


def d_kl(f_k: PeriodicFunction, f_l: PeriodicFunction, ctx: PrecisionContext = DEFAULT_CONTEXT) -> DklResult:
    """d = B_{1, fl_hat} L'(1, f_k) - B_{1, fk_hat} L'(1, f_l), two ways.

    ``value`` uses the series values of L'(1, .). ``expansion_value`` uses
    the closed form for L'(1, f): the constant multiplying B_{1, f_hat}
    enters with coefficient B_l B_k - B_k B_l, which vanishes, leaving
    -i pi sum_b coeff(b) log Gamma(b/q) with
    coeff(b) = B_{1, fl_hat} fk_hat(b) - B_{1, fk_hat} fl_hat(b).
    """
    if f_k.q != f_l.q:
        raise DomainError("d_kl needs functions of the same period")
    q = f_k.q
    with ctx.activated():
        hk = fourier_transform(f_k, ctx)
        hl = fourier_transform(f_l, ctx)
        _check_dkl_hypotheses(f_k, hk, ctx)
        _check_dkl_hypotheses(f_l, hl, ctx)
        bk, bl = b1(hk), b1(hl)
        value = bl * l_eval(f_k, 1, 1, ctx).value - bk * l_eval(f_l, 1, 1, ctx).value
        coefficients = tuple(bl * hk(b) - bk * hl(b) for b in range(1, q + 1))
        expansion = -1j * mpmath.pi * mpmath.fsum(
            c * log_gamma(Fraction(b, q), ctx) for b, c in enumerate(coefficients, start=1)
        )
        c_numeric = bl * bk - bk * bl

        exact_c = exact_coeffs = None
        ek, el = exact_b1_hat(f_k), exact_b1_hat(f_l)
        if ek is not None and el is not None:
            exact_c = group_ring_sub(group_ring_mul(el, ek), group_ring_mul(ek, el))
            xk, xl = exact_fourier(f_k), exact_fourier(f_l)
            exact_coeffs = tuple(
                group_ring_sub(group_ring_mul(el, xk[b]), group_ring_mul(ek, xl[b])) for b in range(q)
            )
    return DklResult(value, expansion, coefficients, c_numeric, exact_c, exact_coeffs)


# -- nonvanishing ---------------------------------------------------------------

def check_nonvanishing(f: PeriodicFunction, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(L(1, f), |L(1, f)| - 10^(-digits/2)); a positive margin certifies
    L(1, f) != 0 at this precision."""
    with ctx.activated():
        if not (f.exact is not None and sum(f.exact) == 0) and abs(f.total()) > ctx.equality_tolerance:
            raise HypothesisError("L(1, f) needs sum_a f(a) = 0")
        value = l_eval(f, 1, 0, ctx).value
        return value, abs(value) - mpmath.mpf(10) ** (-mpmath.mpf(ctx.digits) / 2)


def odd_primitive_character_checks(q: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> list[dict]:
    """For each odd primitive character mod q: L'(1, chi) by series vs
    -sum_a chi(a) gamma_1(a, q), plus the L(1, chi) nonvanishing margin."""
    table = dirichlet_characters(q, ctx)
    out = []
    with ctx.activated():
        for index, chi in enumerate(table.entries):
            if not (table.is_odd[index] and table.is_primitive[index]):
                continue
            series = l_eval(chi, 1, 1, ctx).value
            via_stieltjes = l_deriv_via_stieltjes(chi, 1, ctx)
            value, margin = check_nonvanishing(chi, ctx)
            out.append(
                {
                    "index": index,
                    "hat_is_dirichlet_type": is_dirichlet_type(fourier_transform(chi, ctx), ctx),
                    "residual": abs(series - via_stieltjes),
                    "l1": value,
                    "margin": margin,
                }
            )
    return out


# -- harness ------------------------------------------------------------------

def _rng(seed: int, identity_id: str, q: int, k: Optional[int]) -> random.Random:
    return random.Random(f"{seed}:{identity_id}:{q}:{k}")


def _relative(lhs, rhs):
    return abs(lhs - rhs) / max(1, abs(lhs))


def verify_identity(
    identity_id: str,
    q: int,
    trials: int,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    seed: int = 0,
    k: Optional[int] = None,
) -> IdentityReport:
    """Run ``trials`` random instances of one identity and report the worst
    residual. For ``identity_lemma_k`` the order k defaults to 1; for
    ``residue_sum`` omitting k checks k = 0, 1, 2."""
    if identity_id.startswith("identity_lemma_") and identity_id[len("identity_lemma_"):].isdigit():
        k = int(identity_id[len("identity_lemma_"):])
        identity_id = "identity_lemma_k"
    if identity_id not in IDENTITIES:
        raise DomainError(f"unknown identity {identity_id!r}; expected one of {', '.join(IDENTITIES)}")
    if identity_id in PARITY_DEPENDENT and q < 3:
        raise HypothesisError(f"{identity_id} needs q >= 3")
    if trials < 1:
        raise DomainError("trials must be positive")
    if identity_id == "identity_lemma_k" and k is None:
        k = 1

    rng = _rng(seed, identity_id, q, k)
    worst = mpmath.mpf(0)
    worst_case: dict = {}
    instances = 0
    notes: dict = {}

    def record(residual, case):
        nonlocal worst, worst_case, instances
        instances += 1
        if residual > worst or not worst_case:
            worst, worst_case = residual, case

    with ctx.activated():
        if identity_id in ("lemma1_even", "lemma1_odd"):
            parity = identity_id.split("_")[1]
            for _ in range(trials):
                f = (random_even if parity == "even" else random_odd)(q, rng, ctx)
                s = random_s(rng, ctx)
                lhs = l_eval(f, 1 - s, 0, ctx).value
                rhs = functional_equation_rhs(f, s, parity, ctx)
                record(_relative(lhs, rhs), {"f": f.describe(), "s": [mpmath.nstr(s.real, 10), mpmath.nstr(s.imag, 10)]})

        elif identity_id == "lemma2":
            for _ in range(trials):
                f = random_zero_sum(q, rng, ctx)
                record(_relative(l_eval(f, 0, 1, ctx).value, l_prime_0(f, ctx)), {"f": f.describe()})

        elif identity_id == "lemma3":
            deviation = mpmath.mpf(0)
            for _ in range(trials):
                f = random_odd(q, rng, ctx)
                series = l_eval(f, 1, 1, ctx).value
                record(_relative(series, l_prime_1_odd(f, ctx)), {"f": f.describe()})
                deviation = max(deviation, _relative(series, l_prime_1_odd_unnormalized(f, ctx)))
            notes["unnormalized_form_max_deviation"] = residual_string(deviation)

        elif identity_id == "identity_lemma_k":
            for _ in range(trials):
                f = random_zero_sum(q, rng, ctx)
                lhs = l_eval(f, 1, k, ctx).value
                record(_relative(lhs, l_deriv_via_stieltjes(f, k, ctx)), {"f": f.describe(), "k": k})

        elif identity_id == "residue_sum":
            for order in (DEFAULT_ORDERS if k is None else (k,)):
                total = mpmath.fsum(stieltjes_em(StieltjesKey(order, a, q), ctx).value for a in range(1, q + 1))
                classical = stieltjes_em(StieltjesKey(order, 1, 1), ctx).value
                record(abs(total - classical), {"k": order})

        elif identity_id == "fourier_roundtrip":
            for _ in range(trials):
                f = random_complex(q, rng, ctx)
                back = inverse_fourier(fourier_transform(f, ctx), ctx)
                record(back.max_abs_difference(f), {"f": f.describe()})

        elif identity_id == "pole_residue":
            s = 1 + mpmath.mpf(10) ** (-ctx.digits)
            for _ in range(trials):
                f = random_nonzero_sum(q, rng, ctx)
                value = (s - 1) * l_eval(f, s, 0, ctx).value
                record(abs(value - f.total() / q), {"f": f.describe(), "s_minus_1": f"1e-{ctx.digits}"})

        elif identity_id == "d_kl_expansion":
            maker = random_odd if _is_prime(q) else random_odd_dirichlet_hat
            exact_checks = 0
            for _ in range(trials):
                fk, fl = maker(q, rng, ctx), maker(q, rng, ctx)
                res = d_kl(fk, fl, ctx)
                residual = res.residual if res.c_cancels else mpmath.inf
                exact_checks += res.c_coefficient_exact is not None
                record(residual, {"f_k": fk.describe(), "f_l": fl.describe()})
            notes["exact_c_cancellations"] = exact_checks

    return IdentityReport(identity_id, q, instances, worst, worst_case, ctx.digits, seed, k, notes)


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, math.isqrt(n) + 1))


def verify_all(q: int, trials: int, ctx: PrecisionContext = DEFAULT_CONTEXT, seed: int = 0) -> list[IdentityReport]:
    """Every identity applicable to modulus q, with k = 0, 1, 2 for the
    Stieltjes identity."""
    reports = []
    for identity_id in IDENTITIES:
        if identity_id in PARITY_DEPENDENT and q < 3:
            continue
        if identity_id == "identity_lemma_k":
            reports.extend(verify_identity(identity_id, q, trials, ctx, seed, k) for k in DEFAULT_ORDERS)
        else:
            reports.append(verify_identity(identity_id, q, trials, ctx, seed))
    return reports
