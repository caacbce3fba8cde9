"""Integer relation detection (PSLQ) and the log-Gamma independence probe.

Only integer (equivalently rational) relations are searched for. A relation
with algebraic irrational coefficients is invisible to this module, so an
``excluded_at_bound`` result says nothing about such relations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath

from .errors import DomainError, PrecisionInadequate
from .hurwitz import log_gamma
from .precision import DEFAULT_CONTEXT, PrecisionContext

FOUND = "found"
EXCLUDED = "excluded_at_bound"
SCOPE_NOTE = (
    "integer coefficients only; relations with irrational algebraic coefficients "
    "are not detectable by this search"
)


@dataclass(frozen=True)
class IntegerRelation:
    coefficients: Optional[tuple]
    norm_bound: int
    residual: object
    status: str
    digits: int
    iterations: int = 0
    # smallest Euclidean norm any relation can still have, from the H diagonal
    norm_lower_bound: object = None
    reverified: Optional[bool] = None

    @property
    def found(self) -> bool:
        return self.status == FOUND

    def as_dict(self) -> dict:
        out = {
            "status": self.status,
            "coefficients": list(self.coefficients) if self.coefficients is not None else None,
            "norm_bound": self.norm_bound,
            "digits": self.digits,
            "iterations": self.iterations,
            "residual": mpmath.nstr(self.residual, 5) if self.residual is not None else None,
            "norm_lower_bound": mpmath.nstr(self.norm_lower_bound, 8) if self.norm_lower_bound is not None else None,
            "scope": SCOPE_NOTE,
        }
        if self.reverified is not None:
            out["reverified"] = self.reverified
        return out


def required_digits(n: int, norm_bound: int) -> int:
    """Minimum working digits accepted for an n-vector at this coefficient bound."""
    return math.ceil(10 * n + 2 * math.log10(max(norm_bound, 1)) * n)


def _normalize_relation(c: Sequence[int]) -> tuple:
    g = 0
    for x in c:
        g = math.gcd(g, x)
    c = [x // g for x in c] if g > 1 else list(c)
    first = next(x for x in c if x)
    return tuple(-x for x in c) if first < 0 else tuple(c)


def _pslq_core(x: list, norm_bound: int, tol, max_iter: int):
    """Ferguson-Bailey PSLQ on a unit vector ``x``.

    Returns (relation or None, iterations, norm lower bound). Stops with no
    relation once 1/max|H_jj| exceeds norm_bound * sqrt(n), since every
    integer relation m satisfies |m| >= 1/max|H_jj| at every iteration.
    """
    n = len(x)
    gamma = mpmath.sqrt(mpmath.mpf(4) / 3) * mpmath.mpf("1.0001")
    exclusion = norm_bound * mpmath.sqrt(n)

    s = [mpmath.sqrt(mpmath.fsum(x[j] ** 2 for j in range(k, n))) for k in range(n)]
    H = [[mpmath.mpf(0)] * (n - 1) for _ in range(n)]
    for i in range(n):
        for j in range(min(i + 1, n - 1)):
            if i == j:
                H[i][j] = s[j + 1] / s[j]
            else:
                H[i][j] = -x[i] * x[j] / (s[j] * s[j + 1])
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    B = [[int(i == j) for j in range(n)] for i in range(n)]
    y = list(x)

    def reduce_rows(i_start, j_cap):
        for i in range(i_start, n):
            for j in range(min(i - 1, j_cap), -1, -1):
                if H[j][j] == 0:
                    continue
                t = int(mpmath.nint(H[i][j] / H[j][j]))
                if t == 0:
                    continue
                y[j] += t * y[i]
                for k in range(j + 1):
                    H[i][k] -= t * H[j][k]
                for k in range(n):
                    A[i][k] -= t * A[j][k]
                    B[k][j] += t * B[k][i]

    def small_y():
        for j in range(n):
            if abs(y[j]) < tol:
                return [B[i][j] for i in range(n)]
        return None

    reduce_rows(1, n)
    bound = None
    # the initial reduction alone can expose a relation (e.g. x = (1, -7) / norm)
    relation = small_y()
    if relation is not None:
        return relation, 0, bound
    for it in range(1, max_iter + 1):
        m = max(range(n - 1), key=lambda i: gamma ** (i + 1) * abs(H[i][i]))
        y[m], y[m + 1] = y[m + 1], y[m]
        H[m], H[m + 1] = H[m + 1], H[m]
        A[m], A[m + 1] = A[m + 1], A[m]
        for row in B:
            row[m], row[m + 1] = row[m + 1], row[m]
        if m < n - 2:
            t0 = mpmath.sqrt(H[m][m] ** 2 + H[m][m + 1] ** 2)
            if t0 == 0:
                break
            t1, t2 = H[m][m] / t0, H[m][m + 1] / t0
            for i in range(m, n):
                t3, t4 = H[i][m], H[i][m + 1]
                H[i][m] = t1 * t3 + t2 * t4
                H[i][m + 1] = -t2 * t3 + t1 * t4
        reduce_rows(m + 1, m + 1)

        relation = small_y()
        if relation is not None:
            return relation, it, bound
        diag = max(abs(H[i][i]) for i in range(n - 1))
        if diag == 0:
            break
        bound = 1 / diag
        if bound > exclusion:
            return None, it, bound
        if max(abs(v) for row in A for v in row) > 10 ** (mpmath.mp.dps - 5):
            # A's entries approach the precision; further iterations are noise
            break
    raise PrecisionInadequate(
        f"PSLQ neither found a relation nor excluded one up to {norm_bound} "
        f"(norm lower bound reached {mpmath.nstr(bound or 0, 5)})"
    )


def pslq(
    v: Sequence,
    norm_bound: int,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    recompute: Optional[Callable[[PrecisionContext], Sequence]] = None,
    max_iter: int = 100000,
) -> IntegerRelation:
    """Search for integers c, 0 < max|c_i| <= norm_bound, with sum c_i v_i = 0.

    Refuses (PrecisionInadequate) when ctx.digits is below
    ``required_digits(len(v), norm_bound)``. A found relation is re-checked
    at ctx.digits + 20: from scratch via ``recompute`` when given, otherwise
    by re-evaluating the combination of the supplied values.
    """
    n = len(v)
    if n < 2:
        raise DomainError("pslq needs at least two numbers")
    if norm_bound < 1:
        raise DomainError("norm_bound must be positive")
    need = required_digits(n, norm_bound)
    if ctx.digits < need:
        raise PrecisionInadequate(f"{n} numbers at coefficient bound {norm_bound} need >= {need} digits, got {ctx.digits}")
    with ctx.activated():
        values = [mpmath.mpf(mpmath.re(c)) for c in v]
        scale = max(abs(c) for c in values)
        if scale == 0 or any(abs(c) <= scale * ctx.epsilon for c in values):
            raise DomainError("pslq needs nonzero entries")
        norm = mpmath.sqrt(mpmath.fsum(c**2 for c in values))
        x = [c / norm for c in values]
        tol = mpmath.mpf(10) ** (-(ctx.digits - 5))
        relation, iterations, bound = _pslq_core(x, norm_bound, tol, max_iter)
        if relation is None:
            return IntegerRelation(None, norm_bound, None, EXCLUDED, ctx.digits, iterations, bound)
        relation = _normalize_relation(relation)
        residual = abs(mpmath.fsum(c * a for c, a in zip(relation, values)))
    if max(abs(c) for c in relation) > norm_bound:
        # a relation exists but above the bound; nothing below the bound was excluded
        raise PrecisionInadequate(
            f"PSLQ met a relation with max coefficient {max(abs(c) for c in relation)} above the bound {norm_bound}"
        )
    reverified = _reverify(relation, values, ctx, recompute)
    return IntegerRelation(relation, norm_bound, residual, FOUND, ctx.digits, iterations, bound, reverified)


def _reverify(relation, values, ctx: PrecisionContext, recompute) -> bool:
    high = ctx.with_digits(ctx.digits + 20)
    with high.activated():
        fresh = [mpmath.mpf(mpmath.re(c)) for c in recompute(high)] if recompute else values
        residual = abs(mpmath.fsum(c * a for c, a in zip(relation, fresh)))
        return residual < mpmath.mpf(10) ** (-mpmath.mpf(ctx.digits) / 2)


def coprime_residues(q: int) -> list[int]:
    return [a for a in range(1, q + 1) if math.gcd(a, q) == 1]


def log_gamma_vector(q: int, ctx: PrecisionContext, extra_residues: Sequence[int] = ()) -> list:
    return [log_gamma(Fraction(a, q), ctx) for a in list(coprime_residues(q)) + list(extra_residues)]


def probe_conjecture(q: int, norm_bound: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> IntegerRelation:
    """PSLQ on (log Gamma(a/q)) over residues 1 <= a <= q coprime to q.

    Independence predicts ``excluded_at_bound``. A found relation is re-run at
    doubled precision; if it survives it is returned with status ``found``
    and should be treated as a counterexample or a precision bug.
    """
    if q <= 2:
        raise DomainError("the probe needs q > 2")
    vector = log_gamma_vector(q, ctx)
    result = pslq(vector, norm_bound, ctx, recompute=lambda c: log_gamma_vector(q, c))
    if result.found:
        doubled = ctx.with_digits(2 * ctx.digits)
        again = pslq(log_gamma_vector(q, doubled), norm_bound, doubled)
        if not again.found or again.coefficients != result.coefficients:
            return again
    return result
