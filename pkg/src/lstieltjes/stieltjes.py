"""Generalized Stieltjes constants gamma_k(a, q).

gamma_k(a, q) is the limit as x -> oo of

    sum_{n <= x, n = a mod q} log^k(n)/n  -  log^(k+1)(x) / (q (k+1)).

Two independent routes are provided: :func:`stieltjes_direct` evaluates the
bracket at a finite cut (slow, low accuracy, used as an oracle) and
:func:`stieltjes_em` sums the progression n = a + m q with Euler-Maclaurin in
m. Neither touches the Hurwitz zeta engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import mpmath
import numpy as np
from mpmath import mp

from .errors import ConvergenceError, DomainError
from .precision import BERNOULLI, DEFAULT_CONTEXT, MAX_BERNOULLI_TERMS, PrecisionContext, as_mpf

MAX_ORDER = 8
MAX_DIRECT_TERMS = 10**8
_CHUNK = 1 << 20


@dataclass(frozen=True)
class StieltjesKey:
    k: int
    a: int
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise DomainError(f"modulus must be >= 1, got {self.q}")
        if not 1 <= self.a <= self.q:
            raise DomainError(f"residue must satisfy 1 <= a <= q, got a={self.a}, q={self.q}")
        if not 0 <= self.k <= MAX_ORDER:
            raise DomainError(f"order must lie in 0..{MAX_ORDER}, got {self.k}")


@dataclass(frozen=True)
class StieltjesValue:
    """A computed constant.

    ``digits`` is the number of decimal digits the method vouches for; for
    the direct method this is an estimate from the cut-doubling drift and is
    typically well below 10.
    """

    key: StieltjesKey
    value: "mpmath.mpf"
    digits: int
    method: str
    error_estimate: Optional["mpmath.mpf"] = None


def _aligned_cut(x: int, a: int, q: int) -> int:
    """Largest n <= x with n = a mod q."""
    return x - ((x - a) % q)


def _progression_sum(k: int, start: int, stop: int, q: int) -> float:
    """Float sum of log^k(n)/n over n = start, start+q, ..., <= stop."""
    if stop < start:
        return 0.0
    count = (stop - start) // q + 1
    partials = []
    for offset in range(0, count, _CHUNK):
        m = np.arange(offset, min(count, offset + _CHUNK), dtype=np.float64)
        n = start + q * m
        terms = np.log(n) ** k / n if k else 1.0 / n
        partials.append(float(np.sum(terms)))
    return math.fsum(partials)


def stieltjes_direct(key: StieltjesKey, x_cut: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> StieltjesValue:
    """The defining bracket evaluated at a finite cut.

    The cut is aligned down to a member of the progression, so the
    truncation error behaves like e(x) = log^k(x)/(2x). The drift between the
    cuts x and 2x is e(x)(1 - 1/rho) with rho = e(x)/e(2x), which is inverted
    to estimate e(x); a 25% margin is added on top.
    """
    k, a, q = key.k, key.a, key.q
    if x_cut < 10 * q:
        raise DomainError(f"x_cut must be >= 10q = {10 * q}, got {x_cut}")
    if 2 * x_cut // q > MAX_DIRECT_TERMS:
        raise DomainError(f"x_cut/q exceeds the {MAX_DIRECT_TERMS} term limit")
    x1 = _aligned_cut(x_cut, a, q)
    x2 = _aligned_cut(2 * x_cut, a, q)
    s1 = _progression_sum(k, a, x1, q)
    s2 = s1 + _progression_sum(k, x1 + q, x2, q)
    with ctx.activated():
        v1 = mpmath.mpf(s1) - mpmath.log(x1) ** (k + 1) / (q * (k + 1))
        v2 = mpmath.mpf(s2) - mpmath.log(x2) ** (k + 1) / (q * (k + 1))
        rho = (mpmath.log(x1) / mpmath.log(x2)) ** k * x2 / x1
        err = abs(v1 - v2) * rho / (rho - 1) * mpmath.mpf(1.25)
        digits = ctx.digits if err == 0 else max(0, min(ctx.digits, int(math.floor(-mpmath.log10(err)))))
        return StieltjesValue(key, v1, digits, "direct", err)


def _log_poly_derivatives(k: int, rmax: int) -> list[list[int]]:
    """Integer polynomials P_r with d^r/du^r [log^k(u)/u] = P_r(log u) / u^(r+1)."""
    polys = [[0] * k + [1]]
    for r in range(rmax):
        p = polys[-1]
        nxt = [-(r + 1) * c for c in p]
        for i in range(1, len(p)):
            nxt[i - 1] += i * p[i]
        polys.append(nxt)
    return polys


def _poly_eval(coeffs, x):
    acc = mpmath.mpf(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@lru_cache(maxsize=4096)
def _stieltjes_em_cached(k, a, q, dps, tol_exp, em_terms, em_bernoulli):
    with mp.workdps(dps):
        tol = mpmath.mpf(10) ** (-tol_exp)
        polys = _log_poly_derivatives(k, 2 * (em_bernoulli or MAX_BERNOULLI_TERMS))
        head_terms = em_terms or max(dps, 16)
        max_b = em_bernoulli or MAX_BERNOULLI_TERMS
        computed = 0
        head = mpmath.mpf(0)
        while True:
            for m in range(computed, head_terms):
                u = mpmath.mpf(a + m * q)
                head += mpmath.log(u) ** k / u
            computed = head_terms
            u = mpmath.mpf(a + head_terms * q)
            ell = mpmath.log(u)
            total = head - ell ** (k + 1) / (q * (k + 1)) + ell**k / u / 2
            # the r-th t-derivative of log^k(a+tq)/(a+tq) is q^r P_r(log u) / u^(r+1)
            qu = q / u
            scale = qu / u  # q^r / u^(r+1) at r = 1
            fact = 2
            last = None
            for j in range(1, max_b + 1):
                r = 2 * j - 1
                term = as_mpf(BERNOULLI[2 * j]) / fact * scale * _poly_eval(polys[r], ell)
                if em_bernoulli is None and abs(term) < tol:
                    last = abs(term)
                    break
                total -= term
                scale *= qu * qu
                fact *= (2 * j + 1) * (2 * j + 2)
            if last is not None or em_bernoulli is not None:
                return total, last if last is not None else abs(term)
            if em_terms is not None:
                raise ConvergenceError(f"stieltjes_em with {em_terms} direct terms did not reach 1e-{tol_exp}")
            head_terms *= 2


def stieltjes_em(key: StieltjesKey, ctx: PrecisionContext = DEFAULT_CONTEXT) -> StieltjesValue:
    """gamma_k(a, q) by Euler-Maclaurin summation along the progression.

    With n = a + m q, the terms m < M are summed exactly, the tail of
    g(m) = log^k(a+mq)/(a+mq) is replaced by its Euler-Maclaurin expansion,
    and the integral of g cancels the normalizing log-power at the matching
    cut, leaving only its value at m = M.
    """
    with ctx.activated():
        value, last = _stieltjes_em_cached(
            key.k, key.a, key.q, ctx.working_digits, ctx.digits + ctx.guard // 2,
            ctx.em_terms, ctx.em_bernoulli,
        )
        estimated = ctx.digits if last == 0 else int(math.floor(-mpmath.log10(last)))
        return StieltjesValue(key, +value, min(ctx.digits, estimated), "euler_maclaurin", last)


def stieltjes(k: int, a: int = 1, q: int = 1, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Convenience wrapper returning the bare value of gamma_k(a, q)."""
    return stieltjes_em(StieltjesKey(k, a, q), ctx).value
