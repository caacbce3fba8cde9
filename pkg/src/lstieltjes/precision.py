"""Working-precision bookkeeping and exact Bernoulli numbers."""

from __future__ import annotations

import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterator, Optional

import mpmath
from mpmath import mp

from .errors import DomainError

MAX_BERNOULLI_TERMS = 64


@dataclass(frozen=True)
class PrecisionContext:
    """Requested decimal digits plus guard digits.

    ``em_terms`` and ``em_bernoulli`` pin the Euler-Maclaurin truncation
    (number of directly summed terms and of Bernoulli corrections). Left as
    ``None`` they are chosen per call so the first omitted correction falls
    below :attr:`tolerance`.
    """

    digits: int = 50
    guard: int = 20
    em_terms: Optional[int] = None
    em_bernoulli: Optional[int] = None

    def __post_init__(self):
        if self.digits < 10:
            raise DomainError(f"digits must be >= 10, got {self.digits}")
        if self.guard < 20:
            raise DomainError(f"guard must be >= 20, got {self.guard}")
        if self.em_bernoulli is not None and not 1 <= self.em_bernoulli <= MAX_BERNOULLI_TERMS:
            raise DomainError(f"em_bernoulli must lie in 1..{MAX_BERNOULLI_TERMS}")
        if self.em_terms is not None and self.em_terms < 1:
            raise DomainError("em_terms must be positive")

    @property
    def working_digits(self) -> int:
        return self.digits + self.guard

    @property
    def tolerance(self):
        """Truncation target for series remainders, 10^-(digits + guard/2)."""
        return mpmath.mpf(10) ** (-(self.digits + self.guard // 2))

    @property
    def equality_tolerance(self):
        """Entry-wise tolerance used by structural predicates (parity, zero tests)."""
        return mpmath.mpf(10) ** (-(self.digits - self.guard // 2))

    @property
    def epsilon(self):
        return mpmath.mpf(10) ** (-self.digits)

    def with_digits(self, digits: int) -> "PrecisionContext":
        return replace(self, digits=digits)

    @contextmanager
    def activated(self) -> Iterator["PrecisionContext"]:
        """Run the body at ``working_digits`` decimal digits."""
        with mp.workdps(self.working_digits):
            yield self

    def default_em_terms(self, imag_part=0) -> int:
        n = math.ceil(self.working_digits * math.log(10) / math.log(2))
        return max(n, math.ceil(2 * abs(float(imag_part))))


DEFAULT_CONTEXT = PrecisionContext()


class BernoulliCache:
    """Exact rational Bernoulli numbers, B_1 = -1/2.

    Grown on demand with the recurrence sum_{j<=m} C(m+1, j) B_j = 0 and
    read-only afterwards apart from appends under a lock.
    """

    def __init__(self):
        self._table = [Fraction(1)]
        self._lock = threading.Lock()

    def _extend(self, n: int) -> None:
        with self._lock:
            table = self._table
            while len(table) <= n:
                m = len(table)
                acc = Fraction(0)
                binom = 1
                for j in range(m):
                    acc += binom * table[j]
                    binom = binom * (m + 1 - j) // (j + 1)
                table.append(-acc / (m + 1))

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            raise IndexError(n)
        if n >= len(self._table):
            self._extend(n)
        return self._table[n]

    def upto(self, n: int) -> list[Fraction]:
        self[n]
        return self._table[: n + 1]


BERNOULLI = BernoulliCache()


def bernoulli(n: int) -> Fraction:
    return BERNOULLI[n]


def as_mpf(value):
    """Convert ints, Fractions, decimal strings or mpmath numbers to mpf at
    the active precision."""
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


def as_mpc(value):
    if isinstance(value, Fraction):
        return mpmath.mpc(as_mpf(value))
    if isinstance(value, tuple) and len(value) == 2:
        return mpmath.mpc(as_mpf(value[0]), as_mpf(value[1]))
    return mpmath.mpc(value)
