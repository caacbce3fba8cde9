"""Arithmetical functions of period q.

Values are stored for the residues 1..q in that order, so ``values[-1]`` is
the value at 0 mod q. When every entry is rational the exact table is kept
alongside the mpmath values; it feeds the exact group-ring computations used
by the d_{k,l} machinery in :mod:`lstieltjes.verify`.
"""

from __future__ import annotations

import math
from contextlib import nullcontext
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Optional, Sequence

import mpmath
from mpmath import mp

from .errors import DomainError
from .precision import DEFAULT_CONTEXT, PrecisionContext, as_mpc

ExactTable = Optional[tuple]


def _parse_exact(value):
    """Return a Fraction when ``value`` is an exact rational, else None."""
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if any(ch in text for ch in "ijIJ"):
            return None
        try:
            return Fraction(text)
        except ValueError:
            return None
    return None


def _active(ctx: Optional[PrecisionContext]):
    return ctx.activated() if ctx is not None else nullcontext()


@dataclass(frozen=True, eq=False)
class PeriodicFunction:
    """A function on the integers with period ``q``.

    ``values[i]`` holds f(i+1) as an mpc. ``exact`` optionally holds the same
    table as Fractions, and ``exact_hat`` the Fourier transform's table when
    that is known to be rational (functions built as inverse transforms).
    Arithmetic between functions runs at the ambient mpmath precision, so
    callers combine functions inside ``ctx.activated()``.
    """

    q: int
    values: tuple
    exact: ExactTable = None
    exact_hat: ExactTable = None

    def __post_init__(self):
        if self.q < 1:
            raise DomainError(f"period must be >= 1, got {self.q}")
        if len(self.values) != self.q:
            raise DomainError(f"expected {self.q} values, got {len(self.values)}")
        for table in (self.exact, self.exact_hat):
            if table is not None and len(table) != self.q:
                raise DomainError("exact table has the wrong length")

    @classmethod
    def from_values(cls, values: Sequence, ctx: Optional[PrecisionContext] = None) -> "PeriodicFunction":
        """Build from f(1), ..., f(q).

        Entries may be ints, Fractions, decimal or ``"p/r"`` strings, Python
        complex numbers or mpmath numbers. Conversion happens at the precision
        of ``ctx`` (or the ambient mpmath precision).
        """
        values = list(values)
        exact = [_parse_exact(v) for v in values]
        with _active(ctx):
            converted = tuple(as_mpc(e if e is not None else v) for e, v in zip(exact, values))
        exact_table = tuple(exact) if all(e is not None for e in exact) else None
        return cls(len(values), converted, exact_table)

    @classmethod
    def zero(cls, q: int, ctx: Optional[PrecisionContext] = None) -> "PeriodicFunction":
        return cls.from_values([0] * q, ctx)

    def __call__(self, n: int):
        return self.values[(n - 1) % self.q]

    def __len__(self):
        return self.q

    def __iter__(self):
        return iter(self.values)

    def _check_same_period(self, other: "PeriodicFunction"):
        if other.q != self.q:
            raise DomainError(f"period mismatch: {self.q} vs {other.q}")

    def __add__(self, other: "PeriodicFunction") -> "PeriodicFunction":
        if not isinstance(other, PeriodicFunction):
            return NotImplemented
        self._check_same_period(other)
        return PeriodicFunction(
            self.q,
            tuple(a + b for a, b in zip(self.values, other.values)),
            _combine(self.exact, other.exact, 1),
            _combine(self.exact_hat, other.exact_hat, 1),
        )

    def __sub__(self, other: "PeriodicFunction") -> "PeriodicFunction":
        if not isinstance(other, PeriodicFunction):
            return NotImplemented
        self._check_same_period(other)
        return PeriodicFunction(
            self.q,
            tuple(a - b for a, b in zip(self.values, other.values)),
            _combine(self.exact, other.exact, -1),
            _combine(self.exact_hat, other.exact_hat, -1),
        )

    def __neg__(self) -> "PeriodicFunction":
        return self.scale(-1)

    def __mul__(self, scalar) -> "PeriodicFunction":
        if isinstance(scalar, PeriodicFunction):
            return NotImplemented
        return self.scale(scalar)

    __rmul__ = __mul__

    def scale(self, scalar) -> "PeriodicFunction":
        exact_scalar = _parse_exact(scalar)
        if exact_scalar is not None:
            factor = as_mpc(exact_scalar)
            exact = None if self.exact is None else tuple(exact_scalar * v for v in self.exact)
            exact_hat = None if self.exact_hat is None else tuple(exact_scalar * v for v in self.exact_hat)
        else:
            factor = as_mpc(scalar)
            exact = exact_hat = None
        return PeriodicFunction(self.q, tuple(factor * v for v in self.values), exact, exact_hat)

    def total(self):
        """Sum of f(a) over a full period, equal to q * f_hat(q)."""
        return mpmath.fsum(self.values)

    def max_abs_difference(self, other: "PeriodicFunction"):
        self._check_same_period(other)
        return max(abs(a - b) for a, b in zip(self.values, other.values))

    def describe(self) -> dict:
        """JSON-friendly description used for replaying failures."""
        if self.exact is not None:
            return {"q": self.q, "values": [str(v) for v in self.exact]}
        if self.exact_hat is not None:
            return {"q": self.q, "hat_values": [str(v) for v in self.exact_hat]}
        return {
            "q": self.q,
            "values": [[mpmath.nstr(v.real, 20), mpmath.nstr(v.imag, 20)] for v in self.values],
        }


def _combine(a: ExactTable, b: ExactTable, sign: int) -> ExactTable:
    if a is None or b is None:
        return None
    return tuple(x + sign * y for x, y in zip(a, b))


@lru_cache(maxsize=256)
def _roots_of_unity(q: int, prec: int) -> tuple:
    # exp(2 pi i r / q) for r = 0..q-1 at the given binary precision
    with mp.workprec(prec):
        return tuple(mpmath.mpc(mpmath.cospi(mpmath.mpf(2 * r) / q), mpmath.sinpi(mpmath.mpf(2 * r) / q)) for r in range(q))


def roots_of_unity(q: int) -> tuple:
    return _roots_of_unity(q, mp.prec)


def fourier_transform(f: PeriodicFunction, ctx: Optional[PrecisionContext] = None) -> PeriodicFunction:
    """f_hat(b) = (1/q) sum_a f(a) exp(-2 pi i a b / q)."""
    q = f.q
    with _active(ctx):
        roots = roots_of_unity(q)
        values = tuple(
            mpmath.fsum(f.values[a - 1] * roots[(-a * b) % q] for a in range(1, q + 1)) / q
            for b in range(1, q + 1)
        )
    exact_hat = None
    if f.exact is not None:
        # transforming twice gives (1/q) f(-b)
        exact_hat = tuple(f.exact[(-b - 1) % q] / q for b in range(1, q + 1))
    return PeriodicFunction(q, values, f.exact_hat, exact_hat)


def inverse_fourier(g: PeriodicFunction, ctx: Optional[PrecisionContext] = None) -> PeriodicFunction:
    """f(n) = sum_b g(b) exp(2 pi i b n / q); inverts :func:`fourier_transform`."""
    q = g.q
    with _active(ctx):
        roots = roots_of_unity(q)
        values = tuple(
            mpmath.fsum(g.values[b - 1] * roots[(b * n) % q] for b in range(1, q + 1))
            for n in range(1, q + 1)
        )
    exact = None
    if g.exact_hat is not None:
        exact = tuple(q * g.exact_hat[(-n - 1) % q] for n in range(1, q + 1))
    return PeriodicFunction(q, values, exact, g.exact)


def _close_to_zero(z, tol) -> bool:
    return abs(z) <= tol


def is_odd(f: PeriodicFunction, ctx: Optional[PrecisionContext] = None) -> bool:
    """f(q - n) = -f(n) for every n; this forces f(q) = 0."""
    q = f.q
    if f.exact is not None:
        return all(f.exact[(q - n - 1) % q] == -f.exact[n - 1] for n in range(1, q + 1))
    tol = (ctx or DEFAULT_CONTEXT).equality_tolerance
    return all(_close_to_zero(f(q - n) + f(n), tol) for n in range(1, q + 1))


def is_even(f: PeriodicFunction, ctx: Optional[PrecisionContext] = None) -> bool:
    """f(q - n) = f(n) for every n."""
    q = f.q
    if f.exact is not None:
        return all(f.exact[(q - n - 1) % q] == f.exact[n - 1] for n in range(1, q + 1))
    tol = (ctx or DEFAULT_CONTEXT).equality_tolerance
    return all(_close_to_zero(f(q - n) - f(n), tol) for n in range(1, q + 1))


def is_dirichlet_type(f: PeriodicFunction, ctx: Optional[PrecisionContext] = None) -> bool:
    """True iff f vanishes on every residue sharing a factor with q."""
    q = f.q
    residues = [a for a in range(1, q + 1) if math.gcd(a, q) > 1]
    if f.exact is not None:
        return all(f.exact[a - 1] == 0 for a in residues)
    tol = (ctx or DEFAULT_CONTEXT).equality_tolerance
    return all(_close_to_zero(f(a), tol) for a in residues)


def b1(f: PeriodicFunction):
    """B_{1,f} = sum_{a=1}^q a f(a)."""
    return mpmath.fsum(a * v for a, v in enumerate(f.values, start=1))


def make_fj(j: int, p: int, ctx: Optional[PrecisionContext] = None) -> PeriodicFunction:
    """The function equal to 1 on j mod p, -1 on -j mod p and 0 elsewhere."""
    if p < 3:
        raise DomainError(f"p must be >= 3, got {p}")
    if not 1 <= j <= (p - 1) // 2:
        raise DomainError(f"j must satisfy 1 <= j <= {(p - 1) // 2}, got {j}")
    table = [0] * p
    table[j - 1] = 1
    table[p - j - 1] = -1
    return PeriodicFunction.from_values(table, ctx)


# Exact arithmetic in the group ring Q[Z/q], which maps onto Q(zeta_q) by
# X^r -> zeta_q^r. Elements are length-q tuples of Fractions.

def group_ring_mul(x: Sequence[Fraction], y: Sequence[Fraction]) -> tuple:
    q = len(x)
    out = [Fraction(0)] * q
    for i, xi in enumerate(x):
        if xi:
            for j, yj in enumerate(y):
                if yj:
                    out[(i + j) % q] += xi * yj
    return tuple(out)


def group_ring_sub(x: Sequence[Fraction], y: Sequence[Fraction]) -> tuple:
    return tuple(a - b for a, b in zip(x, y))


def group_ring_scalar(c: Fraction, q: int) -> tuple:
    return (Fraction(c),) + (Fraction(0),) * (q - 1)


def group_ring_value(x: Sequence[Fraction]):
    """Image of a group-ring element in C at the active precision."""
    roots = roots_of_unity(len(x))
    return mpmath.fsum(as_mpc(c) * roots[r] for r, c in enumerate(x) if c)


def exact_fourier(f: PeriodicFunction) -> Optional[tuple]:
    """f_hat as a table of group-ring elements, or None without exact data."""
    q = f.q
    if f.exact_hat is not None:
        return tuple(group_ring_scalar(v, q) for v in f.exact_hat)
    if f.exact is None:
        return None
    table = []
    for b in range(1, q + 1):
        element = [Fraction(0)] * q
        for a in range(1, q + 1):
            element[(-a * b) % q] += f.exact[a - 1] / q
        table.append(tuple(element))
    return tuple(table)


def exact_b1_hat(f: PeriodicFunction) -> Optional[tuple]:
    """B_{1, f_hat} as an exact group-ring element, when available."""
    hat = exact_fourier(f)
    if hat is None:
        return None
    q = f.q
    out = [Fraction(0)] * q
    for b, element in enumerate(hat, start=1):
        for r, c in enumerate(element):
            out[r] += b * c
    return tuple(out)


def is_zero_exact(x: Iterable[Fraction]) -> bool:
    return all(c == 0 for c in x)
