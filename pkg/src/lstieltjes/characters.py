"""Enumeration of Dirichlet characters modulo q."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Optional

from .errors import DomainError
from .periodic import PeriodicFunction, _active, roots_of_unity

MAX_MODULUS = 10**4


@dataclass(frozen=True)
class CharacterTable:
    q: int
    entries: tuple
    is_odd: tuple
    is_primitive: tuple
    conductor: tuple
    exponent: int
    # exponent-of-root index per entry: chi(n) = exp(2 pi i idx[n] / exponent), None when gcd(n, q) > 1
    indices: tuple

    def __len__(self):
        return len(self.entries)

    def odd_primitive(self) -> list:
        return [chi for chi, odd, prim in zip(self.entries, self.is_odd, self.is_primitive) if odd and prim]


def _factor(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def _order(g: int, m: int) -> int:
    k, x = 1, g % m
    while x != 1:
        x = x * g % m
        k += 1
    return k


def _cyclic_generators(p: int, e: int) -> list[tuple[int, int]]:
    """(generator, order) pairs for (Z/p^e)^*, found by brute-force order search."""
    m = p**e
    if p == 2:
        if e == 1:
            return []
        if e == 2:
            return [(3, 2)]
        return [(m - 1, 2), (5, m // 4)]
    phi = m - m // p
    for g in range(2, m):
        if math.gcd(g, p) == 1 and _order(g, m) == phi:
            return [(g, phi)]
    raise AssertionError("no primitive root found")  # unreachable for odd prime powers


def _unit_group_basis(q: int) -> list[tuple[int, int]]:
    """Generators of (Z/q)^* as a direct product of cyclic groups.

    Each local generator is lifted through the CRT so it is 1 modulo the other
    prime-power factors.
    """
    basis = []
    for p, e in _factor(q):
        m = p**e
        rest = q // m
        for g, order in _cyclic_generators(p, e):
            if rest == 1:
                lifted = g
            else:
                # lifted = g mod m, 1 mod rest
                lifted = (g * rest * pow(rest, -1, m) + m * pow(m, -1, rest)) % q
            basis.append((lifted, order))
    return basis


def dirichlet_characters(q: int, ctx=None) -> CharacterTable:
    """All phi(q) Dirichlet characters mod q as explicit value tables.

    The trivial character comes first. Flags are computed on the exact
    root-of-unity indices, so parity and conductor are never decided by a
    floating-point comparison.
    """
    if q < 3 or q > MAX_MODULUS:
        raise DomainError(f"modulus must lie in 3..{MAX_MODULUS}, got {q}")
    basis = _unit_group_basis(q)
    orders = [order for _, order in basis]
    exponent = math.lcm(*orders) if orders else 1

    # discrete log table: residue -> exponent vector
    dlog: dict[int, tuple] = {}
    for exps in product(*(range(o) for o in orders)):
        n = 1
        for (g, _), x in zip(basis, exps):
            n = n * pow(g, x, q) % q
        dlog[n] = exps

    divisors = [d for d in range(1, q + 1) if q % d == 0]
    entries, odd_flags, prim_flags, conductors, all_indices = [], [], [], [], []
    with _active(ctx):
        roots = roots_of_unity(exponent)
        for chi_exps in product(*(range(o) for o in orders)):
            idx: list[Optional[int]] = []
            for n in range(1, q + 1):
                logs = dlog.get(n % q)
                if logs is None:
                    idx.append(None)
                    continue
                idx.append(sum(c * x * (exponent // o) for c, x, o in zip(chi_exps, logs, orders)) % exponent)
            values = tuple(roots[i] if i is not None else roots[0] * 0 for i in idx)
            entries.append(PeriodicFunction(q, values))
            minus_one = idx[q - 2]
            odd_flags.append(minus_one is not None and 2 * minus_one == exponent)
            conductor = next(
                d
                for d in divisors
                if all(idx[n - 1] == 0 for n in range(1, q + 1) if idx[n - 1] is not None and (n - 1) % d == 0)
            )
            conductors.append(conductor)
            prim_flags.append(conductor == q)
            all_indices.append(tuple(idx))
    return CharacterTable(
        q, tuple(entries), tuple(odd_flags), tuple(prim_flags), tuple(conductors), exponent, tuple(all_indices)
    )
