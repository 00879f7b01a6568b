"""Seifert data and the arithmetic attached to it.

A Seifert fibered integral homology sphere ``M(p1/q1, ..., pn/qn)`` is
described by pairwise coprime ``p_j >= 2`` and nonzero ``q_j`` with
``P * sum(q_j / p_j) == 1`` where ``P = p1 * ... * pn``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import (
    FiberTooSmall,
    HomologyConditionFailed,
    NotCoprime,
    NotCoprimeArgs,
    OutOfRangeLabel,
    TooFewFibers,
)


@dataclass(frozen=True)
class SeifertData:
    p: tuple[int, ...]
    q: tuple[int, ...]
    P: int
    theta0: Fraction
    # perm[i] is the position in the caller's input of fiber i
    perm: tuple[int, ...] = field(default=(), compare=False)

    @property
    def n(self) -> int:
        return len(self.p)

    def signs(self) -> Iterator[tuple[int, ...]]:
        """All sign vectors in {+1, -1}^n, ``+`` first, in lexicographic order."""
        return itertools.product((1, -1), repeat=self.n)


@dataclass(frozen=True)
class SectorData:
    epsilon: tuple[int, ...]
    m0: int
    ell: int


@dataclass(frozen=True)
class FlatConnectionLabel:
    l: tuple[int, ...]
    cs: Fraction


def sign_product(eps: Sequence[int]) -> int:
    return math.prod(eps)


def _check_fibers(p: Sequence[int]) -> None:
    if len(p) < 3:
        raise TooFewFibers(f"need at least 3 singular fibers, got {len(p)}")
    for pj in p:
        if pj < 2:
            raise FiberTooSmall(f"fiber order {pj} < 2")
    for a, b in itertools.combinations(p, 2):
        if math.gcd(a, b) != 1:
            raise NotCoprime(f"gcd({a}, {b}) = {math.gcd(a, b)}")


def solve_surgery(p: Sequence[int]) -> tuple[int, ...]:
    """Canonical ``q`` with ``P * sum(q_j / p_j) == 1``.

    ``q_j`` for ``j < n`` is the least positive inverse of ``P / p_j`` modulo
    ``p_j``; the last entry absorbs the remainder.  For (2, 3, 5) this gives
    (1, 1, -4).
    """
    p = tuple(int(x) for x in p)
    for a, b in itertools.combinations(p, 2):
        if math.gcd(a, b) != 1:
            raise NotCoprime(f"gcd({a}, {b}) = {math.gcd(a, b)}")
    if any(pj < 2 for pj in p):
        raise FiberTooSmall("fiber orders must be >= 2")
    P = math.prod(p)
    q = [pow(P // pj, -1, pj) for pj in p[:-1]]
    rest = 1 - sum(qj * (P // pj) for qj, pj in zip(q, p))
    last, rem = divmod(rest, P // p[-1])
    assert rem == 0 and last != 0
    q.append(last)
    return tuple(q)


def dedekind_sum(q: int, p: int) -> Fraction:
    """Exact Dedekind sum ``s(q, p)`` via the reciprocity law.

    Uses ``s(a, b) + s(b, a) = -1/4 + (a/b + b/a + 1/(ab)) / 12`` together
    with ``s(a, b) = s(a mod b, b)``; runs in O(log p) steps.
    """
    if p < 1:
        raise NotCoprimeArgs(f"modulus must be positive, got {p}")
    if math.gcd(q, p) != 1:
        raise NotCoprimeArgs(f"gcd({q}, {p}) != 1")
    a, b = q % p, p
    total = Fraction(0)
    sign = 1
    while b > 1 and a != 0:
        # s(a, b) = -s(b, a) - 1/4 + (a/b + b/a + 1/(ab)) / 12, with b mod a next
        total += sign * (Fraction(-1, 4) + Fraction(a * a + b * b + 1, 12 * a * b))
        sign = -sign
        a, b = b % a, a
    return total


def theta0_of(p: Sequence[int], q: Sequence[int]) -> Fraction:
    P = math.prod(p)
    return 3 - Fraction(1, P) + 12 * sum(dedekind_sum(qj, pj) for qj, pj in zip(q, p))


def validate_seifert(p: Sequence[int], q: Sequence[int] | None = None) -> SeifertData:
    """Validate Seifert data and normalise it.

    The (at most one) even ``p_j`` is moved to the front so that
    ``p_2, ..., p_n`` are odd; ``q`` is permuted alongside and the
    permutation is kept on the result.  When ``q`` is omitted the canonical
    solution of :func:`solve_surgery` (computed after reordering) is used.
    """
    p = tuple(int(x) for x in p)
    if q is not None:
        q = tuple(int(x) for x in q)
        if len(q) != len(p):
            raise HomologyConditionFailed(f"p has {len(p)} entries but q has {len(q)}")
    _check_fibers(p)
    if q is not None and any(qj == 0 for qj in q):
        raise HomologyConditionFailed("q entries must be nonzero")

    perm = tuple(sorted(range(len(p)), key=lambda i: p[i] % 2))
    p = tuple(p[i] for i in perm)
    if q is None:
        q = solve_surgery(p)
    else:
        q = tuple(q[i] for i in perm)
    P = math.prod(p)
    lhs = sum(qj * (P // pj) for qj, pj in zip(q, p))
    if lhs != 1:
        raise HomologyConditionFailed(f"P * sum(q_j/p_j) = {lhs}, expected 1")
    return SeifertData(p=p, q=q, P=P, theta0=theta0_of(p, q), perm=perm)


def sector_data(data: SeifertData, epsilon: Sequence[int]) -> SectorData:
    """The unique ``(m0, ell)`` with ``P(n - 2 + sum eps_j/p_j) = 2P m0 + ell``."""
    eps = tuple(int(e) for e in epsilon)
    if len(eps) != data.n or any(e not in (1, -1) for e in eps):
        raise ValueError(f"epsilon must be {data.n} signs, got {epsilon!r}")
    N = data.P * (data.n - 2) + sum(e * (data.P // pj) for e, pj in zip(eps, data.p))
    m0, ell = divmod(N, 2 * data.P)
    return SectorData(epsilon=eps, m0=m0, ell=ell)


def all_sectors(data: SeifertData) -> list[SectorData]:
    return [sector_data(data, eps) for eps in data.signs()]


def cs_numerator(data: SeifertData, l: Sequence[int]) -> int:
    """``m = P(l1/p1 + sum_{j>=2} 2 l_j/p_j)``; the CS phase is ``-m^2 / 4P``."""
    P = data.P
    return l[0] * (P // data.p[0]) + sum(2 * lj * (P // pj) for lj, pj in zip(l[1:], data.p[1:]))


def _in_box(data: SeifertData, l: Sequence[int]) -> bool:
    if len(l) != data.n or not 0 <= l[0] <= data.p[0]:
        return False
    return all(0 <= lj <= (pj - 1) // 2 for lj, pj in zip(l[1:], data.p[1:]))


def cs_invariant(data: SeifertData, l: Sequence[int] | FlatConnectionLabel) -> Fraction:
    """Chern-Simons invariant of a flat connection label, normalised to [0, 1)."""
    if isinstance(l, FlatConnectionLabel):
        l = l.l
    l = tuple(l)
    if not _in_box(data, l):
        raise OutOfRangeLabel(f"label {l} outside the box for p={data.p}")
    m = cs_numerator(data, l)
    return Fraction(-(m * m) % (4 * data.P), 4 * data.P)


def flat_connections(data: SeifertData) -> list[FlatConnectionLabel]:
    """Labels with at least three nonzero components, lexicographic order."""
    ranges = [range(data.p[0] + 1)] + [range((pj - 1) // 2 + 1) for pj in data.p[1:]]
    out = []
    for l in itertools.product(*ranges):
        if sum(1 for x in l if x) >= 3:
            out.append(FlatConnectionLabel(l=l, cs=cs_invariant(data, l)))
    return out


def divisible_count(data: SeifertData, m: int) -> int:
    return sum(1 for pj in data.p if m % pj == 0)


def nonzero_cs_spectrum(data: SeifertData) -> frozenset[Fraction]:
    """Classes ``[-m^2/4P]`` for ``m`` divisible by at most ``n - 3`` of the ``p_j``."""
    P4 = 4 * data.P
    return frozenset(
        Fraction(-(m * m) % P4, P4)
        for m in range(1, 2 * data.P + 1)
        if divisible_count(data, m) <= data.n - 3
    )
