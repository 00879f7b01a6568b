"""Exact special sequences: Stirling numbers, Bernoulli polynomials and the
rational coefficients that appear in the theta and homological-block formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import KOutOfRange
from .seifert import SeifertData, sign_product


@lru_cache(maxsize=None)
def stirling1(nn: int, kk: int) -> int:
    """Unsigned Stirling number of the first kind.

    ``[0, 0] = 1``, ``[n, 0] = [0, k] = 0`` otherwise, and
    ``[n+1, k] = [n, k-1] + n [n, k]``.
    """
    if nn < 0 or kk < 0:
        raise ValueError("indices must be non-negative")
    if nn == 0 or kk == 0:
        return int(nn == 0 and kk == 0)
    return stirling1(nn - 1, kk - 1) + (nn - 1) * stirling1(nn - 1, kk)


def binomial(x: int, k: int) -> Fraction:
    """Generalised binomial ``x (x-1) ... (x-k+1) / k!``; ``x`` may be negative."""
    if k < 0:
        return Fraction(0)
    num = 1
    for i in range(k):
        num *= x - i
    return Fraction(num, math.factorial(k))


def double_factorial(m: int) -> int:
    """``m!!`` with the empty-product convention ``(-1)!! = 0!! = 1``."""
    if m < -1:
        raise ValueError(f"{m}!! undefined")
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


@lru_cache(maxsize=None)
def bernoulli_number(m: int) -> Fraction:
    """``B_m`` with ``B_1 = -1/2``."""
    if m == 0:
        return Fraction(1)
    return -sum(math.comb(m + 1, j) * bernoulli_number(j) for j in range(m)) / (m + 1)


@dataclass(frozen=True)
class RationalPolynomial:
    coefficients: tuple[Fraction, ...]  # ascending degree

    def __post_init__(self):
        c = list(self.coefficients)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(Fraction(x) for x in c))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def eval_mp(self, mp, x):
        acc = mp.zero
        for c in reversed(self.coefficients):
            acc = acc * x + mp.mpf(c.numerator) / c.denominator
        return acc


@lru_cache(maxsize=None)
def bernoulli_poly(m: int) -> RationalPolynomial:
    """``B_m(x) = sum_j C(m, j) B_j x^(m-j)``."""
    if m < 0:
        raise ValueError("m must be >= 0")
    coeffs = [Fraction(0)] * (m + 1)
    for j in range(m + 1):
        coeffs[m - j] = math.comb(m, j) * bernoulli_number(j)
    return RationalPolynomial(tuple(coeffs))


def bernoulli_periodic(m: int, x: Fraction) -> Fraction:
    """``B_m(x - floor(x))``."""
    x = Fraction(x)
    return bernoulli_poly(m)(x - math.floor(x))


@dataclass(frozen=True)
class DCoeff:
    """``d_{kappa,iota,r}`` stored as ``rational * (4 pi i)^r``."""

    kappa: int
    iota: int
    r: int
    rational: Fraction

    def value(self, mp):
        return self.rational * (4 * mp.pi * mp.j) ** self.r


@lru_cache(maxsize=None)
def d_coeff(kappa: int, iota: int, r: int) -> DCoeff:
    if kappa < 0 or iota not in (0, 1):
        raise ValueError("need kappa >= 0 and iota in {0, 1}")
    if not 0 <= r <= kappa:
        return DCoeff(kappa, iota, r, Fraction(0))
    num = math.factorial(2 * kappa + iota)
    den = 2**kappa * math.factorial(kappa - r) * math.factorial(2 * r + iota)
    return DCoeff(kappa, iota, r, Fraction(num, den))


def d_coeff_recursive(kappa: int, iota: int, r: int) -> Fraction:
    """Rational part of ``d`` from ``d_{k+1,r} = 2((k+iota+r+1/2) d_{k,r} + pi i d_{k,r-1})``.

    In rational parts the ``pi i`` step becomes a factor ``1/4`` since
    ``pi i (4 pi i)^(r-1) = (4 pi i)^r / 4``.
    """
    row = {0: Fraction(1)}
    for k in range(kappa):
        row = {
            s: 2 * (k + iota + s + Fraction(1, 2)) * row.get(s, 0) + row.get(s - 1, 0) / 2
            for s in range(k + 2)
        }
    return row.get(r, Fraction(0))


def _shift(data: SeifertData, eps: Sequence[int]) -> Fraction:
    return data.n - 2 + sum(Fraction(e, pj) for e, pj in zip(eps, data.p))


def c_coeff(data: SeifertData, epsilon: Sequence[int], k: int) -> Fraction:
    """Coefficient of ``m^k`` in the sector expansion of the homological block."""
    n = data.n
    if not 0 <= k <= n - 3:
        raise KOutOfRange(f"k={k} outside 0..{n - 3}")
    s = _shift(data, epsilon)
    total = sum(
        Fraction(-1, 2) ** l * s ** (l - k) * stirling1(n - 2, l + 1) * math.comb(l, k)
        for l in range(k, n - 2)
    )
    return Fraction((-1) ** k, data.P**k * math.factorial(n - 3)) * total


def ep_sum_vanishes(data: SeifertData, k: int) -> Fraction:
    """``sum_eps eps_1...eps_n c_eps(k)``; identically zero."""
    return sum((sign_product(e) * c_coeff(data, e, k) for e in data.signs()), Fraction(0))
