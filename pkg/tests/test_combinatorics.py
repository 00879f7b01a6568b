import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seifert_wrt.combinatorics import (
    bernoulli_number,
    bernoulli_periodic,
    bernoulli_poly,
    binomial,
    c_coeff,
    d_coeff,
    d_coeff_recursive,
    double_factorial,
    ep_sum_vanishes,
    stirling1,
)
from seifert_wrt.errors import KOutOfRange
from seifert_wrt.seifert import all_sectors, validate_seifert

MP = mpmath.MPContext()
MP.dps = 40


def test_stirling_examples():
    assert stirling1(0, 0) == 1
    assert stirling1(3, 1) == 2
    assert all(stirling1(n, 0) == 0 for n in range(1, 10))
    assert all(stirling1(0, k) == 0 for k in range(1, 10))


@given(st.integers(0, 25))
def test_stirling_rising_factorial(n):
    # x (x+1) ... (x+n-1) = sum_k [n, k] x^k
    for x in range(-3, 6):
        assert math.prod(x + i for i in range(n)) == sum(stirling1(n, k) * x**k for k in range(n + 1))


def test_bernoulli_examples():
    assert bernoulli_poly(1).coefficients == (Fraction(-1, 2), Fraction(1))
    assert bernoulli_periodic(1, Fraction(5, 4)) == Fraction(-1, 4)
    assert bernoulli_poly(2)(Fraction(0)) == Fraction(1, 6)
    assert bernoulli_number(1) == Fraction(-1, 2)


@settings(max_examples=50)
@given(st.integers(0, 14), st.fractions(min_value=-3, max_value=3, max_denominator=50))
def test_bernoulli_matches_mpmath(m, x):
    ours = bernoulli_poly(m)(x)
    ref = MP.bernpoly(m, MP.mpf(x.numerator) / x.denominator)
    assert abs(MP.mpf(ours.numerator) / ours.denominator - ref) < MP.mpf(10) ** -30


@given(st.integers(1, 12), st.fractions(min_value=0, max_value=1, max_denominator=60))
def test_bernoulli_translation(m, x):
    # B_m(x + 1) - B_m(x) = m x^(m-1)
    B = bernoulli_poly(m)
    assert B(x + 1) - B(x) == m * x ** (m - 1)


def test_binomial_and_double_factorial():
    assert binomial(-1, 3) == -1
    assert binomial(5, 2) == 10
    assert [double_factorial(m) for m in (-1, 0, 1, 5, 6)] == [1, 1, 1, 15, 48]


@pytest.mark.parametrize("kappa", range(7))
def test_d_closed_form_vs_recursion(kappa):
    for iota in (0, 1):
        for r in range(kappa + 2):
            assert d_coeff(kappa, iota, r).rational == d_coeff_recursive(kappa, iota, r)


def test_d_values():
    assert d_coeff(0, 0, 0).rational == 1
    assert d_coeff(1, 0, 1).rational == Fraction(1, 2)
    assert d_coeff(1, 1, 0).rational == 3
    mp = MP
    assert abs(d_coeff(1, 0, 1).value(mp) - 2j * mp.pi) < mp.mpf(10) ** -30


FIBERS = [(2, 3, 5), (2, 3, 7), (4, 3, 5), (2, 3, 5, 7), (2, 3, 5, 7, 11), (3, 5, 7, 11, 13, 2)]


@pytest.mark.parametrize("p", FIBERS)
def test_c_coeff_is_binomial_polynomial(p):
    # sum_k c_eps(k) m^k reproduces C(j + n - 3, n - 3) with m = 2P j + 2P m0 + ell
    d = validate_seifert(p)
    n = d.n
    for s in all_sectors(d):
        c = [c_coeff(d, s.epsilon, k) for k in range(n - 2)]
        for j in range(-2 * n, 2 * n):
            m = 2 * d.P * (j + s.m0) + s.ell
            assert sum(ck * m**k for k, ck in enumerate(c)) == binomial(j + n - 3, n - 3)


@pytest.mark.parametrize("p", FIBERS)
def test_ep_sum_vanishes(p):
    d = validate_seifert(p)
    assert all(ep_sum_vanishes(d, k) == 0 for k in range(d.n - 2))


def test_c_coeff_range():
    d = validate_seifert((2, 3, 5))
    with pytest.raises(KOutOfRange):
        c_coeff(d, (1, 1, 1), 1)
