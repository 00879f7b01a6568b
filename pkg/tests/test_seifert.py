import itertools
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seifert_wrt.errors import (
    FiberTooSmall,
    HomologyConditionFailed,
    NotCoprime,
    NotCoprimeArgs,
    OutOfRangeLabel,
    TooFewFibers,
)
from seifert_wrt.seifert import (
    all_sectors,
    cs_invariant,
    dedekind_sum,
    flat_connections,
    nonzero_cs_spectrum,
    sector_data,
    solve_surgery,
    validate_seifert,
)

PRIMES = [2, 3, 5, 7, 11, 13]


MP = mpmath.MPContext()
MP.dps = 50


def cot_dedekind(q, p):
    return sum(MP.cot(MP.pi * l / p) * MP.cot(MP.pi * l * q / p) for l in range(1, p)) / (4 * p)


def test_validate_235():
    d = validate_seifert((2, 3, 5), (1, 1, -4))
    assert d.P == 30 and d.n == 3
    assert d.theta0 == Fraction(181, 30)


def test_errors():
    with pytest.raises(HomologyConditionFailed):
        validate_seifert((2, 3, 5), (1, 1, 1))
    with pytest.raises(NotCoprime):
        validate_seifert((2, 4, 5))
    with pytest.raises(FiberTooSmall):
        validate_seifert((1, 3, 5))
    with pytest.raises(TooFewFibers):
        validate_seifert((2, 3))
    with pytest.raises(NotCoprimeArgs):
        dedekind_sum(2, 4)


def test_reorder_puts_even_first():
    d = validate_seifert((3, 4, 5))
    assert d.p == (4, 3, 5)
    assert d.perm == (1, 0, 2)
    assert validate_seifert((4, 3, 5)).theta0 == d.theta0 == Fraction(49, 60)


@pytest.mark.parametrize("p", [(2, 3, 5), (2, 3, 7), (4, 3, 5), (2, 3, 5, 7), (3, 5, 7, 11, 2)])
def test_solve_surgery(p):
    q = solve_surgery(p)
    P = math.prod(p)
    assert sum(qj * (P // pj) for qj, pj in zip(q, p)) == 1
    assert all(q)


def test_solve_surgery_235():
    assert solve_surgery((2, 3, 5)) == (1, 1, -4)


@pytest.mark.parametrize("q,p,want", [(1, 2, 0), (1, 3, Fraction(1, 18)), (1, 5, Fraction(1, 5))])
def test_dedekind_examples(q, p, want):
    assert dedekind_sum(q, p) == want


def test_dedekind_against_cotangent_sum():
    for p in range(1, 51):
        for q in range(-p, p + 1):
            if math.gcd(q, p) != 1:
                continue
            s = dedekind_sum(q, p)
            assert abs(cot_dedekind(q, p) - MP.mpf(s.numerator) / s.denominator) < MP.mpf(10) ** -40


def test_closed_form_dedekind():
    for p in range(2, 40):
        assert dedekind_sum(1, p) == Fraction((p - 1) * (p - 2), 12 * p)


def test_table1():
    d = validate_seifert((2, 3, 5))
    assert sector_data(d, (1, 1, 1)) == sector_data(d, (1, 1, 1))
    got = {s.epsilon: (s.m0, s.ell) for s in all_sectors(d)}
    assert got[(1, 1, 1)] == (1, 1)
    assert got[(1, 1, -1)] == (0, 49)
    assert got[(-1, -1, -1)] == (-1, 59)


@st.composite
def seifert_p(draw):
    n = draw(st.integers(3, 5))
    ps = draw(st.permutations(PRIMES))[:n]
    # optionally replace 2 by 4 or 8 to get a non-prime even fiber
    ps = [draw(st.sampled_from([2, 4, 8])) if x == 2 else x for x in ps]
    return tuple(ps)


@settings(max_examples=40, deadline=None)
@given(seifert_p())
def test_sector_invariants(p):
    d = validate_seifert(p)
    assert all(pj % 2 for pj in d.p[1:])
    for s in all_sectors(d):
        lhs = d.P * (d.n - 2 + sum(Fraction(e, pj) for e, pj in zip(s.epsilon, d.p)))
        assert lhs == 2 * d.P * s.m0 + s.ell
        assert 1 <= s.ell <= 2 * d.P - 1
        t = sector_data(d, tuple(-e for e in s.epsilon))
        assert t.m0 == d.n - 3 - s.m0 and t.ell == 2 * d.P - s.ell


@settings(max_examples=40, deadline=None)
@given(seifert_p(), st.integers(-3, 3))
def test_theta0_depends_on_residues_only(p, t):
    d = validate_seifert(p)
    q = list(d.q)
    # q_1 += t p_1, q_2 -= t p_2 keeps P * sum(q_j/p_j) = 1
    q[0] += t * d.p[0]
    q[1] -= t * d.p[1]
    if all(q):
        assert validate_seifert(d.p, q).theta0 == d.theta0


def test_cs_examples():
    d = validate_seifert((2, 3, 5))
    assert cs_invariant(d, (1, 1, 1)) == Fraction(71, 120)
    assert cs_invariant(d, (1, 1, 2)) == Fraction(119, 120)
    with pytest.raises(OutOfRangeLabel):
        cs_invariant(d, (3, 1, 1))


def test_flat_connections_235():
    d = validate_seifert((2, 3, 5))
    labels = [fc.l for fc in flat_connections(d)]
    assert labels == [(1, 1, 1), (1, 1, 2), (2, 1, 1), (2, 1, 2)]
    assert labels == sorted(labels)


def test_flat_connections_count_2357():
    d = validate_seifert((2, 3, 5, 7))
    box = list(itertools.product(range(3), range(2), range(3), range(4)))
    want = [l for l in box if sum(1 for x in l if x) >= 3]
    assert [fc.l for fc in flat_connections(d)] == want


def test_spectrum():
    d = validate_seifert((2, 3, 5))
    assert nonzero_cs_spectrum(d) == {Fraction(119, 120), Fraction(71, 120)}
    d = validate_seifert((4, 3, 5))
    spec = nonzero_cs_spectrum(d)
    for num in (121, 49, 4, 196):
        assert Fraction(-num, 240) % 1 in spec
    assert Fraction(0) not in spec


@pytest.mark.parametrize("p", [(2, 3, 5), (4, 3, 5), (2, 3, 7)])
def test_cs_sign_independence(p):
    d = validate_seifert(p)
    for fc in flat_connections(d):
        vals = set()
        for eps in d.signs():
            m = d.P * (Fraction(eps[0] * fc.l[0], d.p[0]) + sum(Fraction(2 * e * lj, pj) for e, lj, pj in zip(eps[1:], fc.l[1:], d.p[1:])))
            vals.add(int(m) ** 2 % (4 * d.P))
        assert len(vals) == 1
        assert Fraction(-vals.pop(), 4 * d.P) % 1 == fc.cs
