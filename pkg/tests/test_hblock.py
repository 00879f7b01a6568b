import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seifert_wrt import hblock as H
from seifert_wrt.asymptotics import wrt_exact
from seifert_wrt.errors import SlowConvergence, UnitCircleInput
from seifert_wrt.numerics import PrecisionCtx
from seifert_wrt.seifert import all_sectors, validate_seifert

FIBERS = [(2, 3, 5), (2, 3, 7), (4, 3, 5), (2, 3, 11), (3, 5, 7), (2, 3, 5, 7), (2, 3, 5, 11), (2, 3, 5, 7, 11)]


def brute_psi(data, cutoff):
    # the defining double sum, written independently of the module
    out = {}
    bound = cutoff * 4 * data.P
    for eps in data.signs():
        N = data.P * (data.n - 2 + sum(Fraction(e, p) for e, p in zip(eps, data.p)))
        for m in range(0, 400):
            e = (2 * data.P * m + N) ** 2
            if e > bound and 2 * data.P * m + N > 0:
                break
            if e <= bound:
                key = Fraction(e, 4 * data.P)
                out[key] = out.get(key, 0) + math.prod(eps) * math.comb(m + data.n - 3, data.n - 3)
    return {k: v for k, v in out.items() if v}


def lz_character(m):
    r = m % 60
    return {1: 1, 11: 1, 19: 1, 29: 1, 31: -1, 41: -1, 49: -1, 59: -1}.get(r, 0)


def test_series_basics():
    s = H.RationalQSeries(12, {1: Fraction(1), 5: Fraction(-2), 7: Fraction(0)}, Fraction(2))
    assert len(s) == 2 and s.coefficient(Fraction(5, 12)) == -2 and s.coefficient(Fraction(1, 7)) == 0
    t = H.RationalQSeries(12, {1: Fraction(-1), 13: Fraction(3)})
    u = s + t
    assert dict(u.items()) == {Fraction(5, 12): -2, Fraction(13, 12): 3}
    assert u.cutoff == 2
    assert (s - s) == H.RationalQSeries(12, {})
    with pytest.raises(ValueError):
        s + H.RationalQSeries(10, {})


@pytest.mark.parametrize("p", FIBERS)
def test_psi_matches_brute_force(p):
    d = validate_seifert(p)
    cutoff = Fraction(30)
    got = dict(H.psi_series(d, cutoff).items())
    assert got == brute_psi(d, cutoff)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(FIBERS), st.fractions(min_value=Fraction(1, 9), max_value=60, max_denominator=9))
def test_three_expansions_agree(p, cutoff):
    d = validate_seifert(p)
    a = H.psi_series(d, cutoff)
    assert a == H.psi_series(d, cutoff, "expand1") == H.psi_series(d, cutoff, "expand2")


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(FIBERS), st.fractions(min_value=Fraction(1, 9), max_value=60, max_denominator=9))
def test_decomposition_exact(p, cutoff):
    d = validate_seifert(p)
    lhs = (H.psi_series(d, cutoff) - H.p_polynomial(d)).truncate(cutoff)
    assert lhs == H.psi_decomposed_series(d, cutoff)


def test_unknown_method():
    with pytest.raises(ValueError):
        H.psi_series(validate_seifert((2, 3, 5)), 3, "other")


def test_p_polynomial_235(d235):
    assert H.p_polynomial(d235) == H.RationalQSeries(120, {1: Fraction(-2)})
    hat = H.psi_series(d235, 2) - H.p_polynomial(d235)
    assert hat.coefficient(Fraction(1, 120)) == 1


@pytest.mark.parametrize("p", FIBERS)
def test_p_exponents_are_squares(p):
    d = validate_seifert(p)
    for e, _ in H.p_polynomial(d).items():
        n = e * 4 * d.P
        assert n.denominator == 1 and math.isqrt(int(n)) ** 2 == n


def test_lawrence_zagier_character(d235):
    hat = H.psi_decomposed_series(d235, 200)
    for m in range(1, math.isqrt(200 * 120) + 1):
        assert hat.coefficient(Fraction(m * m, 120)) == lz_character(m)


def test_237_integer_coefficients():
    d = validate_seifert((2, 3, 7))
    s = H.psi_series(d, 5)
    assert len(s) > 0 and all(c.denominator == 1 for _, c in s.items())


@pytest.mark.parametrize("p", FIBERS)
def test_sector_sign_window(p):
    d = validate_seifert(p)
    P, n = d.P, d.n
    for s in all_sectors(d):
        lo, hi = 2 * P * (s.m0 - n + 2) + s.ell, 2 * P * s.m0 + s.ell
        for m in range(lo - 4 * P, hi + 4 * P):
            if m % (2 * P) != s.ell:
                continue
            want = 1 if m >= hi else (-1 if m <= lo else 0)
            assert H.sector_sign(d, s, m) == want


def test_eval_phi_domain(ctx, d235):
    with pytest.raises(UnitCircleInput):
        H.eval_phi(d235, 1, ctx)
    with pytest.raises(UnitCircleInput):
        H.eval_phi(d235, ctx.mp.mpc(0.6, 0.8), ctx)
    with pytest.raises(SlowConvergence):
        H.eval_phi(d235, ctx.mp.exp(-ctx.mp.mpf(10) ** -4), ctx, max_terms=100)


def test_eval_phi_real(ctx, d235):
    v = H.eval_phi(d235, ctx.mp.mpf("0.3"), ctx)
    assert abs(v.imag) < ctx.tolerance


def test_eval_phi_matches_series(ctx, d235):
    mp = ctx.mp
    t = mp.mpc(mp.mpf(1) / 3, mp.mpf(1) / 20)
    q = mp.exp(2j * mp.pi * t)
    psi = H.psi_series(d235, 400).evaluate(ctx, t)
    want = (-1) ** 3 / (2 * (mp.exp(mp.pi * 1j * t) - mp.exp(-mp.pi * 1j * t))) * mp.exp(-2j * mp.pi * t * ctx.fraction(d235.theta0) / 4) * psi
    assert abs(H.eval_phi(d235, q, ctx) - want) < ctx.tolerance


def test_eval_phi_regression(ctx, d235):
    mp = ctx.mp
    q = mp.expjpi(mp.mpf(2) / 3) * mp.exp(-mp.mpf(1) / 10)
    v = H.eval_phi(d235, q, ctx)
    r = H.eval_phi_radial(d235, 3, mp.mpf(1) / 10, ctx)
    assert abs(v - r) < ctx.tolerance
    assert mp.nstr(v, 15) == PINNED_PHI


PINNED_PHI = "(0.68278062599298 + 0.156714585733346j)"


def test_radial_approach(ctx, d235):
    mp = ctx.mp
    target = wrt_exact(d235, 3, ctx)
    errs = [abs(H.eval_phi_radial(d235, 3, mp.mpf(10) ** -j, ctx) - target) for j in (2, 3, 4)]
    # the gap shrinks roughly linearly in t
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < errs[1] / 5 and errs[2] < mp.mpf("2e-3")


def test_prefactor_identity(ctx):
    mp = ctx.mp
    for K in range(2, 12):
        xi_half = mp.expjpi(mp.mpf(1) / K)
        assert abs((xi_half - 1 / xi_half) - 2j * mp.sinpi(mp.mpf(1) / K)) < ctx.tolerance


@pytest.mark.parametrize("t", [(0, 1), (0, Fraction(1, 10)), (Fraction(1, 3), Fraction(1, 5))])
def test_psi_hat_matches_series(ctx, d235, t):
    mp = ctx.mp
    tau = mp.mpc(ctx.fraction(Fraction(t[0])), ctx.fraction(Fraction(t[1])))
    ev = H.PsiHatEvaluator(d235)
    series = (H.psi_series(d235, 400) - H.p_polynomial(d235)).evaluate(ctx, tau)
    assert abs(H.eval_psi_hat(ev, tau, ctx) - series) < ctx.tolerance


def test_psi_hat_four_fibers_matches_series(ctx, d2357):
    mp = ctx.mp
    tau = mp.mpc(mp.mpf(1) / 7, mp.mpf(1) / 30)
    ev = H.PsiHatEvaluator(d2357)
    series = (H.psi_series(d2357, 2000) - H.p_polynomial(d2357)).evaluate(ctx, tau)
    assert abs(H.eval_psi_hat(ev, tau, ctx) - series) < ctx.tolerance


def test_psi_hat_cutoff_soundness(d235):
    a, b = PrecisionCtx(40, 10), PrecisionCtx(40, 40)
    ev = H.PsiHatEvaluator(d235)
    t = a.mp.mpc(0.2, 0.01)
    va = H.eval_psi_hat(ev, t, a)
    vb = H.eval_psi_hat(ev, b.mp.mpc(t), b)
    assert abs(b.mp.mpc(va) - vb) < b.mp.mpf(10) ** -45


def test_s_identity_235(ctx, d235):
    mp = ctx.mp
    ev = H.PsiHatEvaluator(d235)
    for t in (mp.mpc(mp.mpf(1) / 3, mp.mpf(1) / 5), mp.mpc(-mp.mpf(1) / 3, mp.mpf(1) / 5)):
        lhs = H.eval_psi_hat(ev, -1 / t, ctx)
        assert abs(lhs - H.psi_hat_s_rhs(ev, t, ctx)) < ctx.tolerance


@pytest.mark.slow
def test_s_identity_2357(ctx, d2357):
    mp = ctx.mp
    ev = H.PsiHatEvaluator(d2357)
    t = mp.mpc(mp.mpf(1) / 5, mp.mpf(1) / 7)
    assert abs(H.eval_psi_hat(ev, -1 / t, ctx) - H.psi_hat_s_rhs(ev, t, ctx)) < ctx.tolerance
