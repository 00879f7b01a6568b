"""Self-check suites behind ``seifert-wrt check``.

Each check recomputes an identity from two independent routes and reports
the residual; ``fast`` stays on (2,3,5), ``full`` adds the four-fiber cases.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import asymptotics as A
from . import hblock as H
from . import theta as T
from .combinatorics import d_coeff, d_coeff_recursive, ep_sum_vanishes
from .numerics import PrecisionCtx
from .seifert import (
    all_sectors,
    cs_numerator,
    dedekind_sum,
    flat_connections,
    sector_data,
    validate_seifert,
)

TABLE1 = {
    (1, 1, 1): (1, 1),
    (1, 1, -1): (0, 49),
    (1, -1, 1): (0, 41),
    (1, -1, -1): (0, 29),
    (-1, 1, 1): (0, 31),
    (-1, 1, -1): (0, 19),
    (-1, -1, 1): (0, 11),
    (-1, -1, -1): (-1, 59),
}

TAU_GRID = ((1, 3, 1, 5), (-1, 7, 1, 3), (1, 2, 1, 50))


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: str
    seconds: float


def tau_grid(ctx: PrecisionCtx):
    mp = ctx.mp
    return [mp.mpc(mp.mpf(a) / b, mp.mpf(c) / d) for a, b, c, d in TAU_GRID]


def _exact(ok: bool):
    return ok, "exact" if ok else "mismatch"


def _num(res, tol, ctx):
    return res < tol, ctx.mp.nstr(res, 5)


def check_table1(ctx):
    d = validate_seifert((2, 3, 5))
    return _exact(all((s.m0, s.ell) == TABLE1[s.epsilon] for s in all_sectors(d)))


def check_sector_symmetry(ctx):
    ok = True
    for p in [(2, 3, 5), (4, 3, 5), (2, 3, 5, 7)]:
        d = validate_seifert(p)
        for s in all_sectors(d):
            t = sector_data(d, tuple(-e for e in s.epsilon))
            ok &= t.m0 == d.n - 3 - s.m0 and t.ell == 2 * d.P - s.ell
    return _exact(ok)


def check_dedekind(ctx):
    mp = ctx.mp
    worst = mp.mpf(0)
    for p in range(1, 30):
        for q in range(1, p + 1):
            if math.gcd(p, q) != 1:
                continue
            cot = sum((mp.cot(mp.pi * l / p) * mp.cot(mp.pi * l * q / p) for l in range(1, p)), mp.mpf(0)) / (4 * p)
            worst = max(worst, abs(cot - ctx.fraction(dedekind_sum(q, p))))
    return _num(worst, ctx.tolerance, ctx)


def check_theta0(ctx):
    return _exact(validate_seifert((2, 3, 5)).theta0 == Fraction(181, 30))


def check_cs_sign_invariance(ctx):
    ok = True
    for p in [(2, 3, 5), (4, 3, 5)]:
        d = validate_seifert(p)
        for fc in flat_connections(d):
            ok &= A.cs_phase_is_sign_invariant(d, fc.l)
        ok &= all(cs_numerator(d, fc.l) ** 2 % (4 * d.P) == (-fc.cs * 4 * d.P) % (4 * d.P) for fc in flat_connections(d))
    return _exact(ok)


def check_combinatorics(ctx):
    ok = all(
        d_coeff(kappa, iota, r).rational == d_coeff_recursive(kappa, iota, r)
        for kappa in range(6)
        for iota in (0, 1)
        for r in range(kappa + 1)
    )
    for p in [(2, 3, 5), (2, 3, 5, 7), (3, 5, 7, 11, 2)]:
        d = validate_seifert(p)
        ok &= all(ep_sum_vanishes(d, k) == 0 for k in range(d.n - 2))
    return _exact(ok)


def check_p_polynomial(ctx):
    d = validate_seifert((2, 3, 5))
    return _exact(H.p_polynomial(d) == H.RationalQSeries(120, {1: Fraction(-2)}))


def _decomposition(p, cutoff=Fraction(20)):
    d = validate_seifert(p)
    psi = H.psi_series(d, cutoff)
    ok = (psi - H.p_polynomial(d)).truncate(cutoff) == H.psi_decomposed_series(d, cutoff)
    ok &= psi == H.psi_series(d, cutoff, "expand1") == H.psi_series(d, cutoff, "expand2")
    return ok


def check_decomposition_fast(ctx):
    return _exact(all(_decomposition(p) for p in [(2, 3, 5), (2, 3, 7), (4, 3, 5)]))


def check_decomposition_full(ctx):
    return _exact(_decomposition((2, 3, 5, 7), Fraction(60)))


def check_ordinary_s(ctx):
    mp = ctx.mp
    tau = tau_grid(ctx)[0]
    worst = max(abs(T.s_transform_residual("ordinary_general", T.ThetaClass(60, k, 7), tau, ctx)) for k in range(7))
    return _num(worst, mp.mpf(10) ** -40, ctx)


def _psi_combo(data, k):
    ev = A.evaluator(data)
    return T.ThetaCombo(ev.M, k, tuple(ev.psi_hat_weights(k).items()))


def check_false_s(ctx):
    mp = ctx.mp
    tau = tau_grid(ctx)[0]
    d = validate_seifert((2, 3, 5))
    res = abs(T.s_transform_residual("false_general", _psi_combo(d, 0), tau, ctx))
    return _num(res, mp.mpf(10) ** -40, ctx)


def _psi_hat_identity(p, taus, ctx):
    ev = A.evaluator(validate_seifert(p))
    return max(abs(H.eval_psi_hat(ev, -1 / tau, ctx) - H.psi_hat_s_rhs(ev, tau, ctx)) for tau in taus)


def check_psi_hat_s_fast(ctx):
    return _num(_psi_hat_identity((2, 3, 5), tau_grid(ctx)[:1], ctx), ctx.mp.mpf(10) ** -40, ctx)


def check_psi_hat_s_full(ctx):
    worst = max(_psi_hat_identity(p, tau_grid(ctx), ctx) for p in [(2, 3, 5), (2, 3, 5, 7)])
    return _num(worst, ctx.mp.mpf(10) ** -40, ctx)


def check_wrt_routes(ctx):
    d = validate_seifert((2, 3, 5))
    ex = A.wrt_exact(d, 5, ctx)
    ext = A.wrt_extrapolate(d, 5, ctx)
    res = abs(ex - ext.value)
    return res <= ext.error and res < ctx.mp.mpf(10) ** -15, ctx.mp.nstr(res, 5)


def check_mean_zero(ctx):
    worst = ctx.mp.mpf(0)
    for p in [(2, 3, 5), (2, 3, 5, 7)]:
        d = validate_seifert(p)
        for k in range(d.n - 2):
            for K in range(2, 11):
                worst = max(worst, abs(A.periodic_C(d, k, K, ctx, check=False).total()))
    return _num(worst, ctx.tolerance, ctx)


def check_example_235(ctx):
    mp = ctx.mp
    d = validate_seifert((2, 3, 5))
    bc = A.asymptotic_expansion(d, ctx, max_r=-1).block_coefficients()
    root = mp.expjpi(mp.mpf(-1) / 4)
    want = {
        Fraction(119, 120): 2 / mp.sqrt(5) * mp.sinpi(mp.mpf(1) / 5) * root,
        Fraction(71, 120): 2 / mp.sqrt(5) * mp.sinpi(mp.mpf(2) / 5) * root,
    }
    ok = set(bc) == set(want)
    res = max(abs(bc.get(ph, 0) - v) for ph, v in want.items())
    return ok and res < ctx.mp.mpf(10) ** -40, mp.nstr(res, 5)


def check_cs_grouping(ctx):
    worst = ctx.mp.mpf(0)
    for p in [(2, 3, 5), (4, 3, 5), (2, 3, 7)]:
        d = validate_seifert(p)
        worst = max(worst, abs(A.leading_term(d, 100, ctx) - A.cs_grouped_leading(d, 100, ctx)))
    return _num(worst, ctx.mp.mpf(10) ** -40, ctx)


FAST: list[tuple[str, Callable]] = [
    ("sector data table", check_table1),
    ("sector sign symmetry", check_sector_symmetry),
    ("dedekind reciprocity vs cotangent sum", check_dedekind),
    ("theta0(2,3,5) = 181/30", check_theta0),
    ("CS phase sign independence", check_cs_sign_invariance),
    ("d recursion and eps-sum vanishing", check_combinatorics),
    ("P(q) for (2,3,5)", check_p_polynomial),
    ("exact decomposition, three fibers", check_decomposition_fast),
    ("theta S-transform k <= 6", check_ordinary_s),
    ("false theta S-transform, (2,3,5) combo", check_false_s),
    ("Psi^ S-transform (2,3,5), one tau", check_psi_hat_s_fast),
    ("mean-zero C_{k,K}", check_mean_zero),
    ("exact vs extrapolated tau_5(2,3,5)", check_wrt_routes),
    ("leading coefficients (2,3,5)", check_example_235),
    ("leading term vs CS grouping", check_cs_grouping),
]

FULL = FAST + [
    ("exact decomposition (2,3,5,7)", check_decomposition_full),
    ("Psi^ S-transform, tau grid, (2,3,5) and (2,3,5,7)", check_psi_hat_s_full),
]

SUITES = {"fast": FAST, "full": FULL}


def run_suite(name: str, digits: int = 50) -> list[CheckResult]:
    if name not in SUITES:
        raise KeyError(name)
    ctx = PrecisionCtx(digits)
    out = []
    for label, fn in SUITES[name]:
        start = time.perf_counter()
        try:
            ok, res = fn(ctx)
        except Exception as exc:  # a crashing check is a failed check
            ok, res = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(label, bool(ok), res, time.perf_counter() - start))
    return out
