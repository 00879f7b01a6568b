"""Radial limits and the K -> oo expansion of the WRT invariant.

Notation: ``xi = exp(2 pi i / K)``, ``k = 2 kappa + iota`` and ``e(x) = exp(2 pi i x)``.
The quantity expanded is

    LHS(K) = sqrt(2/K) xi^{Theta0/4} sin(pi/K) tau_K
           ~ sum_m e(-m^2 K / 4P) sum_{k,r} alpha_{k,r}(m) K^{kappa+iota+r}
             + sum_r beta_r K^{-r-1/2} + (-1)^n / (2 sqrt2 i) K^{-1/2} P(xi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .combinatorics import bernoulli_periodic, bernoulli_poly, d_coeff, double_factorial
from .errors import (
    BoundaryPoint,
    DomainError,
    ExtrapolationUnstable,
    KOutOfRange,
    KTooSmall,
    MeanValueNotZero,
)
from .hblock import PsiHatEvaluator, eval_phi_radial, p_polynomial
from .numerics import PrecisionCtx, root_of_unity
from .seifert import SeifertData, cs_numerator, flat_connections
from .theta import _quad, combo_theta_value, eichler_integral


@lru_cache(maxsize=64)
def evaluator(data: SeifertData) -> PsiHatEvaluator:
    return PsiHatEvaluator(data)


def _check_k(data: SeifertData, k: int):
    if not 0 <= k <= data.n - 3:
        raise KOutOfRange(f"k={k} outside 0..{data.n - 3}")


def _check_K(K: int):
    if K == 1:
        raise KTooSmall("K=1: xi^(1/2) - xi^(-1/2) vanishes")
    if K < 1:
        raise DomainError(f"K must be >= 2, got {K}")


@dataclass(frozen=True)
class PeriodicFn:
    """A function on ``Z / period`` given by its samples ``values[m % period]``."""

    period: int
    values: tuple
    label: str
    ctx: PrecisionCtx

    def __call__(self, m: int):
        return self.values[m % self.period]

    def total(self):
        return sum(self.values, self.ctx.mp.mpc(0))

    def mean(self):
        return self.total() / self.period

    def check_mean_zero(self):
        err = abs(self.total())
        if err > self.ctx.tolerance:
            raise MeanValueNotZero(f"{self.label}: |sum over a period| = {self.ctx.mp.nstr(err, 5)}")


def periodic_C_tilde(data: SeifertData, k: int, ctx: PrecisionCtx) -> PeriodicFn:
    """``C~_k(m) = sum_eps eps c_eps(k) e(ell m / 2P)``."""
    _check_k(data, k)
    vals = _c_tilde_values(data, k, ctx, ctx.mp)
    return PeriodicFn(2 * data.P, vals, f"C~_{k}", ctx)


@lru_cache(maxsize=128)
def _c_tilde_values(data: SeifertData, k: int, ctx: PrecisionCtx, mp) -> tuple:
    # keyed on the mp context itself: equal PrecisionCtx objects own distinct contexts
    ev = evaluator(data)
    return tuple(ev.c_tilde(ctx, k, m) for m in range(ev.M))


def periodic_C(data: SeifertData, k: int, K: int, ctx: PrecisionCtx, check: bool = True) -> PeriodicFn:
    """``C_{k,K}(m) = e(-m^2 K / 4P) C~_k(m)``; its mean over a period vanishes."""
    if K < 1:
        raise DomainError("K must be positive")
    ct = periodic_C_tilde(data, k, ctx)
    P = data.P
    vals = tuple(root_of_unity(ctx.mp, Fraction(-m * m * K, 4 * P)) * ct(m) for m in range(2 * P))
    C = PeriodicFn(2 * P, vals, f"C_{k},{K}", ctx)
    if check:
        C.check_mean_zero()
    return C


def c_tilde_sine_product(data: SeifertData, m: int, ctx: PrecisionCtx):
    """Closed form of ``C~_{n-3}(m)`` as a product of sines."""
    mp = ctx.mp
    n, P = data.n, data.P
    pre = (-1) ** (m * n) * (2j) ** n / (mp.mpf(2 * P) ** (n - 3) * math.factorial(n - 3))
    return pre * mp.fprod(mp.sinpi(mp.mpf(m) / pj) for pj in data.p)


def l_value(C: PeriodicFn, r: int):
    """``L(-r, C) = -(M^r / (r + 1)) sum_{m=1}^M C(m) B_{r+1}(m/M)`` for mean-zero ``C``."""
    if r < 0:
        raise ValueError("r must be >= 0")
    C.check_mean_zero()
    mp = C.ctx.mp
    M = C.period
    B = bernoulli_poly(r + 1)
    s = sum((C(m) * C.ctx.fraction(B(Fraction(m, M))) for m in range(1, M + 1)), mp.mpc(0))
    return -mp.mpf(M) ** r / (r + 1) * s


def eta_tilde_limit(data: SeifertData, k: int, r: int, K: int, ctx: PrecisionCtx):
    """``lim_{t -> 0+} eta~_{k,r}(-K + it)`` as a finite Bernoulli sum."""
    _check_k(data, k)
    kappa, iota = divmod(k, 2)
    if not 0 <= r <= kappa:
        raise ValueError(f"r={r} outside 0..{kappa}")
    mp = ctx.mp
    C = periodic_C(data, k, K, ctx)
    M = C.period
    j = 2 * r + iota
    B = bernoulli_poly(j + 1)
    s = sum(
        ((C(m) - (-1) ** k * C(-m)) * ctx.fraction(B(Fraction(m, M))) for m in range(1, M + 1)),
        mp.mpc(0),
    )
    return mp.sqrt(M) ** j / (2 * (j + 1)) * s


def alpha_coeff(data: SeifertData, k: int, r: int, m: int, ctx: PrecisionCtx):
    """Coefficient of ``e(-m^2 K / 4P) K^{kappa+iota+r}`` in ``LHS(K)``."""
    _check_k(data, k)
    kappa, iota = divmod(k, 2)
    if not 0 <= r <= kappa:
        raise ValueError(f"r={r} outside 0..{kappa}")
    mp = ctx.mp
    n, P = data.n, data.P
    ct = periodic_C_tilde(data, k, ctx)
    j = 2 * r + iota
    diff = ct(m) - (-1) ** k * ct(-m)
    if diff == 0:
        return mp.mpc(0)
    pre = (-1) ** (kappa + r + n + 1) * mp.expjpi(mp.mpf(-1) / 4) * mp.sqrt(2 * P) ** (k + j - 1)
    pre /= mp.mpf(2) ** mp.mpf(2.5) * (4 * mp.pi * 1j) ** (kappa - r) * math.factorial(j + 1)
    pre *= mp.mpf(math.factorial(k)) / math.factorial(kappa - r)
    return pre * diff * ctx.fraction(bernoulli_poly(j + 1)(Fraction(m % (2 * P), 2 * P)))


def _eta_moment(data: SeifertData, k: int, s, ctx: PrecisionCtx):
    """``int_0^oo eta_{k+1}(iy) y^{-s} dy``."""
    mp = ctx.mp
    combo = evaluator(data).eta_combo(k)
    weights = combo.weights()
    if not weights:
        return mp.mpc(0)

    def f(y):
        if y == 0:
            return mp.mpc(0)
        return combo_theta_value(ctx, combo.M, weights, combo.k, 1j * y) * mp.power(y, -s)

    return _quad(ctx, f, [mp.mpf(0), mp.mpf(1) / combo.M, mp.mpf(1), mp.mpf(combo.M), mp.inf])


def beta_coeff(data: SeifertData, r: int, ctx: PrecisionCtx):
    """Coefficient of ``K^{-r-1/2}`` in ``LHS(K)``."""
    if r < 0:
        raise ValueError("r must be >= 0")
    mp = ctx.mp
    n, P = data.n, data.P
    pre = (-1) ** n * double_factorial(2 * r - 1) * (-1j) ** r
    pre /= mp.mpf(2) ** (r + mp.mpf(1.5)) * math.factorial(r)
    s = r + mp.mpf(1) / 2
    total = sum((mp.sqrt(2 * P) ** k * 1j * _eta_moment(data, k, s, ctx) for k in range(n - 2)), mp.mpc(0))
    return pre * total


def psi_hat_at_inverse_K(data: SeifertData, K: int, ctx: PrecisionCtx):
    """``Psi^(1/K)`` split into its oscillatory (Bernoulli) and integral parts."""
    _check_K(K)
    mp = ctx.mp
    ev = evaluator(data)
    M = ev.M
    osc = mp.mpc(0)
    integral = mp.mpc(0)
    for k in range(data.n - 2):
        kappa, iota = divmod(k, 2)
        for r in range(kappa + 1):
            # limit of (-K + it)^s from the upper half-plane is K^s e^{i pi s}
            s = kappa + iota + r + mp.mpf(1) / 2
            lim = mp.power(K, s) * mp.expjpi(s)
            pre = -((-1) ** iota) * mp.expjpi(mp.mpf(-1) / 4) * mp.sqrt(M) ** (k - 1) * lim
            pre *= d_coeff(kappa, iota, r).value(mp) / (2 * mp.pi * 1j) ** kappa
            osc += pre * eta_tilde_limit(data, k, r, K, ctx)
        integral -= mp.sqrt(M) ** k * eichler_integral(ev.eta_combo(k), -K, ctx)
    return osc, integral


def _phi_prefactor(data: SeifertData, K: int, ctx: PrecisionCtx):
    """``2 xi^{Theta0/4} (xi^{1/2} - xi^{-1/2})``."""
    mp = ctx.mp
    return 2 * root_of_unity(mp, data.theta0 / (4 * K)) * 2j * mp.sinpi(mp.mpf(1) / K)


def wrt_exact(data: SeifertData, K: int, ctx: PrecisionCtx):
    """``tau_K`` from the S-transformation of ``Psi^`` at the cusp ``1/K``."""
    _check_K(K)
    osc, integral = psi_hat_at_inverse_K(data, K, ctx)
    pval = p_polynomial(data).evaluate_at_root(ctx, K)
    return (-1) ** data.n * (osc + integral + pval) / _phi_prefactor(data, K, ctx)


@dataclass(frozen=True)
class Extrapolation:
    value: object
    error: object
    ladder: tuple  # (t, Phi(xi e^{-t})) per rung
    diagonal: tuple


def default_t0(data: SeifertData, K: int) -> float:
    # the t-expansion of Phi(xi e^{-t}) has coefficients growing like j! (P K^2 / pi^2)^j
    return 0.002 * math.pi**2 / (data.P * K * K)


def wrt_extrapolate(data: SeifertData, K: int, ctx: PrecisionCtx, t0=None, rungs: int = 10, ratio: int = 2):
    """``lim_{t -> 0+} Phi(xi e^{-t})`` by Richardson extrapolation in ``t``."""
    _check_K(K)
    if rungs < 3:
        raise ValueError("need at least 3 rungs")
    mp = ctx.mp
    t0 = mp.mpf(default_t0(data, K) if t0 is None else t0)
    ts = [t0 / mp.mpf(ratio) ** j for j in range(rungs)]
    vals = [eval_phi_radial(data, K, t, ctx) for t in ts]
    table = [[v] for v in vals]
    for j in range(1, rungs):
        for i in range(1, j + 1):
            f = mp.mpf(ratio) ** i
            table[j].append(table[j][i - 1] + (table[j][i - 1] - table[j - 1][i - 1]) / (f - 1))
    diag = tuple(table[j][j] for j in range(rungs))
    n = rungs - 1
    err = max(abs(table[n][n] - table[n][n - 1]), abs(table[n][n] - table[n - 1][n - 1]))
    scale = max(1, abs(table[n][n]))
    if not err < scale * mp.mpf(10) ** (-8):
        raise ExtrapolationUnstable(f"Richardson table did not settle (estimate {mp.nstr(err, 5)})")
    return Extrapolation(table[n][n], err, tuple(zip(ts, vals)), diag)


def lhs_normalized(data: SeifertData, K: int, tau_K, ctx: PrecisionCtx):
    """``sqrt(2/K) xi^{Theta0/4} sin(pi/K) tau_K``, the quantity that is expanded."""
    mp = ctx.mp
    return mp.sqrt(mp.mpf(2) / K) * root_of_unity(mp, data.theta0 / (4 * K)) * mp.sinpi(mp.mpf(1) / K) * tau_K


@dataclass(frozen=True)
class AsymptoticTerm:
    phase: Fraction  # the term carries e(phase * K); phase in [0, 1)
    kpower: int
    coeff: object


@dataclass(frozen=True)
class AsymptoticExpansion:
    data: SeifertData
    oscillatory: tuple[AsymptoticTerm, ...]
    tail: tuple[tuple[int, object], ...]
    p_term: object
    ctx: PrecisionCtx
    K_ref: int | None = None

    @property
    def top_power(self) -> int:
        return max((t.kpower for t in self.oscillatory), default=0)

    def coefficient(self, phase, kpower: int):
        phase = Fraction(phase) % 1
        for t in self.oscillatory:
            if t.phase == phase and t.kpower == kpower:
                return t.coeff
        return self.ctx.mp.mpc(0)

    def leading(self) -> dict[Fraction, object]:
        top = self.top_power
        return {t.phase: t.coeff for t in self.oscillatory if t.kpower == top}

    def block_coefficients(self) -> dict[Fraction, object]:
        """Top-order coefficients of ``xi^{Theta0/4} (xi^{1/2} - xi^{-1/2}) tau_K / K^{n-5/2}``."""
        mp = self.ctx.mp
        f = 1j * mp.sqrt(2)
        return {ph: f * c for ph, c in self.leading().items()}

    def evaluate(self, K: int, orders: int | None = None):
        """Truncated expansion of ``LHS(K)``; ``orders`` limits the beta tail."""
        mp = self.ctx.mp
        total = mp.mpc(0)
        for t in self.oscillatory:
            total += t.coeff * root_of_unity(mp, t.phase * K) * mp.mpf(K) ** t.kpower
        for r, b in self.tail[: orders if orders is not None else None]:
            total += b * mp.mpf(K) ** (-r - mp.mpf(1) / 2)
        if self.p_term:
            total += self.p_term * p_polynomial(self.data).evaluate_at_root(self.ctx, K) / mp.sqrt(K)
        return total

    def oscillatory_at(self, K: int, kpower: int | None = None):
        mp = self.ctx.mp
        return sum(
            (
                t.coeff * root_of_unity(mp, t.phase * K) * mp.mpf(K) ** t.kpower
                for t in self.oscillatory
                if kpower is None or t.kpower == kpower
            ),
            mp.mpc(0),
        )


def asymptotic_expansion(
    data: SeifertData, ctx: PrecisionCtx, max_r: int = 1, include_p: bool = True
) -> AsymptoticExpansion:
    mp = ctx.mp
    P = data.P
    agg: dict[tuple[Fraction, int], object] = {}
    for k in range(data.n - 2):
        kappa, iota = divmod(k, 2)
        for r in range(kappa + 1):
            for m in range(1, 2 * P + 1):
                a = alpha_coeff(data, k, r, m, ctx)
                if a == 0:
                    continue
                key = (Fraction(-m * m, 4 * P) % 1, kappa + iota + r)
                agg[key] = agg.get(key, 0) + a
    terms = tuple(
        AsymptoticTerm(ph, kp, c)
        for (ph, kp), c in sorted(agg.items(), key=lambda kv: (-kv[0][1], kv[0][0]))
        if abs(c) > ctx.tolerance
    )
    tail = tuple((r, beta_coeff(data, r, ctx)) for r in range(max_r + 1)) if max_r >= 0 else ()
    p_term = (-1) ** data.n / (2 * mp.sqrt(2) * 1j) if include_p else 0
    return AsymptoticExpansion(data, terms, tail, p_term, ctx)


def _hikami_prefactor(data: SeifertData, K: int, ctx: PrecisionCtx):
    mp = ctx.mp
    n = data.n
    pre = mp.mpf(K) ** (n - 3) * 2 ** (n - 2) / (math.factorial(n - 2) * mp.sqrt(data.P))
    return pre * root_of_unity(mp, -data.theta0 / (4 * K)) * mp.expjpi(-mp.mpf(2 * n - 3) / 4)


def leading_term(data: SeifertData, K: int, ctx: PrecisionCtx):
    """Leading asymptotics of ``sqrt(2/K) sin(pi/K) tau_K`` summed over ``m mod 2P``."""
    _check_K(K)
    mp = ctx.mp
    n, P = data.n, data.P
    B = bernoulli_poly(n - 2)
    s = mp.mpc(0)
    for m in range(1, 2 * P + 1):
        sines = mp.fprod(mp.sinpi(mp.mpf(m) / pj) for pj in data.p)
        if sines == 0:
            continue
        s += (-1) ** (m * n) * root_of_unity(mp, Fraction(-m * m * K, 4 * P)) * ctx.fraction(B(Fraction(m, 2 * P))) * sines
    return _hikami_prefactor(data, K, ctx) * s


def bernoulli_sign_sum(data: SeifertData, l) -> Fraction:
    """``sum_eps eps_1...eps_n B~_{n-2}(eps_1 l_1 / 2p_1 + sum_j eps_j l_j / p_j)``, exact."""
    n = data.n
    total = Fraction(0)
    for eps in data.signs():
        x = Fraction(eps[0] * l[0], 2 * data.p[0]) + sum(Fraction(e * lj, pj) for e, lj, pj in zip(eps[1:], l[1:], data.p[1:]))
        total += math.prod(eps) * bernoulli_periodic(n - 2, x)
    return total


def cs_term(data: SeifertData, l, ctx: PrecisionCtx):
    """Weight of ``e(CS(l) K)`` in the Chern-Simons form of the leading term (without prefactor)."""
    mp = ctx.mp
    P = data.P
    w = (-1) ** l[0] * mp.sinpi(mp.mpf(l[0] * P) / data.p[0] ** 2)
    for lj, pj in zip(l[1:], data.p[1:]):
        w *= mp.sinpi(mp.mpf(2 * lj * P) / pj**2)
    return w * ctx.fraction(bernoulli_sign_sum(data, l))


def cs_grouped_leading(data: SeifertData, K: int, ctx: PrecisionCtx):
    """The leading term rewritten as a sum over flat connections ``l`` weighted by ``e(CS(l) K)``."""
    _check_K(K)
    mp = ctx.mp
    s = mp.mpc(0)
    for fc in flat_connections(data):
        w = cs_term(data, fc.l, ctx)
        if w != 0:
            s += root_of_unity(mp, fc.cs * K) * w
    return _hikami_prefactor(data, K, ctx) * s


def cs_phase_is_sign_invariant(data: SeifertData, l) -> bool:
    """``(P(eps_1 l_1/p_1 + sum 2 eps_j l_j/p_j))^2 mod 4P`` does not depend on ``eps``."""
    P4 = 4 * data.P
    vals = {cs_numerator(data, [e * x for e, x in zip(eps, l)]) ** 2 % P4 for eps in data.signs()}
    return len(vals) == 1


def tetra_membership(x, y, z) -> bool:
    """Is ``(x, y, z)`` inside ``-z < x - y < z, z < x + y < 1 - z``?

    Points on the boundary raise :class:`BoundaryPoint`; so do points
    outside the cube ``[0, 1/2]^3``, which cannot be decided meaningfully.
    """
    x, y, z = Fraction(x), Fraction(y), Fraction(z)
    half = Fraction(1, 2)
    if not all(0 <= v <= half for v in (x, y, z)):
        raise DomainError("coordinates must lie in [0, 1/2]")
    gaps = (x - y + z, z - (x - y), x + y - z, 1 - z - (x + y))
    if any(g == 0 for g in gaps):
        raise BoundaryPoint(f"({x}, {y}, {z}) lies on the boundary")
    return all(g > 0 for g in gaps)
