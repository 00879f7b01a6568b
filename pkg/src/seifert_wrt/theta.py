"""Ordinary and false theta functions on the lattice ``sqrt(M) Z``.

For a residue ``nu`` mod ``M`` put ``mu = nu / sqrt(M)``; then

    theta_{k,mu}(tau)  = sum_{m = nu (M)} (m / sqrt(M))**k exp(pi i tau m^2 / M)
    ftheta_{k,mu}(tau) = sum_{m = nu (M)} sgn(m) (m / sqrt(M))**k exp(pi i tau m^2 / M)

All sums reduce to Gaussian progressions over positive integers (see
:mod:`seifert_wrt.numerics`); negative ``m`` are folded onto the class of
``-m``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Mapping

from .combinatorics import d_coeff
from .errors import CombinationNotCuspidal, NotUpperHalfPlane, QuadratureNotConverged
from .numerics import Gaussian, PrecisionCtx, last_index, progression_moments, root_of_unity


@dataclass(frozen=True)
class ThetaClass:
    M: int
    k: int
    nu: int

    def __post_init__(self):
        if self.M < 1 or self.k < 0:
            raise ValueError("need M >= 1 and k >= 0")
        if not 0 <= self.nu < self.M:
            raise ValueError(f"residue {self.nu} outside 0..{self.M - 1}")


@dataclass(frozen=True)
class ThetaCombo:
    """``sum_j a_j theta_{k, nu_j / sqrt(M)}``; weights may be exact rationals."""

    M: int
    k: int
    terms: tuple[tuple[int, object], ...]

    def __post_init__(self):
        if self.M < 1 or self.k < 0:
            raise ValueError("need M >= 1 and k >= 0")
        object.__setattr__(self, "terms", tuple((int(nu) % self.M, a) for nu, a in self.terms))

    def weights(self) -> dict[int, object]:
        out: dict[int, object] = {}
        for nu, a in self.terms:
            out[nu] = out.get(nu, 0) + a
        return {nu: a for nu, a in out.items() if a != 0}

    def total_weight(self):
        return sum((a for _, a in self.terms), 0)

    def at_weight(self, k: int) -> "ThetaCombo":
        return ThetaCombo(self.M, k, self.terms)

    @classmethod
    def single(cls, c: ThetaClass, a=1) -> "ThetaCombo":
        return cls(c.M, c.k, ((c.nu, a),))


def _check_tau(mp, tau):
    tau = mp.mpc(tau)
    if tau.imag <= 0:
        raise NotUpperHalfPlane(f"Im(tau) must be positive, got {tau}")
    return tau


def _as_mp(mp, a):
    if isinstance(a, Fraction):
        return mp.mpf(a.numerator) / a.denominator
    return a


def lattice_moments(
    ctx: PrecisionCtx,
    M: int,
    weight: Mapping[int, object] | Callable[[int], object],
    kmax: int,
    tau,
    signed: bool,
):
    """Raw sums ``sum_m W(m mod M) s(m) m**k exp(pi i tau m^2 / M)`` for ``k = 0..kmax``.

    ``s(m) = sgn(m)`` when ``signed`` else ``1``.  ``weight`` is a sparse
    mapping residue -> coefficient or a callable on residues (dense weights;
    only classes whose leading term survives the truncation are visited).
    """
    mp = ctx.mp
    tau = _check_tau(mp, tau)
    gauss = Gaussian.from_tau(mp, tau, M)
    bits = ctx.tail_bits
    sign = -1 if signed else 1
    pos: dict[int, object] = {}
    neg: dict[int, object] = {}
    zero_weight = 0
    end = last_index(float(gauss.decay), kmax, bits)
    g_cache: dict = {}
    if callable(weight):
        for a in range(1, min(M, end) + 1):
            pos[a] = weight(a % M)
            neg[a] = weight((-a) % M)
        if not signed:
            zero_weight = weight(0)
    else:
        for r, w in weight.items():
            r %= M
            if r == 0 and not signed:
                zero_weight = w
            pos[r or M] = pos.get(r or M, 0) + w
            neg[(M - r) or M] = neg.get((M - r) or M, 0) + w
    out = [mp.mpc(0)] * (kmax + 1)
    for a in sorted(set(pos) | set(neg)):
        p = _as_mp(mp, pos.get(a, 0))
        n = _as_mp(mp, neg.get(a, 0))
        if p == 0 and n == 0:
            continue
        if a > end:
            continue
        moments, count = progression_moments(mp, gauss, a, M, kmax, bits, end=end, g_cache=g_cache)
        if count == 0:
            continue
        for k in range(kmax + 1):
            coef = p + (-1) ** k * sign * n
            if coef != 0:
                out[k] += coef * moments[k]
    if zero_weight:
        out[0] += _as_mp(mp, zero_weight)
    return out


def _should_accelerate(mp, tau, M: int) -> bool:
    return tau.imag < mp.mpf(1) / M and (-1 / tau).imag > tau.imag


@lru_cache(maxsize=256)
def _dual_table(mp, prec: int, M: int, items: tuple) -> dict:
    return {}


def _dual_weight(mp, M: int, weights: Mapping[int, object]):
    """``nu -> sum_j a_j e^{2 pi i nu_j nu / M}``; exact at ``nu = 0`` for rational weights.

    Values are memoised per (precision, weights) since quadratures ask for
    the same dual weights at every node.
    """
    items = tuple(sorted(weights.items()))
    exact_zero = sum((a for _, a in items), 0)
    try:
        table = _dual_table(mp, mp.prec, M, items)
    except TypeError:
        table = {}

    def w(nu: int):
        if nu in table:
            return table[nu]
        if nu == 0:
            val = _as_mp(mp, exact_zero)
        else:
            val = mp.mpc(0)
            for r, a in items:
                val += _as_mp(mp, a) * root_of_unity(mp, Fraction(r * nu % M, M))
        table[nu] = val
        return val

    return w


def s_prefactor(mp, k: int, M: int, tau):
    """``(-1)^iota (-i)^{1/2} tau^{kappa+iota+1/2} / ((2 pi i)^kappa sqrt(M))`` and ``[d_r tau^r]``."""
    kappa, iota = divmod(k, 2)
    pre = (-1) ** iota * mp.expjpi(mp.mpf(-1) / 4) * mp.power(tau, kappa + iota + mp.mpf(1) / 2)
    pre /= (2 * mp.pi * mp.j) ** kappa * mp.sqrt(M)
    dr = [d_coeff(kappa, iota, r).value(mp) * tau**r for r in range(kappa + 1)]
    return pre, dr


def _normalise(mp, raw, M: int):
    return [v / mp.sqrt(M) ** k for k, v in enumerate(raw)]


def combo_theta_value(ctx: PrecisionCtx, M: int, weights: Mapping[int, object], k: int, tau, accelerate=None):
    """``sum_j a_j theta_{k, nu_j}(tau)`` with optional modular acceleration."""
    mp = ctx.mp
    tau = _check_tau(mp, tau)
    if accelerate is None:
        accelerate = _should_accelerate(mp, tau, M)
    if not accelerate:
        return lattice_moments(ctx, M, weights, k, tau, signed=False)[k] / mp.sqrt(M) ** k
    # theta_k(tau) = theta_k(-1/tau') with tau' = -1/tau, expanded at tau'
    tp = -1 / tau
    kappa, iota = divmod(k, 2)
    pre, dr = s_prefactor(mp, k, M, tp)
    vals = _normalise(mp, lattice_moments(ctx, M, _dual_weight(mp, M, weights), k, tp, signed=False), M)
    return pre * sum(dr[r] * vals[2 * r + iota] for r in range(kappa + 1))


def theta_eval(c: ThetaClass, tau, ctx: PrecisionCtx, accelerate=None):
    """``theta_{k, nu/sqrt(M)}(tau)``.

    When ``Im(tau) < 1/M`` (and the inversion helps) the value is obtained
    from the S-transformation at ``-1/tau``; ``accelerate`` forces either
    route.
    """
    return combo_theta_value(ctx, c.M, {c.nu: 1}, c.k, tau, accelerate)


def combo_theta_eval(combo: ThetaCombo, tau, ctx: PrecisionCtx, accelerate=None):
    return combo_theta_value(ctx, combo.M, combo.weights(), combo.k, tau, accelerate)


def false_theta_value(ctx: PrecisionCtx, M: int, weights, k: int, tau):
    mp = ctx.mp
    return lattice_moments(ctx, M, weights, k, tau, signed=True)[k] / mp.sqrt(M) ** k


def false_theta_eval(c: ThetaClass, tau, ctx: PrecisionCtx, return_error: bool = False):
    """``ftheta_{k, nu/sqrt(M)}(tau)`` by direct summation.

    There is no modular shortcut, so small ``Im(tau)`` means long sums.  With
    ``return_error`` a bound on the discarded tail is returned as well.
    """
    mp = ctx.mp
    value = false_theta_value(ctx, c.M, {c.nu: 1}, c.k, tau)
    if not return_error:
        return value
    # each of the two folded progressions is cut below 2^-tail_bits and
    # decays at least geometrically from there
    err = 4 * mp.mpf(2) ** (-ctx.tail_bits) / mp.sqrt(c.M) ** c.k
    return value, err


def combo_false_theta_eval(combo: ThetaCombo, tau, ctx: PrecisionCtx):
    return false_theta_value(ctx, combo.M, combo.weights(), combo.k, tau)


def _quad(ctx: PrecisionCtx, f, points, method="tanh-sinh", tol=None):
    mp = ctx.mp
    tol = ctx.tolerance / 1000 if tol is None else tol
    value, err = mp.quad(f, points, method=method, error=True, maxdegree=10)
    if not err <= tol:
        raise QuadratureNotConverged(f"quadrature error estimate {mp.nstr(err, 5)} above {mp.nstr(tol, 5)}")
    return value


def theta_hat_eval(c: ThetaClass, tau, w, ctx: PrecisionCtx):
    """Two-variable completion via the erf representation as a t-integral.

    ``Theta^_{k,mu}(tau, w) = -2i sqrt(i(w - tau)) int_0^1 theta_{k+1,mu}(tau + (w - tau) t^2) dt``,
    integrated with Gauss-Legendre rules of increasing degree.
    """
    mp = ctx.mp
    tau = _check_tau(mp, tau)
    w = _check_tau(mp, w)
    delta = w - tau
    if delta == 0:
        return mp.mpc(0)
    weights = {c.nu: 1}

    def f(t):
        return combo_theta_value(ctx, c.M, weights, c.k + 1, tau + delta * t * t)

    tol = mp.mpf(10) ** (-(ctx.digits - 5))
    integral = _quad(ctx, f, [0, 1], method="gauss-legendre", tol=tol)
    return -2j * mp.sqrt(1j * delta) * integral


def theta_hat_line_integral(c: ThetaClass, tau, w, ctx: PrecisionCtx):
    """``-i sgn(Re(w - tau)) int_tau^w theta_{k+1,mu}(z) / sqrt(-i(z - tau)) dz`` on the segment."""
    mp = ctx.mp
    tau = _check_tau(mp, tau)
    w = _check_tau(mp, w)
    delta = w - tau
    if delta.real == 0:
        raise ValueError("the line-integral form needs Re(tau) != Re(w)")
    weights = {c.nu: 1}
    root = mp.sqrt(-1j * delta)

    # z = tau + delta u^2 removes the 1/sqrt endpoint singularity; the branch
    # of sqrt(-i(z - tau)) = u sqrt(-i delta) is what the comparison tests
    def f(u):
        z = tau + delta * u * u
        return 2 * combo_theta_value(ctx, c.M, weights, c.k + 1, z) * delta / root

    return -1j * mp.sign(delta.real) * _quad(ctx, f, [0, 1])


def _eichler_points(mp, M: int, tau):
    pts = {mp.mpf(0), mp.mpf(1) / M, mp.mpf(1), mp.mpf(M)}
    pole = (1j / tau).real
    if pole > 0:
        pts.add(pole)
    return sorted(pts) + [mp.inf]


def eichler_integral(combo: ThetaCombo, tau, ctx: PrecisionCtx):
    """``-i int_0^{i oo} theta_{combo}(z) / sqrt(-i(z + 1/tau)) dz`` for a combination at weight ``combo.k``.

    With ``z = iy`` this is ``int_0^oo theta_{combo}(iy) / sqrt(y - i/tau) dy``;
    small ``y`` goes through the S-transformation.  When ``combo.k`` is even
    the combination must have total weight zero, otherwise the integrand
    blows up at the cusp 0.
    """
    mp = ctx.mp
    tau = mp.mpc(tau)
    if tau.real == 0:
        raise ValueError("Re(tau) must be nonzero")
    weights = combo.weights()
    if not weights:
        return mp.mpc(0)
    total = combo.total_weight()
    if combo.k % 2 == 0 and abs(_as_mp(mp, total)) > ctx.tolerance:
        raise CombinationNotCuspidal(f"weights sum to {total}, need 0 for even weight {combo.k}")
    shift = -1j / tau

    def f(y):
        if y == 0:
            return mp.mpc(0)
        return combo_theta_value(ctx, combo.M, weights, combo.k, 1j * y) / mp.sqrt(y + shift)

    return _quad(ctx, f, _eichler_points(mp, combo.M, tau))


def _false_s_side(ctx, M, weights, k, tau):
    """``sgn(Re tau) (-1)^iota (-i)^{1/2} tau^{kappa+iota+1/2} / ((2 pi i)^kappa sqrt M) sum_nu A(nu) sum_r d_r tau^r ftheta_{2r+iota,nu}``."""
    mp = ctx.mp
    kappa, iota = divmod(k, 2)
    pre, dr = s_prefactor(mp, k, M, tau)
    vals = _normalise(mp, lattice_moments(ctx, M, _dual_weight(mp, M, weights), k, tau, signed=True), M)
    return mp.sign(tau.real) * pre * sum(dr[r] * vals[2 * r + iota] for r in range(kappa + 1))


KINDS = ("ordinary01", "ordinary_general", "false0", "false1", "false_general")


def s_transform_residual(kind: str, obj, tau, ctx: PrecisionCtx):
    """LHS - RHS of a named S-transformation identity, both sides computed independently.

    ``obj`` is a :class:`ThetaClass` for the ordinary kinds and ``false0``,
    and a :class:`ThetaCombo` for ``false1`` / ``false_general``.
    """
    mp = ctx.mp
    tau = _check_tau(mp, tau)
    if kind not in KINDS:
        raise ValueError(f"unknown identity {kind!r}; expected one of {', '.join(KINDS)}")
    if kind.startswith("ordinary"):
        c = obj
        if kind == "ordinary01" and c.k > 1:
            raise ValueError("ordinary01 covers k = 0, 1 only")
        lhs = combo_theta_value(ctx, c.M, {c.nu: 1}, c.k, -1 / tau, accelerate=False)
        kappa, iota = divmod(c.k, 2)
        pre, dr = s_prefactor(mp, c.k, c.M, tau)
        dual = _dual_weight(mp, c.M, {c.nu: 1})
        vals = _normalise(mp, lattice_moments(ctx, c.M, dual, c.k, tau, signed=False), c.M)
        return lhs - pre * sum(dr[r] * vals[2 * r + iota] for r in range(kappa + 1))
    if tau.real == 0:
        raise ValueError("false-theta S-transformations need Re(tau) != 0")
    if kind == "false0":
        c = obj
        if c.k != 0:
            raise ValueError("false0 is the k = 0 identity")
        combo = ThetaCombo.single(c)
    else:
        combo = obj
        if kind == "false1" and combo.k != 1:
            raise ValueError("false1 is the k = 1 identity")
    weights = combo.weights()
    lhs = false_theta_value(ctx, combo.M, weights, combo.k, -1 / tau)
    lhs += _false_s_side(ctx, combo.M, weights, combo.k, tau)
    rhs = eichler_integral(combo.at_weight(combo.k + 1), tau, ctx)
    return lhs - rhs
