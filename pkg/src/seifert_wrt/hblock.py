"""The homological block as an exact q-series and its false-theta decomposition.

With ``N(eps) = P(n - 2 + sum eps_j/p_j) = 2P m0 + ell``,

    Psi(q) = sum_eps eps_1...eps_n sum_{m >= 0} C(m + n - 3, n - 3) q^{(2Pm + N)^2 / 4P}

and ``Phi(q) = (-1)^n q^{-Theta0/4} Psi(q) / (2 (q^{1/2} - q^{-1/2}))``.
Exponents are kept as integers over the fixed denominator ``4P``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

from .combinatorics import c_coeff, stirling1
from .errors import DomainError, UnitCircleInput
from .numerics import Gaussian, PrecisionCtx, progression_moments, root_of_unity
from .seifert import SectorData, SeifertData, all_sectors, sign_product
from .theta import ThetaCombo, eichler_integral, lattice_moments, s_prefactor


@dataclass(frozen=True)
class RationalQSeries:
    """Sparse q-series ``sum_e c_e q^e`` with every exponent in ``(1/denom) Z``.

    ``terms`` maps the integer numerator ``denom * e`` to the exact
    coefficient.  All exponents ``<= cutoff`` are final; ``cutoff`` is None
    for a polynomial (nothing is missing).
    """

    denom: int
    terms: Mapping[int, Fraction]
    cutoff: Fraction | None = None

    def __post_init__(self):
        clean = {int(e): Fraction(c) for e, c in sorted(self.terms.items()) if c != 0}
        object.__setattr__(self, "terms", clean)
        if self.cutoff is not None:
            object.__setattr__(self, "cutoff", Fraction(self.cutoff))

    def items(self) -> Iterator[tuple[Fraction, Fraction]]:
        for e, c in self.terms.items():
            yield Fraction(e, self.denom), c

    def coefficient(self, exponent) -> Fraction:
        e = Fraction(exponent) * self.denom
        if e.denominator != 1:
            return Fraction(0)
        return self.terms.get(int(e), Fraction(0))

    def _combine(self, other: "RationalQSeries", sign: int) -> "RationalQSeries":
        if self.denom != other.denom:
            raise ValueError("series have different exponent denominators")
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + sign * c
        cuts = [c for c in (self.cutoff, other.cutoff) if c is not None]
        return RationalQSeries(self.denom, out, min(cuts) if cuts else None)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def truncate(self, cutoff) -> "RationalQSeries":
        cutoff = Fraction(cutoff)
        bound = cutoff * self.denom
        return RationalQSeries(self.denom, {e: c for e, c in self.terms.items() if e <= bound}, cutoff)

    def __eq__(self, other):
        if not isinstance(other, RationalQSeries):
            return NotImplemented
        return self.denom == other.denom and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def evaluate(self, ctx: PrecisionCtx, tau):
        """``sum c_e exp(2 pi i tau e)``."""
        mp = ctx.mp
        tau = mp.mpc(tau)
        return sum(
            (ctx.fraction(c) * mp.exp(2j * mp.pi * tau * e / self.denom) for e, c in self.terms.items()),
            mp.mpc(0),
        )

    def evaluate_at_root(self, ctx: PrecisionCtx, K: int):
        """Value at ``q = exp(2 pi i / K)`` with exact phase reduction."""
        mp = ctx.mp
        return sum(
            (ctx.fraction(c) * root_of_unity(mp, Fraction(e, self.denom * K)) for e, c in self.terms.items()),
            mp.mpc(0),
        )


def _bound(data: SeifertData, cutoff) -> int:
    cutoff = Fraction(cutoff)
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    return math.floor(cutoff * 4 * data.P)


def _class_range(ell: int, step: int, lo: int, hi: int) -> range:
    """Integers ``m = ell (mod step)`` with ``lo <= m <= hi``."""
    start = lo + (ell - lo) % step
    return range(start, hi + 1, step)


def _psi_direct(data: SeifertData, cutoff) -> RationalQSeries:
    bound = _bound(data, cutoff)
    n, P = data.n, data.P
    out: dict[int, Fraction] = {}
    for s in all_sectors(data):
        sgn = sign_product(s.epsilon)
        m = 0
        while True:
            N = 2 * P * (m + s.m0) + s.ell
            if N >= 0 and N * N > bound:
                break
            if N * N <= bound:
                out[N * N] = out.get(N * N, 0) + sgn * math.comb(m + n - 3, n - 3)
            m += 1
    return RationalQSeries(4 * P, out, Fraction(cutoff))


def expansion_coefficients(data: SeifertData, s: SectorData) -> list[Fraction]:
    """``sum_l (-ell - 2P m0)^(l-k) / (2P)^l [n-2, l+1] C(l, k) / (n-3)!`` for ``k = 0..n-3``."""
    n, P = data.n, data.P
    shift = -s.ell - 2 * P * s.m0
    return [
        sum(
            (Fraction(shift ** (l - k) * stirling1(n - 2, l + 1) * math.comb(l, k), (2 * P) ** l) for l in range(k, n - 2)),
            Fraction(0),
        )
        / math.factorial(n - 3)
        for k in range(n - 2)
    ]


def _psi_expand(data: SeifertData, cutoff, backward: bool) -> RationalQSeries:
    bound = _bound(data, cutoff)
    n, P = data.n, data.P
    top = math.isqrt(bound)
    out: dict[int, Fraction] = {}
    for s in all_sectors(data):
        sgn = sign_product(s.epsilon)
        coeffs = expansion_coefficients(data, s)
        if backward:
            sgn = -sgn
            m_range = _class_range(s.ell, 2 * P, -top, min(top, 2 * P * (s.m0 - n + 2) + s.ell))
        else:
            m_range = _class_range(s.ell, 2 * P, max(-top, 2 * P * s.m0 + s.ell), top)
        for m in m_range:
            val = sum((c * m**k for k, c in enumerate(coeffs)), Fraction(0))
            out[m * m] = out.get(m * m, 0) + sgn * val
    return RationalQSeries(4 * P, out, Fraction(cutoff))


def psi_series(data: SeifertData, cutoff, method: str = "direct") -> RationalQSeries:
    """Exact coefficients of ``Psi(q)`` for exponents ``<= cutoff``.

    ``method`` selects the defining binomial double sum (``direct``), the
    forward expansion in powers of ``m`` (``expand1``) or the backward one
    obtained from ``eps -> -eps`` (``expand2``).  All three agree exactly.
    """
    if method == "direct":
        return _psi_direct(data, cutoff)
    if method == "expand1":
        return _psi_expand(data, cutoff, backward=False)
    if method == "expand2":
        return _psi_expand(data, cutoff, backward=True)
    raise ValueError(f"unknown method {method!r}")


def sector_sign(data: SeifertData, s: SectorData, m: int) -> int:
    """``+1`` above the sector window, ``-1`` below it, ``0`` inside."""
    P, n = data.P, data.n
    if m >= 2 * P * s.m0 + s.ell:
        return 1
    if m <= 2 * P * (s.m0 - n + 2) + s.ell:
        return -1
    return 0


def _sgn(m: int) -> int:
    return (m > 0) - (m < 0)


def p_polynomial(data: SeifertData) -> RationalQSeries:
    """The finite correction where the sector sign differs from ``sgn(m)``."""
    P, n = data.P, data.n
    out: dict[int, Fraction] = {}
    for s in all_sectors(data):
        eps = sign_product(s.epsilon)
        c = [c_coeff(data, s.epsilon, k) for k in range(n - 2)]
        reach = 2 * P * (abs(s.m0) + n + 1)
        for m in _class_range(s.ell, 2 * P, -reach, reach):
            diff = sector_sign(data, s, m) - _sgn(m)
            if diff:
                val = sum((ck * m**k for k, ck in enumerate(c)), Fraction(0))
                out[m * m] = out.get(m * m, 0) + Fraction(eps * diff, 2) * val
    return RationalQSeries(4 * P, out)


def psi_decomposed_series(data: SeifertData, cutoff) -> RationalQSeries:
    """``(1/2) sum_eps eps sum_k (2P)^{k/2} c_eps(k) ftheta_{k, ell/sqrt(2P)}`` expanded exactly."""
    bound = _bound(data, cutoff)
    P, n = data.P, data.n
    top = math.isqrt(bound)
    out: dict[int, Fraction] = {}
    for s in all_sectors(data):
        eps = sign_product(s.epsilon)
        c = [c_coeff(data, s.epsilon, k) for k in range(n - 2)]
        for m in _class_range(s.ell, 2 * P, -top, top):
            val = sum((ck * m**k for k, ck in enumerate(c)), Fraction(0))
            out[m * m] = out.get(m * m, 0) + Fraction(eps * _sgn(m), 2) * val
    return RationalQSeries(4 * P, out, Fraction(cutoff))


def _check_q(mp, qval):
    q = mp.mpc(qval)
    r = abs(q)
    if r == 0:
        raise DomainError("q = 0 is outside the domain")
    if r >= 1:
        raise UnitCircleInput(f"|q| = {mp.nstr(r, 10)} must be < 1")
    return q


def _psi_numeric(data: SeifertData, ctx: PrecisionCtx, gauss: Gaussian, max_terms: int):
    """``Psi`` with ``q^{N^2/4P}`` given by the character ``gauss`` of ``N^2``."""
    mp = ctx.mp
    n, P = data.n, data.P
    poly = [Fraction(stirling1(n - 2, l + 1), math.factorial(n - 3)) for l in range(n - 2)]
    total = mp.mpc(0)
    for s in all_sectors(data):
        N0 = 2 * P * s.m0 + s.ell
        moments, _ = progression_moments(
            mp, gauss, N0, 2 * P, n - 3, ctx.tail_bits, moment_start=0, moment_step=1, max_terms=max_terms
        )
        val = sum((ctx.fraction(b) * moments[l] for l, b in enumerate(poly)), mp.mpc(0))
        total += sign_product(s.epsilon) * val
    return total


def eval_psi(data: SeifertData, qval, ctx: PrecisionCtx, max_terms: int = 1_000_000):
    mp = ctx.mp
    q = _check_q(mp, qval)
    L = mp.log(q)
    gauss = Gaussian(mp, L.imag / (2 * mp.pi), -L.real / (4 * data.P), den=4 * data.P)
    return _psi_numeric(data, ctx, gauss, max_terms)


def eval_phi(data: SeifertData, qval, ctx: PrecisionCtx, max_terms: int = 1_000_000):
    """``Phi(q)`` for ``0 < |q| < 1``; powers of ``q`` use the principal logarithm."""
    mp = ctx.mp
    q = _check_q(mp, qval)
    L = mp.log(q)
    psi = eval_psi(data, q, ctx, max_terms)
    pre = (-1) ** data.n / (2 * (mp.exp(L / 2) - mp.exp(-L / 2)))
    return pre * mp.exp(-ctx.fraction(data.theta0) * L / 4) * psi


def eval_phi_radial(data: SeifertData, K: int, t, ctx: PrecisionCtx, max_terms: int = 5_000_000):
    """``Phi(exp(2 pi i / K) exp(-t))`` with every phase reduced exactly."""
    mp = ctx.mp
    t = mp.mpf(t)
    if t <= 0:
        raise UnitCircleInput("t must be positive")
    if K < 1:
        raise DomainError("K must be positive")
    P = data.P
    gauss = Gaussian(mp, Fraction(1, 4 * P * K), t / (4 * P))
    psi = _psi_numeric(data, ctx, gauss, max_terms)
    half = root_of_unity(mp, Fraction(1, 2 * K)) * mp.exp(-t / 2)
    pre = (-1) ** data.n / (2 * (half - 1 / half))
    twist = root_of_unity(mp, -data.theta0 / (4 * K)) * mp.exp(t * ctx.fraction(data.theta0) / 4)
    return pre * twist * psi


@dataclass(frozen=True)
class PsiHatEvaluator:
    """``Psi^(tau) = Psi(q) - P(q)`` as a weighted sum of false thetas on ``sqrt(2P) Z``."""

    data: SeifertData
    sectors: tuple[SectorData, ...] = field(init=False)
    coeffs: dict = field(init=False, repr=False)

    def __post_init__(self):
        sectors = tuple(all_sectors(self.data))
        coeffs = {s.epsilon: tuple(c_coeff(self.data, s.epsilon, k) for k in range(self.data.n - 2)) for s in sectors}
        object.__setattr__(self, "sectors", sectors)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def M(self) -> int:
        return 2 * self.data.P

    @property
    def kmax(self) -> int:
        return self.data.n - 3

    def psi_hat_weights(self, k: int) -> dict[int, Fraction]:
        """Residue ``ell`` -> ``(1/2) eps c_eps(k)`` (raw, i.e. against ``sgn(m) m^k``)."""
        out: dict[int, Fraction] = {}
        for s in self.sectors:
            out[s.ell] = out.get(s.ell, 0) + Fraction(sign_product(s.epsilon), 2) * self.coeffs[s.epsilon][k]
        return out

    def eta_combo(self, k: int, weight: int | None = None) -> ThetaCombo:
        """``eta = -(1/2) sum_eps eps c_eps(k) theta_{weight, ell/sqrt(2P)}`` (default weight ``k + 1``)."""
        weight = k + 1 if weight is None else weight
        terms = tuple((s.ell, Fraction(-sign_product(s.epsilon), 2) * self.coeffs[s.epsilon][k]) for s in self.sectors)
        return ThetaCombo(self.M, weight, terms)

    def c_tilde(self, ctx: PrecisionCtx, k: int, m: int):
        """``sum_eps eps c_eps(k) exp(2 pi i ell m / 2P)``."""
        mp = ctx.mp
        total = mp.mpc(0)
        for s in self.sectors:
            a = sign_product(s.epsilon) * self.coeffs[s.epsilon][k]
            if a:
                total += ctx.fraction(a) * root_of_unity(mp, Fraction(s.ell * m, self.M))
        return total


def eval_psi_hat(ev: PsiHatEvaluator, tau, ctx: PrecisionCtx):
    total = ctx.mp.mpc(0)
    for k in range(ev.kmax + 1):
        total += lattice_moments(ctx, ev.M, ev.psi_hat_weights(k), k, tau, signed=True)[k]
    return total


def eta_tilde(ev: PsiHatEvaluator, k: int, tau, ctx: PrecisionCtx):
    """``[eta~_{k,r}(tau) for r = 0..kappa]`` by direct summation."""
    mp = ctx.mp
    kappa, iota = divmod(k, 2)
    memo: dict[int, object] = {}

    def weight(nu: int):
        if nu not in memo:
            memo[nu] = -ev.c_tilde(ctx, k, nu) / 2
        return memo[nu]

    raw = lattice_moments(ctx, ev.M, weight, k, tau, signed=True)
    return [raw[2 * r + iota] / mp.sqrt(ev.M) ** (2 * r + iota) for r in range(kappa + 1)]


def psi_hat_s_rhs(ev: PsiHatEvaluator, tau, ctx: PrecisionCtx):
    """Right-hand side of the S-transformation of ``Psi^``; should equal ``Psi^(-1/tau)``."""
    mp = ctx.mp
    tau = mp.mpc(tau)
    if tau.real == 0 or tau.imag <= 0:
        raise DomainError("need Im(tau) > 0 and Re(tau) != 0")
    M = ev.M
    total = mp.mpc(0)
    for k in range(ev.kmax + 1):
        kappa, _ = divmod(k, 2)
        pre, dr = s_prefactor(mp, k, M, tau)
        eta = eta_tilde(ev, k, tau, ctx)
        total += mp.sign(tau.real) * mp.sqrt(M) ** k * pre * sum(dr[r] * eta[r] for r in range(kappa + 1))
        total -= mp.sqrt(M) ** k * eichler_integral(ev.eta_combo(k), tau, ctx)
    return total
