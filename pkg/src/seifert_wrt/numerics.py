"""Precision handling and Gaussian progression sums.

Every theta-like series in the package is a finite combination of sums

    S_k = sum_{j >= 0} m_j**k * exp(2 pi i theta m_j**2 - decay * m_j**2),
    m_j = a0 + j * step,

which are handed to the fixed-point kernel in :mod:`seifert_wrt.kernels`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import kernels
from .errors import SlowConvergence

MAX_TERMS = 5_000_000


@dataclass(frozen=True)
class PrecisionCtx:
    """Working precision: ``digits`` significant digits plus ``tail_margin`` guard digits.

    Each context owns a private mpmath context, so precision changes made by
    one computation never leak into another.  A context is not meant to be
    shared between threads; create one per thread instead.
    """

    digits: int = 50
    tail_margin: int = 10
    mp: mpmath.ctx_mp.MPContext = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.digits < 20:
            raise ValueError(f"digits must be >= 20, got {self.digits}")
        if self.tail_margin < 0:
            raise ValueError("tail_margin must be >= 0")
        mp = mpmath.MPContext()
        mp.dps = self.digits + self.tail_margin
        object.__setattr__(self, "mp", mp)

    @property
    def tolerance(self):
        """Residual tolerance ``10**-(digits - 10)`` for identities."""
        return self.mp.mpf(10) ** (-(self.digits - 10))

    @property
    def tail_bits(self) -> int:
        """Series are truncated once terms drop below ``2**-tail_bits``."""
        return math.ceil((self.digits + self.tail_margin) * math.log2(10)) + 4

    def mpc(self, z):
        if isinstance(z, Fraction):
            return self.mp.mpc(self.mp.mpf(z.numerator) / z.denominator)
        return self.mp.mpc(z)

    def fraction(self, x: Fraction):
        return self.mp.mpf(x.numerator) / x.denominator


def root_of_unity(mp, turns: Fraction):
    """``exp(2 pi i * turns)`` from an exact rational, reduced mod 1 first."""
    turns = turns - math.floor(turns)
    return mp.expjpi(2 * mp.mpf(turns.numerator) / turns.denominator)


class Gaussian:
    """The character ``n -> exp(2 pi i theta n - decay n)`` on integers ``n``.

    ``theta`` is either an exact :class:`Fraction` or a binary mpf divided
    by the integer ``den``; in both cases ``theta * n mod 1`` is formed
    without losing the bits that large ``n`` would otherwise destroy.
    """

    def __init__(self, mp, theta, decay, den: int = 1):
        if isinstance(theta, Fraction):
            theta = theta / den
            den = 1
        self.mp = mp
        self.theta = theta
        self.den = den
        self.decay = mp.mpf(decay)

    @classmethod
    def from_tau(cls, mp, tau, M: int) -> "Gaussian":
        """``exp(pi i tau m^2 / M)`` written as a character of ``n = m^2``."""
        tau = mp.mpc(tau)
        return cls(mp, tau.real, mp.pi * tau.imag / M, den=2 * M)

    def turns(self, n: int):
        mp = self.mp
        if isinstance(self.theta, Fraction):
            f = self.theta * n
            f -= math.floor(f)
            return mp.mpf(f.numerator) / f.denominator
        with mp.extraprec(abs(n).bit_length() + self.den.bit_length() + 10):
            f = self.theta * n / self.den
            f -= mp.floor(f)
        return +f

    def at(self, n: int):
        mp = self.mp
        return mp.expjpi(2 * self.turns(n)) * mp.exp(-self.decay * n)


def last_index(decay: float, kmax: int, bits: int) -> int:
    """Smallest ``m`` beyond which ``m**kmax * exp(-decay m^2) < 2**-bits`` and decreasing."""
    if decay <= 0:
        raise SlowConvergence("no decay: the series does not converge", None)
    target = bits * math.log(2)
    m = math.sqrt(max(kmax, 1) / (2 * decay))
    for _ in range(60):
        new = math.sqrt((target + kmax * math.log(max(m, 1.0))) / decay)
        if abs(new - m) < 0.5:
            m = new
            break
        m = new
    return math.ceil(m) + 1


def _to_fixed(x, wp: int) -> int:
    return mpmath.libmp.to_fixed(x._mpf_, wp)


def progression_moments(
    mp,
    gauss: Gaussian,
    a0: int,
    step: int,
    kmax: int,
    bits: int,
    count: int | None = None,
    moment_start: int | None = None,
    moment_step: int | None = None,
    max_terms: int = MAX_TERMS,
    end: int | None = None,
    g_cache: dict | None = None,
):
    """Moments ``S_k`` (``k = 0..kmax``) of a Gaussian along an arithmetic progression.

    The weights are ``w_j**k`` with ``w_j = moment_start + j * moment_step``
    (by default ``w_j = m_j``).  When ``count`` is omitted the progression is
    truncated once terms fall below ``2**-bits``; requires ``step > 0`` and
    ``2 a0 + step >= 0`` so that the terms decrease in modulus.

    Callers summing many progressions with the same Gaussian and step can
    pass the truncation index ``end`` and a ``g_cache`` dict (keyed by
    working precision) to avoid recomputing shared quantities.
    """
    if step <= 0 or 2 * a0 + step < 0:
        raise ValueError("need step > 0 and 2*a0 + step >= 0")
    if count is None:
        if end is None:
            end = last_index(float(gauss.decay), kmax, bits)
        count = max((end - a0) // step + 1, 0)
    if count > max_terms:
        raise SlowConvergence(f"progression needs {count} terms (limit {max_terms})", count)
    zero = mp.mpc(0)
    if count == 0:
        return [zero] * (kmax + 1), 0
    if moment_start is None:
        moment_start, moment_step = a0, step
    top = max(abs(moment_start), abs(moment_start + (count - 1) * moment_step), 1)
    guard = 2 * count.bit_length() + kmax * top.bit_length() + 16
    wp = mp.prec + guard
    with mp.workprec(wp):
        t0 = gauss.at(a0 * a0)
        r0 = gauss.at(2 * a0 * step + step * step)
        if g_cache is None:
            g = gauss.at(2 * step * step)
        else:
            g = g_cache.get((wp, step))
            if g is None:
                g = g_cache[(wp, step)] = gauss.at(2 * step * step)
        fixed = [_to_fixed(v, wp) for v in (t0.real, t0.imag, r0.real, r0.imag, g.real, g.imag)]
    sre, sim = kernels.gauss_moments(*fixed, moment_start, moment_step, count, kmax, wp)
    out = [mp.mpc(mp.mpf((a, -wp)), mp.mpf((b, -wp))) for a, b in zip(sre, sim)]
    return out, count
