"""Pure-Python Gaussian progression kernel.

Fixed-point arithmetic on Python integers: a complex number ``x`` is carried
as the pair ``(round(Re x * 2**wp), round(Im x * 2**wp))``.  The compiled
module ``_gmp`` performs the identical sequence of integer operations, so both
back ends return bit-identical results.
"""


def gauss_moments(t0re, t0im, r0re, r0im, gre, gim, a0, step, count, kmax, wp):
    """Moments ``S_k = sum_{j < count} m_j**k * t_j`` for ``k = 0..kmax``.

    ``m_j = a0 + j*step``; the terms obey ``t_{j+1} = t_j * r_j`` and
    ``r_{j+1} = r_j * g``, which is how ``z**(m_j**2)`` (optionally times a
    character ``w**m_j``) advances along an arithmetic progression.  All of
    ``t0, r0, g`` and the returned sums are fixed point with ``wp`` fraction
    bits.
    """
    sre = [0] * (kmax + 1)
    sim = [0] * (kmax + 1)
    tre, tim = t0re, t0im
    rre, rim = r0re, r0im
    m = a0
    for _ in range(count):
        pre, pim = tre, tim
        for k in range(kmax + 1):
            sre[k] += pre
            sim[k] += pim
            if k < kmax:
                pre *= m
                pim *= m
        tre, tim = (tre * rre - tim * rim) >> wp, (tre * rim + tim * rre) >> wp
        rre, rim = (rre * gre - rim * gim) >> wp, (rre * gim + rim * gre) >> wp
        m += step
    return sre, sim
