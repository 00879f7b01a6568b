# cython: language_level=3, boundscheck=False, wraparound=False
"""GMP implementation of the Gaussian progression kernel (see ``_fallback``)."""

from libc.stdlib cimport malloc, free

cdef extern from "gmp.h" nogil:
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct mpz_t[1]
    ctypedef __mpz_struct* mpz_ptr
    ctypedef const __mpz_struct* mpz_srcptr

    void mpz_init(mpz_ptr)
    void mpz_clear(mpz_ptr)
    void mpz_set(mpz_ptr, mpz_srcptr)
    void mpz_set_ui(mpz_ptr, unsigned long)
    void mpz_add(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_mul(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_mul_si(mpz_ptr, mpz_srcptr, long)
    void mpz_addmul(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_submul(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_neg(mpz_ptr, mpz_srcptr)
    void mpz_fdiv_q_2exp(mpz_ptr, mpz_srcptr, unsigned long)
    int mpz_sgn(mpz_srcptr)
    size_t mpz_sizeinbase(mpz_srcptr, int)
    void mpz_import(mpz_ptr, size_t, int, size_t, int, size_t, const void*)
    void* mpz_export(void*, size_t*, int, size_t, int, size_t, mpz_srcptr)


cdef void _from_py(mpz_ptr out, object x):
    cdef bytes raw
    cdef bint neg = x < 0
    if neg:
        x = -x
    raw = x.to_bytes((x.bit_length() + 7) // 8 or 1, "little")
    mpz_import(out, len(raw), -1, 1, 0, 0, <const char*>raw)
    if neg:
        mpz_neg(out, out)


cdef object _to_py(mpz_srcptr x):
    cdef int sgn = mpz_sgn(x)
    if sgn == 0:
        return 0
    cdef size_t nbytes = (mpz_sizeinbase(x, 2) + 7) // 8
    cdef size_t written = 0
    cdef unsigned char* buf = <unsigned char*>malloc(nbytes)
    if buf == NULL:
        raise MemoryError()
    try:
        mpz_export(buf, &written, -1, 1, 0, 0, x)
        val = int.from_bytes(buf[:written], "little")
    finally:
        free(buf)
    return -val if sgn < 0 else val


def gauss_moments(t0re, t0im, r0re, r0im, gre, gim,
                  long a0, long step, long count, int kmax, unsigned long wp):
    cdef mpz_t tre, tim, rre, rim, g_re, g_im, pre, pim, u, v
    cdef mpz_t* sre = <mpz_t*>malloc((kmax + 1) * sizeof(mpz_t))
    cdef mpz_t* sim = <mpz_t*>malloc((kmax + 1) * sizeof(mpz_t))
    cdef long j, m = a0
    cdef int k
    if sre == NULL or sim == NULL:
        free(sre)
        free(sim)
        raise MemoryError()
    for k in range(kmax + 1):
        mpz_init(sre[k])
        mpz_init(sim[k])
    mpz_init(tre); mpz_init(tim); mpz_init(rre); mpz_init(rim)
    mpz_init(g_re); mpz_init(g_im); mpz_init(pre); mpz_init(pim)
    mpz_init(u); mpz_init(v)
    try:
        _from_py(tre, t0re); _from_py(tim, t0im)
        _from_py(rre, r0re); _from_py(rim, r0im)
        _from_py(g_re, gre); _from_py(g_im, gim)
        with nogil:
            for j in range(count):
                mpz_set(pre, tre)
                mpz_set(pim, tim)
                for k in range(kmax + 1):
                    mpz_add(sre[k], sre[k], pre)
                    mpz_add(sim[k], sim[k], pim)
                    if k < kmax:
                        mpz_mul_si(pre, pre, m)
                        mpz_mul_si(pim, pim, m)
                mpz_mul(u, tre, rre)
                mpz_submul(u, tim, rim)
                mpz_mul(v, tre, rim)
                mpz_addmul(v, tim, rre)
                mpz_fdiv_q_2exp(tre, u, wp)
                mpz_fdiv_q_2exp(tim, v, wp)
                mpz_mul(u, rre, g_re)
                mpz_submul(u, rim, g_im)
                mpz_mul(v, rre, g_im)
                mpz_addmul(v, rim, g_re)
                mpz_fdiv_q_2exp(rre, u, wp)
                mpz_fdiv_q_2exp(rim, v, wp)
                m += step
        out_re = [_to_py(sre[k]) for k in range(kmax + 1)]
        out_im = [_to_py(sim[k]) for k in range(kmax + 1)]
    finally:
        for k in range(kmax + 1):
            mpz_clear(sre[k])
            mpz_clear(sim[k])
        free(sre)
        free(sim)
        mpz_clear(tre); mpz_clear(tim); mpz_clear(rre); mpz_clear(rim)
        mpz_clear(g_re); mpz_clear(g_im); mpz_clear(pre); mpz_clear(pim)
        mpz_clear(u); mpz_clear(v)
    return out_re, out_im
