# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled permanent kernels. Imported by :mod:`lilperm.permanent` when available."""

from libc.stdint cimport uint64_t

cdef extern from "_kernels.h":
    void lp_ryser(const uint64_t *rows, int n, uint64_t *lo, uint64_t *hi) nogil
    void lp_glynn(const uint64_t *rows, int n, uint64_t *out) nogil
    uint64_t lp_bruteforce(const uint64_t *rows, int n) nogil

GLYNN_PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563)
_GLYNN_MODULUS = 1
for _p in GLYNN_PRIMES:
    _GLYNN_MODULUS *= _p


cdef int _load(rows, uint64_t *buf) except -1:
    cdef int n = len(rows)
    cdef int i
    if n < 1 or n > 34:
        raise ValueError(f"kernel dimension out of range: {n}")
    for i in range(n):
        buf[i] = rows[i]
    return n


def ryser(rows):
    cdef uint64_t buf[34]
    cdef uint64_t lo = 0, hi = 0
    cdef int n = _load(rows, buf)
    with nogil:
        lp_ryser(buf, n, &lo, &hi)
    return (int(hi) << 64) | int(lo)


def glynn(rows):
    cdef uint64_t buf[34]
    cdef uint64_t out[5]
    cdef int n = _load(rows, buf)
    with nogil:
        lp_glynn(buf, n, out)
    value = 0
    for k in range(5):
        p = GLYNN_PRIMES[k]
        residue = out[k] * pow(pow(2, n - 1, p), -1, p) % p
        big = _GLYNN_MODULUS // p
        value += residue * big * pow(big, -1, p)
    return value % _GLYNN_MODULUS


def bruteforce(rows):
    cdef uint64_t buf[34]
    cdef uint64_t total
    cdef int n = _load(rows, buf)
    with nogil:
        total = lp_bruteforce(buf, n)
    return int(total)
