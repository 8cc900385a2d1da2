# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the modular subset dynamic programs."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

BACKEND = "cython"


cdef inline void _matmul_acc(const uint64_t[:, ::1] a, const uint64_t[:, ::1] b,
                             uint64_t[:, ::1] out, uint64_t p, bint negate) noexcept nogil:
    # residues are < 2**32, so a row of products sums well inside 128 bits
    cdef Py_ssize_t n = a.shape[0], i, j, k
    cdef u128 acc
    cdef uint64_t aik, r
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                aik = a[i, k]
                if aik:
                    acc += <u128>(aik * b[k, j])
            r = <uint64_t>(acc % p)
            if negate:
                out[i, j] = (out[i, j] + p - r) % p
            else:
                out[i, j] = (out[i, j] + r) % p


def matmul_mod(a, b, p):
    cdef uint64_t[:, ::1] av = np.ascontiguousarray(a, dtype=np.uint64)
    cdef uint64_t[:, ::1] bv = np.ascontiguousarray(b, dtype=np.uint64)
    out = np.zeros((av.shape[0], bv.shape[1]), dtype=np.uint64)
    cdef uint64_t[:, ::1] ov = out
    _matmul_acc(av, bv, ov, <uint64_t>p, False)
    return out.astype(np.int64)


cdef inline int _popcount(uint64_t x) noexcept nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


def pair_dp(pairs, int d, p):
    cdef uint64_t[:, :, ::1] pv = np.ascontiguousarray(pairs, dtype=np.uint64)
    cdef Py_ssize_t n = pv.shape[1]
    cdef uint64_t pp = <uint64_t>p
    cdef Py_ssize_t nsub = 1 << d
    g_arr = np.zeros((nsub, n, n), dtype=np.uint64)
    cdef uint64_t[:, :, ::1] g = g_arr
    idx_arr = np.zeros((d, d), dtype=np.int64)
    cdef int64_t[:, ::1] idx = idx_arr
    cdef Py_ssize_t i, l, k = 0, s, pc, ri, rl, r
    for i in range(d):
        for l in range(i + 1, d):
            idx[i, l] = k
            k += 1
    for i in range(n):
        g[0, i, i] = 1
    with nogil:
        for pc in range(2, d + 1, 2):
            for s in range(1, nsub):
                if _popcount(s) != pc:
                    continue
                ri = 0
                for i in range(d):
                    if not (s >> i) & 1:
                        continue
                    rl = ri + 1
                    for l in range(i + 1, d):
                        if not (s >> l) & 1:
                            continue
                        r = s & ~(1 << i) & ~(1 << l)
                        _matmul_acc(pv[idx[i, l]], g[r], g[s], pp, (ri + rl - 1) % 2 == 1)
                        rl += 1
                    ri += 1
    full = nsub - 1
    return np.stack([g_arr[full & ~(1 << j)] for j in range(d)]).astype(np.int64)


def chain_dp(mats, p):
    cdef uint64_t[:, :, ::1] mv = np.ascontiguousarray(mats, dtype=np.uint64)
    cdef Py_ssize_t m = mv.shape[0], n = mv.shape[1]
    cdef uint64_t pp = <uint64_t>p
    cdef Py_ssize_t nsub = 1 << m
    f_arr = np.zeros((nsub, n, n), dtype=np.uint64)
    cdef uint64_t[:, :, ::1] f = f_arr
    cdef Py_ssize_t i, j, s, pc, rest
    for i in range(n):
        f[0, i, i] = 1
    with nogil:
        for pc in range(1, m + 1):
            for s in range(1, nsub):
                if _popcount(s) != pc:
                    continue
                for j in range(m):
                    if not (s >> j) & 1:
                        continue
                    rest = s & ~(1 << j)
                    _matmul_acc(f[rest], mv[j], f[s], pp, _popcount(rest >> (j + 1)) % 2 == 1)
    return f_arr[nsub - 1].astype(np.int64)
