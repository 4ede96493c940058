# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled combinatorial kernels; same contract as ``_pykernels`` for n <= 62."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

BACKEND = "cython"


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int _popcount(uint64_t v) noexcept nogil:
    return __builtin_popcountll(v)


def popcount(v):
    return _popcount(<uint64_t>v)


cdef Py_ssize_t _minimal(uint64_t[::1] buf, Py_ssize_t L) noexcept nogil:
    # sort by (popcount, value) with insertion sort, dedupe, then drop supersets
    cdef Py_ssize_t a, b, kept
    cdef uint64_t key
    cdef int kp
    for a in range(1, L):
        key = buf[a]
        kp = _popcount(key)
        b = a - 1
        while b >= 0 and (_popcount(buf[b]) > kp or (_popcount(buf[b]) == kp and buf[b] > key)):
            buf[b + 1] = buf[b]
            b -= 1
        buf[b + 1] = key
    kept = 0
    for a in range(L):
        key = buf[a]
        for b in range(kept):
            if (buf[b] & key) == buf[b]:
                break
        else:
            buf[kept] = key
            kept += 1
    return kept


def minimal_masks(masks):
    cdef uint64_t[::1] buf = np.ascontiguousarray(masks, dtype=np.uint64).copy()
    cdef Py_ssize_t k = _minimal(buf, buf.shape[0])
    return [int(buf[i]) for i in range(k)]


cdef int _hitting(uint64_t[::1] fam, Py_ssize_t L, int n, uint64_t* out) noexcept nogil:
    cdef int k
    cdef uint64_t c, low, r, full
    cdef Py_ssize_t j
    cdef bint ok
    if L == 0:
        out[0] = 0
        return 0
    full = (<uint64_t>1 << n) - 1
    for k in range(1, n + 1):
        c = (<uint64_t>1 << k) - 1
        while c <= full:
            ok = True
            for j in range(L):
                if (c & fam[j]) == 0:
                    ok = False
                    break
            if ok:
                out[0] = c
                return k
            low = c & (~c + 1)
            r = c + low
            c = (((r ^ c) >> 2) // low) | r
    return -1


def min_hitting_set(masks, int n):
    if n > 62:
        raise ValueError("compiled kernels support n <= 62")
    cdef uint64_t[::1] buf = np.ascontiguousarray(masks, dtype=np.uint64).copy()
    cdef Py_ssize_t L = _minimal(buf, buf.shape[0])
    cdef uint64_t cmask = 0
    if L and buf[0] == 0:
        raise ValueError("the empty mask cannot be hit")
    cdef int k = _hitting(buf, L, n, &cmask)
    if k < 0:
        raise ValueError("no hitting set exists")
    return k, int(cmask)


cdef void _dfs(uint64_t[::1] fam, int[::1] sizes, Py_ssize_t L, int n, Py_ssize_t start,
               uint64_t used, uint64_t[::1] chosen, int depth,
               uint64_t[::1] best, int* nbest) noexcept nogil:
    cdef Py_ssize_t j, t
    cdef int free
    if depth > nbest[0]:
        nbest[0] = depth
        for t in range(depth):
            best[t] = chosen[t]
    free = n - _popcount(used)
    for j in range(start, L):
        if depth + free // sizes[j] <= nbest[0]:
            break
        if (fam[j] & used) == 0:
            chosen[depth] = fam[j]
            _dfs(fam, sizes, L, n, j + 1, used | fam[j], chosen, depth + 1, best, nbest)


def max_disjoint_blocks(masks, int n):
    if n > 62:
        raise ValueError("compiled kernels support n <= 62")
    cdef uint64_t[::1] buf = np.ascontiguousarray(masks, dtype=np.uint64).copy()
    cdef Py_ssize_t L = _minimal(buf, buf.shape[0])
    if L == 0:
        return 0, []
    cdef int[::1] sizes = np.empty(L, dtype=np.intc)
    cdef Py_ssize_t j
    for j in range(L):
        sizes[j] = _popcount(buf[j])
    cdef uint64_t[::1] chosen = np.zeros(n + 1, dtype=np.uint64)
    cdef uint64_t[::1] best = np.zeros(n + 1, dtype=np.uint64)
    cdef int nbest = 0
    with nogil:
        _dfs(buf, sizes, L, n, 0, 0, chosen, 0, best, &nbest)
    return nbest, [int(best[j]) for j in range(nbest)]


def measure_all(codes, outputs, int n):
    """Certificate size, block sensitivity and sensitivity for every input."""
    if n > 62:
        raise ValueError("compiled kernels support n <= 62")
    cdef int64_t[::1] cs = np.ascontiguousarray(codes, dtype=np.int64)
    cdef int64_t[::1] zs = np.ascontiguousarray(outputs, dtype=np.int64)
    cdef Py_ssize_t S = cs.shape[0]
    cdef uint64_t[::1] buf = np.empty(max(S, 1), dtype=np.uint64)
    cdef int[::1] sizes = np.empty(max(S, 1), dtype=np.intc)
    cdef uint64_t[::1] chosen = np.zeros(n + 1, dtype=np.uint64)
    cdef uint64_t[::1] best = np.zeros(n + 1, dtype=np.uint64)
    cdef int64_t[::1] cert = np.zeros(S, dtype=np.int64)
    cdef int64_t[::1] bs = np.zeros(S, dtype=np.int64)
    cdef int64_t[::1] sens = np.zeros(S, dtype=np.int64)
    cdef Py_ssize_t a, b, L, j
    cdef uint64_t cmask
    cdef int nbest, s
    with nogil:
        for a in range(S):
            L = 0
            for b in range(S):
                if zs[b] != zs[a]:
                    buf[L] = <uint64_t>(cs[a] ^ cs[b])
                    L += 1
            L = _minimal(buf, L)
            cert[a] = _hitting(buf, L, n, &cmask)
            s = 0
            for j in range(L):
                sizes[j] = _popcount(buf[j])
                if sizes[j] == 1:
                    s += 1
            sens[a] = s
            nbest = 0
            if L > 0:
                _dfs(buf, sizes, L, n, 0, 0, chosen, 0, best, &nbest)
            bs[a] = nbest
    return ([int(v) for v in np.asarray(cert)], [int(v) for v in np.asarray(bs)],
            [int(v) for v in np.asarray(sens)])
