# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Semantics mirror ``_core_py`` one-for-one."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()

BACKEND = "cython"


cdef int64_t _inv_mod(int64_t a, int64_t p) nogil:
    # extended Euclid; a in [1, p)
    cdef int64_t t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rref_inplace(int64_t[:, ::1] M, int64_t p):
    cdef Py_ssize_t rows = M.shape[0], cols = M.shape[1]
    cdef Py_ssize_t r = 0, c, k, j, i
    cdef int64_t inv, factor, tmp
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if M[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(cols):
                tmp = M[r, j]
                M[r, j] = M[k, j]
                M[k, j] = tmp
        inv = _inv_mod(M[r, c], p)
        for j in range(cols):
            M[r, j] = (M[r, j] * inv) % p
        for i in range(rows):
            if i == r:
                continue
            factor = M[i, c]
            if factor == 0:
                continue
            for j in range(cols):
                M[i, j] = ((M[i, j] - factor * M[r, j]) % p + p) % p
        pivots.append(c)
        r += 1
    return pivots


def affine_chain_prefix(const int64_t[:, ::1] F, const int64_t[:, ::1] Y, const int64_t[:, ::1] idx,
                        const int64_t[:, ::1] coef, const int64_t[::1] beta, int64_t p):
    cdef Py_ssize_t T = F.shape[0], i = Y.shape[1], q = idx.shape[1]
    cdef Py_ssize_t t, j, k
    cdef int64_t y, acc, pos
    out = np.zeros(T, dtype=np.int64)
    cdef int64_t[::1] prefix = out
    with nogil:
        for t in range(T):
            for j in range(i):
                y = Y[t, j] - 1
                acc = beta[y]
                for k in range(q):
                    pos = idx[y, k]
                    if pos < 0:
                        continue
                    acc = (acc + coef[y, k] * (F[t, pos] - 1)) % p
                if F[t, acc] != y + 1:
                    break
                prefix[t] += 1
    return out


def set_hits(const int64_t[:, ::1] F, const int64_t[::1] Y, const int64_t[:, ::1] S):
    cdef Py_ssize_t T = F.shape[0], c = S.shape[1]
    cdef Py_ssize_t t, k
    cdef int64_t y, pos
    out = np.zeros(T, dtype=bool)
    cdef cnp.npy_bool[::1] hits = out
    with nogil:
        for t in range(T):
            y = Y[t]
            for k in range(c):
                pos = S[y - 1, k]
                if pos >= 0 and F[t, pos] == y:
                    hits[t] = 1
                    break
    return out


def good_index_count(const int64_t[:, ::1] F, const int64_t[:, ::1] S):
    cdef Py_ssize_t T = F.shape[0], n = F.shape[1], c = S.shape[1]
    cdef Py_ssize_t t, y, k
    cdef int64_t pos
    out = np.zeros(T, dtype=np.int64)
    cdef int64_t[::1] counts = out
    with nogil:
        for t in range(T):
            for y in range(n):
                for k in range(c):
                    pos = S[y, k]
                    if pos >= 0 and F[t, pos] == y + 1:
                        counts[t] += 1
                        break
    return out


def heaviest_mass(const int64_t[:, ::1] F, Py_ssize_t k):
    cdef Py_ssize_t T = F.shape[0], n = F.shape[1]
    cdef Py_ssize_t t, x, size, take, left
    out = np.zeros(T, dtype=np.int64)
    if k <= 0:
        return out
    cdef int64_t[::1] mass = out
    fib = np.zeros(n, dtype=np.int64)
    hist = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] fiber = fib
    cdef int64_t[::1] by_size = hist
    with nogil:
        for t in range(T):
            for x in range(n):
                fiber[x] = 0
            for x in range(n + 1):
                by_size[x] = 0
            for x in range(n):
                fiber[F[t, x] - 1] += 1
            for x in range(n):
                by_size[fiber[x]] += 1
            # greedy over fiber sizes, largest first (counting sort)
            left = k
            for size in range(n, 0, -1):
                if left == 0:
                    break
                take = by_size[size]
                if take > left:
                    take = left
                mass[t] += take * size
                left -= take
    return out
