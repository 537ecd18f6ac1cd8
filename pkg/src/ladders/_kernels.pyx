# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Bitset implementations of the order kernels.

Rows of the order matrix are packed into 64-bit words; the results match
``_kernels_py`` exactly, including which witness is reported first.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int32_t

cnp.import_array()

BACKEND = "compiled"

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef uint64_t[:, ::1] _pack(object mat):
    cdef cnp.uint8_t[:, ::1] m = np.ascontiguousarray(mat, dtype=np.uint8)
    cdef Py_ssize_t n = m.shape[0], w = (n + 63) // 64, i, j
    out = np.zeros((n, max(w, 1)), dtype=np.uint64)
    cdef uint64_t[:, ::1] o = out
    for i in range(n):
        for j in range(n):
            if m[i, j]:
                o[i, j >> 6] |= (<uint64_t>1) << (j & 63)
    return o


cdef object _unpack(uint64_t[:, ::1] b, Py_ssize_t n):
    out = np.zeros((n, n), dtype=bool)
    cdef cnp.uint8_t[:, ::1] o = out.view(np.uint8)
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(n):
            if (b[i, j >> 6] >> (j & 63)) & 1:
                o[i, j] = 1
    return out


cdef inline bint _has(uint64_t[:, ::1] b, Py_ssize_t i, Py_ssize_t j) nogil:
    return (b[i, j >> 6] >> (j & 63)) & 1


def transitive_closure(leq):
    cdef uint64_t[:, ::1] up = _pack(leq)
    cdef Py_ssize_t n = up.shape[0], w = up.shape[1], i, k, t
    if n == 0:
        return np.zeros((0, 0), dtype=bool)
    for i in range(n):
        up[i, i >> 6] |= (<uint64_t>1) << (i & 63)
    for k in range(n):
        for i in range(n):
            if _has(up, i, k):
                for t in range(w):
                    up[i, t] |= up[k, t]
    return _unpack(up, n)


def order_violation(leq):
    cdef cnp.uint8_t[:, ::1] m = np.ascontiguousarray(leq, dtype=np.uint8)
    cdef Py_ssize_t n = m.shape[0], i, j, k, t, w
    for i in range(n):
        if not m[i, i]:
            return ("reflexivity", (i,))
    for i in range(n):
        for j in range(n):
            if i != j and m[i, j] and m[j, i]:
                return ("antisymmetry", (i, j))
    cdef uint64_t[:, ::1] up = _pack(leq)
    w = up.shape[1]
    reach = np.zeros(w, dtype=np.uint64)
    cdef uint64_t[::1] r = reach
    cdef uint64_t bad
    for i in range(n):
        for t in range(w):
            r[t] = 0
        for j in range(n):
            if _has(up, i, j):
                for t in range(w):
                    r[t] |= up[j, t]
        for t in range(w):
            bad = r[t] & ~up[i, t]
            if bad:
                k = t * 64 + __builtin_ctzll(bad)
                for j in range(n):
                    if _has(up, i, j) and _has(up, j, k):
                        return ("transitivity", (i, j, k))
    return None


def join_table(leq):
    cdef uint64_t[:, ::1] up = _pack(leq)
    cdef Py_ssize_t n = up.shape[0], w = up.shape[1], i, j, t, k
    out = np.full((n, n), -1, dtype=np.int32)
    cdef int32_t[:, ::1] o = out
    cnt_arr = np.zeros(max(n, 1), dtype=np.int32)
    cdef int32_t[::1] cnt = cnt_arr
    cdef int c
    cdef uint64_t word
    cdef bint found
    for i in range(n):
        c = 0
        for t in range(w):
            c += __builtin_popcountll(up[i, t])
        cnt[i] = c
    with nogil:
        for i in range(n):
            for j in range(i, n):
                c = 0
                for t in range(w):
                    c += __builtin_popcountll(up[i, t] & up[j, t])
                found = False
                for t in range(w):
                    if found:
                        break
                    word = up[i, t] & up[j, t]
                    while word:
                        k = t * 64 + __builtin_ctzll(word)
                        word &= word - 1
                        if cnt[k] == c:
                            o[i, j] = <int32_t>k
                            o[j, i] = <int32_t>k
                            found = True
                            break
    return out


def meet_table(leq):
    return join_table(np.ascontiguousarray(np.asarray(leq, dtype=bool).T))


def cover_matrix(leq):
    lt = np.array(leq, dtype=bool, copy=True)
    np.fill_diagonal(lt, False)
    cdef uint64_t[:, ::1] up = _pack(lt)
    cdef uint64_t[:, ::1] dn = _pack(np.ascontiguousarray(lt.T))
    cdef Py_ssize_t n = up.shape[0], w = up.shape[1], i, j, t
    out = np.zeros((n, n), dtype=bool)
    cdef cnp.uint8_t[:, ::1] o = out.view(np.uint8)
    cdef bint between
    with nogil:
        for i in range(n):
            for j in range(n):
                if _has(up, i, j):
                    between = False
                    for t in range(w):
                        if up[i, t] & dn[j, t]:
                            between = True
                            break
                    if not between:
                        o[i, j] = 1
    return out


cdef int _fold(int32_t[:, ::1] join, Py_ssize_t[::1] idx, Py_ssize_t size, Py_ssize_t skip) except -2:
    cdef int acc = -1, x
    cdef Py_ssize_t d
    for d in range(size):
        if d == skip:
            continue
        x = <int>idx[d]
        if acc < 0:
            acc = x
        else:
            acc = join[acc, x]
            if acc < 0:
                raise ValueError("missing join")
    return acc


def breadth_violation(join_in, members_in, Py_ssize_t k):
    if k < 1:
        raise ValueError("k must be positive")
    cdef int32_t[:, ::1] join = np.ascontiguousarray(join_in, dtype=np.int32)
    members = np.ascontiguousarray([int(m) for m in members_in], dtype=np.intp)
    cdef Py_ssize_t[::1] mem = members
    cdef Py_ssize_t m = mem.shape[0], r = k + 1, d, top, pos
    if r > m:
        return None
    pos_arr = np.arange(r, dtype=np.intp)
    sel_arr = np.zeros(r, dtype=np.intp)
    cdef Py_ssize_t[::1] p = pos_arr
    cdef Py_ssize_t[::1] sel = sel_arr
    cdef bint found
    while True:
        for d in range(r):
            sel[d] = mem[p[d]]
        top = _fold(join, sel, r, -1)
        found = False
        for d in range(r):
            if _fold(join, sel, r, d) == top:
                found = True
                break
        if not found:
            return tuple(int(sel[d]) for d in range(r))
        pos = r - 1
        while pos >= 0 and p[pos] == pos + m - r:
            pos -= 1
        if pos < 0:
            return None
        p[pos] += 1
        for d in range(pos + 1, r):
            p[d] = p[d - 1] + 1
