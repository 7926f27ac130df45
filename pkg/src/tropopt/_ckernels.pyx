# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled semiring kernels.

Additive carriers arrive here as int64 arrays scaled to a common denominator,
with INT64_MIN (max) or INT64_MAX (min) marking the zero element. Multiplicative
carriers arrive as float64 arrays where the zero is 0.0 (max) or +inf (min);
plain IEEE arithmetic already treats those as absorbing, so no checks are needed.
"""

import numpy as np
from libc.stdint cimport int64_t

ctypedef fused num:
    int64_t
    double


cdef inline num _mul(num a, num b, num bot) noexcept nogil:
    if num is int64_t:
        if a == bot or b == bot:
            return bot
        return a + b
    else:
        return a * b


cdef inline num _add(num a, num b, bint mx) noexcept nogil:
    if mx:
        return a if a >= b else b
    return a if a <= b else b


cdef inline num _inv(num a) noexcept nogil:
    if num is int64_t:
        return -a
    else:
        return 1.0 / a


cdef inline bint _le(num a, num b, bint mx, double rtol) noexcept nogil:
    if num is int64_t:
        return a <= b if mx else a >= b
    else:
        if mx:
            return a <= b * (1.0 + rtol)
        return a >= b * (1.0 - rtol)


cdef void _mm(num[:, ::1] X, num[:, ::1] Y, num[:, ::1] O, bint mx, num bot) noexcept nogil:
    cdef Py_ssize_t n = X.shape[0], k = X.shape[1], m = Y.shape[1]
    cdef Py_ssize_t i, j, t
    cdef num acc, a
    for i in range(n):
        for j in range(m):
            acc = bot
            for t in range(k):
                a = X[i, t]
                if num is int64_t:
                    if a == bot:
                        continue
                acc = _add(acc, _mul(a, Y[t, j], bot), mx)
            O[i, j] = acc


cdef void _eye(num[:, ::1] O, num one, num bot) noexcept nogil:
    cdef Py_ssize_t i, j
    for i in range(O.shape[0]):
        for j in range(O.shape[1]):
            O[i, j] = one if i == j else bot


def matmul(num[:, ::1] X, num[:, ::1] Y, bint mx, num bot):
    if X.shape[1] != Y.shape[0]:
        raise ValueError("inner dimensions differ")
    dtype = np.int64 if num is int64_t else np.float64
    out = np.empty((X.shape[0], Y.shape[1]), dtype=dtype)
    cdef num[:, ::1] O = out
    _mm(X, Y, O, mx, bot)
    return out


def star(num[:, ::1] X, bint mx, num one, num bot):
    """I (+) X (+) ... (+) X^(n-1) by repeated multiplication."""
    cdef Py_ssize_t n = X.shape[0], i, j, step
    dtype = np.int64 if num is int64_t else np.float64
    out = np.empty((n, n), dtype=dtype)
    p = np.empty((n, n), dtype=dtype)
    q = np.empty((n, n), dtype=dtype)
    cdef num[:, ::1] S = out
    cdef num[:, ::1] P = p
    cdef num[:, ::1] Q = q
    cdef num[:, ::1] T
    _eye(S, one, bot)
    _eye(P, one, bot)
    for step in range(1, n):
        _mm(P, X, Q, mx, bot)
        for i in range(n):
            for j in range(n):
                S[i, j] = _add(S[i, j], Q[i, j], mx)
        T = P
        P = Q
        Q = T
    return out


cdef void _dfs(int j, int s, int n, int kmax, int min_sum, bint mx, num bot,
               num[:, :, ::1] pre, num[:, :, ::1] tmp, num[:, :, ::1] bpow,
               num[:, ::1] A, num[:, ::1] R, num[::1] best) noexcept nogil:
    cdef Py_ssize_t i, l
    cdef num acc, a
    cdef int e, limit
    if j >= 1 and s >= min_sum and s <= n - j:
        acc = bot
        for i in range(n):
            for l in range(n):
                a = pre[j, i, l]
                if num is int64_t:
                    if a == bot:
                        continue
                acc = _add(acc, _mul(a, R[l, i], bot), mx)
        best[j] = _add(best[j], acc, mx)
    if j + 1 > kmax:
        return
    limit = n - (j + 1) - s
    if limit < 0:
        return
    _mm(pre[j], A, tmp[j], mx, bot)
    for e in range(limit + 1):
        _mm(tmp[j], bpow[e], pre[j + 1], mx, bot)
        _dfs(j + 1, s + e, n, kmax, min_sum, mx, bot, pre, tmp, bpow, A, R, best)


def word_traces(num[:, ::1] A, num[:, ::1] B, num[:, ::1] R, bint mx, num one, num bot,
                bint lead, int min_sum, int kmax):
    """Per-k maximum of tr(B^i0 A B^i1 ... A B^ik R) over admissible exponents.

    Exponents satisfy ``min_sum <= i0 + ... + ik <= n - k``; ``i0`` is fixed
    to 0 unless ``lead`` is set. Entry ``k`` of the result holds the k-th
    maximum (entry 0 is unused and holds the zero).
    """
    cdef int n = A.shape[0]
    cdef int i0, e
    dtype = np.int64 if num is int64_t else np.float64
    bp = np.empty((n + 1, n, n), dtype=dtype)
    pr = np.empty((kmax + 1, n, n), dtype=dtype)
    tm = np.empty((kmax + 1, n, n), dtype=dtype)
    res = np.empty(kmax + 1, dtype=dtype)
    cdef num[:, :, ::1] bpow = bp
    cdef num[:, :, ::1] pre = pr
    cdef num[:, :, ::1] tmp = tm
    cdef num[::1] best = res
    for e in range(kmax + 1):
        best[e] = bot
    _eye(bpow[0], one, bot)
    for e in range(1, n + 1):
        _mm(bpow[e - 1], B, bpow[e], mx, bot)
    if kmax < 1:
        return res
    if lead:
        for i0 in range(n):
            pre[0, :, :] = bpow[i0]
            _dfs(0, i0, n, kmax, min_sum, mx, bot, pre, tmp, bpow, A, R, best)
    else:
        _eye(pre[0], one, bot)
        _dfs(0, 0, n, kmax, min_sum, mx, bot, pre, tmp, bpow, A, R, best)
    return res


def eval_points(num[:, ::1] X, num[:, ::1] A, num[::1] p, num[::1] qc, num c,
                num[:, ::1] B, num[::1] g, num[:, ::1] C, num[::1] h,
                bint mx, num bot, double rtol):
    """Objective x^-Ax (+) x^-p (+) q^-x (+) c and feasibility of Bx(+)g <= x, Cx <= h.

    Every row of ``X`` must be regular. Returns ``(values, feasible)``.
    """
    cdef Py_ssize_t N = X.shape[0], n = X.shape[1], m = C.shape[0]
    cdef Py_ssize_t r, i, j
    cdef num val, xinv, s, ax
    cdef bint ok
    dtype = np.int64 if num is int64_t else np.float64
    vals = np.empty(N, dtype=dtype)
    feas = np.empty(N, dtype=np.uint8)
    cdef num[::1] V = vals
    cdef unsigned char[::1] F = feas
    with nogil:
        for r in range(N):
            val = c
            ok = True
            for i in range(n):
                xinv = _inv(X[r, i])
                ax = bot
                s = g[i]
                for j in range(n):
                    ax = _add(ax, _mul(A[i, j], X[r, j], bot), mx)
                    s = _add(s, _mul(B[i, j], X[r, j], bot), mx)
                ax = _add(ax, p[i], mx)
                val = _add(val, _mul(xinv, ax, bot), mx)
                val = _add(val, _mul(qc[i], X[r, i], bot), mx)
                if not _le(s, X[r, i], mx, rtol):
                    ok = False
            for i in range(m):
                s = bot
                for j in range(n):
                    s = _add(s, _mul(C[i, j], X[r, j], bot), mx)
                if not _le(s, h[i], mx, rtol):
                    ok = False
            V[r] = val
            F[r] = ok
    return vals, feas
