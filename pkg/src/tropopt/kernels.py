"""Hot semiring kernels with a compiled core and a pure-Python fallback.

The compiled extension ``tropopt._ckernels`` is used when it imported
successfully and ``TROPOPT_PURE`` is unset. Both backends take and return raw
matrices (tuples of row tuples, ``None`` for the zero element), so callers
never see the int64 scaling used by the compiled path.

Backend modes:

``auto``      compiled for inputs large enough to amortise conversion
``compiled``  compiled whenever the data is representable (tests, benchmarks)
``python``    always the reference implementation
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager
from fractions import Fraction

try:
    if os.environ.get("TROPOPT_PURE"):
        raise ImportError("compiled kernels disabled by TROPOPT_PURE")
    import numpy as np

    from . import _ckernels
except ImportError:  # pragma: no cover - depends on the build
    _ckernels = None

HAVE_COMPILED = _ckernels is not None

_MODES = ("auto", "compiled", "python")
_mode = "auto"

# Work below these sizes runs faster in Python than it takes to convert.
AUTO_MATMUL_MIN_WORK = 512
AUTO_STAR_MIN_ORDER = 6
AUTO_WORDS_MIN_ORDER = 4
AUTO_POINTS_MIN = 64

_INT_LIMIT = 2**62


def backend_name() -> str:
    return "cython" if HAVE_COMPILED else "python"


def get_mode() -> str:
    return _mode


def set_mode(mode: str) -> None:
    global _mode
    if mode not in _MODES:
        raise ValueError(f"unknown kernel mode {mode!r}")
    if mode == "compiled" and not HAVE_COMPILED:
        raise RuntimeError("compiled kernels are not available in this build")
    _mode = mode


@contextmanager
def mode(name: str):
    previous = _mode
    set_mode(name)
    try:
        yield
    finally:
        set_mode(previous)


def _want(size_ok: bool) -> bool:
    if _ckernels is None or _mode == "python":
        return False
    return _mode == "compiled" or size_ok


# ---------------------------------------------------------------------------
# pure-Python reference kernels


def py_matmul(sf, X, Y):
    add, mul = sf.add, sf.mul
    cols = list(zip(*Y)) if Y else []
    out = []
    for row in X:
        new = []
        for col in cols:
            acc = None
            for a, b in zip(row, col):
                if a is not None and b is not None:
                    acc = add(acc, mul(a, b))
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def py_identity(sf, n):
    return tuple(tuple(sf.one if i == j else None for j in range(n)) for i in range(n))


def py_madd(sf, X, Y):
    return tuple(tuple(sf.add(a, b) for a, b in zip(r, s)) for r, s in zip(X, Y))


def py_star(sf, X):
    n = len(X)
    total = power = py_identity(sf, n)
    for _ in range(1, n):
        power = py_matmul(sf, power, X)
        total = py_madd(sf, total, power)
    return total


def py_word_traces(sf, A, B, R, lead, min_sum, kmax):
    n = len(A)
    best = [None] * (kmax + 1)
    if kmax < 1:
        return best
    bpow = [py_identity(sf, n)]
    for _ in range(n):
        bpow.append(py_matmul(sf, bpow[-1], B))

    def trace_with(P):
        acc = None
        for i in range(n):
            for l in range(n):
                acc = sf.add(acc, sf.mul(P[i][l], R[l][i]))
        return acc

    def dfs(prefix, j, s):
        if j >= 1 and min_sum <= s <= n - j:
            best[j] = sf.add(best[j], trace_with(prefix))
        if j + 1 > kmax:
            return
        limit = n - (j + 1) - s
        if limit < 0:
            return
        pa = py_matmul(sf, prefix, A)
        for e in range(limit + 1):
            dfs(py_matmul(sf, pa, bpow[e]), j + 1, s + e)

    if lead:
        for i0 in range(n):
            dfs(bpow[i0], 0, i0)
    else:
        dfs(bpow[0], 0, 0)
    return best


def py_eval_points(sf, points, A, p, qc, c, B, g, C, h):
    add, mul, inv = sf.add, sf.mul, sf.inv
    le = sf.approx_le
    values, feasible = [], []
    n = len(A)
    for x in points:
        val = c
        ok = True
        for i in range(n):
            ax = p[i]
            s = g[i]
            for j in range(n):
                ax = add(ax, mul(A[i][j], x[j]))
                s = add(s, mul(B[i][j], x[j]))
            val = add(val, mul(inv(x[i]), ax))
            val = add(val, mul(qc[i], x[i]))
            if not le(s, x[i]):
                ok = False
        for row, hr in zip(C, h):
            s = None
            for cij, xj in zip(row, x):
                s = add(s, mul(cij, xj))
            if not le(s, hr):
                ok = False
        values.append(val)
        feasible.append(ok)
    return values, feasible


# ---------------------------------------------------------------------------
# encoding for the compiled core


class _Codec:
    """Maps raw values of one semifield into a numpy dtype and back."""

    def __init__(self, sf, values, depth):
        self.sf = sf
        self.mx = sf.maximize
        self.ok = True
        values = list(values)
        if sf.additive:
            den = 1
            top = 0
            for v in values:
                if v is not None:
                    den = math.lcm(den, v.denominator)
            for v in values:
                if v is not None:
                    top = max(top, abs(v.numerator * (den // v.denominator)))
            self.den = den
            self.dtype = np.int64
            self.bot = np.iinfo(np.int64).min if self.mx else np.iinfo(np.int64).max
            self.one = 0
            self.ok = top * (depth + 2) < _INT_LIMIT and den < _INT_LIMIT
        else:
            self.dtype = np.float64
            self.bot = 0.0 if self.mx else math.inf
            self.one = 1.0

    def enc(self, v):
        if v is None:
            return self.bot
        if self.sf.additive:
            return v.numerator * (self.den // v.denominator)
        return v

    def dec(self, v):
        if v == self.bot:
            return None
        if self.sf.additive:
            return Fraction(int(v), self.den)
        return float(v)

    def mat(self, M, cols=None):
        if not M:
            return np.empty((0, cols or 0), dtype=self.dtype)
        return np.ascontiguousarray(
            np.array([[self.enc(v) for v in row] for row in M], dtype=self.dtype)
        )

    def vec(self, v):
        return np.ascontiguousarray(np.array([self.enc(x) for x in v], dtype=self.dtype))

    def unmat(self, arr):
        return tuple(tuple(self.dec(v) for v in row) for row in arr.tolist())


def _flat(*mats):
    for M in mats:
        for row in M:
            yield from row


def matmul(sf, X, Y):
    work = len(X) * len(Y) * (len(Y[0]) if Y else 0)
    if _want(work >= AUTO_MATMUL_MIN_WORK) and X and Y:
        codec = _Codec(sf, _flat(X, Y), 2)
        if codec.ok:
            out = _ckernels.matmul(codec.mat(X), codec.mat(Y), codec.mx, codec.bot)
            return codec.unmat(out)
    return py_matmul(sf, X, Y)


def star(sf, X):
    n = len(X)
    if _want(n >= AUTO_STAR_MIN_ORDER) and n:
        codec = _Codec(sf, _flat(X), n + 1)
        if codec.ok:
            return codec.unmat(_ckernels.star(codec.mat(X), codec.mx, codec.one, codec.bot))
    return py_star(sf, X)


def word_traces(sf, A, B, R, lead=False, min_sum=0, kmax=None):
    """Per-k best trace of ``B^i0 A B^i1 ... A B^ik R`` (see ``_ckernels.word_traces``)."""
    n = len(A)
    if kmax is None:
        kmax = n
    if _want(n >= AUTO_WORDS_MIN_ORDER) and n:
        codec = _Codec(sf, _flat(A, B, R), 2 * n + 2)
        if codec.ok:
            res = _ckernels.word_traces(
                codec.mat(A), codec.mat(B), codec.mat(R), codec.mx, codec.one, codec.bot,
                bool(lead), int(min_sum), int(kmax),
            )
            return [codec.dec(v) for v in res.tolist()]
    return py_word_traces(sf, A, B, R, lead, min_sum, kmax)


def eval_points(sf, points, A, p, qc, c, B, g, C, h):
    """Evaluate the generic objective and constraint feasibility at many points.

    ``qc`` is the conjugate of ``q`` (a plain sequence); absent pieces are
    passed as all-zero data. Returns lists ``(values, feasible)``.
    """
    points = list(points)
    if _want(len(points) >= AUTO_POINTS_MIN) and points:
        codec = _Codec(sf, _flat(A, B, C, points, [p, qc, g, h, [c]]), 6)
        if codec.ok:
            vals, feas = _ckernels.eval_points(
                codec.mat(points), codec.mat(A), codec.vec(p), codec.vec(qc), codec.enc(c),
                codec.mat(B), codec.vec(g), codec.mat(C, cols=len(A)), codec.vec(h),
                codec.mx, codec.bot, sf.rtol,
            )
            return [codec.dec(v) for v in vals.tolist()], [bool(f) for f in feas.tolist()]
    return py_eval_points(sf, points, A, p, qc, c, B, g, C, h)
