"""Dense matrix algebra over an idempotent semifield.

Matrices are immutable. Operators follow the semifield: ``A + B`` is the
entrywise sum (max or min), ``A @ B`` the semiring product, ``s * A`` scalar
multiplication and ``A ** k`` the integer power. Vectors are matrices with a
single column (or row).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from . import kernels
from .errors import DimensionError, SemifieldMismatch, TropicalError
from .semifield import Scalar, Semifield, as_exponent, get_semifield

# Orders above this are accepted but not tuned for; see README.
SOFT_ORDER_LIMIT = 50


class Matrix:
    __slots__ = ("semifield", "data")

    def __init__(self, semifield, rows):
        sf = get_semifield(semifield)
        data = tuple(tuple(sf.coerce(v) for v in row) for row in rows)
        if not data or not data[0]:
            raise DimensionError("a matrix needs at least one row and one column")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise DimensionError("ragged rows")
        self.semifield = sf
        self.data = data

    @classmethod
    def _raw(cls, sf: Semifield, data) -> "Matrix":
        m = object.__new__(cls)
        m.semifield = sf
        m.data = data
        return m

    # --- constructors ---------------------------------------------------

    @classmethod
    def identity(cls, semifield, n: int) -> "Matrix":
        sf = get_semifield(semifield)
        return cls._raw(sf, kernels.py_identity(sf, n))

    @classmethod
    def zeros(cls, semifield, rows: int, cols: int = 1) -> "Matrix":
        sf = get_semifield(semifield)
        if rows < 1 or cols < 1:
            raise DimensionError("a matrix needs at least one row and one column")
        return cls._raw(sf, tuple((None,) * cols for _ in range(rows)))

    @classmethod
    def column(cls, semifield, values) -> "Matrix":
        return cls(semifield, [[v] for v in values])

    @classmethod
    def row(cls, semifield, values) -> "Matrix":
        return cls(semifield, [list(values)])

    # --- shape and access -----------------------------------------------

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.data), len(self.data[0])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def is_vector(self) -> bool:
        return self.rows == 1 or self.cols == 1

    def __getitem__(self, index) -> Scalar:
        if isinstance(index, tuple):
            i, j = index
            return Scalar(self.semifield, self.data[i][j])
        if self.cols == 1:
            return Scalar(self.semifield, self.data[index][0])
        if self.rows == 1:
            return Scalar(self.semifield, self.data[0][index])
        raise TypeError("single index only works on vectors")

    def __len__(self):
        if not self.is_vector:
            raise TypeError("len() is defined for vectors only")
        return max(self.rows, self.cols)

    def entries(self) -> List:
        """Raw entries of a vector in order (``None`` for the zero)."""
        if self.cols == 1:
            return [r[0] for r in self.data]
        if self.rows == 1:
            return list(self.data[0])
        raise TypeError("entries() is defined for vectors only")

    def scalars(self) -> List[Scalar]:
        return [Scalar(self.semifield, v) for v in self.entries()]

    def item(self) -> Scalar:
        if self.shape != (1, 1):
            raise DimensionError(f"item() needs a 1x1 matrix, got {self.shape}")
        return Scalar(self.semifield, self.data[0][0])

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.semifield, tuple(zip(*self.data)))

    # --- arithmetic -----------------------------------------------------

    def _check(self, other: "Matrix") -> Semifield:
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.semifield is not self.semifield:
            raise SemifieldMismatch(
                f"cannot combine {self.semifield.name} with {other.semifield.name}"
            )
        return self.semifield

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return mat_add(self, other)

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return mat_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, Matrix):
            return NotImplemented
        if not isinstance(other, Scalar):
            other = self.semifield.scalar(other)
        return scalar_mul(other, self)

    __mul__ = __rmul__

    def __pow__(self, p):
        return matrix_power(self, p)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.semifield is other.semifield and self.data == other.data

    def __hash__(self):
        return hash((self.semifield.name, self.data))

    def isclose(self, other: "Matrix") -> bool:
        sf = self._check(other)
        if self.shape != other.shape:
            return False
        return all(sf.eq(a, b) for r, s in zip(self.data, other.data) for a, b in zip(r, s))

    def __le__(self, other):
        """Entrywise order (exact on additive carriers, tolerant otherwise)."""
        sf = self._check(other)
        if self.shape != other.shape:
            raise DimensionError(f"cannot compare {self.shape} with {other.shape}")
        le = sf.le if sf.exact else sf.approx_le
        return all(le(a, b) for r, s in zip(self.data, other.data) for a, b in zip(r, s))

    def __ge__(self, other):
        return other.__le__(self)

    def conj(self) -> "Matrix":
        return conjugate_transpose(self)

    # --- regularity -----------------------------------------------------

    @property
    def is_regular(self) -> bool:
        return all(v is not None for row in self.data for v in row)

    @property
    def is_row_regular(self) -> bool:
        return all(any(v is not None for v in row) for row in self.data)

    @property
    def is_column_regular(self) -> bool:
        return all(any(v is not None for v in col) for col in zip(*self.data))

    @property
    def is_zero(self) -> bool:
        return all(v is None for row in self.data for v in row)

    # --- rendering ------------------------------------------------------

    def to_rows(self):
        return [[self.semifield.render(v) for v in row] for row in self.data]

    def __repr__(self):
        return f"Matrix({self.semifield.name}, {self.to_rows()})"

    def __str__(self):
        cells = [[self.semifield.human(v) for v in row] for row in self.data]
        width = max(len(c) for row in cells for c in row)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


def vector(semifield, values) -> Matrix:
    """Column vector from a sequence of values."""
    return Matrix.column(semifield, values)


def _require_square(A: Matrix, what: str) -> int:
    if not A.is_square:
        raise DimensionError(f"{what} needs a square matrix, got {A.rows}x{A.cols}")
    return A.rows


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    sf = A._check(B)
    if A.shape != B.shape:
        raise DimensionError(f"cannot add {A.shape} and {B.shape}")
    return Matrix._raw(sf, kernels.py_madd(sf, A.data, B.data))


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    sf = A._check(B)
    if A.cols != B.rows:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    return Matrix._raw(sf, kernels.matmul(sf, A.data, B.data))


def scalar_mul(x: Scalar, A: Matrix) -> Matrix:
    sf = A.semifield
    if x.semifield is not sf:
        raise SemifieldMismatch(f"cannot scale {sf.name} matrix by {x.semifield.name} scalar")
    v = x.value
    return Matrix._raw(sf, tuple(tuple(sf.mul(v, a) for a in row) for row in A.data))


def matrix_power(A: Matrix, p: int) -> Matrix:
    n = _require_square(A, "matrix_power")
    if isinstance(p, bool) or not isinstance(p, int) or p < 0:
        raise ValueError(f"matrix powers need a nonnegative integer exponent, got {p!r}")
    result = Matrix.identity(A.semifield, n)
    for _ in range(p):
        result = result @ A
    return result


def powers(A: Matrix, upto: int) -> List[Matrix]:
    """``[A^1, ..., A^upto]``."""
    out = []
    P = A
    for _ in range(upto):
        out.append(P)
        P = P @ A
    return out


def conjugate_transpose(x: Matrix) -> Matrix:
    """Transpose with every nonzero entry inverted; zero entries stay zero."""
    if not x.is_vector:
        raise DimensionError("conjugate transposition is defined for vectors")
    if x.is_zero:
        raise TropicalError("the zero vector has no conjugate transpose")
    sf = x.semifield
    inv = sf.inv
    return Matrix._raw(
        sf, tuple(tuple(None if v is None else inv(v) for v in col) for col in zip(*x.data))
    )


def trace(A: Matrix) -> Scalar:
    n = _require_square(A, "trace")
    sf = A.semifield
    acc = None
    for i in range(n):
        acc = sf.add(acc, A.data[i][i])
    return Scalar(sf, acc)


def tr_cumulative(A: Matrix) -> Scalar:
    """``tr A (+) tr A^2 (+) ... (+) tr A^n``."""
    n = _require_square(A, "Tr")
    acc = Scalar.zero(A.semifield)
    for P in powers(A, n):
        acc = acc + trace(P)
    return acc


def kleene_star(A: Matrix) -> Matrix:
    """``I (+) A (+) ... (+) A^(n-1)``, the exact finite sum."""
    _require_square(A, "kleene_star")
    return Matrix._raw(A.semifield, kernels.star(A.semifield, A.data))


def spectral_terms(A: Matrix) -> List[Tuple[int, Scalar, Scalar]]:
    """``(m, tr A^m, tr^(1/m) A^m)`` for ``m = 1..n``."""
    n = _require_square(A, "spectral_radius")
    terms = []
    for m, P in enumerate(powers(A, n), start=1):
        t = trace(P)
        terms.append((m, t, t ** as_exponent((1, m))))
    return terms


def spectral_radius(A: Matrix) -> Scalar:
    acc = Scalar.zero(A.semifield)
    for _, _, root in spectral_terms(A):
        acc = acc + root
    return acc


@dataclass(frozen=True)
class Regularity:
    regular: bool
    row_regular: bool
    column_regular: bool


def regularity(A: Matrix) -> Regularity:
    return Regularity(A.is_regular, A.is_row_regular, A.is_column_regular)


@dataclass(frozen=True)
class NormalForm:
    """Symmetric permutation bringing a matrix to lower block-triangular form.

    ``permutation[k]`` is the original index placed at position ``k``;
    ``blocks`` are half-open position ranges of the diagonal blocks.
    """

    permutation: Tuple[int, ...]
    block_sizes: Tuple[int, ...]
    blocks: Tuple[Tuple[int, int], ...]

    @property
    def irreducible(self) -> bool:
        return len(self.block_sizes) == 1

    def apply(self, A: Matrix) -> Matrix:
        perm = self.permutation
        return Matrix._raw(
            A.semifield, tuple(tuple(A.data[i][j] for j in perm) for i in perm)
        )


def _strong_components(n: int, succ: Sequence[Sequence[int]]) -> List[List[int]]:
    index = [None] * n
    low = [0] * n
    on_stack = [False] * n
    stack: List[int] = []
    comps: List[List[int]] = []
    counter = 0

    def visit(v):
        nonlocal counter
        index[v] = low[v] = counter
        counter += 1
        stack.append(v)
        on_stack[v] = True
        for w in succ[v]:
            if index[w] is None:
                visit(w)
                low[v] = min(low[v], low[w])
            elif on_stack[w]:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = []
            while True:
                w = stack.pop()
                on_stack[w] = False
                comp.append(w)
                if w == v:
                    break
            comps.append(sorted(comp))

    for v in range(n):
        if index[v] is None:
            visit(v)
    return comps


def normal_form(A: Matrix) -> NormalForm:
    """Strongly connected components of the graph with edge ``j -> i`` when
    ``a_ij`` is nonzero, listed in a topological order.

    Among the valid orders the one that always emits the available component
    with the smallest member index first is chosen.
    """
    n = _require_square(A, "normal_form")
    succ = [[i for i in range(n) if A.data[i][j] is not None] for j in range(n)]
    comps = _strong_components(n, succ)
    comp_of = [0] * n
    for c, members in enumerate(comps):
        for v in members:
            comp_of[v] = c
    indeg = [0] * len(comps)
    edges = [set() for _ in comps]
    for j in range(n):
        for i in succ[j]:
            a, b = comp_of[j], comp_of[i]
            if a != b and b not in edges[a]:
                edges[a].add(b)
                indeg[b] += 1
    heap = [(comps[c][0], c) for c in range(len(comps)) if indeg[c] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, c = heapq.heappop(heap)
        order.append(c)
        for d in edges[c]:
            indeg[d] -= 1
            if indeg[d] == 0:
                heapq.heappush(heap, (comps[d][0], d))
    perm: List[int] = []
    sizes: List[int] = []
    blocks: List[Tuple[int, int]] = []
    for c in order:
        start = len(perm)
        perm.extend(comps[c])
        sizes.append(len(comps[c]))
        blocks.append((start, len(perm)))
    return NormalForm(tuple(perm), tuple(sizes), tuple(blocks))
