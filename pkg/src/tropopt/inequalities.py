"""Complete solution sets of the linear inequalities

    A x <= d,        A x <= x,        A x (+) b <= x.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .errors import (
    DimensionError,
    EmptySolutionSet,
    NonRegularVector,
    NoRegularSolution,
    NoSolutionCertificate,
    NotColumnRegular,
    SemifieldMismatch,
)
from .linalg import Matrix, conjugate_transpose, kleene_star, tr_cumulative
from .semifield import Scalar


def _column(v: Matrix, n: int, what: str) -> Matrix:
    if v.cols != 1 and v.rows == 1:
        v = v.T
    if v.shape != (n, 1):
        raise DimensionError(f"{what} must be a column of length {n}, got {v.shape}")
    return v


@dataclass(frozen=True)
class GeneratedSet:
    """The set ``{G u : lower <= u <= upper}`` (no upper bound when ``upper`` is None).

    Only regular ``u`` are meant; zero entries of ``lower`` just leave the
    corresponding component unrestricted from below.
    """

    generator: Matrix
    lower: Matrix
    upper: Optional[Matrix] = None

    def __post_init__(self):
        G = self.generator
        if not G.is_square:
            raise DimensionError("generator must be square")
        n = G.rows
        object.__setattr__(self, "lower", _column(self.lower, n, "lower"))
        for v in (self.lower, self.upper):
            if v is not None and v.semifield is not G.semifield:
                raise SemifieldMismatch("bounds and generator use different semifields")
        if self.upper is not None:
            object.__setattr__(self, "upper", _column(self.upper, n, "upper"))
            if not self.upper.is_regular:
                raise NonRegularVector("upper bound of a generated set must be regular")
            if not self.lower <= self.upper:
                raise EmptySolutionSet(
                    f"lower bound {self.lower.to_rows()} exceeds upper {self.upper.to_rows()}"
                )

    @property
    def semifield(self):
        return self.generator.semifield

    @property
    def dimension(self) -> int:
        return self.generator.rows

    def contains_parameter(self, u: Matrix) -> bool:
        if u.shape != (self.dimension, 1) or not u.is_regular:
            return False
        if not self.lower <= u:
            return False
        return self.upper is None or u <= self.upper

    def point(self, u: Matrix) -> Matrix:
        return self.generator @ _column(u, self.dimension, "u")

    def canonical_parameter(self) -> Matrix:
        """``lower`` with its zero entries replaced by the identity (kept below ``upper``)."""
        sf = self.semifield
        up = self.upper.entries() if self.upper is not None else [None] * self.dimension
        u = []
        for lo, hi in zip(self.lower.entries(), up):
            if lo is not None:
                u.append(lo)
            elif hi is not None and not sf.le(sf.one, hi):
                u.append(hi)
            else:
                u.append(sf.one)
        return Matrix._raw(sf, tuple((v,) for v in u))

    def sample_parameters(self, rng: random.Random, count: int, spread: int = 4) -> List[Matrix]:
        """Random regular parameters inside the box, endpoints included."""
        sf = self.semifield
        n = self.dimension
        lows = self.lower.entries()
        highs = self.upper.entries() if self.upper is not None else [None] * n

        def offset(limit):
            if sf.additive:
                return Fraction(rng.randint(0, 4 * limit), 4) if limit else Fraction(0)
            return rng.uniform(0, float(limit))

        out = []
        for _ in range(count):
            u = []
            for lo, hi in zip(lows, highs):
                roll = rng.random()
                if lo is not None and hi is not None:
                    if roll < 0.2:
                        v = lo
                    elif roll < 0.4:
                        v = hi
                    else:
                        gap = sf.magnitude(hi) - sf.magnitude(lo)
                        if sf.additive:
                            v = sf.mul(lo, sf.lift(gap * Fraction(rng.randint(0, 8), 8)))
                        else:
                            v = sf.mul(lo, sf.lift(gap * rng.random()))
                            if not sf.le(v, hi):
                                v = hi
                elif lo is not None:
                    v = lo if roll < 0.2 else sf.mul(lo, sf.lift(offset(spread)))
                elif hi is not None:
                    v = hi if roll < 0.2 else sf.mul(hi, sf.lift(-offset(spread)))
                else:
                    v = sf.lift(offset(2 * spread) - spread)
                u.append(v)
            out.append(Matrix._raw(sf, tuple((v,) for v in u)))
        return out


@dataclass(frozen=True)
class BoxBound:
    """All solutions are exactly the vectors ``x <= bound``."""

    bound: Matrix
    kind: str = "upper-only"

    def contains(self, x: Matrix) -> bool:
        return x.shape == self.bound.shape and x <= self.bound


def solve_upper_bounded(A: Matrix, d: Matrix) -> BoxBound:
    """Solutions of ``A x <= d`` for column-regular ``A`` and regular ``d``."""
    d = _column(d, A.rows, "d")
    if A.semifield is not d.semifield:
        raise SemifieldMismatch("A and d use different semifields")
    if not A.is_column_regular:
        raise NotColumnRegular("A has a zero column; that component would be unbounded")
    if not d.is_regular:
        raise NonRegularVector("d must be regular")
    return BoxBound(conjugate_transpose(conjugate_transpose(d) @ A))


def _check_trace(A: Matrix, error):
    if not A.is_square:
        raise DimensionError("matrix must be square")
    tr = tr_cumulative(A)
    one = Scalar.one(A.semifield)
    if not A.semifield.approx_le(tr.value, one.value):
        raise error(f"Tr(A) = {tr} exceeds the identity {one}", trace=tr)
    return tr


def solve_subinvariant(A: Matrix) -> GeneratedSet:
    """All solutions of ``A x <= x``: ``x = A* u`` for arbitrary ``u``."""
    _check_trace(A, NoSolutionCertificate)
    return GeneratedSet(kleene_star(A), Matrix.zeros(A.semifield, A.rows, 1))


def solve_affine_subinvariant(A: Matrix, b: Matrix) -> GeneratedSet:
    """All regular solutions of ``A x (+) b <= x``: ``x = A* u`` with regular ``u >= b``."""
    b = _column(b, A.rows, "b")
    if A.semifield is not b.semifield:
        raise SemifieldMismatch("A and b use different semifields")
    _check_trace(A, NoRegularSolution)
    return GeneratedSet(kleene_star(A), b)
