"""Closed-form solvers for the tropical optimization problems

    rayleigh            min x^-Ax
    extended            min x^-Ax (+) x^-p (+) q^-x (+) c
    constrained         min x^-Ax (+) x^-p       s.t. Bx (+) g <= x
    doubly-constrained  min x^-Ax                s.t. Bx (+) g <= x,  Cx <= h

over regular vectors x. Every solver returns the optimum together with the
complete set of regular minimizers as a :class:`GeneratedSet`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import ClassVar, Optional

from . import kernels
from .errors import (
    DimensionError,
    IncompatibleBounds,
    InfeasibleConstraints,
    NonRegularQ,
    NonRegularVector,
    NotColumnRegular,
    ProblemTooLarge,
    SemifieldMismatch,
    TropicalError,
    ZeroSpectralRadius,
)
from .inequalities import GeneratedSet
from .linalg import (
    Matrix,
    conjugate_transpose,
    kleene_star,
    spectral_radius,
    tr_cumulative,
)
from .semifield import Scalar

# Exponent-composition enumeration grows like 2^n.
MAX_ENUM_ORDER = 12


def _as_column(v, sf, n, what):
    if v is None:
        return Matrix.zeros(sf, n, 1)
    if not isinstance(v, Matrix):
        v = Matrix.column(sf, v)
    if v.semifield is not sf:
        raise SemifieldMismatch(f"{what} uses {v.semifield.name}, expected {sf.name}")
    if v.rows == 1 and v.cols != 1:
        v = v.T
    if v.shape != (n, 1):
        raise DimensionError(f"{what} must have length {n}, got shape {v.shape}")
    return v


def _as_square(M, sf, n, what):
    if M is None:
        return Matrix.zeros(sf, n, n)
    if M.semifield is not sf:
        raise SemifieldMismatch(f"{what} uses {M.semifield.name}, expected {sf.name}")
    if M.shape != (n, n):
        raise DimensionError(f"{what} must be {n}x{n}, got {M.shape}")
    return M


def _as_scalar(c, sf):
    if c is None:
        return Scalar.zero(sf)
    if isinstance(c, Scalar):
        if c.semifield is not sf:
            raise SemifieldMismatch(f"c uses {c.semifield.name}, expected {sf.name}")
        return c
    return sf.scalar(c)


class _Instance:
    kind: ClassVar[str]

    def _init_A(self):
        if not self.A.is_square:
            raise DimensionError(f"A must be square, got {self.A.shape}")
        return self.A.semifield, self.A.rows

    @property
    def semifield(self):
        return self.A.semifield

    @property
    def n(self) -> int:
        return self.A.rows

    def _zeros(self):
        return (None,) * self.n

    def kernel_args(self):
        """Raw data ``(A, p, qc, c, B, g, C, h)`` for :func:`kernels.eval_points`."""
        raise NotImplementedError


@dataclass(frozen=True)
class RayleighInstance(_Instance):
    A: Matrix
    kind: ClassVar[str] = "rayleigh"

    def __post_init__(self):
        self._init_A()

    def kernel_args(self):
        z = self._zeros()
        zz = (z,) * self.n
        return self.A.data, z, z, None, zz, z, (), ()


@dataclass(frozen=True)
class UnconstrainedInstance(_Instance):
    A: Matrix
    p: Optional[Matrix] = None
    q: Optional[Matrix] = None
    c: Optional[Scalar] = None
    kind: ClassVar[str] = "extended"

    def __post_init__(self):
        sf, n = self._init_A()
        object.__setattr__(self, "p", _as_column(self.p, sf, n, "p"))
        object.__setattr__(self, "q", _as_column(self.q, sf, n, "q"))
        object.__setattr__(self, "c", _as_scalar(self.c, sf))

    def kernel_args(self):
        z = self._zeros()
        qc = tuple(None if v is None else self.semifield.inv(v) for v in self.q.entries())
        return self.A.data, tuple(self.p.entries()), qc, self.c.value, (z,) * self.n, z, (), ()


@dataclass(frozen=True)
class ConstrainedInstance(_Instance):
    A: Matrix
    B: Optional[Matrix] = None
    p: Optional[Matrix] = None
    g: Optional[Matrix] = None
    kind: ClassVar[str] = "constrained"

    def __post_init__(self):
        sf, n = self._init_A()
        object.__setattr__(self, "B", _as_square(self.B, sf, n, "B"))
        object.__setattr__(self, "p", _as_column(self.p, sf, n, "p"))
        object.__setattr__(self, "g", _as_column(self.g, sf, n, "g"))

    def kernel_args(self):
        z = self._zeros()
        return (self.A.data, tuple(self.p.entries()), z, None,
                self.B.data, tuple(self.g.entries()), (), ())


@dataclass(frozen=True)
class DoublyConstrainedInstance(_Instance):
    A: Matrix
    B: Optional[Matrix] = None
    C: Optional[Matrix] = None
    g: Optional[Matrix] = None
    h: Optional[Matrix] = None
    kind: ClassVar[str] = "doubly-constrained"

    def __post_init__(self):
        sf, n = self._init_A()
        object.__setattr__(self, "B", _as_square(self.B, sf, n, "B"))
        object.__setattr__(self, "g", _as_column(self.g, sf, n, "g"))
        if self.C is None or self.h is None:
            raise DimensionError("doubly constrained problems need both C and h")
        if self.C.semifield is not sf:
            raise SemifieldMismatch("C uses a different semifield")
        if self.C.cols != n:
            raise DimensionError(f"C must have {n} columns, got {self.C.cols}")
        object.__setattr__(self, "h", _as_column(self.h, sf, self.C.rows, "h"))

    def kernel_args(self):
        z = self._zeros()
        return (self.A.data, z, z, None, self.B.data, tuple(self.g.entries()),
                self.C.data, tuple(self.h.entries()))


INSTANCE_TYPES = {
    cls.kind: cls
    for cls in (RayleighInstance, UnconstrainedInstance, ConstrainedInstance, DoublyConstrainedInstance)
}


@dataclass(frozen=True)
class OptimizationOutcome:
    optimum: Scalar
    solutions: GeneratedSet
    kind: str = ""
    details: dict = field(default_factory=dict, compare=False, hash=False)


# ---------------------------------------------------------------------------
# objective evaluation


def _point(instance, x) -> Matrix:
    sf, n = instance.semifield, instance.n
    x = _as_column(x, sf, n, "x")
    if not x.is_regular:
        raise NonRegularVector("the objective is only defined at regular vectors")
    return x


def evaluate_objective(instance, x) -> Scalar:
    """Exact objective value of ``instance`` at the regular vector ``x``."""
    x = _point(instance, x)
    values, _ = kernels.eval_points(instance.semifield, [tuple(x.entries())], *instance.kernel_args())
    return Scalar(instance.semifield, values[0])


def is_feasible(instance, x) -> bool:
    x = _point(instance, x)
    _, feasible = kernels.eval_points(instance.semifield, [tuple(x.entries())], *instance.kernel_args())
    return feasible[0]


def membership(instance, outcome: OptimizationOutcome, x) -> bool:
    """Whether ``x`` is a regular feasible point attaining ``outcome.optimum``."""
    try:
        x = _point(instance, x)
        values, feasible = kernels.eval_points(
            instance.semifield, [tuple(x.entries())], *instance.kernel_args()
        )
    except (TropicalError, TypeError, ValueError):
        return False
    if not feasible[0]:
        return False
    return instance.semifield.eq(values[0], outcome.optimum.value)


def canonical_solution(outcome: OptimizationOutcome) -> Matrix:
    """``G u`` with ``u`` the lower bound (zero entries filled with the identity)."""
    s = outcome.solutions
    return s.point(s.canonical_parameter())


# ---------------------------------------------------------------------------
# solvers


def _require_lambda(A: Matrix) -> Scalar:
    lam = spectral_radius(A)
    if lam.is_zero:
        raise ZeroSpectralRadius("the spectral radius of A is zero", spectral_radius=lam)
    return lam


def _require_order(n, max_order):
    limit = MAX_ENUM_ORDER if max_order is None else max_order
    if n > limit:
        raise ProblemTooLarge(f"order {n} exceeds the enumeration limit {limit}", limit=limit)


def _require_trace_B(B: Matrix) -> Scalar:
    sf = B.semifield
    tr = tr_cumulative(B)
    if not sf.approx_le(tr.value, sf.one):
        raise InfeasibleConstraints(
            f"Tr(B) = {tr} exceeds the identity, so Bx (+) g <= x has no regular solution",
            trace=tr,
        )
    return tr


def minimize_rayleigh(A: Matrix) -> OptimizationOutcome:
    """Minimum of ``x^-Ax``: the spectral radius, attained on ``(lambda^-1 A)* u``."""
    if isinstance(A, RayleighInstance):
        A = A.A
    if not A.is_square:
        raise DimensionError("A must be square")
    lam = _require_lambda(A)
    G = kleene_star(lam.inverse() * A)
    solutions = GeneratedSet(G, Matrix.zeros(A.semifield, A.rows, 1))
    return OptimizationOutcome(lam, solutions, RayleighInstance.kind, {"lambda": lam})


def extended_terms(A: Matrix, p: Matrix, q: Matrix):
    """``(q^- A^(m-1) p)^(1/(m+1))`` for ``m = 1..n``."""
    qc = conjugate_transpose(q)
    row = qc
    terms = []
    for m in range(1, A.rows + 1):
        value = (row @ p).item()
        terms.append(value ** Fraction(1, m + 1))
        row = row @ A
    return terms


def minimize_extended(instance: UnconstrainedInstance) -> OptimizationOutcome:
    A, p, q, c = instance.A, instance.p, instance.q, instance.c
    if not q.is_regular:
        raise NonRegularQ("q must be a regular vector")
    lam = _require_lambda(A)
    terms = extended_terms(A, p, q)
    mu = lam + c
    for t in terms:
        mu = mu + t
    mu_inv = mu.inverse()
    G = kleene_star(mu_inv * A)
    lower = mu_inv * p
    upper = mu * conjugate_transpose(conjugate_transpose(q) @ G)
    details = {"lambda": lam, "terms": terms, "c": c}
    return OptimizationOutcome(mu, GeneratedSet(G, lower, upper), instance.kind, details)


def _root_terms(sf, best):
    """``best[k]^(1/k)`` for ``k >= 1``."""
    return [Scalar(sf, sf.pow(v, Fraction(1, k))) for k, v in enumerate(best) if k >= 1]


def constrained_theta(A: Matrix, B: Matrix, lam: Optional[Scalar] = None, max_order=None) -> Scalar:
    """``lambda (+)`` the ``1/k`` roots of ``tr(A B^i1 ... A B^ik)`` with ``1 <= sum <= n-k``."""
    n = A.rows
    _require_order(n, max_order)
    sf = A.semifield
    theta = spectral_radius(A) if lam is None else lam
    ident = Matrix.identity(sf, n).data
    best = kernels.word_traces(sf, A.data, B.data, ident, lead=False, min_sum=1, kmax=n - 1)
    for t in _root_terms(sf, best):
        theta = theta + t
    return theta


def minimize_constrained(instance: ConstrainedInstance, max_order=None) -> OptimizationOutcome:
    A, B, p, g = instance.A, instance.B, instance.p, instance.g
    lam = _require_lambda(A)
    trB = _require_trace_B(B)
    theta = constrained_theta(A, B, lam, max_order)
    t_inv = theta.inverse()
    G = kleene_star(t_inv * A + B)
    lower = t_inv * p + g
    details = {"lambda": lam, "TrB": trB}
    return OptimizationOutcome(theta, GeneratedSet(G, lower), instance.kind, details)


def doubly_constrained_theta(A, B, C, g, h, max_order=None) -> Scalar:
    """Optimum of the doubly constrained problem: the ``1/k`` roots of
    ``tr(B^i0 A B^i1 ... A B^ik (I (+) g h^- C))`` over ``0 <= sum <= n-k``, ``k = 1..n``."""
    n = A.rows
    _require_order(n, max_order)
    sf = A.semifield
    R = Matrix.identity(sf, n) + g @ conjugate_transpose(h) @ C
    best = kernels.word_traces(sf, A.data, B.data, R.data, lead=True, min_sum=0, kmax=n)
    theta = Scalar.zero(sf)
    for t in _root_terms(sf, best):
        theta = theta + t
    return theta


def minimize_doubly_constrained(instance: DoublyConstrainedInstance, max_order=None) -> OptimizationOutcome:
    A, B, C, g, h = instance.A, instance.B, instance.C, instance.g, instance.h
    sf = A.semifield
    lam = _require_lambda(A)
    trB = _require_trace_B(B)
    if not C.is_column_regular:
        raise NotColumnRegular("C must be column-regular")
    if not h.is_regular:
        raise NonRegularVector("h must be a regular vector")
    hc = conjugate_transpose(h)
    check = (hc @ C @ kleene_star(B) @ g).item()
    if not sf.approx_le(check.value, sf.one):
        raise IncompatibleBounds(
            f"h^- C B* g = {check} exceeds the identity; the constraints leave no regular point",
            bound=check,
        )
    theta = doubly_constrained_theta(A, B, C, g, h, max_order)
    G = kleene_star(theta.inverse() * A + B)
    upper = conjugate_transpose(hc @ C @ G)
    details = {"lambda": lam, "TrB": trB, "hCBg": check}
    return OptimizationOutcome(theta, GeneratedSet(G, g, upper), instance.kind, details)


def solve(instance, max_order=None) -> OptimizationOutcome:
    """Dispatch on the instance type."""
    if isinstance(instance, RayleighInstance):
        return minimize_rayleigh(instance.A)
    if isinstance(instance, UnconstrainedInstance):
        return minimize_extended(instance)
    if isinstance(instance, ConstrainedInstance):
        return minimize_constrained(instance, max_order)
    if isinstance(instance, DoublyConstrainedInstance):
        return minimize_doubly_constrained(instance, max_order)
    raise TypeError(f"unsupported instance {type(instance).__name__}")
