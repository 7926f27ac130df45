"""Project scheduling under temporal constraints, minimizing maximum flow time.

Two project flavours are supported:

``window``
    start-finish lags ``a_ij``, late start ``q_i`` and early finish ``p_i``.
    Initiation is clipped to the window (``s = min(x, q)``) and completion is
    pushed to it (``t = max(y, p)``); the flow time of activity ``i`` is
    ``t_i - s_i``.

``constrained``
    start-finish lags ``a_ij``, start-start lags ``b_ij``, early start ``g_i``
    and early finish ``p_i``. Completion is ``y = max(Ax, p)``, initiation
    must satisfy ``x >= max(Bx, g)``; flow time is ``y_i - x_i``.

Times are max-plus values (exact rationals). ``a_ij`` is the minimum lag from
the initiation of activity ``j`` to the completion of activity ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import NonRegularQ, ParseError
from .linalg import Matrix, conjugate_transpose
from .optimizer import (
    ConstrainedInstance,
    OptimizationOutcome,
    UnconstrainedInstance,
    canonical_solution,
    minimize_constrained,
    minimize_extended,
)
from .semifield import MAX_PLUS, Scalar, get_semifield

WINDOW = "window"
CONSTRAINED = "constrained"
FLAVORS = (WINDOW, CONSTRAINED)


@dataclass(frozen=True)
class Project:
    """Activity network. Lags are keyed ``(i, j)`` = (target, source) by position."""

    activities: Tuple[str, ...]
    start_finish: Dict[Tuple[int, int], object] = field(default_factory=dict)
    start_start: Dict[Tuple[int, int], object] = field(default_factory=dict)
    late_start: Dict[int, object] = field(default_factory=dict)
    early_finish: Dict[int, object] = field(default_factory=dict)
    early_start: Dict[int, object] = field(default_factory=dict)
    flavor: str = WINDOW
    semifield: object = MAX_PLUS

    def __post_init__(self):
        object.__setattr__(self, "activities", tuple(self.activities))
        object.__setattr__(self, "semifield", get_semifield(self.semifield))
        if not self.activities:
            raise ParseError("a project needs at least one activity")
        if self.flavor not in FLAVORS:
            raise ParseError(f"unknown flavor {self.flavor!r}; expected one of {FLAVORS}")
        n = self.n
        for table in (self.start_finish, self.start_start):
            for i, j in table:
                if not (0 <= i < n and 0 <= j < n):
                    raise ParseError(f"lag ({i}, {j}) refers to a missing activity")
        for table in (self.late_start, self.early_finish, self.early_start):
            for i in table:
                if not 0 <= i < n:
                    raise ParseError(f"time for activity {i} refers to a missing activity")

    @classmethod
    def build(cls, activities: Sequence[str], start_finish=(), start_start=(), late_start=None,
              early_finish=None, early_start=None, flavor=WINDOW, semifield=MAX_PLUS):
        """Create a project from ``(from, to, lag)`` triples and name-keyed times.

        Activities may be referenced by name or by 0-based position. Repeated
        lags between the same pair keep the largest one.
        """
        activities = tuple(activities)
        sf = get_semifield(semifield)

        def index(ref):
            if isinstance(ref, int) and not isinstance(ref, bool):
                return ref
            try:
                return activities.index(ref)
            except ValueError:
                raise ParseError(f"unknown activity {ref!r}") from None

        def lags(triples):
            table = {}
            for src, dst, lag in triples:
                key = (index(dst), index(src))
                value = sf.coerce(lag)
                table[key] = sf.add(table.get(key), value)
            return table

        def times(mapping):
            return {index(k): sf.coerce(v) for k, v in (mapping or {}).items()}

        return cls(activities, lags(start_finish), lags(start_start), times(late_start),
                   times(early_finish), times(early_start), flavor, sf)

    @property
    def n(self) -> int:
        return len(self.activities)

    def _matrix(self, table) -> Matrix:
        sf = self.semifield
        rows = [[table.get((i, j)) for j in range(self.n)] for i in range(self.n)]
        return Matrix(sf, rows)

    def _vector(self, table) -> Matrix:
        return Matrix.column(self.semifield, [table.get(i) for i in range(self.n)])

    @property
    def A(self) -> Matrix:
        return self._matrix(self.start_finish)

    @property
    def B(self) -> Matrix:
        return self._matrix(self.start_start)

    @property
    def p(self) -> Matrix:
        return self._vector(self.early_finish)

    @property
    def q(self) -> Matrix:
        return self._vector(self.late_start)

    @property
    def g(self) -> Matrix:
        return self._vector(self.early_start)


@dataclass(frozen=True)
class Schedule:
    """Times of one schedule; ``completion`` is the raw ``y`` (before the early
    finish push in the window flavour), ``adjusted_*`` exist for windows only."""

    flavor: str
    initiation: Matrix
    completion: Matrix
    adjusted_start: Optional[Matrix]
    adjusted_finish: Optional[Matrix]
    max_flow_time: Scalar

    @property
    def flow_times(self) -> List[Scalar]:
        sf = self.initiation.semifield
        start = self.adjusted_start if self.adjusted_start is not None else self.initiation
        finish = self.adjusted_finish if self.adjusted_finish is not None else self.completion
        return [Scalar(sf, sf.mul(sf.inv(s), t)) for s, t in zip(start.entries(), finish.entries())]


@dataclass(frozen=True)
class ProjectSolution:
    project: Project
    instance: object
    outcome: OptimizationOutcome
    schedule: Schedule


def build_flowtime_instance(project: Project) -> UnconstrainedInstance:
    """Window flavour as ``min x^-Ax (+) x^-p (+) q'^-x (+) c`` with ``q'^- = q^-A``, ``c = q^-p``."""
    q = project.q
    if not q.is_regular:
        missing = [project.activities[i] for i, v in enumerate(q.entries()) if v is None]
        raise NonRegularQ(f"late start times are missing for {missing}")
    A, p = project.A, project.p
    qA = conjugate_transpose(q) @ A
    if not qA.is_regular:
        loose = [project.activities[j] for j, v in enumerate(qA.entries()) if v is None]
        raise NonRegularQ(f"no start-finish lag starts at {loose}, so q^-A is not regular")
    c = (conjugate_transpose(q) @ p).item()
    return UnconstrainedInstance(A, p, conjugate_transpose(qA), c)


def build_constrained_instance(project: Project) -> ConstrainedInstance:
    return ConstrainedInstance(project.A, project.B, project.p, project.g)


def schedule_for(project: Project, x: Matrix) -> Schedule:
    """All derived times of ``project`` for the initiation vector ``x``."""
    A, p = project.A, project.p
    if project.flavor == WINDOW:
        y = A @ x
        s = conjugate_transpose(conjugate_transpose(x) + conjugate_transpose(project.q))
        t = y + p
        flow = (conjugate_transpose(s) @ t).item()
        return Schedule(WINDOW, x, y, s, t, flow)
    y = A @ x + p
    flow = (conjugate_transpose(x) @ y).item()
    return Schedule(CONSTRAINED, x, y, None, None, flow)


def solve_project(project: Project) -> ProjectSolution:
    if project.flavor == WINDOW:
        instance = build_flowtime_instance(project)
        outcome = minimize_extended(instance)
    else:
        instance = build_constrained_instance(project)
        outcome = minimize_constrained(instance)
    schedule = schedule_for(project, canonical_solution(outcome))
    return ProjectSolution(project, instance, outcome, schedule)


@dataclass(frozen=True)
class Interval:
    """Range of one component; a zero ``lower`` means unbounded below."""

    index: int
    lower: Scalar
    upper: Optional[Scalar]

    @property
    def is_point(self) -> bool:
        return self.upper is not None and self.lower.isclose(self.upper)

    def render(self) -> str:
        if self.lower.is_zero:
            return "unrestricted" if self.upper is None else f"<= {self.upper}"
        if self.upper is None:
            return f">= {self.lower}"
        if self.is_point:
            return str(self.lower)
        return f"[{self.lower}, {self.upper}]"


@dataclass(frozen=True)
class FamilyDescription:
    intervals: Tuple[Interval, ...]
    representative: Matrix
    generator: Matrix
    parameter_lower: Matrix
    parameter_upper: Optional[Matrix]
    names: Tuple[str, ...] = ()

    @property
    def is_point(self) -> bool:
        return all(iv.is_point for iv in self.intervals)

    def _name(self, i):
        label = f"x{i + 1}"
        if self.names:
            label += f" ({self.names[i]})"
        return label

    def equations(self) -> List[str]:
        """Generator written out, one line per component (``x1 = max(u1, u2 + 1, ...)``)."""
        sf = self.generator.semifield
        op = "max" if sf.maximize else "min"
        lines = []
        for i, row in enumerate(self.generator.data):
            parts = []
            for j, a in enumerate(row):
                if a is None:
                    continue
                u = f"u{j + 1}"
                if sf.additive:
                    if a == 0:
                        parts.append(u)
                    elif a > 0:
                        parts.append(f"{u} + {sf.human(a)}")
                    else:
                        parts.append(f"{u} - {sf.human(-a)}")
                else:
                    parts.append(u if a == 1.0 else f"{sf.human(a)}*{u}")
            rhs = f"{op}({', '.join(parts)})" if len(parts) > 1 else (parts[0] if parts else "zero")
            lines.append(f"x{i + 1} = {rhs}")
        return lines

    def bounds(self) -> List[str]:
        sf = self.generator.semifield
        ups = self.parameter_upper.entries() if self.parameter_upper is not None else None
        lines = []
        for j, lo in enumerate(self.parameter_lower.entries()):
            hi = ups[j] if ups is not None else None
            u = f"u{j + 1}"
            if lo is not None and hi is not None and sf.eq(lo, hi):
                lines.append(f"{u} = {sf.human(lo)}")
            elif lo is not None and hi is not None:
                lines.append(f"{sf.human(lo)} <= {u} <= {sf.human(hi)}")
            elif lo is not None:
                lines.append(f"{u} >= {sf.human(lo)}")
            elif hi is not None:
                lines.append(f"{u} <= {sf.human(hi)}")
            else:
                lines.append(f"{u} unrestricted")
        return lines

    def table(self) -> str:
        rows = [("activity", "initiation")]
        for iv in self.intervals:
            rows.append((self._name(iv.index), iv.render()))
        width = max(len(r[0]) for r in rows)
        return "\n".join(f"{a.ljust(width)}  {b}" for a, b in rows)


def describe_solution_family(outcome: OptimizationOutcome, names: Sequence[str] = ()) -> FamilyDescription:
    """Per-component range of ``x = G u`` over the parameter box.

    ``G u`` is monotone in ``u``, so component ``i`` sweeps exactly
    ``[(G lower)_i, (G upper)_i]``; a missing upper bound leaves it unbounded
    above. The representative is the canonical solution.
    """
    s = outcome.solutions
    low = s.point(s.lower)
    high = s.point(s.upper) if s.upper is not None else None
    intervals = []
    for i, lo in enumerate(low.scalars()):
        hi = high[i] if high is not None else None
        intervals.append(Interval(i, lo, hi))
    rep = canonical_solution(outcome)
    return FamilyDescription(tuple(intervals), rep, s.generator, s.lower, s.upper, tuple(names))
