"""Brute-force grid verification of closed-form optima and solution sets.

The oracle never looks at the generator or the bounds of an outcome when it
searches; it evaluates the objective directly on grid points ``x``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Union

from . import kernels
from .errors import EmptyGridError, ParseError
from .linalg import Matrix
from .optimizer import OptimizationOutcome, canonical_solution, membership
from .semifield import Scalar

Bound = Union[int, Fraction, Sequence]

CHUNK = 20000


def _rational(v) -> Fraction:
    if isinstance(v, float):
        return Fraction(repr(v))
    return Fraction(v)


@dataclass(frozen=True)
class GridSpec:
    """Closed box ``[lo, hi]`` per coordinate sampled at ``step``.

    ``lo`` and ``hi`` are numbers (same for every coordinate) or per-coordinate
    sequences. Coordinates are carrier values for additive semifields and
    natural logarithms of carrier values for multiplicative ones.
    """

    lo: Bound
    hi: Bound
    step: Fraction = Fraction(1, 2)

    def __post_init__(self):
        step = _rational(self.step)
        if step <= 0:
            raise ValueError("grid step must be positive")
        object.__setattr__(self, "step", step)

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        try:
            lo, hi, step = text.split(":")
            return cls(Fraction(lo), Fraction(hi), Fraction(step))
        except ValueError:
            raise ParseError(f"grid must look like lo:hi:step, got {text!r}") from None

    @classmethod
    def around(cls, x: Matrix, radius=3, step=Fraction(1, 2)) -> "GridSpec":
        """Box of half-width ``radius`` centred on ``x`` (snapped to the step)."""
        sf = x.semifield
        step = _rational(step)
        centres = []
        for v in x.entries():
            c = sf.magnitude(v)
            if sf.additive:
                centres.append((Fraction(c) // step) * step)
            else:
                centres.append(Fraction(round(c / float(step))) * step)
        return cls([c - radius for c in centres], [c + radius for c in centres], step)

    def axes(self, n: int) -> List[List[Fraction]]:
        los = list(self.lo) if isinstance(self.lo, (list, tuple)) else [self.lo] * n
        his = list(self.hi) if isinstance(self.hi, (list, tuple)) else [self.hi] * n
        if len(los) != n or len(his) != n:
            raise ValueError(f"grid bounds must have {n} coordinates")
        out = []
        for lo, hi in zip(los, his):
            lo, hi = _rational(lo), _rational(hi)
            if lo > hi:
                raise ValueError(f"grid interval [{lo}, {hi}] is empty")
            count = int((hi - lo) // self.step) + 1
            out.append([lo + k * self.step for k in range(count)])
        return out

    def size(self, n: int) -> int:
        total = 1
        for axis in self.axes(n):
            total *= len(axis)
        return total


@dataclass(frozen=True)
class GridResult:
    min: Scalar
    argmins: List[Matrix]
    evaluated: int
    feasible: int


def grid_minimize(instance, grid: GridSpec) -> GridResult:
    """Exact minimum of the objective over the feasible grid points, with all argmins."""
    sf = instance.semifield
    n = instance.n
    axes = [[sf.from_log(v) for v in axis] for axis in grid.axes(n)]
    args = instance.kernel_args()
    best = None
    winners: List[tuple] = []
    evaluated = feasible_count = 0
    points = itertools.product(*axes)
    while True:
        chunk = list(itertools.islice(points, CHUNK))
        if not chunk:
            break
        values, feasible = kernels.eval_points(sf, chunk, *args)
        evaluated += len(chunk)
        for x, v, ok in zip(chunk, values, feasible):
            if not ok:
                continue
            feasible_count += 1
            if best is None or (sf.le(v, best) and not sf.eq(v, best)):
                best = v
                winners = [x]
            elif sf.eq(v, best):
                winners.append(x)
    if best is None:
        raise EmptyGridError(f"none of the {evaluated} grid points is feasible")
    if not sf.exact:
        # tolerant ties can drift while best improves; re-filter against the final best
        winners = [x for x in winners if sf.eq(_value_at(sf, x, args), best)]
    winners.sort()
    argmins = [Matrix._raw(sf, tuple((v,) for v in x)) for x in winners]
    return GridResult(Scalar(sf, best), argmins, evaluated, feasible_count)


def _value_at(sf, x, args):
    values, _ = kernels.eval_points(sf, [x], *args)
    return values[0]


@dataclass
class VerificationReport:
    passed: bool
    optimum: Scalar
    grid_min: Optional[Scalar]
    optimum_on_grid: bool
    checks: dict = field(default_factory=dict)
    failures: List[tuple] = field(default_factory=list)

    def lines(self) -> List[str]:
        out = [f"optimum (closed form) = {self.optimum}"]
        if self.grid_min is not None:
            out.append(f"grid minimum          = {self.grid_min}")
        for name, ok in self.checks.items():
            out.append(f"{name:<22}{'pass' if ok else 'FAIL'}")
        for check, witness, detail in self.failures:
            w = witness.to_rows() if isinstance(witness, Matrix) else witness
            out.append(f"counterexample [{check}]: x = {w}  ({detail})")
        out.append("result: " + ("pass" if self.passed else "FAIL"))
        return out


def verify_solution_set(instance, outcome: OptimizationOutcome, grid: GridSpec,
                        samples: int = 50, seed: int = 0) -> VerificationReport:
    """Cross-check an outcome against the grid and against sampled set members.

    Checks: no feasible grid point beats the optimum; when the grid attains
    the optimum, every grid argmin is a member; sampled ``G u`` (and the
    canonical solution) are members.
    """
    sf = instance.semifield
    opt = outcome.optimum
    failures = []
    checks = {}

    try:
        res = grid_minimize(instance, grid)
    except EmptyGridError:
        res = None
    grid_min = res.min if res is not None else None

    if res is not None:
        ok = sf.approx_le(opt.value, res.min.value)
        checks["lower_bound"] = ok
        if not ok:
            failures.append(("lower_bound", res.argmins[0], f"objective {res.min} < optimum {opt}"))
        on_grid = sf.eq(res.min.value, opt.value)
        if on_grid:
            bad = [x for x in res.argmins if not membership(instance, outcome, x)]
            checks["grid_argmins"] = not bad
            failures.extend(("grid_argmins", x, "grid argmin rejected by membership") for x in bad)
    else:
        on_grid = False

    canon = canonical_solution(outcome)
    ok = membership(instance, outcome, canon)
    checks["canonical"] = ok
    if not ok:
        failures.append(("canonical", canon, "canonical solution is not a member"))

    rng = random.Random(seed)
    bad_samples = []
    for u in outcome.solutions.sample_parameters(rng, samples):
        x = outcome.solutions.point(u)
        if not membership(instance, outcome, x):
            bad_samples.append(x)
    checks["samples"] = not bad_samples
    failures.extend(("samples", x, "sampled member misses the optimum") for x in bad_samples[:5])

    return VerificationReport(not failures, opt, grid_min, on_grid, checks, failures)
