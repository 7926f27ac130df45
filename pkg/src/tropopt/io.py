"""JSON documents for matrices, problems, outcomes, projects and schedules.

Scalars are numbers, ``"p/q"`` strings, or ``"zero"``. Output is
deterministic: keys sorted, rationals gcd-reduced.
"""

from __future__ import annotations

import json
from typing import Any, Optional

from .errors import DimensionError, ParseError
from .inequalities import GeneratedSet
from .linalg import Matrix
from .optimizer import INSTANCE_TYPES, OptimizationOutcome, canonical_solution
from .scheduler import FLAVORS, Project, ProjectSolution, describe_solution_family
from .semifield import MAX_PLUS, Scalar, Semifield, get_semifield

PROBLEM_FIELDS = {
    "rayleigh": ("A",),
    "extended": ("A", "p", "q", "c"),
    "constrained": ("A", "B", "p", "g"),
    "doubly-constrained": ("A", "B", "C", "g", "h"),
}


def load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _semifield(doc: dict, override=None) -> Semifield:
    if override is not None:
        return get_semifield(override)
    try:
        return get_semifield(doc.get("semifield", MAX_PLUS.name))
    except (KeyError, ValueError) as exc:
        raise ParseError(str(exc)) from None


# --- matrices and vectors -------------------------------------------------


def parse_scalar(sf: Semifield, value) -> Scalar:
    if isinstance(value, (list, dict)):
        raise ParseError(f"expected a scalar, got {value!r}")
    return Scalar(sf, sf.coerce(value))


def parse_matrix(sf: Semifield, doc) -> Matrix:
    """Accepts ``{"rows", "cols", "data"}`` or a bare list of rows."""
    if isinstance(doc, dict):
        try:
            data = doc["data"]
        except KeyError:
            raise ParseError("matrix object needs a 'data' field") from None
        rows, cols = doc.get("rows"), doc.get("cols")
    elif isinstance(doc, list):
        data, rows, cols = doc, None, None
    else:
        raise ParseError(f"expected a matrix, got {doc!r}")
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ParseError("matrix data must be a list of rows")
    if rows is not None and rows != len(data):
        raise DimensionError(f"matrix declares {rows} rows but has {len(data)}")
    widths = {len(r) for r in data}
    if len(widths) > 1:
        raise DimensionError(f"ragged matrix rows: lengths {sorted(widths)}")
    if cols is not None and data and cols != len(data[0]):
        raise DimensionError(f"matrix declares {cols} columns but has {len(data[0])}")
    if not data or not data[0]:
        raise DimensionError("matrix must be non-empty")
    return Matrix(sf, [[sf.coerce(v) for v in row] for row in data])


def parse_vector(sf: Semifield, doc) -> Matrix:
    if not isinstance(doc, list) or any(isinstance(v, (list, dict)) for v in doc):
        raise ParseError(f"expected a flat list for a vector, got {doc!r}")
    if not doc:
        raise DimensionError("vector must be non-empty")
    return Matrix.column(sf, [sf.coerce(v) for v in doc])


def matrix_doc(M: Matrix) -> dict:
    sf = M.semifield
    return {"rows": M.rows, "cols": M.cols,
            "data": [[sf.render(v) for v in row] for row in M.data]}


def vector_doc(v: Optional[Matrix]):
    if v is None:
        return None
    return [v.semifield.render(x) for x in v.entries()]


def scalar_doc(s: Scalar):
    return s.semifield.render(s.value)


# --- problems -------------------------------------------------------------


def parse_problem(doc, semifield=None):
    """Build an optimizer instance from a problem document."""
    if not isinstance(doc, dict):
        raise ParseError("problem document must be a JSON object")
    sf = _semifield(doc, semifield)
    kind = doc.get("problem", "rayleigh")
    if kind not in INSTANCE_TYPES:
        raise ParseError(f"unknown problem kind {kind!r}; expected one of {sorted(INSTANCE_TYPES)}")
    if "A" not in doc:
        raise ParseError("problem document needs a matrix 'A'")
    args = {}
    for name in PROBLEM_FIELDS[kind]:
        value = doc.get(name)
        if value is None:
            continue
        if name in ("A", "B", "C"):
            args[name] = parse_matrix(sf, value)
        elif name == "c":
            args[name] = parse_scalar(sf, value)
        else:
            args[name] = parse_vector(sf, value)
    return INSTANCE_TYPES[kind](**args)


def problem_doc(instance) -> dict:
    doc = {"semifield": instance.semifield.name, "problem": instance.kind}
    for name in PROBLEM_FIELDS[instance.kind]:
        value = getattr(instance, name)
        if isinstance(value, Scalar):
            doc[name] = scalar_doc(value)
        elif name in ("A", "B", "C"):
            doc[name] = matrix_doc(value)
        else:
            doc[name] = vector_doc(value)
    return doc


# --- outcomes -------------------------------------------------------------


def outcome_doc(outcome: OptimizationOutcome) -> dict:
    s = outcome.solutions
    return {
        "problem": outcome.kind,
        "semifield": outcome.optimum.semifield.name,
        "optimum": scalar_doc(outcome.optimum),
        "generator": matrix_doc(s.generator),
        "lower": vector_doc(s.lower),
        "upper": vector_doc(s.upper),
        "canonical": vector_doc(canonical_solution(outcome)),
    }


def parse_outcome(doc, semifield=None) -> OptimizationOutcome:
    if not isinstance(doc, dict):
        raise ParseError("outcome document must be a JSON object")
    for key in ("optimum", "generator", "lower"):
        if key not in doc:
            raise ParseError(f"outcome document needs {key!r}")
    sf = _semifield(doc, semifield)
    upper = doc.get("upper")
    solutions = GeneratedSet(
        parse_matrix(sf, doc["generator"]),
        parse_vector(sf, doc["lower"]),
        parse_vector(sf, upper) if upper is not None else None,
    )
    return OptimizationOutcome(parse_scalar(sf, doc["optimum"]), solutions, doc.get("problem", ""))


# --- projects and schedules -----------------------------------------------


def parse_project(doc, semifield=None) -> Project:
    if not isinstance(doc, dict):
        raise ParseError("project document must be a JSON object")
    sf = _semifield(doc, semifield)
    activities = doc.get("activities")
    if not isinstance(activities, list) or not activities:
        raise ParseError("project needs a non-empty 'activities' list")
    flavor = doc.get("flavor", "window")
    if flavor not in FLAVORS:
        raise ParseError(f"unknown flavor {flavor!r}")

    def triples(key):
        out = []
        for item in doc.get(key) or []:
            try:
                out.append((item["from"], item["to"], item["lag"]))
            except (KeyError, TypeError):
                raise ParseError(f"each {key} entry needs 'from', 'to' and 'lag'") from None
        return out

    def times(key):
        value = doc.get(key) or {}
        if isinstance(value, list):
            return {i: v for i, v in enumerate(value) if v is not None}
        if not isinstance(value, dict):
            raise ParseError(f"{key} must be an object keyed by activity")
        # keys are activity names, or 0-based positions written as strings
        return {(int(k) if k not in activities and k.isdigit() else k): v for k, v in value.items()}

    return Project.build(activities, triples("start_finish"), triples("start_start"),
                         times("late_start"), times("early_finish"), times("early_start"),
                         flavor, sf)


def schedule_doc(solution: ProjectSolution) -> dict:
    project, sched = solution.project, solution.schedule
    family = describe_solution_family(solution.outcome, project.activities)
    sf = project.semifield
    doc = {
        "flavor": project.flavor,
        "activities": list(project.activities),
        "initiation": vector_doc(sched.initiation),
        "completion": vector_doc(sched.completion),
        "adjusted_start": vector_doc(sched.adjusted_start),
        "adjusted_finish": vector_doc(sched.adjusted_finish),
        "flow_times": [scalar_doc(f) for f in sched.flow_times],
        "max_flow_time": scalar_doc(sched.max_flow_time),
        "outcome": outcome_doc(solution.outcome),
        "intervals": [
            {
                "activity": project.activities[iv.index],
                "lower": sf.render(iv.lower.value),
                "upper": sf.render(iv.upper.value) if iv.upper is not None else None,
                "text": iv.render(),
            }
            for iv in family.intervals
        ],
        "family": {"equations": family.equations(), "bounds": family.bounds()},
    }
    return doc
