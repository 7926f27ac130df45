"""Command-line front end: ``tropopt {spectral,star,solve,schedule,verify}``.

Exit codes: 0 ok, 2 parse error, 3 dimension error, 4 solver precondition or
infeasibility, 5 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import io
from .errors import (
    DimensionError,
    ParseError,
    SemifieldMismatch,
    SolverError,
    TropicalError,
)
from .linalg import Matrix, kleene_star, spectral_radius, spectral_terms, tr_cumulative
from .optimizer import canonical_solution, solve
from .oracle import GridSpec, verify_solution_set
from .scheduler import describe_solution_family, solve_project
from .semifield import SEMIFIELDS, Scalar

EXIT_OK, EXIT_PARSE, EXIT_DIMENSION, EXIT_SOLVER, EXIT_VERIFY = 0, 2, 3, 4, 5


class CommandFailed(Exception):
    def __init__(self, code, payload=None, message=""):
        super().__init__(message)
        self.code = code
        self.payload = payload


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _plain(value):
    """Diagnostics values made JSON-friendly."""
    if isinstance(value, Scalar):
        return value.semifield.render(value.value)
    if isinstance(value, Matrix):
        return io.matrix_doc(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _matrix_from(doc, semifield):
    """A bare matrix document, or a problem document's ``A``."""
    if isinstance(doc, dict) and "A" in doc:
        sf = io._semifield(doc, semifield)
        return io.parse_matrix(sf, doc["A"])
    if isinstance(doc, dict):
        return io.parse_matrix(io._semifield(doc, semifield), doc)
    return io.parse_matrix(io._semifield({}, semifield), doc)


# --- subcommands ----------------------------------------------------------


def run_spectral(args):
    A = _matrix_from(io.load_json(_read(args.input)), args.semifield)
    lam = spectral_radius(A)
    terms = spectral_terms(A)
    if args.format == "json":
        return io.dump_json({
            "semifield": A.semifield.name,
            "lambda": io.scalar_doc(lam),
            "terms": [{"m": m, "trace": io.scalar_doc(t), "root": io.scalar_doc(r)} for m, t, r in terms],
        })
    lines = [f"lambda = {lam}"]
    lines += [f"  m = {m}: tr(A^{m}) = {t}, tr^(1/{m}) = {r}" for m, t, r in terms]
    return "\n".join(lines) + "\n"


def run_star(args):
    A = _matrix_from(io.load_json(_read(args.input)), args.semifield)
    S = kleene_star(A)
    tr = tr_cumulative(A)
    if args.format == "json":
        return io.dump_json({"semifield": A.semifield.name, "Tr": io.scalar_doc(tr),
                             "star": io.matrix_doc(S)})
    return f"Tr(A) = {tr}\nA* =\n{S}\n"


def run_solve(args):
    instance = io.parse_problem(io.load_json(_read(args.input)), args.semifield)
    outcome = solve(instance)
    if args.format == "text":
        s = outcome.solutions
        lines = [f"problem   = {instance.kind}", f"optimum   = {outcome.optimum}",
                 "generator =", str(s.generator),
                 f"lower     = {s.lower.to_rows()}",
                 f"upper     = {s.upper.to_rows() if s.upper is not None else None}"]
        return "\n".join(lines) + "\n"
    return io.dump_json(io.outcome_doc(outcome))


def run_schedule(args):
    project = io.parse_project(io.load_json(_read(args.input)), args.semifield)
    solution = solve_project(project)
    if args.format == "json":
        return io.dump_json(io.schedule_doc(solution))
    family = describe_solution_family(solution.outcome, project.activities)
    sched = solution.schedule
    lines = [f"flavor         = {project.flavor}",
             f"max flow time  = {sched.max_flow_time}",
             "", family.table(), "",
             "solution family (x = G u):"]
    lines += ["  " + e for e in family.equations()]
    lines += ["  " + b for b in family.bounds()]
    lines += ["", "canonical schedule:"]
    sf = project.semifield
    rows = [("activity", "start", "finish", "flow")]
    start = sched.adjusted_start if sched.adjusted_start is not None else sched.initiation
    finish = sched.adjusted_finish if sched.adjusted_finish is not None else sched.completion
    for name, s, t, f in zip(project.activities, start.entries(), finish.entries(), sched.flow_times):
        rows.append((name, sf.human(s), sf.human(t), str(f)))
    widths = [max(len(r[k]) for r in rows) for k in range(4)]
    lines += ["  " + "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"


def run_verify(args):
    doc = io.load_json(_read(args.input))
    instance = io.parse_problem(doc, args.semifield)
    if isinstance(doc, dict) and doc.get("outcome") is not None:
        outcome = io.parse_outcome(doc["outcome"], instance.semifield)
    else:
        outcome = solve(instance)
    grid = GridSpec.parse(args.grid) if args.grid else GridSpec.around(
        canonical_solution(outcome), radius=3)
    try:
        report = verify_solution_set(instance, outcome, grid, samples=args.samples, seed=args.seed)
    except ValueError as exc:
        raise DimensionError(str(exc)) from None
    if args.format == "json":
        text = io.dump_json({
            "passed": report.passed,
            "optimum": io.scalar_doc(report.optimum),
            "grid_min": io.scalar_doc(report.grid_min) if report.grid_min is not None else None,
            "checks": report.checks,
            "failures": [{"check": c, "x": _plain(w), "detail": d} for c, w, d in report.failures],
        })
    else:
        text = "\n".join(report.lines()) + "\n"
    if not report.passed:
        raise CommandFailed(EXIT_VERIFY, text)
    return text


COMMANDS = {
    "spectral": (run_spectral, "spectral radius and its trace terms", "text"),
    "star": (run_star, "Kleene star and cumulative trace", "json"),
    "solve": (run_solve, "solve an optimization problem document", "json"),
    "schedule": (run_schedule, "schedule a project document", "text"),
    "verify": (run_verify, "check a solution against a brute-force grid", "text"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tropopt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text, default_format) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input", nargs="?", default="-", help="JSON file (default: stdin)")
        p.add_argument("-o", "--output", default="-", help="output file (default: stdout)")
        p.add_argument("--semifield", choices=sorted(SEMIFIELDS), default=None,
                       help="override the document's semifield")
        p.add_argument("--format", choices=("text", "json"), default=default_format)
        if name == "verify":
            p.add_argument("--grid", default=None, metavar="LO:HI:STEP",
                           help="grid box (default: radius 3 around the canonical solution)")
            p.add_argument("--samples", type=int, default=50)
            p.add_argument("--seed", type=int, default=0)
    return parser


def _join_grid(argv: List[str]) -> List[str]:
    # "--grid -2:4:1/2" would otherwise be read as an option
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--grid" and i + 1 < len(argv):
            out.append(f"--grid={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def _emit(text: str, path: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    argv = _join_grid(list(sys.argv[1:] if argv is None else argv))
    args = build_parser().parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        _emit(handler(args), args.output)
        return EXIT_OK
    except CommandFailed as exc:
        _emit(exc.payload, args.output)
        return exc.code
    except (ParseError, SemifieldMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DimensionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except (SolverError, TropicalError) as exc:
        diagnostics = {"error": type(exc).__name__, "message": str(exc)}
        for key, value in getattr(exc, "diagnostics", {}).items():
            diagnostics[key] = _plain(value)
        _emit(io.dump_json({"diagnostics": diagnostics}), args.output)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
