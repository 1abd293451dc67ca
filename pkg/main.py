"""algmat command line: algebraic matroids, differential representations, flock shifts"""
import argparse
import logging
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import psutil

import groebner
from config import config
from construct import (
    char0_representation, differential_matroid, flock_name_map, frobenius_flock_shift,
    implicitize, sample_point, specialize, validate_specialization
)
from errors import AlgMatError, NoValidPoint, UsageError
from groebner import buchberger, elimination_ideal
from ideal_file import IdealFile, load_ideal_file
from matroid import (
    Matroid, algebraic_matroid, circuits, distinguishing_sets, isomorphism_labels, matroid_equal,
    matroid_isomorphic
)
from poly import parse_order, print_poly
from utils import canonical_json, hash_string, parse_naturals, split_list

logger = logging.getLogger(__name__)

SCHEMA = 1


class CommandFailed(Exception):
    """A command that produced outputs before failing; the outputs are still reported"""

    def __init__(self, outputs: Dict[str, Any], error: AlgMatError):
        super().__init__(str(error))
        self.outputs = outputs
        self.error = error


def _error_json(e: Exception) -> Dict[str, str]:
    return {"type": type(e).__name__, "message": str(e)}


@dataclass
class RunReport:
    command: str
    input_digest: str
    outputs: Dict[str, Any]
    timing: Dict[str, float] = field(default_factory=dict)
    resources: Dict[str, int] = field(default_factory=dict)
    error: Optional[AlgMatError] = None

    def to_json(self, include_timing: bool = False) -> Dict[str, Any]:
        data = {
            "schema": SCHEMA,
            "command": self.command,
            "input_digest": self.input_digest,
            "outputs": self.outputs,
        }
        if include_timing:
            data["timing"] = self.timing
            data["resources"] = self.resources
        if self.error is not None:
            data["error"] = _error_json(self.error)
        return data


# ============================================================================
# Helpers
# ============================================================================

def setup_logging(level: Optional[str] = None) -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if config.run.log_file:
        handlers.append(logging.FileHandler(config.run.log_file))
    logging.basicConfig(
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        level=(level or config.run.log_level).upper(),
        handlers=handlers,
        force=True
    )


@contextmanager
def _overrides(args: argparse.Namespace):
    """Apply CLI limits to the global config for the duration of one command"""
    saved = (config.groebner.max_pairs, config.run.jobs, config.sampling.seed, config.sampling.bound)
    if getattr(args, "max_pairs", None):
        config.groebner.max_pairs = args.max_pairs
    if getattr(args, "jobs", None):
        config.run.jobs = args.jobs
    if getattr(args, "seed", None) is not None:
        config.sampling.seed = args.seed
    if getattr(args, "bound", None):
        config.sampling.bound = args.bound
    try:
        yield
    finally:
        config.groebner.max_pairs, config.run.jobs, config.sampling.seed, config.sampling.bound = saved


def _polys(ideal) -> List[str]:
    return [print_poly(g) for g in ideal.generators]


def _ideal_json(ideal) -> Dict[str, Any]:
    return {"field": str(ideal.ring.field), "vars": list(ideal.ring.vars), "generators": _polys(ideal)}


def _basis_json(ideal, order_name: Optional[str]) -> Optional[Dict[str, Any]]:
    if not order_name:
        return None
    order = parse_order(order_name)
    gb = buchberger(ideal, order)
    return {"order": str(order), "basis": [print_poly(g) for g in gb.basis]}


def _point(f: IdealFile, text: str) -> List:
    values = split_list(text)
    if len(values) != len(f.vars):
        raise UsageError(f"--point has {len(values)} coordinates, {len(f.vars)} variables declared")
    return [f.field.parse_scalar(v) for v in values]


def _named_sets(M: Matroid, masks: Sequence[int]) -> List[List[str]]:
    return [M.names(m) for m in masks]


def _require_parameterization(f: IdealFile):
    F = f.parameterization()
    if F is None:
        raise UsageError(f"{f.path} has no 'param'/'map' block")
    return F


# ============================================================================
# Commands
# ============================================================================

def _cmd_matroid(f: IdealFile, args) -> Dict[str, Any]:
    return {"matroid": algebraic_matroid(f.ideal()).to_json()}


def _cmd_diff_matroid(f: IdealFile, args) -> Dict[str, Any]:
    D = differential_matroid(f.ideal(), use_reduced_gb=args.reduced_gb_generators)
    return D.to_json()


def _cmd_circuits(f: IdealFile, args) -> Dict[str, Any]:
    M = algebraic_matroid(f.ideal())
    return {"circuits": _named_sets(M, circuits(M))}


def _cmd_bases(f: IdealFile, args) -> Dict[str, Any]:
    M = algebraic_matroid(f.ideal())
    return {"rank": M.rank, "bases": [[M.labels[i] for i in b] for b in M.sorted_bases()]}


def _cmd_jacobian(f: IdealFile, args) -> Dict[str, Any]:
    D = differential_matroid(f.ideal())
    out = {"jacobian": D.jacobian.to_strings(), "rep": D.rep.to_strings()}
    basis = _basis_json(f.ideal(), args.order)
    if basis:
        out["groebner_basis"] = basis
    return out


def _cmd_represent(f: IdealFile, args) -> Dict[str, Any]:
    if args.point:
        points = [_point(f, p) for p in args.point]
    else:
        F = _require_parameterization(f)
        samples = args.samples or config.sampling.candidates
        points = [sample_point(F, config.sampling.seed + k, config.sampling.bound) for k in range(samples)]
    matrix, report = char0_representation(f.ideal(), points)
    return {
        "matrix": [[str(x) for x in row] for row in matrix],
        "point": [str(z) for z in report.point],
        "matroid": report.matroid_at_point.to_json(),
    }


def _cmd_specialize(f: IdealFile, args) -> Dict[str, Any]:
    if not args.point:
        raise UsageError("specialize needs --point")
    D = differential_matroid(f.ideal())
    point = _point(f, args.point[0])
    report = validate_specialization(D, point)
    outputs: Dict[str, Any] = {"report": report.to_json(), "matrix": None}
    try:
        matrix = specialize(D, point)
    except AlgMatError as e:
        raise CommandFailed(outputs, e) from e
    outputs["matrix"] = [[str(x) for x in row] for row in matrix]
    if not report.valid:
        raise CommandFailed(outputs, NoValidPoint([report]))
    return outputs


def _cmd_implicitize(f: IdealFile, args) -> Dict[str, Any]:
    ideal = implicitize(_require_parameterization(f))
    out = {"ideal": _ideal_json(ideal)}
    basis = _basis_json(ideal, args.order)
    if basis:
        out["groebner_basis"] = basis
    return out


def _cmd_sample(f: IdealFile, args) -> Dict[str, Any]:
    point = sample_point(_require_parameterization(f), config.sampling.seed, config.sampling.bound)
    return {"point": [str(z) for z in point]}


def _cmd_flock(f: IdealFile, args) -> Dict[str, Any]:
    ideal = f.ideal()
    p = ideal.ring.field.characteristic
    if args.p is not None and args.p != p:
        raise UsageError(f"--p {args.p} does not match the characteristic {p} of {ideal.ring.field}")
    n = ideal.n
    if args.a is not None or args.b is not None:
        a = parse_naturals(args.a or "0", n)
        b = parse_naturals(args.b or "0", n)
    elif f.shift is not None:
        a, b = f.shift
    else:
        raise UsageError("flock needs --a/--b or a 'shift' directive")
    shifted = frobenius_flock_shift(ideal, a, b)
    names = flock_name_map(ideal.ring)
    fresh_of = {orig: fresh for fresh, orig in names.items()}
    D = differential_matroid(shifted)
    return {
        "ideal": _ideal_json(shifted),
        "name_map": names,
        "matroid": D.diff_matroid.to_json(),
        "loops": [fresh_of[v] for v in D.loops()],
    }


def _cmd_eliminate(f: IdealFile, args) -> Dict[str, Any]:
    keep = split_list(args.keep) if args.keep else f.keep
    if keep is None:
        raise UsageError("eliminate needs --keep or a 'keep' directive")
    ideal = elimination_ideal(f.ideal(), keep)
    out = {"ideal": _ideal_json(ideal)}
    basis = _basis_json(ideal, args.order)
    if basis:
        out["groebner_basis"] = basis
    return out


def _cmd_compare(args) -> Dict[str, Any]:
    sides = [("algebraic", p) for p in args.algebraic or []] + [("differential", p) for p in args.differential or []]
    if len(sides) != 2:
        raise UsageError("compare needs exactly two of --algebraic/--differential")
    matroids = []
    for kind, path in sides:
        ideal = load_ideal_file(path).ideal()
        matroids.append(algebraic_matroid(ideal) if kind == "algebraic" else differential_matroid(ideal).diff_matroid)
    M1, M2 = matroids
    equal = matroid_equal(M1, M2)
    out: Dict[str, Any] = {
        "equal": equal,
        "kinds": [kind for kind, _ in sides],
        "distinguishing_sets": [] if equal else _named_sets(M1, distinguishing_sets(M1, M2)),
    }
    if M1.n <= config.matroid.max_isomorphism_ground_set:
        perm = matroid_isomorphic(M1, M2)
        out["isomorphism"] = None if perm is None else isomorphism_labels(M1, M2, perm)
    return out


COMMANDS: Dict[str, Callable[[IdealFile, argparse.Namespace], Dict[str, Any]]] = {
    "matroid": _cmd_matroid,
    "diff-matroid": _cmd_diff_matroid,
    "circuits": _cmd_circuits,
    "bases": _cmd_bases,
    "jacobian": _cmd_jacobian,
    "represent": _cmd_represent,
    "specialize": _cmd_specialize,
    "implicitize": _cmd_implicitize,
    "sample": _cmd_sample,
    "flock": _cmd_flock,
    "eliminate": _cmd_eliminate,
}


def run(command: str, args: argparse.Namespace) -> RunReport:
    """Execute one command; raises AlgMatError subclasses on failure"""
    if command != "compare" and command not in COMMANDS:
        raise UsageError(f"unknown command '{command}'")
    paths = (args.algebraic or []) + (args.differential or []) if command == "compare" else [args.file]
    digest = hash_string("\n".join(Path(p).read_text(encoding="utf-8") for p in paths))

    groebner.stats.reset()
    start = time.perf_counter()
    error = None
    with _overrides(args):
        try:
            if command == "compare":
                outputs = _cmd_compare(args)
            else:
                outputs = COMMANDS[command](load_ideal_file(args.file), args)
        except CommandFailed as failure:
            outputs, error = failure.outputs, failure.error
    elapsed = time.perf_counter() - start

    counters = groebner.stats.snapshot()
    counters["rss_bytes"] = psutil.Process().memory_info().rss
    logger.info(f"{command} finished in {elapsed:.3f}s: {counters}")
    return RunReport(command, digest, outputs, {"seconds": round(elapsed, 6)}, counters, error)


# ============================================================================
# Reporting
# ============================================================================

def _text_lines(key: str, value: Any, indent: str = "") -> List[str]:
    if isinstance(value, dict):
        lines = [f"{indent}{key}:"]
        for k in sorted(value):
            lines.extend(_text_lines(k, value[k], indent + "  "))
        return lines
    if isinstance(value, list) and value and isinstance(value[0], list):
        return [f"{indent}{key}:"] + [f"{indent}  [{', '.join(map(str, row))}]" for row in value]
    if isinstance(value, list):
        return [f"{indent}{key}: {', '.join(map(str, value))}"]
    return [f"{indent}{key}: {value}"]


def format_text(report: RunReport, include_timing: bool = False) -> str:
    lines = [f"{report.command} ({report.input_digest[:12]})"]
    if report.command == "compare":
        lines.append("equal" if report.outputs["equal"] else "not equal")
    for key in sorted(report.outputs):
        lines.extend(_text_lines(key, report.outputs[key]))
    if include_timing:
        lines.extend(_text_lines("timing", report.timing))
        lines.extend(_text_lines("resources", report.resources))
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--order", choices=["lex", "grevlex"], help="also report a Groebner basis in this order")
    common.add_argument("--seed", type=int, help="sampling seed")
    common.add_argument("--bound", type=int, help="integer sampling bound over QQ")
    common.add_argument("--jobs", type=int, help="concurrent independence checks")
    common.add_argument("--max-pairs", type=int, help="S-pair budget per Groebner computation")
    common.add_argument("--timing", action="store_true", help="include timing and resource counters")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")

    parser = argparse.ArgumentParser(prog="algmat", description="Algebraic matroids of prime ideals.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in COMMANDS:
        cmd = sub.add_parser(name, parents=[common])
        cmd.add_argument("file", help="ideal file")
        if name == "diff-matroid":
            cmd.add_argument("--reduced-gb-generators", action="store_true",
                             help="cross-check against the reduced Groebner basis presentation")
        if name in ("represent", "specialize"):
            cmd.add_argument("--point", action="append", help="comma-separated coordinates")
        if name == "represent":
            cmd.add_argument("--samples", type=int, help="number of sampled candidate points")
        if name == "flock":
            cmd.add_argument("--p", type=int, help="expected characteristic")
            cmd.add_argument("--a", help="comma vector, or one value for all variables")
            cmd.add_argument("--b", help="comma vector, or one value for all variables")
        if name == "eliminate":
            cmd.add_argument("--keep", help="variables to keep")

    cmp = sub.add_parser("compare", parents=[common])
    cmp.add_argument("--algebraic", action="append", help="ideal file whose algebraic matroid is compared")
    cmp.add_argument("--differential", action="append", help="ideal file whose differential matroid is compared")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code else 0
    setup_logging(args.log_level)

    try:
        report = run(args.command, args)
    except AlgMatError as e:
        logger.debug("command failed", exc_info=True)
        if args.json:
            print(canonical_json({"schema": SCHEMA, "error": _error_json(e)}))
        else:
            print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except (OSError, ValueError) as e:
        if args.json:
            print(canonical_json({"schema": SCHEMA, "error": _error_json(e)}))
        else:
            print(f"error: {e}", file=sys.stderr)
        return 1

    if args.json:
        print(canonical_json(report.to_json(args.timing)))
    else:
        print(format_text(report, args.timing))
    if report.error is not None:
        if not args.json:
            print(f"error: {type(report.error).__name__}: {report.error}", file=sys.stderr)
        return report.error.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
