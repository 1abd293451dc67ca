"""
Line-oriented ideal files.

    # comment
    field GF(5)[alpha]/(alpha^2 - alpha + 2)
    vars x1 x2 x3
    prime
    gens
      x1 - x2^5
    end
    param u v
    map
      x1 = u
      ...
    end
    keep x1 x2
    shift 1,0,0 0
    default matroid
    assert rank 2
"""
import logging
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import List, Optional, Tuple, Union

from arith import FieldSpec, parse_field
from construct import Parameterization
from errors import AlgMatError, DuplicateVariable, IdealFileError, PolynomialSyntaxError, UnknownField
from groebner import IdealPresentation
from poly import Polynomial, Ring, print_poly
from utils import parse_naturals, split_list

logger = logging.getLogger(__name__)

COMMANDS = (
    "matroid", "diff-matroid", "circuits", "bases", "jacobian", "represent", "specialize",
    "implicitize", "sample", "flock", "compare", "eliminate",
)

ASSERTION_KINDS = ("rank", "bases", "circuits", "independent", "dependent", "loops", "equal")


@dataclass(frozen=True)
class Assertion:
    kind: str
    args: Tuple[str, ...]
    line: int = dc_field(default=0, compare=False)

    def __str__(self) -> str:
        return " ".join(("assert", self.kind) + self.args)


@dataclass
class IdealFile:
    field: FieldSpec
    vars: Tuple[str, ...]
    generators: Tuple[Polynomial, ...] = ()
    prime: bool = False
    params: Tuple[str, ...] = ()
    components: Tuple[Polynomial, ...] = ()
    keep: Optional[Tuple[str, ...]] = None
    shift: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]] = None
    default: Optional[str] = None
    assertions: Tuple[Assertion, ...] = ()
    path: Optional[Path] = dc_field(default=None, compare=False)

    @property
    def ring(self) -> Ring:
        return Ring(self.field, self.vars)

    def ideal(self) -> IdealPresentation:
        return IdealPresentation(self.ring, self.generators, self.prime)

    def parameterization(self) -> Optional[Parameterization]:
        if not self.params:
            return None
        return Parameterization(Ring(self.field, self.params), self.components, self.vars)

    def resolve(self, relative: str) -> Path:
        base = self.path.parent if self.path else Path(".")
        return base / relative


# ============================================================================
# Parsing
# ============================================================================

class _FileParser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.field: Optional[FieldSpec] = None
        self.vars: Optional[Tuple[str, ...]] = None
        self.params: Tuple[str, ...] = ()
        self.out = {}
        self.assertions: List[Assertion] = []

    @staticmethod
    def _strip(line: str) -> str:
        return line.split("#", 1)[0].rstrip()

    def _words(self, rest: str) -> Tuple[str, ...]:
        return tuple(split_list(rest))

    def _ring(self, lineno: int) -> Ring:
        if self.field is None or self.vars is None:
            raise IdealFileError("'field' and 'vars' must come before polynomials", lineno, 1)
        return Ring(self.field, self.vars)

    def _poly(self, text: str, ring: Ring, lineno: int, column: int) -> Polynomial:
        try:
            return ring.parse(text)
        except PolynomialSyntaxError as e:
            raise IdealFileError(str(e), lineno, column + e.position) from e

    def _declared(self, names: Tuple[str, ...], lineno: int, column: int) -> None:
        unknown = [n for n in names if n not in (self.vars or ())]
        if unknown:
            raise IdealFileError(f"undeclared variables {unknown}", lineno, column)

    def _block(self, start: int) -> Tuple[List[Tuple[int, int, str]], int]:
        """Lines up to 'end' as (line number, column, text); returns the index after 'end'"""
        body = []
        i = start
        while i < len(self.lines):
            raw = self._strip(self.lines[i])
            text = raw.strip()
            if text == "end":
                return body, i + 1
            if text:
                body.append((i + 1, len(raw) - len(raw.lstrip()) + 1, text))
            i += 1
        raise IdealFileError("block is missing 'end'", start, 1)

    def parse(self) -> IdealFile:
        i = 0
        while i < len(self.lines):
            raw = self._strip(self.lines[i])
            lineno = i + 1
            i += 1
            if not raw.strip():
                continue
            column = len(raw) - len(raw.lstrip()) + 1
            keyword, _, rest = raw.strip().partition(" ")
            arg_column = column + len(keyword) + 1

            if keyword == "field":
                try:
                    self.field = parse_field(rest)
                except AlgMatError as e:
                    raise UnknownField(f"unknown field '{rest.strip()}': {e}", lineno, arg_column) from e
            elif keyword == "vars":
                self.vars = self._words(rest)
                try:
                    self._ring(lineno)
                except DuplicateVariable as e:
                    raise DuplicateVariable(f"line {lineno}: {e}") from e
                except AlgMatError as e:
                    raise IdealFileError(str(e), lineno, arg_column) from e
            elif keyword == "prime":
                self.out["prime"] = True
            elif keyword == "gens":
                ring = self._ring(lineno)
                body, i = self._block(i)
                gens = []
                for ln, col, text in body:
                    g = self._poly(text, ring, ln, col)
                    if g.is_zero():
                        raise IdealFileError("zero generator", ln, col)
                    gens.append(g)
                self.out["generators"] = tuple(gens)
            elif keyword == "param":
                self.params = self._words(rest)
                try:
                    Ring(self._ring(lineno).field, self.params).extend(self.vars)
                except DuplicateVariable as e:
                    raise DuplicateVariable(f"line {lineno}: {e}") from e
                except AlgMatError as e:
                    raise IdealFileError(f"bad parameter list: {e}", lineno, arg_column) from e
            elif keyword == "map":
                self.out["components"], i = self._map(lineno, i)
            elif keyword == "keep":
                names = self._words(rest)
                self._declared(names, lineno, arg_column)
                self.out["keep"] = names
            elif keyword == "shift":
                words = rest.split()
                if len(words) != 2:
                    raise IdealFileError("shift needs two vectors", lineno, arg_column)
                n = len(self.vars or ())
                try:
                    self.out["shift"] = tuple(tuple(parse_naturals(w, n)) for w in words)
                except ValueError as e:
                    raise IdealFileError(str(e), lineno, arg_column) from e
            elif keyword == "default":
                command = rest.strip()
                if command not in COMMANDS:
                    raise IdealFileError(f"unknown command '{command}'", lineno, arg_column)
                self.out["default"] = command
            elif keyword == "assert":
                self.assertions.append(self._assertion(rest, lineno, arg_column))
            else:
                raise IdealFileError(f"unknown directive '{keyword}'", lineno, column)

        if self.field is None:
            raise IdealFileError("missing 'field'", len(self.lines), 1)
        if self.vars is None:
            raise IdealFileError("missing 'vars'", len(self.lines), 1)
        if self.params and "components" not in self.out:
            raise IdealFileError("'param' without a 'map' block", len(self.lines), 1)
        return IdealFile(self.field, self.vars, params=self.params,
                         assertions=tuple(self.assertions), **self.out)

    def _map(self, lineno: int, start: int) -> Tuple[Tuple[Polynomial, ...], int]:
        if not self.params:
            raise IdealFileError("'map' before 'param'", lineno, 1)
        ring = Ring(self._ring(lineno).field, self.params)
        body, end = self._block(start)
        by_name = {}
        for k, (ln, col, text) in enumerate(body):
            name, eq, expr = text.partition("=")
            if eq:
                name = name.strip()
                if name not in self.vars:
                    raise IdealFileError(f"'{name}' is not a declared variable", ln, col)
                if name in by_name:
                    raise IdealFileError(f"'{name}' mapped twice", ln, col)
                offset = col + text.index("=") + 1
            else:
                if k >= len(self.vars):
                    raise IdealFileError("more components than variables", ln, col)
                name, expr, offset = self.vars[k], text, col
            by_name[name] = self._poly(expr, ring, ln, offset)
        missing = [v for v in self.vars if v not in by_name]
        if missing:
            raise IdealFileError(f"no component for {missing}", lineno, 1)
        return tuple(by_name[v] for v in self.vars), end

    def _assertion(self, rest: str, lineno: int, column: int) -> Assertion:
        words = rest.split()
        if not words or words[0] not in ASSERTION_KINDS:
            raise IdealFileError(f"unknown assertion '{rest.strip()}'", lineno, column)
        kind, args = words[0], tuple(words[1:])
        if kind in ("rank", "bases", "circuits"):
            if len(args) != 1 or not args[0].isdigit():
                raise IdealFileError(f"'assert {kind}' needs one natural number", lineno, column)
        elif kind == "equal":
            if len(args) != 1:
                raise IdealFileError("'assert equal' needs one path", lineno, column)
        else:
            args = self._words(" ".join(args))
            if kind == "loops" and args == ("none",):
                return Assertion(kind, args, lineno)
            if not args:
                raise IdealFileError(f"'assert {kind}' needs variables", lineno, column)
            self._declared(args, lineno, column)
        return Assertion(kind, args, lineno)


def parse_ideal_file(text: str, path: Optional[Path] = None) -> IdealFile:
    parsed = _FileParser(text).parse()
    parsed.path = path
    return parsed


def load_ideal_file(path: Union[str, Path]) -> IdealFile:
    path = Path(path)
    logger.debug(f"loading ideal file {path}")
    return parse_ideal_file(path.read_text(encoding="utf-8"), path)


def format_ideal_file(f: IdealFile) -> str:
    """Normalized text: comments dropped, polynomials in the printed grammar"""
    lines = [f"field {f.field}", "vars " + " ".join(f.vars)]
    if f.prime:
        lines.append("prime")
    lines.append("gens")
    lines.extend(f"  {print_poly(g)}" for g in f.generators)
    lines.append("end")
    if f.params:
        lines.append("param " + " ".join(f.params))
        lines.append("map")
        lines.extend(f"  {v} = {print_poly(c)}" for v, c in zip(f.vars, f.components))
        lines.append("end")
    if f.keep is not None:
        lines.append("keep " + " ".join(f.keep))
    if f.shift is not None:
        lines.append("shift " + " ".join(",".join(map(str, v)) for v in f.shift))
    if f.default:
        lines.append(f"default {f.default}")
    lines.extend(str(a) for a in f.assertions)
    return "\n".join(lines) + "\n"
