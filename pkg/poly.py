"""
Sparse multivariate polynomials over a FieldSpec.

Terms live in a dict {exponent tuple: raw coefficient}; term order is a
view applied when sorting (GrevLex for canonical printing, any TermOrder
during Groebner basis runs).
"""
import re
import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from arith import FieldSpec, Raw, Scalar
from config import config
from errors import (
    DivisionByZero, DuplicateVariable, ExponentOverflow, FieldMismatch,
    IndexOutOfRange, NameCollision, PolynomialSyntaxError, RingMismatch,
    UnknownVariable
)

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]

_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


# ============================================================================
# Rings
# ============================================================================

@dataclass(frozen=True)
class Ring:
    field: FieldSpec
    vars: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        seen = set()
        for name in self.vars:
            if not name or not _IDENT_RE.match(name):
                raise PolynomialSyntaxError(f"invalid variable name '{name}'")
            if name in seen:
                raise DuplicateVariable(f"variable '{name}' declared twice")
            seen.add(name)
        gen = self.field.generator_name
        if gen is not None and gen in seen:
            raise NameCollision(f"variable '{gen}' collides with the field generator")

    @property
    def n(self) -> int:
        return len(self.vars)

    def index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise UnknownVariable(name) from None

    def indices(self, names: Iterable[str]) -> List[int]:
        return [self.index(name) for name in names]

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(self.field.one())

    def constant(self, value: Union[Raw, Scalar, int, Fraction]) -> "Polynomial":
        if isinstance(value, (Scalar, int, Fraction)):
            value = self.field(value).value
        return Polynomial(self, {(0,) * self.n: value})

    def var(self, name: str) -> "Polynomial":
        i = self.index(name)
        return Polynomial(self, {tuple(1 if j == i else 0 for j in range(self.n)): self.field.one()}, _trusted=True)

    def gens(self) -> List["Polynomial"]:
        return [self.var(name) for name in self.vars]

    def monomial(self, exponents: Sequence[int], coeff: Optional[Raw] = None) -> "Polynomial":
        coeff = self.field.one() if coeff is None else coeff
        return Polynomial(self, {tuple(exponents): coeff})

    def parse(self, text: str) -> "Polynomial":
        return parse_poly(text, self)

    def extend(self, names: Sequence[str]) -> "Ring":
        """Append fresh variables"""
        clash = [name for name in names if name in self.vars]
        if clash:
            raise NameCollision(f"variables {clash} already exist")
        return Ring(self.field, self.vars + tuple(names))

    def restrict(self, names: Sequence[str]) -> "Ring":
        """Sub-ring on `names`, keeping this ring's variable order"""
        wanted = set(names)
        for name in wanted:
            self.index(name)
        return Ring(self.field, tuple(v for v in self.vars if v in wanted))

    def __str__(self) -> str:
        return f"{self.field}[{', '.join(self.vars)}]"


# ============================================================================
# Term orders
# ============================================================================

class TermOrder:
    """A monomial order given by a sort key (larger key = larger monomial)"""

    name = "order"

    def key(self, m: Monomial) -> tuple:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Lex(TermOrder):
    name = "lex"

    def key(self, m: Monomial) -> tuple:
        return m


@dataclass(frozen=True)
class GrevLex(TermOrder):
    name = "grevlex"

    def key(self, m: Monomial) -> tuple:
        return (sum(m), tuple(-e for e in reversed(m)))


@dataclass(frozen=True)
class Block(TermOrder):
    """Compares the eliminated sub-exponents under `outer` first, then the rest under `inner`"""
    eliminated: Tuple[int, ...]
    arity: int
    outer: TermOrder = dc_field(default_factory=GrevLex)
    inner: TermOrder = dc_field(default_factory=GrevLex)

    name = "block"

    def __post_init__(self):
        eliminated = tuple(sorted(set(self.eliminated)))
        object.__setattr__(self, "eliminated", eliminated)
        if not eliminated or len(eliminated) >= self.arity:
            raise ValueError("block order must eliminate a nonempty proper subset")
        if eliminated[0] < 0 or eliminated[-1] >= self.arity:
            raise IndexOutOfRange(f"eliminated indices {eliminated} outside 0..{self.arity - 1}")
        kept = tuple(i for i in range(self.arity) if i not in eliminated)
        object.__setattr__(self, "_kept", kept)

    @classmethod
    def eliminating(cls, ring: Ring, names: Iterable[str],
                    outer: Optional[TermOrder] = None, inner: Optional[TermOrder] = None) -> "Block":
        return cls(tuple(ring.indices(names)), ring.n, outer or GrevLex(), inner or GrevLex())

    def key(self, m: Monomial) -> tuple:
        return (self.outer.key(tuple(m[i] for i in self.eliminated)),
                self.inner.key(tuple(m[i] for i in self._kept)))

    def __str__(self) -> str:
        return f"block({self.outer};{self.inner}|{','.join(map(str, self.eliminated))})"


def parse_order(name: str) -> TermOrder:
    orders = {"lex": Lex(), "grevlex": GrevLex()}
    try:
        return orders[name.lower()]
    except KeyError:
        raise ValueError(f"unknown term order '{name}' (expected lex or grevlex)") from None


def compare_monomials(a: Monomial, b: Monomial, order: TermOrder) -> int:
    if len(a) != len(b):
        raise RingMismatch("monomials of different arity")
    ka, kb = order.key(a), order.key(b)
    return (ka > kb) - (ka < kb)


_GREVLEX = GrevLex()


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def _check_exponents(f_max: Sequence[int], g_max: Sequence[int]) -> None:
    limit = config.groebner.max_exponent
    for x, y in zip(f_max, g_max):
        if x + y > limit:
            raise ExponentOverflow(f"exponent {x + y} exceeds the limit {limit}")


# ============================================================================
# Polynomials
# ============================================================================

class Polynomial:
    """Immutable sparse polynomial; the zero polynomial has no terms"""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: Ring, terms: Optional[Dict[Monomial, Raw]] = None, _trusted: bool = False):
        self.ring = ring
        if terms is None:
            terms = {}
        elif not _trusted:
            is_zero = ring.field.is_zero
            terms = {m: c for m, c in terms.items() if not is_zero(c)}
        self._terms = terms
        self._hash = None

    # --- inspection -----------------------------------------------------

    def items(self, order: TermOrder = _GREVLEX) -> List[Tuple[Monomial, Raw]]:
        """(monomial, raw coefficient) pairs, descending under `order`"""
        return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def terms(self, order: TermOrder = _GREVLEX) -> List[Tuple[Scalar, Monomial]]:
        field = self.ring.field
        return [(Scalar(field, c), m) for m, c in self.items(order)]

    def coefficient(self, m: Monomial) -> Scalar:
        return Scalar(self.ring.field, self._terms.get(tuple(m), self.ring.field.zero()))

    def constant_coefficient(self) -> Raw:
        return self._terms.get((0,) * self.ring.n, self.ring.field.zero())

    def monomials(self) -> List[Monomial]:
        return [m for m, _ in self.items()]

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def total_degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def max_exponents(self) -> List[int]:
        out = [0] * self.ring.n
        for m in self._terms:
            for i, e in enumerate(m):
                if e > out[i]:
                    out[i] = e
        return out

    def leading_term(self, order: TermOrder = _GREVLEX) -> Tuple[Monomial, Raw]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self._terms, key=order.key)
        return m, self._terms[m]

    def leading_monomial(self, order: TermOrder = _GREVLEX) -> Monomial:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order: TermOrder = _GREVLEX) -> Scalar:
        return Scalar(self.ring.field, self.leading_term(order)[1])

    def support_indices(self) -> FrozenSet[int]:
        out = set()
        for m in self._terms:
            out.update(i for i, e in enumerate(m) if e)
        return frozenset(out)

    def support(self) -> FrozenSet[str]:
        """Variables appearing in some monomial"""
        return frozenset(self.ring.vars[i] for i in self.support_indices())

    # --- arithmetic -------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if other.ring != self.ring:
            raise RingMismatch(f"{other.ring} vs {self.ring}")

    def _lift(self, other) -> Optional["Polynomial"]:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (Scalar, int, Fraction)) and not isinstance(other, bool):
            return self.ring.constant(other)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        field = self.ring.field
        terms = dict(self._terms)
        for m, c in other._terms.items():
            if m in terms:
                s = field.add(terms[m], c)
                if field.is_zero(s):
                    del terms[m]
                else:
                    terms[m] = s
            else:
                terms[m] = c
        return Polynomial(self.ring, terms, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.field.neg
        return Polynomial(self.ring, {m: neg(c) for m, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c: Raw) -> "Polynomial":
        field = self.ring.field
        if field.is_zero(c):
            return self.ring.zero()
        return Polynomial(self.ring, {m: field.mul(c, v) for m, v in self._terms.items()}, _trusted=True)

    def mul_term(self, mono: Monomial, c: Raw) -> "Polynomial":
        field = self.ring.field
        if field.is_zero(c):
            return self.ring.zero()
        _check_exponents(self.max_exponents(), mono)
        return Polynomial(self.ring,
                          {monomial_mul(m, mono): field.mul(c, v) for m, v in self._terms.items()},
                          _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)) and not isinstance(other, bool):
            return self.scale(self.ring.field(other).value)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        if not self._terms or not other._terms:
            return self.ring.zero()
        _check_exponents(self.max_exponents(), other.max_exponents())
        field = self.ring.field
        add, mul, is_zero = field.add, field.mul, field.is_zero
        terms: Dict[Monomial, Raw] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                c = mul(ca, cb)
                if m in terms:
                    terms[m] = add(terms[m], c)
                else:
                    terms[m] = c
        return Polynomial(self.ring, {m: c for m, c in terms.items() if not is_zero(c)}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative polynomial power")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def monic(self, order: TermOrder = _GREVLEX) -> "Polynomial":
        if not self._terms:
            return self
        return self.scale(self.ring.field.inv(self.leading_term(order)[1]))

    # --- calculus and evaluation -------------------------------------------

    def derivative(self, i: int) -> "Polynomial":
        """Formal partial derivative; exponents are reduced into the field"""
        if not 0 <= i < self.ring.n:
            raise IndexOutOfRange(f"variable index {i} outside 0..{self.ring.n - 1}")
        field = self.ring.field
        terms: Dict[Monomial, Raw] = {}
        for m, c in self._terms.items():
            e = m[i]
            if e == 0:
                continue
            coeff = field.mul(c, field.from_int(e))
            if field.is_zero(coeff):
                continue
            terms[m[:i] + (e - 1,) + m[i + 1:]] = coeff
        return Polynomial(self.ring, terms, _trusted=True)

    def gradient(self) -> List["Polynomial"]:
        return [self.derivative(i) for i in range(self.ring.n)]

    def evaluate(self, point: Sequence[Union[Scalar, int, Fraction]]) -> Scalar:
        field = self.ring.field
        if len(point) != self.ring.n:
            raise IndexOutOfRange(f"point has {len(point)} coordinates, ring has {self.ring.n} variables")
        values = []
        for z in point:
            if isinstance(z, Scalar) and z.field != field and not field.embeds(z.field):
                raise FieldMismatch(f"coordinate in {z.field}, ring over {field}")
            values.append(field(z).value)
        powers: Dict[Tuple[int, int], Raw] = {}
        total = field.zero()
        for m, c in self._terms.items():
            term = c
            for i, e in enumerate(m):
                if e:
                    key = (i, e)
                    if key not in powers:
                        powers[key] = field.pow(values[i], e)
                    term = field.mul(term, powers[key])
            total = field.add(total, term)
        return Scalar(field, total)

    def change_ring(self, ring: Ring, index_map: Optional[Sequence[int]] = None) -> "Polynomial":
        """
        Move into `ring`; index_map[i] is the target index of variable i
        (default: match by name). Coefficients are embedded from subfields.
        """
        if index_map is None:
            index_map = [ring.vars.index(name) if name in ring.vars else None for name in self.ring.vars]
        field = ring.field
        if field != self.ring.field and not field.embeds(self.ring.field):
            raise FieldMismatch(f"cannot move {self.ring.field} coefficients into {field}")
        terms: Dict[Monomial, Raw] = {}
        for m, c in self._terms.items():
            target = [0] * ring.n
            for i, e in enumerate(m):
                if e:
                    if index_map[i] is None:
                        raise RingMismatch(f"variable {self.ring.vars[i]} has no image in {ring}")
                    target[index_map[i]] += e
            terms[tuple(target)] = field.embed(self.ring.field, c)
        return Polynomial(ring, terms)

    def rename(self, ring: Ring) -> "Polynomial":
        """Same exponents, new variable names (positional)"""
        if ring.n != self.ring.n or ring.field != self.ring.field:
            raise RingMismatch(f"cannot rename {self.ring} to {ring}")
        return Polynomial(ring, self._terms, _trusted=True)

    # --- identity ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (Scalar, int, Fraction)) and not isinstance(other, bool):
            field = self.ring.field
            if isinstance(other, Scalar) and other.field != field and field.embeds(other.field):
                other = field(other)
            return self.is_constant() and Scalar(field, self.constant_coefficient()) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(Scalar(self.ring.field, self.constant_coefficient()))
            else:
                self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __str__(self) -> str:
        return print_poly(self)

    def __repr__(self) -> str:
        return f"Polynomial({print_poly(self)!r} in {self.ring})"


# ============================================================================
# Parsing and printing
# ============================================================================

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*^/()]))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN_RE.match(text, pos)
        if not match:
            offset = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolynomialSyntaxError(f"unexpected character '{text[offset]}'", offset, text)
        number, ident, op = match.groups()
        start = match.start(match.lastindex)
        if number is not None:
            tokens.append(("num", number, start))
        elif ident is not None:
            tokens.append(("ident", ident, start))
        else:
            tokens.append(("op", "^" if op == "**" else op, start))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent over: expr := term (('+'|'-') term)* ; term := factor ('*' factor)* ;
    factor := ('+'|'-') factor | power ; power := atom ('^' INT)? ; atom := INT ('/' INT)? | IDENT | '(' expr ')'"""

    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> Tuple[str, str, int]:
        token = self.tokens[self.i]
        self.i += 1
        return token

    def error(self, message: str, token=None):
        token = token or self.peek()
        return PolynomialSyntaxError(message, token[2], self.text)

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise self.error("empty polynomial")
        result = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected '{self.peek()[1]}'")
        return result

    def expr(self) -> Polynomial:
        result = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> Polynomial:
        result = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            result = result * self.factor()
        return result

    def factor(self) -> Polynomial:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.factor()
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.factor()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            token = self.take()
            if token[0] != "num":
                raise self.error("exponent must be a natural number", token)
            return base ** int(token[1])
        return base

    def atom(self) -> Polynomial:
        token = self.take()
        kind, value, pos = token
        field = self.ring.field
        if kind == "num":
            if self.peek()[:2] == ("op", "/"):
                self.take()
                den = self.take()
                if den[0] != "num":
                    raise self.error("'/' is only allowed inside rational literals", den)
                if int(den[1]) == 0:
                    raise DivisionByZero(f"rational literal with zero denominator at position {den[2]}")
                return self.ring.constant(field.from_fraction(Fraction(int(value), int(den[1]))))
            return self.ring.constant(field.from_int(int(value)))
        if kind == "ident":
            if value in self.ring.vars:
                return self.ring.var(value)
            if value == field.generator_name:
                return self.ring.constant(field.gen())
            raise UnknownVariable(value, pos, self.text)
        if (kind, value) == ("op", "("):
            inner = self.expr()
            if self.peek()[:2] != ("op", ")"):
                raise self.error("expected ')'")
            self.take()
            return inner
        if kind == "end":
            raise self.error("unexpected end of input", token)
        raise self.error(f"unexpected '{value}'", token)


def parse_poly(text: str, ring: Ring) -> Polynomial:
    return _Parser(text, ring).parse()


def _format_monomial(m: Monomial, names: Sequence[str]) -> str:
    return "*".join(name if e == 1 else f"{name}^{e}" for name, e in zip(names, m) if e)


def print_poly(f: Polynomial) -> str:
    """Terms in descending GrevLex order, in the parse grammar"""
    if f.is_zero():
        return "0"
    field = f.ring.field
    parts: List[Tuple[bool, str]] = []
    for m, c in f.items():
        text = field.format(c)
        mono = _format_monomial(m, f.ring.vars)
        compound = " + " in text or " - " in text
        negative = False
        if compound:
            text = f"({text})"
        elif text.startswith("-"):
            negative, text = True, text[1:]
        if not mono:
            body = text
        elif text == "1":
            body = mono
        else:
            body = f"{text}*{mono}"
        parts.append((negative, body))
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for negative, body in parts[1:]:
        out += (" - " if negative else " + ") + body
    return out
