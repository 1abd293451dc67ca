"""
Exact field arithmetic for the rationals, prime fields GF(p) and simple
extensions k0[t]/(m(t)).

Field specs operate on raw canonical values (Fraction, int residue, or a
coefficient tuple for extensions); `Scalar` wraps a raw value together with
its field for the public API. Polynomials store raw values directly.
"""
import re
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Any, Iterator, List, Optional, Sequence, Tuple, Union

from errors import (
    CharZeroField, DegreeTooLarge, DivisionByZero, FieldMismatch,
    InvalidField, ModulusTooLarge
)

logger = logging.getLogger(__name__)

Raw = Any


def is_prime(p: int) -> bool:
    """Trial division"""
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class FieldSpec:
    """Base for the three field variants"""

    characteristic: int = 0
    degree: int = 1

    # --- construction of raw values -----------------------------------

    def zero(self) -> Raw:
        raise NotImplementedError

    def one(self) -> Raw:
        raise NotImplementedError

    def from_int(self, n: int) -> Raw:
        raise NotImplementedError

    def from_fraction(self, q: Fraction) -> Raw:
        return self.div(self.from_int(q.numerator), self.from_int(q.denominator))

    # --- raw arithmetic ---------------------------------------------------

    def add(self, a: Raw, b: Raw) -> Raw:
        raise NotImplementedError

    def sub(self, a: Raw, b: Raw) -> Raw:
        raise NotImplementedError

    def neg(self, a: Raw) -> Raw:
        raise NotImplementedError

    def mul(self, a: Raw, b: Raw) -> Raw:
        raise NotImplementedError

    def inv(self, a: Raw) -> Raw:
        raise NotImplementedError

    def is_zero(self, a: Raw) -> bool:
        raise NotImplementedError

    def div(self, a: Raw, b: Raw) -> Raw:
        return self.mul(a, self.inv(b))

    def is_one(self, a: Raw) -> bool:
        return a == self.one()

    def pow(self, a: Raw, e: int) -> Raw:
        """Square-and-multiply; negative exponents invert first"""
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one()
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    # --- misc ---------------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.characteristic > 0

    @property
    def order(self) -> Optional[int]:
        return self.characteristic ** self.degree if self.is_finite else None

    def elements(self) -> Iterator[Raw]:
        raise NotImplementedError

    def random_raw(self, rng, bound: int) -> Raw:
        raise NotImplementedError

    def format(self, a: Raw) -> str:
        raise NotImplementedError

    def as_number(self, a: Raw) -> Optional[Union[int, Fraction]]:
        """The int or Fraction equal to `a` when it lies in the prime field (residues in 0..p-1)"""
        return a

    def contains(self, sub: "FieldSpec", a: Raw) -> bool:
        """True iff the raw value lies in the subfield `sub`"""
        return sub == self

    def embeds(self, sub: "FieldSpec") -> bool:
        return sub == self

    def embed(self, sub: "FieldSpec", a: Raw) -> Raw:
        if sub != self:
            raise FieldMismatch(f"cannot embed {sub} into {self}")
        return a

    def __call__(self, value: Any) -> "Scalar":
        """Coerce an int, Fraction, Scalar or literal string into this field"""
        if isinstance(value, Scalar):
            if value.field == self:
                return value
            if self.embeds(value.field):
                return Scalar(self, self.embed(value.field, value.value))
            raise FieldMismatch(f"{value.field} is not a subfield of {self}")
        if isinstance(value, bool):
            raise TypeError("booleans are not field elements")
        if isinstance(value, int):
            return Scalar(self, self.from_int(value))
        if isinstance(value, Fraction):
            return Scalar(self, self.from_fraction(value))
        if isinstance(value, str):
            return self.parse_scalar(value)
        raise TypeError(f"cannot coerce {type(value).__name__} into {self}")

    def parse_scalar(self, text: str) -> "Scalar":
        """Scalar literal in the polynomial grammar, e.g. '1/6', '-3', '2*t+1'"""
        from poly import Ring, parse_poly  # poly depends on arith
        f = parse_poly(text, Ring(self, ()))
        return Scalar(self, f.constant_coefficient())

    def scalar_zero(self) -> "Scalar":
        return Scalar(self, self.zero())

    def scalar_one(self) -> "Scalar":
        return Scalar(self, self.one())

    @property
    def generator_name(self) -> Optional[str]:
        return None


@dataclass(frozen=True)
class Rationals(FieldSpec):
    characteristic = 0
    degree = 1

    def zero(self) -> Fraction:
        return Fraction(0)

    def one(self) -> Fraction:
        return Fraction(1)

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def from_fraction(self, q: Fraction) -> Fraction:
        return Fraction(q)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("division by zero in QQ")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise DivisionByZero("division by zero in QQ")
        return a / b

    def is_zero(self, a) -> bool:
        return a == 0

    def random_raw(self, rng, bound: int) -> Fraction:
        return Fraction(rng.randint(-bound, bound))

    def elements(self):
        raise ValueError("QQ is infinite")

    def format(self, a: Fraction) -> str:
        return str(a)

    def __str__(self) -> str:
        return "QQ"


@dataclass(frozen=True)
class PrimeField(FieldSpec):
    p: int
    degree = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvalidField(f"GF({self.p}): {self.p} is not prime")

    @property
    def characteristic(self) -> int:
        return self.p

    def zero(self) -> int:
        return 0

    def one(self) -> int:
        return 1

    def from_int(self, n: int) -> int:
        return n % self.p

    def from_fraction(self, q: Fraction) -> int:
        den = q.denominator % self.p
        if den == 0:
            raise DivisionByZero(f"denominator {q.denominator} vanishes in GF({self.p})")
        return (q.numerator * pow(den, -1, self.p)) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a == 0:
            raise DivisionByZero(f"division by zero in GF({self.p})")
        return pow(a, -1, self.p)

    def is_zero(self, a) -> bool:
        return a == 0

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        return pow(a, e, self.p)

    def elements(self) -> Iterator[int]:
        return iter(range(self.p))

    def random_raw(self, rng, bound: int) -> int:
        return rng.randrange(self.p)

    def format(self, a: int) -> str:
        # symmetric representative
        return str(a - self.p if a > self.p // 2 else a)

    def __str__(self) -> str:
        return f"GF({self.p})"


# ============================================================================
# Univariate helpers over a base field (coefficient lists, low -> high)
# ============================================================================

def _trim(a: List[Raw], base: FieldSpec) -> List[Raw]:
    a = list(a)
    while a and base.is_zero(a[-1]):
        a.pop()
    return a


def _usub(a: List[Raw], b: List[Raw], base: FieldSpec) -> List[Raw]:
    n = max(len(a), len(b))
    a = list(a) + [base.zero()] * (n - len(a))
    b = list(b) + [base.zero()] * (n - len(b))
    return _trim([base.sub(x, y) for x, y in zip(a, b)], base)


def _umul(a: List[Raw], b: List[Raw], base: FieldSpec) -> List[Raw]:
    if not a or not b:
        return []
    out = [base.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if base.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = base.add(out[i + j], base.mul(x, y))
    return _trim(out, base)


def _udivmod(a: List[Raw], b: List[Raw], base: FieldSpec) -> Tuple[List[Raw], List[Raw]]:
    a, b = _trim(a, base), _trim(b, base)
    if not b:
        raise DivisionByZero("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    lead_inv = base.inv(b[-1])
    q = [base.zero()] * (len(a) - len(b) + 1)
    r = list(a)
    for k in range(len(a) - len(b), -1, -1):
        c = base.mul(r[k + len(b) - 1], lead_inv)
        q[k] = c
        if base.is_zero(c):
            continue
        for j, y in enumerate(b):
            r[k + j] = base.sub(r[k + j], base.mul(c, y))
    return _trim(q, base), _trim(r[:len(b) - 1], base)


def _uinv_mod(a: List[Raw], m: List[Raw], base: FieldSpec) -> List[Raw]:
    """Inverse of a modulo m by the extended Euclidean algorithm"""
    r0, r1 = _trim(m, base), _trim(a, base)
    s0, s1 = [], [base.one()]
    if not r1:
        raise DivisionByZero("inverse of zero")
    while r1:
        q, r = _udivmod(r0, r1, base)
        r0, r1 = r1, r
        s0, s1 = s1, _usub(s0, _umul(q, s1, base), base)
    if len(r0) != 1:
        raise DivisionByZero("element is not invertible modulo the minimal polynomial")
    c = base.inv(r0[0])
    _, s = _udivmod([base.mul(c, x) for x in s0], m, base)
    return s


def _format_upoly(coeffs: Sequence[Raw], base: FieldSpec, symbol: str) -> str:
    parts: List[Tuple[bool, str]] = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if base.is_zero(c):
            continue
        text = base.format(c)
        negative = text.startswith("-")
        if negative:
            text = text[1:]
        if k == 0:
            body = text
        else:
            mono = symbol if k == 1 else f"{symbol}^{k}"
            body = mono if text == "1" else f"{text}*{mono}"
        parts.append((negative, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for negative, body in parts[1:]:
        out += (" - " if negative else " + ") + body
    return out


# ============================================================================
# Irreducibility
# ============================================================================

def is_irreducible(m: Sequence[int], p: int) -> bool:
    """
    Brute-force irreducibility test for a monic polynomial over GF(p),
    given as integer coefficients low -> high.
    """
    coeffs = [c % p for c in m]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    deg = len(coeffs) - 1
    if deg < 1 or deg > 6:
        raise DegreeTooLarge(f"degree {deg} outside the brute-force range 1..6")
    if p > 2 ** 16:
        raise ModulusTooLarge(f"p = {p} exceeds 2^16")
    if coeffs[-1] != 1:
        raise InvalidField("minimal polynomial must be monic")
    if deg == 1:
        return True

    base = PrimeField(p)
    if deg <= 3:
        for x in range(p):
            value = 0
            for c in reversed(coeffs):
                value = (value * x + c) % p
            if value == 0:
                return False
        return True

    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = list(tail) + [1]
            _, r = _udivmod(coeffs, divisor, base)
            if not r:
                return False
    return True


def _is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d


def _divisors(n: int) -> List[int]:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.extend({d, n // d})
        d += 1
    return sorted(out)


def _has_rational_root(coeffs: Sequence[Fraction]) -> bool:
    denominators = 1
    for c in coeffs:
        denominators = denominators * c.denominator // _gcd(denominators, c.denominator)
    ints = [int(c * denominators) for c in coeffs]
    if ints[0] == 0:
        return True
    for r in _divisors(ints[0]):
        for s in _divisors(ints[-1]):
            for candidate in (Fraction(r, s), Fraction(-r, s)):
                value = Fraction(0)
                for c in reversed(coeffs):
                    value = value * candidate + c
                if value == 0:
                    return True
    return False


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def is_irreducible_rational(m: Sequence[Fraction]) -> bool:
    """Quadratic and cubic monic polynomials over QQ (rational-root and discriminant checks)"""
    coeffs = [Fraction(c) for c in m]
    deg = len(coeffs) - 1
    if deg not in (2, 3):
        raise DegreeTooLarge(f"rational irreducibility is decided for degrees 2 and 3, got {deg}")
    if coeffs[-1] != 1:
        raise InvalidField("minimal polynomial must be monic")
    if deg == 2:
        c, b = coeffs[0], coeffs[1]
        return not _is_rational_square(b * b - 4 * c)
    return not _has_rational_root(coeffs)


# ============================================================================
# Simple extensions
# ============================================================================

@dataclass(frozen=True)
class Extension(FieldSpec):
    """base[gen]/(minimal_poly); minimal_poly holds base raw values low -> high, monic"""
    base: FieldSpec
    minimal_poly: Tuple[Raw, ...]
    generator: str = "t"

    def __post_init__(self):
        if isinstance(self.base, Extension):
            raise InvalidField("extensions of extensions are not supported")
        m = _trim(list(self.minimal_poly), self.base)
        if len(m) < 3:
            raise InvalidField("minimal polynomial must have degree at least 2")
        if not self.base.is_one(m[-1]):
            raise InvalidField("minimal polynomial must be monic")
        object.__setattr__(self, "minimal_poly", tuple(m))
        if isinstance(self.base, PrimeField):
            irreducible = is_irreducible(m, self.base.p)
        else:
            irreducible = is_irreducible_rational(m)
        if not irreducible:
            raise InvalidField(f"minimal polynomial of {self} is reducible")

    @property
    def characteristic(self) -> int:
        return self.base.characteristic

    @property
    def degree(self) -> int:
        return len(self.minimal_poly) - 1

    @property
    def generator_name(self) -> str:
        return self.generator

    def zero(self):
        return tuple(self.base.zero() for _ in range(self.degree))

    def one(self):
        return (self.base.one(),) + tuple(self.base.zero() for _ in range(self.degree - 1))

    def gen(self):
        """Raw class of the generator"""
        out = [self.base.zero()] * self.degree
        out[1] = self.base.one()
        return tuple(out)

    def generator_scalar(self) -> "Scalar":
        return Scalar(self, self.gen())

    def _pad(self, coeffs: List[Raw]) -> tuple:
        return tuple(coeffs) + tuple(self.base.zero() for _ in range(self.degree - len(coeffs)))

    def from_int(self, n: int):
        return self._pad([self.base.from_int(n)])

    def from_fraction(self, q: Fraction):
        return self._pad([self.base.from_fraction(q)])

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        base = self.base
        d = self.degree
        prod = [base.zero()] * (2 * d - 1)
        for i, x in enumerate(a):
            if base.is_zero(x):
                continue
            for j, y in enumerate(b):
                if not base.is_zero(y):
                    prod[i + j] = base.add(prod[i + j], base.mul(x, y))
        m = self.minimal_poly
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if base.is_zero(c):
                continue
            for j in range(d + 1):
                prod[k - d + j] = base.sub(prod[k - d + j], base.mul(c, m[j]))
        return tuple(prod[:d])

    def inv(self, a):
        if self.is_zero(a):
            raise DivisionByZero(f"division by zero in {self}")
        return self._pad(_uinv_mod(list(a), list(self.minimal_poly), self.base))

    def is_zero(self, a) -> bool:
        return all(self.base.is_zero(x) for x in a)

    def elements(self):
        return (tuple(v) for v in itertools.product(list(self.base.elements()), repeat=self.degree))

    def random_raw(self, rng, bound: int):
        return tuple(self.base.random_raw(rng, bound) for _ in range(self.degree))

    def as_number(self, a):
        if any(not self.base.is_zero(x) for x in a[1:]):
            return None
        return self.base.as_number(a[0])

    def contains(self, sub: FieldSpec, a) -> bool:
        if sub == self:
            return True
        return sub == self.base and all(self.base.is_zero(x) for x in a[1:])

    def embeds(self, sub: FieldSpec) -> bool:
        return sub == self or sub == self.base

    def embed(self, sub: FieldSpec, a):
        if sub == self:
            return a
        if sub == self.base:
            return self._pad([a])
        raise FieldMismatch(f"cannot embed {sub} into {self}")

    def format(self, a) -> str:
        return _format_upoly(a, self.base, self.generator)

    def __str__(self) -> str:
        m = _format_upoly(self.minimal_poly, self.base, self.generator)
        return f"{self.base}[{self.generator}]/({m})"


# ============================================================================
# Scalars
# ============================================================================

class Scalar:
    """A field element: immutable (field, canonical raw value) pair"""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value: Raw):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def _coerce(self, other) -> Raw:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{other.field} vs {self.field}")
            return other.value
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field(other).value
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return Scalar(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return Scalar(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return Scalar(self.field, self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return Scalar(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return Scalar(self.field, self.field.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return Scalar(self.field, self.field.div(b, self.value))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return Scalar(self.field, self.field.pow(self.value, e))

    def inv(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            # equal only to the canonical int or Fraction
            n = self.field.as_number(self.value)
            return n is not None and n == other
        return NotImplemented

    def __hash__(self) -> int:
        n = self.field.as_number(self.value)
        return hash(n) if n is not None else hash((self.field, self.value))

    def __str__(self) -> str:
        return self.field.format(self.value)

    def __repr__(self) -> str:
        return f"Scalar({self.field}, {self})"


def frobenius_power(a: Scalar, e: int) -> Scalar:
    """a^(p^e) in characteristic p"""
    p = a.field.characteristic
    if p == 0:
        raise CharZeroField(f"Frobenius is undefined over {a.field}")
    if e < 0:
        raise ValueError("Frobenius exponent must be natural")
    return Scalar(a.field, a.field.pow(a.value, p ** e))


# ============================================================================
# Field literals
# ============================================================================

_FIELD_RE = re.compile(
    r"^\s*(?:(QQ)|GF\(\s*(\d+)\s*\))\s*"
    r"(?:\[\s*([A-Za-z_][A-Za-z0-9_]*)\s*\]\s*/\s*\((.+)\))?\s*$"
)


def parse_field(text: str) -> FieldSpec:
    """`QQ`, `GF(5)`, `GF(5)[t]/(t^2-2)`, `QQ[t]/(t^2+t-1)`"""
    match = _FIELD_RE.match(text)
    if not match:
        raise InvalidField(f"unrecognized field literal '{text}'")
    rationals, p, symbol, modulus = match.groups()
    base: FieldSpec = Rationals() if rationals else PrimeField(int(p))
    if symbol is None:
        return base

    from poly import Ring, parse_poly  # poly depends on arith
    m = parse_poly(modulus, Ring(base, (symbol,)))
    degree = m.total_degree()
    coeffs = [base.zero()] * (degree + 1)
    for mono, c in m.items():
        coeffs[mono[0]] = c
    return Extension(base, tuple(coeffs), symbol)


def gf25() -> Extension:
    """Default GF(25) model: GF(5)[t]/(t^2 - 2)"""
    return Extension(PrimeField(5), (3, 0, 1), "t")
