"""
Arithmetic and exact linear algebra over the fraction field k(P) of S/P,
plus the ground-field routines used after specialization.

Elements are fractions of normal forms; zero testing is GB reduction of
the numerator.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from arith import FieldSpec, Scalar
from errors import ContextMismatch, DenominatorVanishes, DivisionByZero, IndexOutOfRange
from groebner import GroebnerBasis, IdealPresentation, buchberger, normal_form
from poly import Polynomial, Ring

logger = logging.getLogger(__name__)

KMatrix = List[List[Scalar]]


# ============================================================================
# Context and elements
# ============================================================================

class QContext:
    """k(P) for a prime-asserted ideal P, with its GrevLex basis"""

    def __init__(self, ideal: IdealPresentation):
        if not ideal.primality_asserted:
            logger.warning(f"fraction field of an ideal not asserted prime: {ideal}")
        self.ideal = ideal
        self.gb: GroebnerBasis = buchberger(ideal)
        self._key = ideal.structural_key()

    @property
    def ring(self) -> Ring:
        return self.ideal.ring

    @property
    def field(self) -> FieldSpec:
        return self.ideal.ring.field

    def reduce(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self.gb)

    def element(self, num: Union[Polynomial, str, int], den: Union[Polynomial, str, int, None] = None) -> "QElem":
        return QElem(self, self._poly(num), None if den is None else self._poly(den))

    def zero(self) -> "QElem":
        return QElem(self, self.ring.zero(), _reduced=True)

    def one(self) -> "QElem":
        return QElem(self, self.ring.one(), _reduced=True)

    def _poly(self, value) -> Polynomial:
        if isinstance(value, Polynomial):
            return value
        if isinstance(value, str):
            return self.ring.parse(value)
        return self.ring.constant(value)

    def __eq__(self, other) -> bool:
        return isinstance(other, QContext) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"QContext({self.ideal})"


class QElem:
    """[num]/[den] in k(P); den is a monic normal form outside P, zero is (0, 1)"""

    __slots__ = ("ctx", "num", "den")

    def __init__(self, ctx: QContext, num: Polynomial, den: Optional[Polynomial] = None, _reduced: bool = False):
        ring = ctx.ring
        if den is None:
            den = ring.one()
        if not _reduced:
            num, den = ctx.reduce(num), ctx.reduce(den)
        if den.is_zero():
            raise DivisionByZero("denominator lies in the ideal")
        field = ring.field
        if num.is_zero():
            den = ring.one()
        elif den.is_constant():
            num = num.scale(field.inv(den.constant_coefficient()))
            den = ring.one()
        else:
            lc = den.leading_term()[1]
            if not field.is_one(lc):
                inv = field.inv(lc)
                num, den = num.scale(inv), den.scale(inv)
            if num == den:
                num = den = ring.one()
        self.ctx = ctx
        self.num = num
        self.den = den

    def _coerce(self, other) -> "QElem":
        if isinstance(other, QElem):
            if other.ctx != self.ctx:
                raise ContextMismatch("elements of different fraction fields")
            return other
        if isinstance(other, Polynomial):
            return QElem(self.ctx, other)
        if isinstance(other, (int, Fraction, Scalar)) and not isinstance(other, bool):
            return QElem(self.ctx, self.ctx.ring.constant(other), _reduced=True)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        if self.den == b.den:
            return QElem(self.ctx, self.num + b.num, self.den)
        return QElem(self.ctx, self.num * b.den + b.num * self.den, self.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return QElem(self.ctx, -self.num, self.den, _reduced=True)

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self + (-b)

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return b + (-self)

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        if self.is_zero() or b.is_zero():
            return self.ctx.zero()
        return QElem(self.ctx, self.num * b.num, self.den * b.den)

    __rmul__ = __mul__

    def inv(self) -> "QElem":
        if self.is_zero():
            raise DivisionByZero("inverting zero in k(P)")
        return QElem(self.ctx, self.den, self.num, _reduced=True)

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self * b.inv()

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return b * self.inv()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return self.ctx.reduce(self.num * b.den - b.num * self.den).is_zero()

    # canonical only up to the chosen representatives
    __hash__ = None

    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        d = self.den.evaluate(point)
        if d.is_zero():
            raise DivisionByZero("denominator vanishes at the point")
        return self.num.evaluate(point) / d

    def __str__(self) -> str:
        if self.den.is_constant():
            return str(self.num)
        num, den = str(self.num), str(self.den)
        if len(self.num) > 1:
            num = f"({num})"
        if len(self.den) > 1 or "*" in den or "^" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"QElem({self})"


# ============================================================================
# Matrices over k(P)
# ============================================================================

@dataclass(frozen=True, eq=False)
class QMatrix:
    ctx: QContext
    rows: Tuple[Tuple[QElem, ...], ...]
    ncols: int

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        for i, row in enumerate(rows):
            if len(row) != self.ncols:
                raise ValueError(f"row {i} has {len(row)} entries, expected {self.ncols}")
            for e in row:
                if e.ctx != self.ctx:
                    raise ContextMismatch(f"row {i} mixes fraction fields")

    @classmethod
    def from_polynomials(cls, ctx: QContext, rows: Sequence[Sequence[Polynomial]], ncols: Optional[int] = None) -> "QMatrix":
        ncols = len(rows[0]) if rows else (ncols or 0)
        return cls(ctx, tuple(tuple(QElem(ctx, p) for p in row) for row in rows), ncols)

    @classmethod
    def from_fractions(cls, ctx: QContext, rows: Sequence[Sequence[Union[str, Tuple[str, str]]]],
                       ncols: Optional[int] = None) -> "QMatrix":
        """Entries as 'num' or ('num', 'den') strings in the polynomial grammar"""
        def entry(spec):
            if isinstance(spec, tuple):
                return ctx.element(spec[0], spec[1])
            return ctx.element(spec)
        ncols = len(rows[0]) if rows else (ncols or 0)
        return cls(ctx, tuple(tuple(entry(s) for s in row) for row in rows), ncols)

    @classmethod
    def identity(cls, ctx: QContext, n: int) -> "QMatrix":
        return cls(ctx, tuple(tuple(ctx.one() if i == j else ctx.zero() for j in range(n)) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, index: Tuple[int, int]) -> QElem:
        i, j = index
        return self.rows[i][j]

    def column(self, j: int) -> List[QElem]:
        return [row[j] for row in self.rows]

    def transpose(self) -> "QMatrix":
        return QMatrix(self.ctx, tuple(tuple(self.column(j)) for j in range(self.ncols)), self.nrows)

    def matmul(self, other: "QMatrix") -> "QMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} x {other.shape}")
        out = []
        for row in self.rows:
            new_row = []
            for j in range(other.ncols):
                acc = self.ctx.zero()
                for k, a in enumerate(row):
                    b = other.rows[k][j]
                    if a and b:
                        acc = acc + a * b
                new_row.append(acc)
            out.append(tuple(new_row))
        return QMatrix(self.ctx, tuple(out), other.ncols)

    def append_rows(self, rows: Sequence[Sequence[QElem]]) -> "QMatrix":
        return QMatrix(self.ctx, self.rows + tuple(tuple(r) for r in rows), self.ncols)

    def columns(self, cols: Sequence[int]) -> "QMatrix":
        return QMatrix(self.ctx, tuple(tuple(row[j] for j in cols) for row in self.rows), len(cols))

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.rows for e in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix) or other.shape != self.shape:
            return False
        return all(a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    __hash__ = None

    def to_strings(self) -> List[List[str]]:
        return [[str(e) for e in row] for row in self.rows]

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(row) + "]" for row in self.to_strings())


# ============================================================================
# Fraction-free elimination over S/P
# ============================================================================

def _polynomial_rows(rows: Sequence[Sequence[QElem]], ctx: QContext) -> Tuple[List[List[Polynomial]], List[Polynomial]]:
    """Clear each row's denominators: multiply by the product of its distinct denominators"""
    out, factors = [], []
    for row in rows:
        dens: List[Polynomial] = []
        for e in row:
            if not e.den.is_constant() and e.den not in dens:
                dens.append(e.den)
        factor = ctx.ring.one()
        for d in dens:
            factor = factor * d
        new_row = []
        for e in row:
            if e.is_zero():
                new_row.append(ctx.ring.zero())
                continue
            m = e.num
            for d in dens:
                if d != e.den:
                    m = m * d
            new_row.append(ctx.reduce(m))
        out.append(new_row)
        factors.append(ctx.reduce(factor))
    return out, factors


def _echelon(rows: List[List[Polynomial]], ncols: int, ctx: QContext):
    """
    Row echelon form without division. Columns are processed in ascending
    order; the pivot row has the fewest terms in the pivot entry.
    Returns (rows, pivot columns, sign, row multipliers).
    """
    rows = [list(r) for r in rows]
    field = ctx.field
    pivots: List[int] = []
    multipliers: List[Polynomial] = []
    sign = 1
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        candidates = [i for i in range(r, len(rows)) if not rows[i][c].is_zero()]
        if not candidates:
            continue
        best = min(candidates, key=lambda i: (len(rows[i][c]), i))
        if best != r:
            rows[r], rows[best] = rows[best], rows[r]
            sign = -sign
        piv = rows[r][c]
        piv_const = piv.is_constant()
        piv_inv = field.inv(piv.constant_coefficient()) if piv_const else None
        for i in range(r + 1, len(rows)):
            e = rows[i][c]
            if e.is_zero():
                continue
            if piv_const:
                factor = e.scale(piv_inv)
                new = [rows[i][j] - factor * rows[r][j] if j > c else None for j in range(ncols)]
            else:
                new = [piv * rows[i][j] - e * rows[r][j] if j > c else None for j in range(ncols)]
                multipliers.append(piv)
            rows[i] = [ctx.ring.zero() if j <= c else ctx.reduce(new[j]) for j in range(ncols)]
        pivots.append(c)
        r += 1
    return rows, pivots, sign, multipliers


def rank(M: QMatrix) -> int:
    if not M.rows or M.ncols == 0:
        return 0
    rows, _ = _polynomial_rows(M.rows, M.ctx)
    _, pivots, _, _ = _echelon(rows, M.ncols, M.ctx)
    return len(pivots)


def kernel_basis(J: QMatrix) -> QMatrix:
    """
    Rows spanning {a : J a = 0}. One row per free column (ascending), with
    that column set to 1 and the other free columns 0.
    """
    ctx, n = J.ctx, J.ncols
    if J.rows:
        poly_rows, _ = _polynomial_rows(J.rows, ctx)
        echelon, pivots, _, _ = _echelon(poly_rows, n, ctx)
    else:
        echelon, pivots = [], []
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [ctx.zero() for _ in range(n)]
        v[f] = ctx.one()
        for k in range(len(pivots) - 1, -1, -1):
            p = pivots[k]
            row = echelon[k]
            acc = ctx.zero()
            for j in range(p + 1, n):
                if not row[j].is_zero() and not v[j].is_zero():
                    acc = acc + QElem(ctx, row[j], _reduced=True) * v[j]
            if not acc.is_zero():
                v[p] = -acc / QElem(ctx, row[p], _reduced=True)
        basis.append(tuple(v))
    logger.debug(f"kernel of a {J.nrows}x{n} matrix: rank {len(pivots)}, {len(free)} basis rows")
    return QMatrix(ctx, tuple(basis), n)


def minor(M: QMatrix, rows: Sequence[int], cols: Sequence[int]) -> QElem:
    """Determinant of the submatrix on `rows` x `cols`"""
    if len(rows) != len(cols):
        raise IndexOutOfRange(f"minor needs as many rows as columns, got {len(rows)} and {len(cols)}")
    for i in rows:
        if not 0 <= i < M.nrows:
            raise IndexOutOfRange(f"row {i} outside 0..{M.nrows - 1}")
    for j in cols:
        if not 0 <= j < M.ncols:
            raise IndexOutOfRange(f"column {j} outside 0..{M.ncols - 1}")
    ctx = M.ctx
    k = len(rows)
    if k == 0:
        return ctx.one()
    sub = [[M.rows[i][j] for j in cols] for i in rows]
    poly_rows, factors = _polynomial_rows(sub, ctx)
    echelon, pivots, sign, multipliers = _echelon(poly_rows, k, ctx)
    if len(pivots) < k:
        return ctx.zero()
    num = ctx.ring.constant(sign)
    for i in range(k):
        num = ctx.reduce(num * echelon[i][i])
    den = ctx.ring.one()
    for d in multipliers + factors:
        den = ctx.reduce(den * d)
    return QElem(ctx, num, den, _reduced=True)


def evaluate_matrix(M: QMatrix, point: Sequence[Scalar]) -> KMatrix:
    out = []
    for i, row in enumerate(M.rows):
        new_row = []
        for j, e in enumerate(row):
            d = e.den.evaluate(point)
            if d.is_zero():
                raise DenominatorVanishes((i, j))
            new_row.append(e.num.evaluate(point) / d)
        out.append(new_row)
    return out


# ============================================================================
# Ground-field linear algebra
# ============================================================================

def _rref(rows: Sequence[Sequence[Scalar]], field: FieldSpec, ncols: int):
    raw = [[field(x).value for x in row] for row in rows]
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(raw)) if not field.is_zero(raw[i][c])), None)
        if pivot is None:
            continue
        raw[r], raw[pivot] = raw[pivot], raw[r]
        inv = field.inv(raw[r][c])
        raw[r] = [field.mul(inv, x) for x in raw[r]]
        for i in range(len(raw)):
            if i != r and not field.is_zero(raw[i][c]):
                f = raw[i][c]
                raw[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(raw[i], raw[r])]
        pivots.append(c)
        r += 1
        if r == len(raw):
            break
    return raw, pivots


def _ncols(rows: Sequence[Sequence[Scalar]], ncols: Optional[int]) -> int:
    if ncols is not None:
        return ncols
    return len(rows[0]) if rows else 0


def rank_over_field(rows: Sequence[Sequence[Scalar]], field: FieldSpec, ncols: Optional[int] = None) -> int:
    if not rows:
        return 0
    _, pivots = _rref(rows, field, _ncols(rows, ncols))
    return len(pivots)


def kernel_over_field(rows: Sequence[Sequence[Scalar]], field: FieldSpec, ncols: Optional[int] = None) -> KMatrix:
    """Same conventions as kernel_basis: free columns ascending, set to 1"""
    n = _ncols(rows, ncols)
    if rows:
        reduced, pivots = _rref(rows, field, n)
    else:
        reduced, pivots = [], []
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero()] * n
        v[f] = field.one()
        for k, p in enumerate(pivots):
            v[p] = field.neg(reduced[k][f])
        basis.append([Scalar(field, x) for x in v])
    return basis


def det_over_field(rows: Sequence[Sequence[Scalar]], field: FieldSpec) -> Scalar:
    k = len(rows)
    raw = [[field(x).value for x in row] for row in rows]
    det = field.one()
    for c in range(k):
        pivot = next((i for i in range(c, k) if not field.is_zero(raw[i][c])), None)
        if pivot is None:
            return Scalar(field, field.zero())
        if pivot != c:
            raw[c], raw[pivot] = raw[pivot], raw[c]
            det = field.neg(det)
        det = field.mul(det, raw[c][c])
        inv = field.inv(raw[c][c])
        for i in range(c + 1, k):
            if not field.is_zero(raw[i][c]):
                f = field.mul(raw[i][c], inv)
                raw[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(raw[i], raw[c])]
    return Scalar(field, det)


def as_kmatrix(rows: Iterable[Iterable], field: FieldSpec) -> KMatrix:
    """Coerce ints, Fractions and literal strings into a ground-field matrix"""
    return [[field(x) for x in row] for row in rows]
