"""
Jacobian/differential representations over k(P), specialization to
points of V(P), the characteristic-zero representation pipeline,
implicitization with point sampling, and Frobenius flock shifts.
"""
import itertools
import logging
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from arith import Extension, FieldSpec, Scalar
from config import config
from errors import (
    CharZeroField, ConsistencyError, ExponentOverflow, IndexOutOfRange,
    NoValidPoint, NotOnVariety, PositiveCharacteristic, ShiftPairNonzero
)
from groebner import (
    IdealPresentation, elimination_ideal, reduced_presentation, relabel, ring_extend
)
from matroid import Matroid, algebraic_matroid, linear_matroid, matroid_equal
from poly import Polynomial, Ring
from quotfield import (
    KMatrix, QContext, QElem, QMatrix, evaluate_matrix, kernel_basis,
    kernel_over_field, minor, rank
)
from utils import indices_of

logger = logging.getLogger(__name__)

PointLike = Sequence[Union[Scalar, int, Fraction, str]]


# ============================================================================
# Differential representations
# ============================================================================

@dataclass(frozen=True, eq=False)
class DifferentialRep:
    ideal: IdealPresentation
    ctx: QContext
    jacobian: QMatrix
    rep: QMatrix
    diff_matroid: Matroid
    _minors: Dict[int, Tuple[Tuple[int, ...], QElem]] = dc_field(default_factory=dict, repr=False)

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.ideal.ring.vars

    def loops(self) -> List[str]:
        return [self.labels[i] for i in self.diff_matroid.loops()]

    def to_json(self) -> Dict[str, Any]:
        return {
            "jacobian": self.jacobian.to_strings(),
            "rep": self.rep.to_strings(),
            "matroid": self.diff_matroid.to_json(),
            "loops": self.loops(),
        }


def jacobian_matrix(ideal: IdealPresentation, ctx: Optional[QContext] = None) -> QMatrix:
    """Row i holds the coset classes of the partial derivatives of generator i"""
    ctx = ctx or QContext(ideal)
    rows = [g.gradient() for g in ideal.generators]
    return QMatrix.from_polynomials(ctx, rows, ncols=ideal.n)


def differential_matroid(ideal: IdealPresentation, jobs: Optional[int] = None,
                         use_reduced_gb: bool = False) -> DifferentialRep:
    if not ideal.primality_asserted:
        logger.warning("differential matroid of an ideal not asserted prime")
    ctx = QContext(ideal)
    J = jacobian_matrix(ideal, ctx)
    A = kernel_basis(J)
    M = linear_matroid(A, ideal.ring.vars, jobs=jobs or config.run.jobs)
    logger.info(f"differential matroid: Jacobian rank {ideal.n - A.nrows}, matroid rank {M.rank}")
    rep = DifferentialRep(ideal, ctx, J, A, M)

    if use_reduced_gb:
        other = differential_matroid(reduced_presentation(ideal), jobs)
        if not matroid_equal(M, other.diff_matroid):
            raise ConsistencyError("differential matroid depends on the generating set")
        logger.info("reduced-GB generators give the same differential matroid")
    return rep


def differential_rep_from_matrix(ideal: IdealPresentation,
                                 rows: Union[QMatrix, Sequence[Sequence[Union[str, Tuple[str, str]]]]]) -> DifferentialRep:
    """Wrap a caller-supplied representation after checking rep·Jᵀ = 0 and the rank identity"""
    ctx = QContext(ideal)
    J = jacobian_matrix(ideal, ctx)
    A = rows if isinstance(rows, QMatrix) else QMatrix.from_fractions(ctx, rows, ncols=ideal.n)
    if A.ctx != ctx:
        A = QMatrix.from_fractions(ctx, [[(str(e.num), str(e.den)) for e in row] for row in A.rows], ideal.n)
    if J.nrows and not A.matmul(J.transpose()).is_zero():
        raise ConsistencyError("supplied matrix does not annihilate the Jacobian")
    if rank(A) != ideal.n - rank(J):
        raise ConsistencyError(f"supplied matrix has rank {rank(A)}, expected {ideal.n - rank(J)}")
    return DifferentialRep(ideal, ctx, J, A, linear_matroid(A, ideal.ring.vars))


def differential_support(ideal: IdealPresentation, gen_index: int) -> FrozenSet[str]:
    """Support of d f_i in Ω, as {'dx1', ...}"""
    if not 0 <= gen_index < len(ideal.generators):
        raise IndexOutOfRange(f"generator {gen_index} outside 0..{len(ideal.generators) - 1}")
    ctx = QContext(ideal)
    gradient = ideal.generators[gen_index].gradient()
    return frozenset(f"d{name}" for name, g in zip(ideal.ring.vars, gradient) if not ctx.reduce(g).is_zero())


def certifying_minors(D: DifferentialRep) -> Dict[int, Tuple[Tuple[int, ...], QElem]]:
    """Per basis B, the lexicographically first nonzero r×r minor of rep restricted to B"""
    r = D.rep.nrows
    for basis in sorted(D.diff_matroid.bases, key=indices_of):
        if basis in D._minors:
            continue
        cols = indices_of(basis)
        for rows in itertools.combinations(range(r), len(cols)):
            m = minor(D.rep, rows, cols)
            if not m.is_zero():
                D._minors[basis] = (rows, m)
                break
        else:
            raise ConsistencyError(f"basis {cols} has no nonzero minor")
    return D._minors


# ============================================================================
# Specialization
# ============================================================================

@dataclass
class SpecializationReport:
    point: Tuple[Scalar, ...]
    on_variety: bool
    denominator_failures: List[Tuple[int, int]]
    basis_minor_failures: List[List[str]]
    matroid_at_point: Optional[Matroid] = None
    matches: Optional[bool] = None

    @property
    def valid(self) -> bool:
        return self.on_variety and not self.denominator_failures and not self.basis_minor_failures

    def to_json(self) -> Dict[str, Any]:
        return {
            "point": [str(z) for z in self.point],
            "on_variety": self.on_variety,
            "denominator_failures": [list(e) for e in self.denominator_failures],
            "basis_minor_failures": self.basis_minor_failures,
            "matroid_at_point": None if self.matroid_at_point is None else self.matroid_at_point.to_json(),
            "matches": self.matches,
        }


def _as_point(ring: Ring, point: PointLike) -> Tuple[Scalar, ...]:
    if len(point) != ring.n:
        raise IndexOutOfRange(f"point has {len(point)} coordinates, ring has {ring.n} variables")
    return tuple(ring.field(z) for z in point)


def _failing_generators(ideal: IdealPresentation, z: Sequence[Scalar]) -> List[int]:
    return [i for i, g in enumerate(ideal.generators) if not g.evaluate(z).is_zero()]


def validate_specialization(D: DifferentialRep, point: PointLike) -> SpecializationReport:
    """Checks z ∈ V(P), nonvanishing denominators and certifying minors, then compares M(A_z)"""
    ring = D.ideal.ring
    z = _as_point(ring, point)
    on_variety = not _failing_generators(D.ideal, z)

    denominators = [(i, j) for i, row in enumerate(D.rep.rows) for j, e in enumerate(row)
                    if e.den.evaluate(z).is_zero()]

    basis_failures = []
    for basis, (_, m) in sorted(certifying_minors(D).items(), key=lambda item: indices_of(item[0])):
        if m.num.evaluate(z).is_zero() or m.den.evaluate(z).is_zero():
            basis_failures.append(D.diff_matroid.names(basis))

    report = SpecializationReport(z, on_variety, denominators, basis_failures)
    if report.valid:
        A_z = evaluate_matrix(D.rep, z)
        report.matroid_at_point = linear_matroid(A_z, ring.vars, field=ring.field)
        report.matches = matroid_equal(report.matroid_at_point, D.diff_matroid)
    logger.info(f"specialization at ({', '.join(map(str, z))}): valid={report.valid}, matches={report.matches}")
    return report


def specialize(D: DifferentialRep, point: PointLike) -> KMatrix:
    z = _as_point(D.ideal.ring, point)
    failing = _failing_generators(D.ideal, z)
    if failing:
        raise NotOnVariety(z, failing)
    return evaluate_matrix(D.rep, z)


def char0_representation(ideal: IdealPresentation, points: Sequence[PointLike],
                         target: Optional[Matroid] = None) -> Tuple[KMatrix, SpecializationReport]:
    """
    Specialize the Jacobian first, then take its kernel over k; accept the
    first candidate whose column matroid equals M(P).
    """
    ring = ideal.ring
    field = ring.field
    if field.characteristic != 0:
        raise PositiveCharacteristic(f"representation pipeline needs characteristic 0, got {field}")
    if not points:
        raise ValueError("no candidate points")
    gradients = [g.gradient() for g in ideal.generators]
    reports = []
    for point in points:
        z = _as_point(ring, point)
        if _failing_generators(ideal, z):
            reports.append(SpecializationReport(z, False, [], []))
            continue
        J_z = [[d.evaluate(z) for d in row] for row in gradients]
        A_z = kernel_over_field(J_z, field, ring.n)
        M_z = linear_matroid(A_z, ring.vars, field=field)
        if target is None:
            target = algebraic_matroid(ideal)
        matches = matroid_equal(M_z, target)
        report = SpecializationReport(z, True, [], [], M_z, matches)
        reports.append(report)
        if matches:
            logger.info(f"accepted point ({', '.join(map(str, z))}) after {len(reports)} candidates")
            return A_z, report
    raise NoValidPoint(reports)


# ============================================================================
# Parameterizations
# ============================================================================

@dataclass(frozen=True)
class Parameterization:
    """x_i = f_i(u); components live in param_ring, coefficients in defined_over"""
    param_ring: Ring
    components: Tuple[Polynomial, ...]
    target_vars: Tuple[str, ...]
    defined_over: Optional[FieldSpec] = None

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "target_vars", tuple(self.target_vars))
        field = self.param_ring.field
        if self.defined_over is None:
            object.__setattr__(self, "defined_over", field)
        elif not field.embeds(self.defined_over):
            raise ValueError(f"{self.defined_over} is not a subfield of {field}")
        if len(self.components) != len(self.target_vars):
            raise ValueError(f"{len(self.components)} components for {len(self.target_vars)} variables")
        for i, f in enumerate(self.components):
            if f.ring != self.param_ring:
                raise ValueError(f"component {i} is not in {self.param_ring}")
            for _, c in f.items():
                if not field.contains(self.defined_over, c):
                    raise ValueError(f"component {i} has a coefficient outside {self.defined_over}")

    @property
    def target_ring(self) -> Ring:
        return Ring(self.param_ring.field, self.target_vars)


def implicitize(F: Parameterization) -> IdealPresentation:
    """⟨x_i − f_i(u)⟩ ∩ k[x]"""
    target = F.target_ring
    big = target.extend(F.param_ring.vars)
    gens = []
    for name, f in zip(F.target_vars, F.components):
        gens.append(big.var(name) - f.change_ring(big))
    graph = IdealPresentation(big, tuple(gens), True)
    result = elimination_ideal(graph, F.target_vars)
    logger.info(f"implicitization: {len(result.generators)} generators in {len(F.target_vars)} variables")
    return result


def evaluate_parameterization(F: Parameterization, params: PointLike) -> Tuple[Scalar, ...]:
    u = _as_point(F.param_ring, params)
    return tuple(f.evaluate(u) for f in F.components)


def sample_point(F: Parameterization, seed: Optional[int] = None, bound: Optional[int] = None) -> Tuple[Scalar, ...]:
    """Seeded parameters (integers in [-bound, bound] over QQ, uniform over finite fields) mapped through F"""
    seed = config.sampling.seed if seed is None else seed
    bound = config.sampling.bound if bound is None else bound
    rng = random.Random(seed)
    field = F.param_ring.field
    sub = F.defined_over
    params = [Scalar(field, field.embed(sub, sub.random_raw(rng, bound))) for _ in F.param_ring.vars]
    return evaluate_parameterization(F, params)


# ============================================================================
# Frobenius flock shifts and matrix relations
# ============================================================================

def flock_name_map(ring: Ring) -> Dict[str, str]:
    """Fresh variable y_i for each x_i, avoiding names already in use"""
    taken = set(ring.vars)
    if ring.field.generator_name:
        taken.add(ring.field.generator_name)
    out = {}
    for i, name in enumerate(ring.vars):
        fresh = f"y{i + 1}"
        while fresh in taken:
            fresh += "_"
        taken.add(fresh)
        out[fresh] = name
    return out


def frobenius_flock_shift(ideal: IdealPresentation, a: Sequence[int], b: Sequence[int]) -> IdealPresentation:
    """P_{a,b}: adjoin x_i^(p^a_i) − y_i^(p^b_i), eliminate x, rename y back to x"""
    ring = ideal.ring
    p = ring.field.characteristic
    if p == 0:
        raise CharZeroField("Frobenius flock shifts need positive characteristic")
    if len(a) != ring.n or len(b) != ring.n:
        raise IndexOutOfRange(f"shift vectors must have length {ring.n}")
    for i, (ai, bi) in enumerate(zip(a, b)):
        if ai < 0 or bi < 0:
            raise ValueError("shift entries must be natural numbers")
        if min(ai, bi) != 0:
            raise ShiftPairNonzero(i)
    limit = config.groebner.max_exponent
    if max((p ** e for e in list(a) + list(b)), default=1) > limit:
        raise ExponentOverflow(f"shift exponent exceeds the limit {limit}")

    names = flock_name_map(ring)
    fresh = list(names)
    big = ring.extend(fresh)
    extra = []
    for i in range(ring.n):
        x_exp = [0] * big.n
        y_exp = [0] * big.n
        x_exp[i] = p ** a[i]
        y_exp[ring.n + i] = p ** b[i]
        extra.append(big.monomial(x_exp) - big.monomial(y_exp))
    hat = ring_extend(ideal, fresh, extra)
    shifted = elimination_ideal(hat, fresh)
    logger.info(f"flock shift a={list(a)} b={list(b)}: {len(shifted.generators)} generators")
    return relabel(shifted, ring.vars)


def relations_from_matrix(A: KMatrix, field: Extension, var_names: Sequence[str],
                          generator_var: Optional[str] = None) -> IdealPresentation:
    """
    Linear relations among the columns of A over K = k0[t]/(m), with
    extension coefficients lifted to a polynomial variable, plus m(t).
    """
    generator_var = generator_var or field.generator
    base = field.base
    ring = Ring(base, tuple(var_names) + (generator_var,))
    t = ring.var(generator_var)
    kernel = kernel_over_field(A, field, len(var_names))
    gens = []
    for vector in kernel:
        form = ring.zero()
        for name, c in zip(var_names, vector):
            lifted = ring.zero()
            for k, coeff in enumerate(c.value):
                if not base.is_zero(coeff):
                    lifted = lifted + ring.constant(coeff) * t ** k
            form = form + lifted * ring.var(name)
        gens.append(form)
    m = ring.zero()
    for k, coeff in enumerate(field.minimal_poly):
        m = m + ring.constant(coeff) * t ** k
    gens.append(m)
    return IdealPresentation(ring, tuple(gens), True)
