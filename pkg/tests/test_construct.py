"""Differential representations, specialization, implicitization, flock shifts"""
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from arith import PrimeField, Rationals, gf25, parse_field
from construct import (
    Parameterization, certifying_minors, char0_representation, differential_matroid,
    differential_rep_from_matrix, differential_support, evaluate_parameterization,
    flock_name_map, frobenius_flock_shift, implicitize, jacobian_matrix, relations_from_matrix,
    sample_point, specialize, validate_specialization
)
from errors import (
    CharZeroField, ConsistencyError, IndexOutOfRange, NoValidPoint, NotOnVariety,
    PositiveCharacteristic, ShiftPairNonzero
)
from groebner import IdealPresentation, ideal_equal, reduced_presentation, relabel
from matroid import algebraic_matroid, matroid_equal, matroid_isomorphic, uniform_matroid
from poly import Ring
from quotfield import QMatrix, as_kmatrix, kernel_basis, rank

QQ = Rationals()
GF3 = PrimeField(3)
POINT = ["1/6", "1/6", "1/3", "1/3"]
LABELS = ("x00", "x01", "x10", "x11")

XYZ = Ring(QQ, ("x", "y", "z"))
TOY = IdealPresentation.parse(Ring(GF3, ("x", "y", "z")), ["x^3 + x^6*y - z"], True)

# graphs z = f(x, y): always prime, any f
graph_ideals = st.lists(
    st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)),
    max_size=4,
).map(lambda terms: IdealPresentation(
    XYZ,
    (XYZ.var("z") - sum((XYZ.monomial((a, b, 0), Fraction(k)) for a, b, k in terms), XYZ.zero()),),
    True,
))


@pytest.fixture
def det_ideal(det_ring):
    return IdealPresentation.parse(det_ring, ["x00*x11 - x01*x10"], True)


@pytest.fixture
def det_rep(det_ideal):
    return differential_matroid(det_ideal)


@pytest.fixture
def product_map(det_ring):
    params = Ring(QQ, ("p0", "p1", "q0", "q1"))
    comps = [params.parse(t) for t in ("p0*q0", "p0*q1", "p1*q0", "p1*q1")]
    return Parameterization(params, comps, det_ring.vars)


@pytest.fixture
def toy_ideal():
    R = Ring(GF3, ("x", "y", "z"))
    return IdealPresentation.parse(R, ["x^3 + x^6*y - z"], True)


# ============================================================================
# Jacobian and differential matroid
# ============================================================================

class TestDifferentialMatroid:
    def test_jacobian_row(self, det_rep):
        expected = QMatrix.from_fractions(det_rep.ctx, [["x11", "-x10", "-x01", "x00"]])
        assert det_rep.jacobian == expected
        assert jacobian_matrix(det_rep.ideal) == expected

    def test_determinantal_matroid(self, det_rep):
        assert matroid_equal(det_rep.diff_matroid, uniform_matroid(3, 4, LABELS))
        assert det_rep.rep.shape == (3, 4)
        assert det_rep.loops() == []

    def test_rep_annihilates_jacobian(self, det_rep):
        assert det_rep.rep.matmul(det_rep.jacobian.transpose()).is_zero()

    def test_reduced_generators_agree(self, det_ideal):
        rep = differential_matroid(det_ideal, use_reduced_gb=True)
        assert len(rep.diff_matroid.bases) == 4

    def test_pth_powers_have_no_differential(self, toy_ideal):
        rep = differential_matroid(toy_ideal)
        M = rep.diff_matroid
        assert M.rank == 2
        assert not M.is_independent(["y", "z"])
        assert M.bases == frozenset({0b011, 0b101})

    @given(graph_ideals)
    @settings(max_examples=25, deadline=None)
    def test_rows_span_the_kernel(self, ideal):
        D = differential_matroid(ideal)
        assert D.rep.matmul(D.jacobian.transpose()).is_zero()
        assert D.rep.nrows == ideal.n - rank(D.jacobian)
        assert rank(D.rep) == D.rep.nrows

    @given(graph_ideals)
    @settings(max_examples=15, deadline=None)
    def test_agrees_with_the_algebraic_matroid_in_characteristic_zero(self, ideal):
        assert matroid_equal(differential_matroid(ideal).diff_matroid, algebraic_matroid(ideal))

    def test_to_json(self, det_rep):
        data = det_rep.to_json()
        assert data["jacobian"] == [["x11", "-x10", "-x01", "x00"]]
        assert data["rep"][0] == ["x10/x11", "1", "0", "0"]
        assert data["matroid"]["rank"] == 3
        assert data["loops"] == []


class TestSuppliedRepresentation:
    CORRECTED = [
        ["1", ("x11", "x10"), "0", "0"],
        ["1", "0", ("x11", "x01"), "0"],
        ["1", "0", "0", ("-x11", "x00")],
    ]

    def test_accepts_a_valid_matrix(self, det_ideal):
        D = differential_rep_from_matrix(det_ideal, self.CORRECTED)
        assert len(D.diff_matroid.bases) == 4
        assert specialize(D, POINT) == [[1, 1, 0, 0], [1, 0, 2, 0], [1, 0, 0, -2]]

    def test_rejects_a_matrix_that_misses_the_jacobian(self, det_ideal):
        wrong = [list(row) for row in self.CORRECTED]
        wrong[1][2] = ("x11", "x10")
        with pytest.raises(ConsistencyError):
            differential_rep_from_matrix(det_ideal, wrong)

    def test_same_row_span_as_the_kernel(self, det_ideal):
        D = differential_rep_from_matrix(det_ideal, self.CORRECTED)
        A = kernel_basis(D.jacobian)
        assert rank(A.append_rows(D.rep.rows)) == 3

    def test_rejects_a_rank_deficient_matrix(self, det_ideal):
        with pytest.raises(ConsistencyError):
            differential_rep_from_matrix(det_ideal, self.CORRECTED[:2])


class TestDifferentialSupport:
    def test_full_support(self, det_ideal):
        assert differential_support(det_ideal, 0) == {"dx00", "dx01", "dx10", "dx11"}

    def test_frobenius_terms_drop_out(self, toy_ideal):
        assert differential_support(toy_ideal, 0) == {"dy", "dz"}

    def test_bad_index(self, det_ideal):
        with pytest.raises(IndexOutOfRange):
            differential_support(det_ideal, 1)

    @given(graph_ideals)
    @settings(max_examples=30, deadline=None)
    def test_matches_polynomial_support_in_characteristic_zero(self, ideal):
        g = ideal.generators[0]
        assert differential_support(ideal, 0) == {f"d{name}" for name in g.support()}


# ============================================================================
# Specialization
# ============================================================================

class TestSpecialization:
    def test_certifying_minors(self, det_rep):
        minors = certifying_minors(det_rep)
        ctx = det_rep.ctx
        values = {tuple(det_rep.diff_matroid.names(b)): m for b, (_, m) in minors.items()}
        assert values[("x01", "x10", "x11")] == 1
        assert values[("x00", "x10", "x11")] == ctx.element("x10", "x11")
        assert values[("x00", "x01", "x11")] == ctx.element("-x01", "x11")
        assert values[("x00", "x01", "x10")] == ctx.element("-x00", "x11")

    def test_valid_point(self, det_rep):
        report = validate_specialization(det_rep, POINT)
        assert report.valid
        assert report.matches
        assert report.to_json()["point"] == POINT

    def test_point_killing_minors(self, det_rep):
        report = validate_specialization(det_rep, [0, 0, 0, 1])
        assert report.on_variety
        assert not report.valid
        assert report.matches is None
        assert report.basis_minor_failures == [
            ["x00", "x01", "x10"], ["x00", "x01", "x11"], ["x00", "x10", "x11"],
        ]

    def test_vanishing_denominator_reported(self, det_rep):
        report = validate_specialization(det_rep, [0, 0, 1, 0])
        assert (0, 0) in report.denominator_failures

    def test_specialize(self, det_rep):
        A_z = specialize(det_rep, POINT)
        assert A_z == [[1, 1, 0, 0], [Fraction(1, 2), 0, 1, 0], [Fraction(-1, 2), 0, 0, 1]]

    def test_point_off_the_variety(self, det_rep):
        with pytest.raises(NotOnVariety) as info:
            specialize(det_rep, [1, 1, 1, 2])
        assert info.value.failing == [0]

    def test_wrong_dimension(self, det_rep):
        with pytest.raises(IndexOutOfRange):
            specialize(det_rep, [1, 2])


class TestCharZeroRepresentation:
    def test_accepts_a_generic_point(self, det_ideal):
        A_z, report = char0_representation(det_ideal, [POINT])
        assert report.matches
        assert A_z == [[1, 1, 0, 0], [Fraction(1, 2), 0, 1, 0], [Fraction(-1, 2), 0, 0, 1]]

    def test_skips_bad_candidates(self, det_ideal):
        target = uniform_matroid(3, 4, LABELS)
        _, report = char0_representation(det_ideal, [[1, 1, 1, 2], [0, 0, 0, 1], POINT], target)
        assert [str(z) for z in report.point] == POINT

    def test_no_valid_point(self, det_ideal):
        target = uniform_matroid(3, 4, LABELS)
        with pytest.raises(NoValidPoint) as info:
            char0_representation(det_ideal, [[1, 1, 1, 2], [0, 0, 0, 1]], target)
        first, second = info.value.reports
        assert not first.on_variety
        assert second.on_variety and second.matches is False

    def test_needs_characteristic_zero(self, toy_ideal):
        with pytest.raises(PositiveCharacteristic):
            char0_representation(toy_ideal, [[0, 0, 0]])

    def test_needs_candidates(self, det_ideal):
        with pytest.raises(ValueError):
            char0_representation(det_ideal, [])


# ============================================================================
# Parameterizations
# ============================================================================

class TestImplicitization:
    def test_product_map(self, product_map, det_ideal):
        assert ideal_equal(implicitize(product_map), det_ideal)

    def test_twisted_cubic(self):
        s = Ring(QQ, ("s",))
        F = Parameterization(s, [s.parse("s"), s.parse("s^2"), s.parse("s^3")], ("x", "y", "z"))
        expected = IdealPresentation.parse(Ring(QQ, ("x", "y", "z")), ["y - x^2", "z - x*y"])
        assert ideal_equal(implicitize(F), expected)

    def test_evaluate(self, product_map):
        z = evaluate_parameterization(product_map, ["1/3", "2/3", "1/2", "1/2"])
        assert [str(c) for c in z] == POINT

    def test_component_count_checked(self, det_ring):
        params = Ring(QQ, ("u",))
        with pytest.raises(ValueError):
            Parameterization(params, [params.var("u")], det_ring.vars)

    def test_coefficients_in_the_declared_subfield(self):
        F = gf25()
        params = Ring(F, ("s",))
        with pytest.raises(ValueError):
            Parameterization(params, [params.parse("t*s")], ("x",), defined_over=PrimeField(5))


class TestSampling:
    def test_samples_lie_on_the_variety(self, product_map, det_ideal):
        for seed in range(1, 21):
            z = sample_point(product_map, seed=seed)
            assert det_ideal.generators[0].evaluate(z) == 0

    def test_seeded(self, product_map):
        assert sample_point(product_map, seed=7) == sample_point(product_map, seed=7)

    def test_validity_matches_nonvanishing_coordinates(self, product_map, det_rep):
        valid = 0
        for seed in range(1, 21):
            z = sample_point(product_map, seed=seed, bound=1000)
            report = validate_specialization(det_rep, z)
            assert report.valid == all(c != 0 for c in z)
            if report.valid:
                assert report.matches
                valid += 1
        assert valid >= 18

    def test_bound(self, product_map):
        for seed in range(10):
            z = sample_point(product_map, seed=seed, bound=1)
            assert all(c in (-1, 0, 1) for c in z)


# ============================================================================
# Frobenius flock shifts
# ============================================================================

class TestFlock:
    def test_toy_shift(self, toy_ideal):
        shifted = frobenius_flock_shift(toy_ideal, [1, 0, 0], [0, 0, 0])
        expected = IdealPresentation.parse(toy_ideal.ring, ["x + x^2*y - z"])
        assert shifted.ring == toy_ideal.ring
        assert ideal_equal(shifted, expected)

    def test_shift_repairs_the_differential_matroid(self, toy_ideal):
        shifted = frobenius_flock_shift(toy_ideal, [1, 0, 0], [0, 0, 0])
        M = differential_matroid(shifted).diff_matroid
        assert M.rank == 2
        assert len(M.bases) == 3

    def test_shift_keeps_the_algebraic_matroid(self, toy_ideal):
        shifted = frobenius_flock_shift(toy_ideal, [1, 0, 0], [0, 0, 0])
        M = algebraic_matroid(toy_ideal)
        assert matroid_isomorphic(M, algebraic_matroid(shifted)) is not None
        assert matroid_equal(M, algebraic_matroid(shifted))

    @given(st.tuples(st.integers(0, 1), st.integers(0, 1), st.integers(0, 1)))
    @settings(max_examples=8, deadline=None)
    def test_every_small_shift_keeps_the_algebraic_matroid(self, a):
        shifted = frobenius_flock_shift(TOY, a, [0, 0, 0])
        assert shifted.ring == TOY.ring
        assert matroid_equal(algebraic_matroid(shifted), algebraic_matroid(TOY))

    def test_zero_shift_is_identity(self, toy_ideal):
        assert ideal_equal(frobenius_flock_shift(toy_ideal, [0, 0, 0], [0, 0, 0]), toy_ideal)

    def test_needs_positive_characteristic(self, det_ideal):
        with pytest.raises(CharZeroField):
            frobenius_flock_shift(det_ideal, [0] * 4, [0] * 4)

    def test_pair_must_have_a_zero(self, toy_ideal):
        with pytest.raises(ShiftPairNonzero) as info:
            frobenius_flock_shift(toy_ideal, [1, 0, 0], [1, 0, 0])
        assert info.value.index == 0

    def test_length_and_sign(self, toy_ideal):
        with pytest.raises(IndexOutOfRange):
            frobenius_flock_shift(toy_ideal, [1, 0], [0, 0])
        with pytest.raises(ValueError):
            frobenius_flock_shift(toy_ideal, [-1, 0, 0], [0, 0, 0])

    def test_fresh_names_avoid_collisions(self):
        ring = Ring(GF3, ("x", "y1"))
        assert flock_name_map(ring) == {"y1_": "x", "y2": "y1"}


class TestRelationsFromMatrix:
    def test_linear_space_over_gf25(self):
        F = gf25()
        A = as_kmatrix([[1, 0, 1], ["0", "1", "t"]], F)
        ideal = relations_from_matrix(A, F, ["x1", "x2", "x3"])
        assert ideal.ring.vars == ("x1", "x2", "x3", "t")
        expected = IdealPresentation.parse(ideal.ring, ["x3 - x1 - t*x2", "t^2 - 2"])
        assert ideal_equal(ideal, expected)

    @pytest.mark.slow
    def test_perles_configuration(self, load_fixture):
        K = parse_field("QQ[t]/(t^2+t-1)")
        A = as_kmatrix([
            ["1", "1", "1", "0", "0", "0", "1", "1", "1+t"],
            ["t", "0", "-1", "1", "0", "1", "1+t", "0", "1"],
            ["0", "0", "0", "0", "1", "1", "1", "1", "1"],
        ], K)
        ideal = relations_from_matrix(A, K, [f"x{i}" for i in range(1, 10)])
        assert ideal.ring.field == QQ
        assert ideal_equal(ideal, load_fixture("perles_prime.ideal").ideal())
