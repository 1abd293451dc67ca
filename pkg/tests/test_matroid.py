"""Matroid values, oracle enumeration, algebraic and linear matroids, comparison"""
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from arith import PrimeField, Rationals
from config import config
from errors import GroundSetMismatch, GroundSetTooLarge, NotAMatroid
from groebner import IdealPresentation, reduced_presentation, relabel
from matroid import (
    Matroid, algebraic_matroid, algebraic_matroid_async, check_axioms, circuits,
    distinguishing_sets, enumerate_bases, enumerate_bases_async, free_matroid,
    is_independent_algebraic, isomorphism_labels, linear_matroid, matroid_equal,
    matroid_isomorphic, uniform_matroid
)
from poly import Ring
from quotfield import QContext, QMatrix, as_kmatrix, kernel_basis
from utils import mask_of, popcount

QQ = Rationals()
DETERMINANT = "x00*x11 - x01*x10"
XYZ = Ring(QQ, ("x", "y", "z"))


def _terms(exponents):
    return st.lists(st.tuples(exponents, st.integers(-3, 3)), max_size=3).map(
        lambda terms: sum((XYZ.monomial(e, Fraction(k)) for e, k in terms), XYZ.zero()))


# y = h(x), z = f(x, y): prime for every h and f
graph_ideals = st.tuples(
    st.booleans(),
    _terms(st.integers(0, 2).map(lambda a: (a, 0, 0))),
    _terms(st.tuples(st.integers(0, 2), st.integers(0, 2), st.just(0))),
).map(lambda t: IdealPresentation(
    XYZ,
    ((XYZ.var("y") - t[1],) if t[0] else ()) + (XYZ.var("z") - t[2],),
    True,
))


@pytest.fixture
def det_ideal(det_ring):
    return IdealPresentation.parse(det_ring, [DETERMINANT], True)


@pytest.fixture
def parallel():
    """Elements a and b parallel, c a coloop"""
    return Matroid.from_bases("abc", [("a", "c"), ("b", "c")])


# ============================================================================
# Matroid values
# ============================================================================

class TestMatroidValue:
    def test_uniform(self):
        M = uniform_matroid(2, 4)
        assert len(M.bases) == 6
        assert [popcount(c) for c in circuits(M)] == [3, 3, 3, 3]
        assert check_axioms(M)

    def test_free(self):
        M = free_matroid(["x", "y"])
        assert M.rank == 2
        assert M.coloops() == [0, 1]
        assert M.loops() == []
        assert circuits(M) == []

    def test_loops_and_coloops(self, parallel):
        assert parallel.coloops() == [2]
        assert parallel.loops() == []
        with_loop = Matroid.from_bases("abc", [("a",), ("b",)])
        assert with_loop.loops() == [2]

    def test_independence_and_rank(self, parallel):
        assert parallel.is_independent(["a", "c"])
        assert not parallel.is_independent(["a", "b"])
        assert parallel.is_independent([])
        assert parallel.rank_of(["a", "b"]) == 1

    def test_circuits_sorted(self, parallel):
        assert [parallel.names(c) for c in circuits(parallel)] == [["a", "b"]]

    def test_unknown_label(self, parallel):
        with pytest.raises(GroundSetMismatch):
            parallel.mask(["z"])

    def test_bases_of_different_sizes(self):
        with pytest.raises(NotAMatroid):
            Matroid.from_bases("abc", [("a",), ("b", "c")])

    def test_exchange_failure_detected(self):
        M = Matroid.from_bases("abcd", [("a", "b"), ("c", "d")])
        assert not check_axioms(M)

    def test_json(self):
        M = uniform_matroid(2, 3, ["x", "y", "z"])
        data = M.to_json()
        assert data == {
            "n": 3,
            "labels": ["x", "y", "z"],
            "rank": 2,
            "bases": [[0, 1], [0, 2], [1, 2]],
            "circuits": [[0, 1, 2]],
        }
        assert Matroid.from_json(data) == M


# ============================================================================
# Enumeration
# ============================================================================

class TestEnumeration:
    def test_uniform_oracle(self):
        rank, bases = enumerate_bases(4, lambda m: popcount(m) <= 2)
        assert rank == 2
        assert len(bases) == 6

    def test_loop_never_enters_a_basis(self):
        rank, bases = enumerate_bases(3, lambda m: not m & 0b100 and popcount(m) <= 1)
        assert rank == 1
        assert bases == frozenset({0b001, 0b010})

    def test_non_matroid_oracle(self):
        independent = {0, 0b001, 0b010, 0b100, 0b011}
        with pytest.raises(NotAMatroid):
            enumerate_bases(3, lambda m: m in independent)

    def test_parallel_jobs_agree(self):
        serial = enumerate_bases(5, lambda m: popcount(m) <= 3)
        assert enumerate_bases(5, lambda m: popcount(m) <= 3, jobs=3) == serial

    async def test_async_enumeration(self):
        rank, bases = await enumerate_bases_async(4, lambda m: popcount(m) <= 2, jobs=2)
        assert rank == 2
        assert len(bases) == 6


# ============================================================================
# Algebraic matroids
# ============================================================================

class TestAlgebraicMatroid:
    def test_determinantal_is_uniform(self, det_ideal):
        M = algebraic_matroid(det_ideal)
        assert M.labels == ("x00", "x01", "x10", "x11")
        assert matroid_equal(M, uniform_matroid(3, 4, M.labels))

    def test_twisted_cubic(self):
        R = Ring(QQ, ("x", "y", "z"))
        M = algebraic_matroid(IdealPresentation.parse(R, ["y - x^2", "z - x*y"], True))
        assert M.rank == 1
        assert len(M.bases) == 3

    def test_zero_ideal_is_free(self):
        R = Ring(QQ, ("x", "y"))
        assert algebraic_matroid(IdealPresentation(R, ())) == free_matroid(["x", "y"])

    def test_independence_certificates(self, det_ideal, det_ring):
        assert is_independent_algebraic(det_ideal, ["x00", "x01", "x10"]).independent
        report = is_independent_algebraic(det_ideal, det_ring.vars)
        assert not report.independent
        assert report.certificate == det_ring.parse("x01*x10 - x00*x11")
        assert report.to_json()["certificate"] == "x01*x10 - x00*x11"

    def test_prime_field(self):
        R = Ring(PrimeField(3), ("x", "y", "z"))
        M = algebraic_matroid(IdealPresentation.parse(R, ["x^3 + x^6*y - z"], True))
        assert M.rank == 2
        assert len(M.bases) == 3

    def test_ground_set_limit(self, det_ideal, monkeypatch):
        monkeypatch.setattr(config.matroid, "max_ground_set", 3)
        with pytest.raises(GroundSetTooLarge):
            algebraic_matroid(det_ideal)

    @given(graph_ideals)
    @settings(max_examples=20, deadline=None)
    def test_independent_of_the_presentation(self, ideal):
        M = algebraic_matroid(ideal)
        assert check_axioms(M)
        assert matroid_equal(algebraic_matroid(reduced_presentation(ideal)), M)

    @given(graph_ideals)
    @settings(max_examples=20, deadline=None)
    def test_relabel_renames_the_ground_set(self, ideal):
        M = algebraic_matroid(ideal)
        renamed = algebraic_matroid(relabel(ideal, ["a", "b", "c"]))
        assert renamed.labels == ("a", "b", "c")
        assert renamed.rank == M.rank
        assert renamed.bases == M.bases

    async def test_async(self, det_ideal):
        M = await algebraic_matroid_async(det_ideal, jobs=2)
        assert len(M.bases) == 4


# ============================================================================
# Linear matroids
# ============================================================================

class TestLinearMatroid:
    def test_constant_matrix(self):
        A = as_kmatrix([[1, 2, 0, 0], [1, 0, 1, 0], [1, 0, 0, -1]], QQ)
        M = linear_matroid(A, ["x00", "x01", "x10", "x11"])
        assert matroid_equal(M, uniform_matroid(3, 4, M.labels))

    def test_parallel_columns(self):
        F = PrimeField(5)
        M = linear_matroid(as_kmatrix([[1, 1, 0], [0, 0, 1]], F))
        assert M.labels == ("1", "2", "3")
        assert M.bases == frozenset({0b101, 0b110})

    def test_characteristic_matters(self):
        rows = [[1, 0, 1], [0, 1, 2]]
        assert len(linear_matroid(as_kmatrix(rows, QQ)).bases) == 3
        assert len(linear_matroid(as_kmatrix(rows, PrimeField(2))).bases) == 2

    def test_matrix_over_fraction_field(self, det_ideal):
        ctx = QContext(det_ideal)
        J = QMatrix.from_fractions(ctx, [["x11", "-x10", "-x01", "x00"]])
        M = linear_matroid(kernel_basis(J))
        assert M.labels == det_ideal.ring.vars
        assert len(M.bases) == 4

    def test_field_required_for_plain_entries(self):
        with pytest.raises(ValueError):
            linear_matroid([[1, 0], [0, 1]])


# ============================================================================
# Comparison
# ============================================================================

class TestComparison:
    def test_equal_up_to_label_order(self):
        M1 = Matroid.from_bases("abc", [("a", "b")])
        M2 = Matroid.from_bases("bac", [("b", "a")])
        assert matroid_equal(M1, M2)

    def test_different_ground_sets(self, parallel):
        with pytest.raises(GroundSetMismatch):
            matroid_equal(parallel, uniform_matroid(2, 3))

    def test_distinguishing_sets(self, parallel):
        U = uniform_matroid(2, 3, ["a", "b", "c"])
        assert distinguishing_sets(U, parallel) == [mask_of([0, 1])]
        assert distinguishing_sets(U, U) == []

    def test_isomorphism(self, parallel):
        other = Matroid.from_bases("xyz", [("x", "y"), ("x", "z")])
        perm = matroid_isomorphic(parallel, other)
        assert perm is not None
        assert isomorphism_labels(parallel, other, perm)["c"] == "x"
        mapped = {mask_of(perm[i] for i in range(3) if b >> i & 1) for b in parallel.bases}
        assert mapped == set(other.bases)

    def test_not_isomorphic(self, parallel):
        assert matroid_isomorphic(parallel, uniform_matroid(2, 3)) is None

    def test_isomorphism_limit(self, parallel, monkeypatch):
        monkeypatch.setattr(config.matroid, "max_isomorphism_ground_set", 2)
        with pytest.raises(GroundSetTooLarge):
            matroid_isomorphic(parallel, parallel)
