"""Every fixture in the corpus satisfies its own assertions"""
import random
from pathlib import Path

import pytest

from arith import gf25, parse_field
from construct import (
    Parameterization, char0_representation, differential_matroid, differential_support,
    frobenius_flock_shift, implicitize
)
from errors import NoValidPoint
from groebner import ideal_membership
from ideal_file import load_ideal_file
from matroid import algebraic_matroid, linear_matroid, matroid_equal, matroid_isomorphic
from poly import Ring, print_poly
from quotfield import as_kmatrix
from validate import Validator, check_fixture, fixture_paths, produced_ideal, validate_fixtures

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
HEAVY = {"perles_prime.ideal", "perles_eliminated.ideal", "nonpappus_gf25.ideal"}


def _fixture_params():
    for path in fixture_paths(FIXTURES):
        marks = [pytest.mark.slow, pytest.mark.timeout(1800)] if path.name in HEAVY else []
        yield pytest.param(path, id=path.stem, marks=marks)


# ============================================================================
# Assertions
# ============================================================================

class TestFixtureAssertions:
    @pytest.mark.parametrize("path", list(_fixture_params()))
    def test_assertions_hold(self, path):
        f = load_ideal_file(path)
        outcomes = check_fixture(f)
        assert outcomes
        failed = [(name, detail) for name, passed, detail in outcomes if not passed]
        assert failed == []

    def test_corpus_is_complete(self):
        names = {p.name for p in fixture_paths(FIXTURES)}
        assert {"det22.ideal", "flock_toy_gf3.ideal", "nonpappus_gf25.ideal", "perles_prime.ideal"} <= names
        assert sum(1 for n in names if n.startswith("synth_")) >= 6


class TestValidator:
    def test_counts(self, tmp_path):
        (tmp_path / "ok.ideal").write_text("field QQ\nvars x y\nprime\ngens\n  x - y\nend\nassert rank 1\n")
        (tmp_path / "wrong.ideal").write_text("field QQ\nvars x y\nprime\ngens\n  x - y\nend\nassert bases 1\n")
        validator = Validator(quiet=True)
        validate_fixtures(validator, tmp_path)
        assert validator.checks_failed == 1
        # parses + assertion + axioms for each file, one of them failing
        assert validator.checks_passed == 5

    def test_broken_file_is_a_failure(self, tmp_path):
        (tmp_path / "bad.ideal").write_text("field GF(4)\nvars x\n")
        validator = Validator(quiet=True)
        validate_fixtures(validator, tmp_path)
        assert validator.checks_failed == 1


class TestCharZeroAgreement:
    @pytest.mark.parametrize("path", [pytest.param(p, id=p.stem) for p in sorted(FIXTURES.glob("synth_*.ideal"))])
    def test_differential_equals_algebraic(self, path):
        ideal = load_ideal_file(path).ideal()
        assert ideal.ring.field.characteristic == 0
        assert matroid_equal(differential_matroid(ideal).diff_matroid, algebraic_matroid(ideal))


# ============================================================================
# Worked examples
# ============================================================================

@pytest.mark.slow
@pytest.mark.timeout(1800)
class TestNonPappus:
    def test_flock_shift_makes_x6_a_loop(self, load_fixture):
        f = load_fixture("nonpappus_gf25.ideal")
        a, b = f.shift
        shifted = frobenius_flock_shift(f.ideal(), a, b)
        D = differential_matroid(shifted)
        assert D.loops() == ["x6"]

    def test_frobenius_powers_make_x6_x7_x8_dependent(self, load_fixture):
        ideal = load_fixture("nonpappus_gf25.ideal").ideal()
        assert algebraic_matroid(ideal).is_independent(["x6", "x7", "x8"])
        assert not differential_matroid(ideal).diff_matroid.is_independent(["x6", "x7", "x8"])

    def test_differentials_of_the_quintic_generators(self, load_fixture):
        ideal = load_fixture("nonpappus_gf25.ideal").ideal()
        expected = {"dx5", "dx6", "dx7", "dx8"}
        assert differential_support(ideal, 4) == expected
        assert differential_support(ideal, 5) == expected

    def test_other_quadratic_extension_gives_the_same_matroid(self, load_fixture):
        f = load_fixture("nonpappus_gf25.ideal")
        field = gf25()
        params = Ring(field, f.params)
        comps = [params.parse(print_poly(c).replace("alpha", "t")) for c in f.components]
        other = implicitize(Parameterization(params, comps, f.vars))
        M = algebraic_matroid(other)
        assert M.rank == 3
        assert matroid_isomorphic(M, algebraic_matroid(f.ideal())) is not None


@pytest.mark.slow
@pytest.mark.timeout(1800)
class TestPerles:
    def test_eliminated_ideal(self, load_fixture):
        f = load_fixture("perles_prime.ideal")
        ideal = produced_ideal(f)
        assert ideal.ring.vars == tuple(f"x{i}" for i in range(1, 10))
        M = algebraic_matroid(ideal)
        assert M.rank == 3
        assert len(M.bases) == 72

    def test_printed_generators(self, load_fixture):
        ideal = load_fixture("perles_eliminated.ideal").ideal()
        ring = ideal.ring
        for member in ("x4 + x5 - x6", "x3 + x6 - x8", "x2 + x5 - x8"):
            assert ideal_membership(ring.parse(member), ideal)
        assert not ideal_membership(ring.parse("x1 + x5 - x9"), ideal)

    def test_isomorphic_to_the_configuration_matrix(self, load_fixture):
        K = parse_field("QQ[t]/(t^2+t-1)")
        A = as_kmatrix([
            ["1", "1", "1", "0", "0", "0", "1", "1", "1+t"],
            ["t", "0", "-1", "1", "0", "1", "1+t", "0", "1"],
            ["0", "0", "0", "0", "1", "1", "1", "1", "1"],
        ], K)
        M = algebraic_matroid(load_fixture("perles_eliminated.ideal").ideal())
        linear = linear_matroid(A, [f"x{i}" for i in range(1, 10)], field=K)
        assert matroid_isomorphic(M, linear) is not None

    def test_rational_points_are_singular(self, load_fixture):
        f = load_fixture("perles_eliminated.ideal")
        ideal = f.ideal()
        target = algebraic_matroid(ideal)
        rng = random.Random(2024)
        line = []
        for _ in range(50):
            k = rng.choice([-1, 1]) * rng.randint(1, 1000)
            line.append([0, 0, 0, 0, k, k, k, k, k])
        with pytest.raises(NoValidPoint) as info:
            char0_representation(ideal, line, target)
        assert len(info.value.reports) == 50
        assert all(r.on_variety and r.matches is False for r in info.value.reports)
