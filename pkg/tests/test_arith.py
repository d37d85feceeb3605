"""
Tests for exact linear arithmetic: constraints, Fourier-Motzkin and the simplex oracle
"""
from fractions import Fraction

import pytest

from src.arith.fourier_motzkin import fm_infeasible
from src.arith.linear import EQ, GE, GT, LinearConstraint
from src.arith.simplex import LinearProgram, find_point


def row(coeffs, const=0, rel=GE):
    return LinearConstraint.build(coeffs, const, rel)


class TestLinearConstraint:
    """Test constraint construction and evaluation"""

    @pytest.mark.unit
    def test_build_drops_zero_coefficients(self):
        """Test zero coefficients are not stored"""
        c = row({"a": 2, "b": 0}, -3)
        assert c.variables == frozenset({"a"})
        assert c.coefficient("b") == 0
        assert c.coefficient("a") == 2

    @pytest.mark.unit
    def test_holds(self):
        """Test the three relations against an assignment"""
        assert row({"a": 1}, -2, GE).holds({"a": Fraction(2)})
        assert not row({"a": 1}, -2, GT).holds({"a": Fraction(2)})
        assert row({"a": 1}, -2, EQ).holds({"a": Fraction(2)})

    @pytest.mark.unit
    def test_trivial_violation(self):
        """Test variable-free rows are recognised as false"""
        assert row({}, -1, GE).is_trivial_violation()
        assert row({}, 0, GT).is_trivial_violation()
        assert not row({}, 0, GE).is_trivial_violation()
        assert not row({"a": 1}, -5).is_trivial_violation()

    @pytest.mark.unit
    def test_unknown_relation(self):
        """Test an unknown relation is refused"""
        with pytest.raises(ValueError):
            LinearConstraint.build({"a": 1}, 0, "<")


class TestFourierMotzkin:
    """Test elimination on hand-made systems"""

    @pytest.mark.unit
    def test_strict_and_weak_bound_conflict(self):
        """Test x <= 2 together with x > 2 is infeasible"""
        result = fm_infeasible([row({"x": -1}, 2, GE), row({"x": 1}, -2, GT)])
        assert result.infeasible
        assert result.conflict.is_trivial_violation()

    @pytest.mark.unit
    def test_parameterized_chain(self):
        """Test n >= 2, 2n >= a - b + 3 and 2n + a - b > 4n - 3 have no solution"""
        rows = [
            row({"n": 1}, -2),
            row({"n": 2, "a": -1, "b": 1}, -3),
            row({"n": -2, "a": 1, "b": -1}, 3, GT),
        ]
        assert fm_infeasible(rows).infeasible

    @pytest.mark.unit
    def test_feasible_system_has_witness(self):
        """Test a feasible system returns a satisfying assignment"""
        rows = [row({"a": 1}), row({"b": 1}), row({"a": 1, "b": 1}, -3, GT), row({"a": -1}, 1)]
        result = fm_infeasible(rows)
        assert not result.infeasible
        assert all(r.holds(result.witness) for r in rows)

    @pytest.mark.unit
    def test_equalities_are_substituted(self):
        """Test a = b + 1, b >= 0, a < 1 is infeasible"""
        rows = [row({"a": 1, "b": -1}, -1, EQ), row({"b": 1}), row({"a": -1}, 1, GT)]
        assert fm_infeasible(rows).infeasible

    @pytest.mark.unit
    def test_trivial_row(self):
        """Test a false constant row is reported directly"""
        result = fm_infeasible([row({}, -1)])
        assert result.infeasible
        assert result.eliminated == []

    @pytest.mark.unit
    def test_empty_system(self):
        """Test the empty system is feasible"""
        result = fm_infeasible([])
        assert not result.infeasible
        assert result.witness == {}


class TestSimplexOracle:
    """Test the independent LP feasibility oracle"""

    @pytest.mark.unit
    def test_find_point_strict(self):
        """Test strict rows get a positive margin"""
        point = find_point([row({"x": 1}, 0, GT), row({"x": -1}, 1)])
        assert point is not None
        assert 0 < point["x"] <= 1

    @pytest.mark.unit
    def test_find_point_infeasible(self):
        """Test an empty strict interval has no point"""
        assert find_point([row({"x": 1}, 0, GT), row({"x": -1}, 0)]) is None

    @pytest.mark.unit
    def test_linear_program_feasibility(self):
        """Test a non-negative program with an equality"""
        program = LinearProgram(num_vars=2)
        program.add_equality([1, 1], 3)
        assert program.is_feasible()
        program.add_inequality([1, 1], 2)
        assert not program.is_feasible()


class TestRandomSystems:
    """Test elimination against the simplex oracle on random systems"""

    @pytest.mark.property
    def test_agrees_with_simplex(self, rng):
        """Test feasibility verdicts and witnesses on seeded random systems"""
        relations = [GE, GE, GE, GT, GT, EQ]
        infeasible_seen = 0
        for _ in range(1000):
            names = [f"x{k}" for k in range(rng.randint(1, 8))]
            rows = []
            for _ in range(rng.randint(1, 7)):
                chosen = rng.sample(names, rng.randint(1, min(3, len(names))))
                coeffs = {name: rng.randint(-9, 9) for name in chosen}
                rows.append(row(coeffs, rng.randint(-9, 9), rng.choice(relations)))

            result = fm_infeasible(rows)
            point = find_point(rows)
            if point is not None:
                assert all(r.holds(point) for r in rows)
            assert result.infeasible == (point is None), [str(r) for r in rows]
            if result.infeasible:
                infeasible_seen += 1
                assert result.conflict.is_trivial_violation()
            else:
                assert all(r.holds(result.witness) for r in rows)
        assert infeasible_seen > 0
