"""
Tests for the bidouble cover X: intersections, invariants and eigen-systems
"""
from fractions import Fraction

import pytest

from src.geometry import bicover, surface
from src.geometry.bicover import QDivisorX, canonical_divisor, curve, ixn, pull
from src.geometry.lct import WITNESSES, witness_divisor
from src.geometry.picard import DivClass, anticanonical_class, pair
from src.utils.error_handler import ErrorCode, GeometryError

# K_X against the named curves of X
K_X_TABLE = {
    "E1": 1, "E2": 1, "E3": 1, "E4": 2,
    "H12": 1, "H13": 1, "H14": 1, "H23": 1, "H24": 1, "H34": 1,
    "T11": 2, "T22": 2, "T33": 2,
}


class TestCurves:
    """Test upstairs curves and their ramification"""

    @pytest.mark.unit
    def test_branch_curves_are_ramified(self, catalog_path):
        """Test reduced preimages of branch curves carry ramification 2"""
        assert curve("E1", catalog_path).ram == 2
        assert curve("T22", catalog_path).ram == 2
        assert curve("E4", catalog_path).ram == 1

    @pytest.mark.unit
    def test_self_intersections(self, catalog_path):
        """Test E1^2 = -1, E4^2 = -4 and T11^2 = 0"""
        assert ixn(curve("E1", catalog_path), curve("E1", catalog_path)) == -1
        assert ixn(curve("E4", catalog_path), curve("E4", catalog_path)) == -4
        assert ixn(curve("T11", catalog_path), curve("T11", catalog_path)) == 0
        assert ixn(curve("H12", catalog_path), curve("H34", catalog_path)) == 1

    @pytest.mark.unit
    def test_unknown_curve(self, catalog_path):
        """Test an unknown upstairs name raises"""
        with pytest.raises(GeometryError) as exc_info:
            curve("E5", catalog_path)
        assert exc_info.value.code == ErrorCode.GEO_UNKNOWN_CURVE

    @pytest.mark.unit
    def test_pull_of_branch_curve_is_twice_reduced_preimage(self, catalog_path):
        """Test phi^*(e1) = 2 E1 numerically"""
        doubled = QDivisorX.from_names({"E1": 2}, catalog_path)
        pulled = pull(surface.lookup("e1", catalog_path).cls, "pull(e1)")
        for name in K_X_TABLE:
            other = curve(name, catalog_path)
            assert ixn(doubled, other) == ixn(pulled, other)

    @pytest.mark.unit
    def test_divisor_arithmetic(self, catalog_path):
        """Test sums, scalars and name lookups of divisors"""
        D = QDivisorX.from_names({"H13": 4, "E3": 2}, catalog_path)
        D = D + QDivisorX.from_names({"E3": 1}, catalog_path)
        assert D.coefficient("E3") == 3
        assert D.coefficient("E1") == 0
        assert (2 * D).names() == {"H13": Fraction(8), "E3": Fraction(6)}
        assert str(D) == "3*E3 + 4*H13"


class TestInvariants:
    """Test the numerical invariants of X"""

    @pytest.mark.unit
    def test_invariants(self, catalog_path):
        """Test K^2 = 5, p_g = 0, chi = 1, q = 0"""
        inv = bicover.invariants(catalog_path)
        assert inv.K2 == 5
        assert inv.pg == 0
        assert inv.chi == 1
        assert inv.q == 0

    @pytest.mark.unit
    def test_canonical_intersection_table(self, catalog_path):
        """Test K_X against every rigid curve and the pulled-back mobile classes"""
        k_x = canonical_divisor()
        for name, expected in K_X_TABLE.items():
            assert ixn(k_x, curve(name, catalog_path)) == expected, name
        assert ixn(k_x, pull(surface.lookup("l", catalog_path).cls)) == 6
        for i in range(1, 5):
            assert ixn(k_x, pull(surface.lookup(f"t{i}", catalog_path).cls)) == 4

    @pytest.mark.property
    def test_projection_formula(self, rng):
        """Test phi^*a . phi^*b = 4 a.b on random classes"""
        for _ in range(1000):
            a = DivClass.of(*[rng.randint(-10, 10) for _ in range(5)])
            b = DivClass.of(*[rng.randint(-10, 10) for _ in range(5)])
            assert ixn(pull(a), pull(b)) == 4 * pair(a, b)

    @pytest.mark.property
    def test_reduced_preimage_against_pullback(self, rng, catalog_path):
        """Test C . phi^*a = 4 c.a / ram for rigid C over c"""
        names = list(K_X_TABLE)
        for _ in range(1000):
            c = curve(rng.choice(names), catalog_path)
            a = DivClass.of(*[rng.randint(-10, 10) for _ in range(5)])
            assert ixn(c, pull(a)) * c.ram == 4 * pair(c.down, a)


class TestEigenSystems:
    """Test the eigen-decomposition of |mK_X|"""

    @pytest.mark.unit
    def test_bicanonical_anti_invariant_parts_vanish(self, catalog_path):
        """Test |2K_X|_i is empty for i = 1, 2, 3"""
        for i in (1, 2, 3):
            assert bicover.eigen_system(2, i, catalog_path).dim == 0
        assert bicover.eigen_system(2, 0, catalog_path).dim == 6

    @pytest.mark.unit
    def test_plurigenera(self, catalog_path):
        """Test the eigen dimensions add up to 1 + 5m(m-1)/2"""
        for m in range(2, 13):
            assert bicover.plurigenus(m, catalog_path) == 1 + 5 * m * (m - 1) // 2, m

    @pytest.mark.unit
    def test_fixed_parts(self, catalog_path):
        """Test fixed curves of the even and odd systems"""
        assert bicover.fixed_curves("even", 0, catalog_path) == []
        odd_one = sorted(c.name for c in bicover.fixed_curves("odd", 1, catalog_path))
        assert odd_one == ["E1", "H23", "H24", "T22"]
        even_one = sorted(c.name for c in bicover.fixed_curves("even", 1, catalog_path))
        assert even_one == ["E2", "E3", "H12", "H13", "H14", "H34", "T11", "T33"]
        assert len(bicover.fixed_curves("odd", 0, catalog_path)) == 12

    @pytest.mark.unit
    def test_class_of_each_system(self, catalog_path):
        """Test fixed plus mobile part has the class of mK_X"""
        for m in range(1, 8):
            for i in range(4):
                system = bicover.eigen_system(m, i, catalog_path)
                total = system.fixed.vector() + system.mobile_class
                assert total == Fraction(m, 2) * anticanonical_class(), (m, i)

    @pytest.mark.unit
    def test_bad_parameters(self, catalog_path):
        """Test m < 1, a bad index and P_1 are refused"""
        with pytest.raises(GeometryError):
            bicover.eigen_system(0, 0, catalog_path)
        with pytest.raises(GeometryError):
            bicover.eigen_system(2, 4, catalog_path)
        with pytest.raises(GeometryError):
            bicover.plurigenus(1, catalog_path)

    @pytest.mark.unit
    def test_witnesses_are_members(self, catalog_path):
        """Test each named witness lies in its eigen-system"""
        for name, entry in WITNESSES.items():
            for n in range(entry["domain"], entry["domain"] + 6):
                divisor, m, index = witness_divisor(name, n, catalog_path)
                assert bicover.is_member(divisor, m, index, catalog_path), (name, n)

    @pytest.mark.unit
    def test_membership_needs_fixed_part(self, catalog_path):
        """Test a divisor of the right class missing the fixed part is not a member"""
        D, m, index = witness_divisor("D1-odd", 1, catalog_path)
        assert bicover.class_of_member(D) == Fraction(3, 2) * anticanonical_class()
        # |3K_X|_0 has all twelve ramification curves fixed; T11 is missing here
        assert not bicover.is_member(D, 3, 0, catalog_path)
        assert not bicover.is_member(D, 5, 1, catalog_path)
