"""
Tests for log canonical thresholds and the upper-bound search
"""
from fractions import Fraction

import pytest

from src.geometry import surface
from src.geometry.bicover import QDivisorX, pull
from src.geometry.lct import (
    INFINITY,
    SEARCH_ORDER,
    WITNESSES,
    LocalModel,
    glct_upper_search,
    lct_divisor,
    lct_local,
    pullback_of,
    witness_closed_form,
    witness_divisor,
)
from src.geometry.picard import DivClass, anticanonical_class
from src.utils.error_handler import ErrorCode, GeometryError, SearchError


class TestLocalModel:
    """Test the one- and two-branch local models"""

    @pytest.mark.unit
    def test_single_branch(self):
        """Test lct(2L) = 1/2"""
        assert lct_local(LocalModel((2,))) == Fraction(1, 2)

    @pytest.mark.unit
    def test_two_branches(self):
        """Test lct(L1 + 3L2) = 1/3"""
        assert lct_local(LocalModel((1, 3))) == Fraction(1, 3)
        assert lct_local(LocalModel((Fraction(1, 2), Fraction(1, 2)))) == 2

    @pytest.mark.unit
    def test_zero_divisor(self):
        """Test the empty local model has infinite threshold"""
        assert lct_local(LocalModel((0, 0))) == INFINITY

    @pytest.mark.unit
    def test_bad_models(self):
        """Test three branches and negative coefficients are refused"""
        with pytest.raises(GeometryError):
            LocalModel((1, 1, 1))
        with pytest.raises(GeometryError) as exc_info:
            LocalModel((-1,))
        assert exc_info.value.code == ErrorCode.GEO_NEGATIVE_COEFFICIENT


class TestLctDivisor:
    """Test lct of divisors supported on the rigid curves"""

    @pytest.mark.unit
    def test_crossing_of_two_lines(self, catalog_path):
        """Test 4H13 + 2E3 + 2E1 + 2H24 has lct 1/4 with E3.H13 among the minimizers"""
        D = QDivisorX.from_names({"H13": 4, "E3": 2, "E1": 2, "H24": 2}, catalog_path)
        result = lct_divisor(D, catalog_path)
        assert result.value == Fraction(1, 4)
        assert ("E3", "H13") in result.minimizers
        assert ("H13",) in result.minimizers
        assert result.point == result.minimizers[0]
        assert len(result.point) == 2

    @pytest.mark.unit
    def test_single_curve(self, catalog_path):
        """Test lct(2E1) = 1/2 at a general point of E1"""
        result = lct_divisor(QDivisorX.from_names({"E1": 2}, catalog_path), catalog_path)
        assert result.value == Fraction(1, 2)
        assert result.point == ("E1",)

    @pytest.mark.unit
    def test_rational_coefficients(self, catalog_path):
        """Test exact rational thresholds"""
        D = QDivisorX.from_names({"H12": Fraction(3, 2), "H34": Fraction(1, 3)}, catalog_path)
        assert lct_divisor(D, catalog_path).value == Fraction(2, 3)

    @pytest.mark.unit
    def test_mobile_support_is_refused(self, catalog_path):
        """Test a pulled-back general member cannot be in the support"""
        D = QDivisorX.of({pull(DivClass.of(1, 0, 0, 0, 0), "pull(l)"): 1})
        with pytest.raises(GeometryError) as exc_info:
            lct_divisor(D, catalog_path)
        assert exc_info.value.code == ErrorCode.GEO_MOBILE_SUPPORT

    @pytest.mark.unit
    def test_zero_divisor_is_refused(self, catalog_path):
        """Test the zero divisor has no finite lct to report"""
        with pytest.raises(GeometryError):
            lct_divisor(QDivisorX(), catalog_path)


class TestWitnesses:
    """Test the named witnesses against their closed forms"""

    @pytest.mark.unit
    @pytest.mark.parametrize("name,first", [("D1-even", 2), ("D0-odd", 1), ("D1-odd", 1)])
    def test_closed_forms(self, name, first, catalog_path):
        """Test lct of each witness equals its closed form for n up to 10"""
        for n in range(first, 11):
            divisor, _, _ = witness_divisor(name, n, catalog_path)
            assert lct_divisor(divisor, catalog_path).value == witness_closed_form(name, n), (name, n)

    @pytest.mark.unit
    def test_closed_form_values(self):
        """Test the thresholds 1/(4n - 3) and 1/(4n)"""
        assert witness_closed_form("D1-even", 2) == Fraction(1, 5)
        assert witness_closed_form("D0-odd", 1) == 1
        assert witness_closed_form("D1-odd", 3) == Fraction(1, 12)

    @pytest.mark.unit
    def test_minimizing_points(self, catalog_path):
        """Test the minimizers contain the points the bounds are attained at"""
        divisor, _, _ = witness_divisor("D1-odd", 1, catalog_path)
        assert ("H12", "H34") in lct_divisor(divisor, catalog_path).minimizers
        divisor, _, _ = witness_divisor("D1-even", 3, catalog_path)
        assert ("E1", "H12") in lct_divisor(divisor, catalog_path).minimizers

    @pytest.mark.unit
    def test_systems(self, catalog_path):
        """Test the eigen-system each witness lives in"""
        assert witness_divisor("D1-even", 2, catalog_path)[1:] == (4, 1)
        assert witness_divisor("D0-odd", 2, catalog_path)[1:] == (5, 0)
        assert witness_divisor("D1-odd", 2, catalog_path)[1:] == (5, 1)

    @pytest.mark.unit
    def test_out_of_domain(self, catalog_path):
        """Test D1-even needs n >= 2 and unknown witnesses raise"""
        with pytest.raises(GeometryError):
            witness_divisor("D1-even", 1, catalog_path)
        with pytest.raises(GeometryError):
            witness_divisor("D7", 1, catalog_path)
        assert set(WITNESSES) == {"D1-even", "D0-odd", "D1-odd"}


class TestUpperBoundSearch:
    """Test the rigid-decomposition search for glct(X, 2K_X)"""

    @pytest.mark.integration
    def test_full_cap(self, catalog_path):
        """Test coefficients up to 4 give the bound 1/4"""
        result = glct_upper_search(anticanonical_class(), 4, 1, catalog_path)
        assert result.bound == Fraction(1, 4)
        assert result.decompositions > 0
        total = DivClass.zero()
        for name, k in result.witness.items():
            total = total + k * surface.lookup(name, catalog_path).cls
        assert total == anticanonical_class()
        assert max(result.pullback.names().values()) == 4
        assert result.pullback.names() == pullback_of(result.witness, catalog_path).names()

    @pytest.mark.integration
    def test_threads_agree(self, catalog_path):
        """Test the threaded search reports the same witness"""
        single = glct_upper_search(anticanonical_class(), 4, 1, catalog_path)
        threaded = glct_upper_search(anticanonical_class(), 4, 4, catalog_path)
        assert threaded.bound == single.bound
        assert threaded.witness == single.witness
        assert threaded.decompositions == single.decompositions

    @pytest.mark.unit
    def test_reduced_cap(self, catalog_path):
        """Test coefficient cap 1 only reaches 1/2"""
        result = glct_upper_search(anticanonical_class(), 1, 1, catalog_path)
        assert result.bound == Fraction(1, 2)
        assert all(k == 1 for k in result.witness.values())

    @pytest.mark.unit
    def test_no_decomposition(self, catalog_path):
        """Test cap 0 finds nothing"""
        with pytest.raises(SearchError) as exc_info:
            glct_upper_search(anticanonical_class(), 0, 1, catalog_path)
        assert exc_info.value.code == ErrorCode.SEARCH_NO_DECOMPOSITION

    @pytest.mark.unit
    def test_not_effective(self, catalog_path):
        """Test a non-effective target is refused"""
        with pytest.raises(SearchError) as exc_info:
            glct_upper_search(DivClass.of(0, 1, -1, 0, 0), 2, 1, catalog_path)
        assert exc_info.value.code == ErrorCode.SEARCH_NOT_EFFECTIVE

    @pytest.mark.unit
    def test_search_order_covers_rigid_curves(self, catalog_path):
        """Test the tie-break order lists each rigid curve once"""
        assert sorted(SEARCH_ORDER) == sorted(surface.load_catalog(catalog_path).rigid_names())
