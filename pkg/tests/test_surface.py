"""
Tests for the curve catalog of Y, incidence and the building data
"""
import json

import pytest

from src.geometry import surface
from src.geometry.picard import DivClass, pair
from src.utils.error_handler import CatalogError, ErrorCode, GeometryError


class TestCatalog:
    """Test catalog contents and lookups"""

    @pytest.mark.unit
    def test_catalog_names(self, catalog_path):
        """Test the catalog holds the eighteen named curves"""
        names = [c.name for c in surface.catalog(catalog_path)]
        assert len(names) == 18
        assert set(names) == {
            "l", "e1", "e2", "e3", "e4", "h12", "h13", "h14", "h23", "h24", "h34",
            "t1", "t2", "t3", "t4", "t11", "t22", "t33",
        }

    @pytest.mark.unit
    def test_classes_match_names(self, catalog_path):
        """Test each entry carries the class its name denotes"""
        for c in surface.catalog(catalog_path):
            assert c.cls == surface.expected_class(c.name)

    @pytest.mark.unit
    def test_branch_membership(self, catalog_path):
        """Test the three branch divisors"""
        cat = surface.load_catalog(catalog_path)
        branch = {i: sorted(c.name for c in cat.branch_curves(i)) for i in surface.BRANCH_INDICES}
        assert branch[1] == ["e1", "h23", "h24", "t22"]
        assert branch[2] == ["e2", "h13", "h34", "t33"]
        assert branch[3] == ["e3", "h12", "h14", "t11"]
        assert surface.lookup("e4", catalog_path).branch is None
        assert surface.lookup("t11", catalog_path).branch_label == "B3"

    @pytest.mark.unit
    def test_rigid_lines_through_a_point(self, catalog_path):
        """Test t_ii is a fibre of the pencil through P_i: self-intersection 0, degree 2"""
        t11 = surface.lookup("t11", catalog_path).cls
        assert t11 == DivClass.of(1, -1, 0, 0, 0)
        assert pair(t11, t11) == 0
        assert pair(t11, DivClass.of(3, -1, -1, -1, -1)) == 2
        assert not surface.lookup("t11", catalog_path).mobile
        assert surface.lookup("t1", catalog_path).mobile

    @pytest.mark.unit
    def test_unknown_curve(self, catalog_path):
        """Test an unknown name raises"""
        with pytest.raises(GeometryError) as exc_info:
            surface.lookup("e5", catalog_path)
        assert exc_info.value.code == ErrorCode.GEO_UNKNOWN_CURVE


class TestIncidence:
    """Test which rigid curves meet"""

    @pytest.mark.unit
    def test_meets(self, catalog_path):
        """Test incidence of exceptional curves, lines and conics"""
        assert surface.meets("e1", "h12", catalog_path)
        assert not surface.meets("e1", "h34", catalog_path)
        assert surface.meets("h12", "h34", catalog_path)
        assert not surface.meets("h12", "h13", catalog_path)
        assert surface.meets("t11", "t22", catalog_path)
        assert not surface.meets("e1", "e2", catalog_path)
        assert not surface.meets("e1", "e1", catalog_path)

    @pytest.mark.unit
    def test_meets_agrees_with_intersection_numbers(self, catalog_path):
        """Test distinct rigid curves meet exactly when they pair positively"""
        cat = surface.load_catalog(catalog_path)
        names = cat.rigid_names()
        for a in names:
            for b in names:
                if a == b:
                    continue
                positive = pair(cat.lookup(a).cls, cat.lookup(b).cls) > 0
                assert cat.meets(a, b) == positive, (a, b)

    @pytest.mark.unit
    def test_mobile_incidence(self, catalog_path):
        """Test incidence is undefined for general members"""
        with pytest.raises(GeometryError) as exc_info:
            surface.meets("l", "e1", catalog_path)
        assert exc_info.value.code == ErrorCode.GEO_MOBILE_INCIDENCE

    @pytest.mark.unit
    def test_points(self, catalog_path):
        """Test configuration points of a small support"""
        assert surface.points(["e3", "h13"], catalog_path) == [("e3", "h13")]
        assert surface.points(["h13", "e3", "e1", "h24"], catalog_path) == [
            ("e1", "h13"), ("e3", "h13"), ("h13", "h24"),
        ]

    @pytest.mark.unit
    def test_points_refuse_mobile_support(self, catalog_path):
        """Test general members cannot be part of a support"""
        with pytest.raises(GeometryError) as exc_info:
            surface.points(["t1", "e1"], catalog_path)
        assert exc_info.value.code == ErrorCode.GEO_MOBILE_SUPPORT

    @pytest.mark.unit
    def test_concurrent_point(self, tmp_path, catalog_path):
        """Test a listed concurrent point carrying three support curves raises"""
        with open(catalog_path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
        data["concurrent"] = [["e1", "h12", "h13"]]
        path = tmp_path / "concurrent.json"
        path.write_text(json.dumps(data), encoding="utf-8")

        with pytest.raises(GeometryError) as exc_info:
            surface.points(["e1", "h12", "h13"], str(path))
        assert exc_info.value.code == ErrorCode.GEO_TRIPLE_POINT
        assert surface.points(["e1", "h12"], str(path)) == [("e1", "h12")]


class TestBuildingData:
    """Test the branch data checks"""

    @pytest.mark.unit
    def test_shipped_catalog_passes(self, catalog_path):
        """Test every building-data check passes on the shipped catalog"""
        results = surface.validate_building_data(catalog_path)
        assert len(results) == 8
        assert all(r.passed for r in results), [r for r in results if not r.passed]

    @pytest.mark.unit
    def test_corrupted_catalog_fails(self, corrupted_catalog):
        """Test a moved branch flag and a wrong class are both caught"""
        results = {r.name: r for r in surface.validate_building_data(corrupted_catalog)}
        assert not results["B1 class"].passed
        assert not results["B2 class"].passed
        assert not results["2K_Y + B = -K_Y"].passed
        assert "h13" in results["catalog classes match names"].computed


class TestCatalogErrors:
    """Test catalog file failures"""

    @pytest.mark.unit
    def test_missing_file(self, tmp_path):
        """Test an unreadable catalog raises CatalogError"""
        with pytest.raises(CatalogError) as exc_info:
            surface.load_catalog(str(tmp_path / "missing.json"))
        assert exc_info.value.code == ErrorCode.CATALOG_UNREADABLE

    @pytest.mark.unit
    def test_invalid_json(self, tmp_path):
        """Test invalid JSON is reported as malformed"""
        path = tmp_path / "broken.json"
        path.write_text("{ not json", encoding="utf-8")
        with pytest.raises(CatalogError) as exc_info:
            surface.load_catalog(str(path))
        assert exc_info.value.code == ErrorCode.CATALOG_MALFORMED

    @pytest.mark.unit
    def test_bad_branch_flag(self, tmp_path, catalog_path):
        """Test a branch index outside 1..3 is malformed"""
        with open(catalog_path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
        data["curves"][1]["branch"] = 7
        path = tmp_path / "bad_branch.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        with pytest.raises(CatalogError) as exc_info:
            surface.load_catalog(str(path))
        assert exc_info.value.code == ErrorCode.CATALOG_MALFORMED
