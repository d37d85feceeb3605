"""
Tests for the command-line front end: divisor expressions, reports and exit codes
"""
import json
import os
from fractions import Fraction

import pytest

from scripts.burniat import main
from src.cli import commands
from src.cli.divexpr import parse_divisor
from src.cli.report import Report
from src.config.settings import settings
from src.utils.error_handler import BurniatError, ErrorCode, ExpressionError


@pytest.fixture(autouse=True)
def no_log_file(monkeypatch):
    """Keep CLI runs from writing the rotating log file"""
    monkeypatch.setattr(settings, "LOG_FILE", "")


def expression_error(text):
    with pytest.raises(ExpressionError) as exc_info:
        parse_divisor(text)
    return exc_info.value


class TestDivisorExpressions:
    """Test the divisor mini-language"""

    @pytest.mark.unit
    def test_sum_of_curves(self):
        """Test coefficients and names of a sum"""
        parsed = parse_divisor("4*H13 + 2*E3 + 2*E1 + 2*H24")
        assert parsed.witness is None
        assert parsed.divisor.names() == {
            "H13": Fraction(4), "E3": Fraction(2), "E1": Fraction(2), "H24": Fraction(2),
        }

    @pytest.mark.unit
    def test_rational_and_repeated_terms(self):
        """Test rational coefficients and repeated curves add up"""
        parsed = parse_divisor("1/2*H12 + H12")
        assert parsed.divisor.coefficient("H12") == Fraction(3, 2)

    @pytest.mark.unit
    def test_pullbacks(self):
        """Test pull() doubles a branch curve and keeps a general member whole"""
        assert parse_divisor("pull(e1)").divisor.names() == {"E1": Fraction(2)}
        assert parse_divisor("pull(e4)").divisor.names() == {"E4": Fraction(1)}
        assert parse_divisor("3*pull(l)").divisor.names() == {"pull(l)": Fraction(3)}

    @pytest.mark.unit
    def test_witness(self):
        """Test a named witness reference"""
        assert parse_divisor("@D1-odd").witness == "D1-odd"
        error = expression_error("@D9")
        assert error.code == ErrorCode.EXPR_UNKNOWN_NAME
        assert error.column == 1

    @pytest.mark.unit
    def test_unknown_curve_column(self):
        """Test an unknown name is reported at its column"""
        error = expression_error("4*X9")
        assert error.code == ErrorCode.EXPR_UNKNOWN_NAME
        assert error.column == 3
        error = expression_error("pull(q7)")
        assert error.code == ErrorCode.EXPR_UNKNOWN_NAME
        assert error.column == 6

    @pytest.mark.unit
    def test_syntax_errors(self):
        """Test truncated input, stray characters and empty input"""
        error = expression_error("4*H13 +")
        assert error.code == ErrorCode.EXPR_SYNTAX
        assert error.column == 8
        assert expression_error("2*E1 $").column == 6
        assert expression_error("   ").code == ErrorCode.EXPR_SYNTAX


class TestReport:
    """Test report items and rendering"""

    @pytest.mark.unit
    def test_items_and_exit_code(self):
        """Test pass/fail items decide the exit code"""
        report = Report("demo", {"invariants": "K^2"})
        report.add("K^2", Fraction(5), "invariants", Fraction(5))
        assert report.passed and report.exit_code == 0
        report.add("q", 1, "invariants", 0)
        assert not report.passed and report.exit_code == 1

    @pytest.mark.unit
    def test_informational_item(self):
        """Test an item without an expected value always passes"""
        report = Report("demo", {"invariants": "K^2"})
        item = report.add("note", "1/2", "invariants")
        assert item.passed
        assert "ℹ note: 1/2" in report.render_text()

    @pytest.mark.unit
    def test_unknown_citation(self):
        """Test every item needs a tag from the corpus index"""
        report = Report("demo", {"invariants": "K^2"})
        with pytest.raises(BurniatError) as exc_info:
            report.add("K^2", 5, "made-up", 5)
        assert exc_info.value.code == ErrorCode.IO_MALFORMED_INDEX

    @pytest.mark.unit
    def test_errors_fail_the_report(self):
        """Test an error entry fails a report with passing items"""
        report = Report("demo")
        report.add("K^2", 5, "invariants", 5)
        report.error({"error_code": ErrorCode.GEO_PARAMETER, "error": "invalid parameter"})
        assert report.exit_code == 1
        assert "errors" in report.payload()
        assert "✗ [GEO_008]" in report.render_text()


class TestCommands:
    """Test the command implementations"""

    @pytest.mark.unit
    def test_invariants(self, catalog_path):
        """Test invariants, the K_X table and the building data all pass"""
        report = commands.cmd_invariants(catalog_path)
        assert report.passed, report.errors or [i for i in report.items if not i.passed]
        assert len(report.items) == 4 + 18 + 8
        values = {item.name: item.computed for item in report.items}
        assert values["K^2"] == "5"
        assert values["K_X . E4"] == "2"
        assert values["K_X . pull(l)"] == "6"

    @pytest.mark.unit
    def test_invariants_corrupted_catalog(self, corrupted_catalog):
        """Test a corrupted catalog fails the building-data items"""
        report = commands.cmd_invariants(corrupted_catalog)
        assert report.exit_code == 1
        assert any(not item.passed and item.citation == "building-data" for item in report.items)

    @pytest.mark.unit
    def test_invariants_payload_is_deterministic(self, catalog_path):
        """Test two runs differ only in wall time"""
        first = commands.cmd_invariants(catalog_path)
        second = commands.cmd_invariants(catalog_path)
        assert first.payload() == second.payload()
        assert "wall_time_seconds" in first.to_dict()
        assert "wall_time_seconds" not in first.payload()

    @pytest.mark.unit
    def test_lct_expression(self, catalog_path):
        """Test lct of an expression with its point"""
        report = commands.cmd_lct("4*H13 + 2*E3 + 2*E1 + 2*H24", catalog_path=catalog_path)
        assert report.passed
        assert report.items[0].computed == "1/4"
        assert "E3 . H13" in report.details["minimizers"]

    @pytest.mark.unit
    def test_lct_tie_rule(self, catalog_path):
        """Test the reported point of a tie is the least minimizer and the rule is stated"""
        report = commands.cmd_lct("4*H13 + 2*E3 + 2*E1 + 2*H24", catalog_path=catalog_path)
        assert report.details["point"] == "E1 . H13"
        assert report.details["point"] == report.details["minimizers"][0]
        assert "E3 . H13" in report.details["minimizers"][1:]
        assert "lexicographically" in report.details["tie_rule"]

    @pytest.mark.unit
    def test_lct_witness(self, catalog_path):
        """Test a witness is compared with its closed form and checked for membership"""
        report = commands.cmd_lct("@D1-odd", 1, catalog_path)
        assert report.passed, report.errors
        assert report.items[0].computed == report.items[0].expected == "1/4"
        assert report.items[1].computed == "True"
        assert report.details["system"] == "|3K_X|_1"

    @pytest.mark.unit
    def test_lct_witness_needs_n(self, catalog_path):
        """Test a witness without --n is an error"""
        report = commands.cmd_lct("@D1-odd", catalog_path=catalog_path)
        assert report.exit_code == 1
        assert report.errors[0]["error_code"] == ErrorCode.EXPR_MISSING_N

    @pytest.mark.unit
    def test_lct_mobile_support(self, catalog_path):
        """Test a general member in the support is refused"""
        report = commands.cmd_lct("pull(t1)", catalog_path=catalog_path)
        assert report.errors[0]["error_code"] == ErrorCode.GEO_MOBILE_SUPPORT

    @pytest.mark.unit
    def test_glct_reduced_cap(self, catalog_path):
        """Test a small cap reports a bound without an expected value"""
        report = commands.cmd_glct_upper(1, 1, catalog_path)
        assert report.passed
        assert report.items[0].computed == "1/2"
        assert report.items[0].expected is None
        assert "note" in report.details

    @pytest.mark.unit
    def test_glct_no_decomposition(self, catalog_path):
        """Test cap 0 reports the search error"""
        report = commands.cmd_glct_upper(0, 1, catalog_path)
        assert report.exit_code == 1
        assert report.errors[0]["error_code"] == ErrorCode.SEARCH_NO_DECOMPOSITION

    @pytest.mark.integration
    def test_glct_full_cap(self, catalog_path):
        """Test the full cap reproduces 1/4 and the K_X bound 1/2"""
        report = commands.cmd_glct_upper(4, 4, catalog_path)
        assert report.passed, report.errors
        assert [item.computed for item in report.items] == ["1/4", "1/2"]

    @pytest.mark.unit
    def test_eigensystem(self, catalog_path):
        """Test |2K_X| and |5K_X|"""
        report = commands.cmd_eigensystem(2, catalog_path)
        assert report.passed
        assert report.items[0].computed == "6"
        assert report.items[1].computed == "0,0,0"
        report = commands.cmd_eigensystem(5, catalog_path)
        assert report.passed
        assert report.items[0].computed == "51"

    @pytest.mark.unit
    def test_eigensystem_bad_m(self, catalog_path):
        """Test m = 0 is reported as an error"""
        report = commands.cmd_eigensystem(0, catalog_path)
        assert report.errors[0]["error_code"] == ErrorCode.GEO_PARAMETER

    @pytest.mark.unit
    def test_check_single(self, corpus_dir):
        """Test checking one certificate reports its case"""
        report = commands.cmd_check([os.path.join(corpus_dir, "thm1-case2.4.cert")], workers=1)
        assert report.passed
        assert report.items[0].computed == "VALID"
        assert report.details["case"]

    @pytest.mark.unit
    def test_check_invalid(self, tmp_path):
        """Test an invalid certificate fails the report and lists the failure"""
        report = commands.cmd_check([str(tmp_path / "thm1-missing.cert")], workers=1)
        assert report.exit_code == 1
        assert report.items[0].computed == "INVALID"
        assert report.details["failures"]

    @pytest.mark.unit
    def test_check_without_targets(self):
        """Test an empty target list is an error"""
        report = commands.cmd_check([])
        assert report.errors[0]["error_code"] == ErrorCode.IO_NOT_FOUND

    @pytest.mark.unit
    def test_check_mutate(self, corpus_dir):
        """Test the mutation harness through the command"""
        report = commands.cmd_check([os.path.join(corpus_dir, "thm1-case2.4.cert")], mutate=True, workers=1)
        assert report.passed
        assert report.items[0].computed == "12/12 killed"


class TestMain:
    """Test argument handling and exit codes"""

    @pytest.mark.unit
    def test_invariants_json(self, capsys):
        """Test JSON output is parseable and exit code is 0"""
        assert main(["invariants", "--format", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["command"] == "invariants"
        assert data["passed"] is True
        assert "wall_time_seconds" in data

    @pytest.mark.unit
    def test_text_output(self, capsys):
        """Test the text report ends with a PASS line"""
        assert main(["eigensystem", "2"]) == 0
        out = capsys.readouterr().out
        assert "✓ P_2: 6 (expected 6)" in out
        assert "PASS" in out

    @pytest.mark.unit
    def test_usage_errors(self, capsys):
        """Test missing commands and check without paths exit with 2"""
        assert main([]) == 2
        assert main(["check"]) == 2
        assert main(["eigensystem", "two"]) == 2

    @pytest.mark.unit
    def test_failure_exit_code(self, capsys):
        """Test a bad expression exits with 1"""
        assert main(["lct", "4*X9", "--format", "json"]) == 1
        data = json.loads(capsys.readouterr().out)
        assert data["errors"][0]["error_code"] == ErrorCode.EXPR_UNKNOWN_NAME

    @pytest.mark.unit
    def test_corrupted_catalog_exit_code(self, monkeypatch, corrupted_catalog, capsys):
        """Test the corrupted catalog makes invariants exit with 1"""
        monkeypatch.setattr(settings, "CATALOG_FILE", corrupted_catalog)
        assert main(["--quiet", "invariants"]) == 1
        assert "FAIL" in capsys.readouterr().out
        assert main(["invariants", "--quiet"]) == 1
        assert "✗" in capsys.readouterr().out

    @pytest.mark.unit
    def test_check_path(self, corpus_dir, capsys):
        """Test check on one file"""
        assert main(["check", os.path.join(corpus_dir, "thm3-anti-case11.cert"), "--workers", "1"]) == 0
        assert "thm3-anti-case11: VALID" in capsys.readouterr().out
