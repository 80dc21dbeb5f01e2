import pytest
from atlas.exceptions import ExcludedSpaceError, ParameterRangeError, QuadratureConvergenceError
from atlas.rootdata import lookup_selector
from atlas.verification import (
    DEFAULT_TOLERANCES,
    SUITE_NAMES,
    SUITES,
    SuiteReport,
    default_spaces,
    run_suite,
    tolerances,
)


@pytest.mark.unit
class TestTolerances:
    """Tests for pass thresholds"""

    def test_defaults(self, settings):
        """Test the default thresholds"""
        settings.RES_ATLAS_TOL = None
        assert tolerances() == DEFAULT_TOLERANCES
        assert tolerances()["residue"] == 1e-8

    def test_override(self, settings):
        """Test that RES_ATLAS_TOL replaces every threshold"""
        settings.RES_ATLAS_TOL = "1e-6"
        assert set(tolerances().values()) == {1e-6}
        assert set(tolerances()) == set(DEFAULT_TOLERANCES)


@pytest.mark.unit
class TestSuiteReport:
    """Tests for SuiteReport bookkeeping"""

    def test_record_compares_against_threshold(self):
        """Test that errors below the threshold pass"""
        report = SuiteReport("symmetry", seed=3)
        assert report.record("small", "DIII", 1e-12, 1e-11).passed is True
        assert report.record("large", "DIII", 1e-9, 1e-11).passed is False
        assert report.record("nan", "DIII", float("nan"), 1e-11).passed is False
        assert report.passed is False
        assert report.max_error == 1e-9

    def test_boolean_checks(self):
        """Test checks without a numerical error"""
        report = SuiteReport("enumeration", seed=0)
        report.record("flag", "EIII", passed=True)
        assert report.passed is True
        assert report.max_error is None

    def test_as_dict(self):
        """Test the serialized report"""
        report = SuiteReport("residues", seed=7)
        report.record("check", "DIII", 2e-10, 1e-8, detail="h=0")
        data = report.as_dict()
        assert data["suite"] == "residues"
        assert data["seed"] == 7
        assert data["passed"] is True
        assert data["checks"][0]["detail"] == "h=0"
        assert data["checks"][0]["threshold"] == 1e-8


@pytest.mark.unit
class TestRunSuite:
    """Tests for suite dispatch"""

    def test_suite_names(self):
        """Test the seven suites"""
        assert len(SUITE_NAMES) == 7
        assert "monodromy" in SUITE_NAMES

    def test_unknown_suite(self):
        """Test that unknown suites are rejected"""
        with pytest.raises(ParameterRangeError):
            run_suite("nope")

    def test_excluded_space(self):
        """Test that odd p is refused outside the plancherel suite"""
        with pytest.raises(ExcludedSpaceError):
            run_suite("cancellation", [lookup_selector("BDI:5")])

    def test_default_spaces(self):
        """Test the default space lists"""
        labels = [s.label for s in default_spaces("plancherel")]
        assert "BDI:5" in labels
        assert "CII:2" in labels
        assert [s.label for s in default_spaces("symmetry")] == ["AIII:3", "BDI:4", "CII:2", "DIII", "EIII"]

    def test_plancherel_accepts_odd_p(self):
        """Test the plancherel suite on an excluded space"""
        report = run_suite("plancherel", [lookup_selector("BDI:5")], seed=1, samples=10)
        assert report.passed, report.as_dict()

    def test_cancellation(self, diii):
        """Test the cancellation suite on one space"""
        report = run_suite("cancellation", [diii])
        assert report.passed, report.as_dict()
        assert {c.name for c in report.checks} == {
            "exact vanishing set",
            "no residue on the vanishing set",
        }

    def test_numerical_error_is_a_failed_check(self, diii, monkeypatch):
        """Test that a library error inside a suite becomes a failed check"""

        def breaks_down(report, spaces, rng, tol, **options):
            report.record("vartheta symmetries", "DIII", 0.0, 1e-11)
            raise QuadratureConvergenceError("no convergence on |w| = 1 with 32768 nodes")

        monkeypatch.setitem(SUITES, "symmetry", breaks_down)
        report = run_suite("symmetry", [diii])

        assert not report.passed
        assert [c.name for c in report.checks] == ["vartheta symmetries", "suite ran to completion"]
        assert report.checks[-1].space == "DIII"
        assert "QuadratureConvergenceError" in report.checks[-1].detail

    def test_usage_error_still_raises(self, diii, monkeypatch):
        """Test that parameter errors inside a suite are not swallowed"""

        def bad_radius(report, spaces, rng, tol, **options):
            raise ParameterRangeError("radius must lie in (0, 1), got 1.0")

        monkeypatch.setitem(SUITES, "symmetry", bad_radius)
        with pytest.raises(ParameterRangeError):
            run_suite("symmetry", [diii])


@pytest.mark.slow
class TestSuitesPass:
    """Run whole suites; these take a while"""

    @pytest.mark.parametrize("suite", ["plancherel", "cancellation", "residues"])
    def test_suite_passes(self, suite):
        """Test that the suite passes on its default spaces"""
        report = run_suite(suite, seed=0)
        assert report.passed, [c for c in report.checks if not c.passed]

    def test_enumeration(self, eiii):
        """Test the enumeration suite without pole detection"""
        report = run_suite("enumeration", [eiii], max_radius_sq=200)
        assert report.passed, [c for c in report.checks if not c.passed]

    def test_symmetry(self, cii2):
        """Test the symmetry suite with fewer samples"""
        report = run_suite("symmetry", [cii2], seed=2, samples=40, evenness_points=4)
        assert report.passed, [c for c in report.checks if not c.passed]

    @pytest.mark.parametrize(
        "suite,options",
        [
            ("symmetry", {"samples": 20, "evenness_points": 3}),
            ("deformation", {"segments": (-1, 0), "points": 2}),
            ("monodromy", {"ells": 2}),
        ],
    )
    def test_integer_rho_tilde(self, aiii3, suite, options):
        """Test the contour suites on AIII:3, whose quadrature nodes hit removable points"""
        report = run_suite(suite, [aiii3], seed=4, **options)
        assert report.passed, [c for c in report.checks if not c.passed]
