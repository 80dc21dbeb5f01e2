import pytest
from unittest.mock import MagicMock, patch
from celery.exceptions import Retry
from django.db import OperationalError
from atlas.exceptions import QuadratureConvergenceError
from atlas.models import ResonanceTable, VerificationRun
from atlas.tasks import (
    build_resonance_table,
    enumerate_block,
    run_verification,
    schedule_verification_suites,
    store_resonance_table,
)
from atlas.verification import SUITE_NAMES
from tests.conftest import VerificationRunFactory


@pytest.mark.integration
@pytest.mark.django_db
class TestRunVerification:
    """Tests for the run_verification task"""

    def test_run_passes(self):
        """Test a cancellation run on one space"""
        run = VerificationRunFactory(suite="cancellation", space_selector="DIII")

        result = run_verification(run.id)

        run.refresh_from_db()
        assert result["status"] == "success"
        assert result["passed"] is True
        assert run.status == "passed"
        assert run.started_at is not None
        assert run.finished_at is not None
        assert run.report["suite"] == "cancellation"

    def test_missing_run(self):
        """Test that a missing run returns an error"""
        assert run_verification(99999) == {"error": "Verification run not found"}

    def test_failing_checks(self, settings):
        """Test that failed checks mark the run as failed, not errored"""
        settings.RES_ATLAS_TOL = "0"
        run = VerificationRunFactory(suite="cancellation", space_selector="DIII")

        result = run_verification(run.id)

        run.refresh_from_db()
        assert result["passed"] is False
        assert run.status == "failed"

    def test_excluded_space(self):
        """Test that an excluded space marks the run as errored"""
        run = VerificationRunFactory(suite="monodromy", space_selector="BDI:5")

        result = run_verification(run.id)

        run.refresh_from_db()
        assert "ExcludedSpaceError" in result["error"]
        assert run.status == "error"

    @patch("atlas.tasks.run_suite")
    def test_library_error(self, mock_run_suite):
        """Test that numerical failures are stored on the run"""
        mock_run_suite.side_effect = QuadratureConvergenceError("no convergence on |w| = 1")
        run = VerificationRunFactory(suite="symmetry", space_selector="")

        result = run_verification(run.id)

        run.refresh_from_db()
        assert run.status == "error"
        assert "no convergence" in run.error_message
        assert "QuadratureConvergenceError" in result["error"]
        mock_run_suite.assert_called_once_with("symmetry", None, seed=run.seed)

    @patch("atlas.tasks.run_verification.retry")
    @patch("atlas.tasks.run_suite")
    def test_database_error_retries(self, mock_run_suite, mock_retry):
        """Test that a database error schedules a retry"""
        error = OperationalError("connection reset")
        mock_run_suite.side_effect = error
        mock_retry.side_effect = Retry()
        run = VerificationRunFactory(suite="cancellation", space_selector="DIII")

        with pytest.raises(Retry):
            run_verification(run.id)

        mock_retry.assert_called_once_with(countdown=60, exc=error)


@pytest.mark.integration
@pytest.mark.django_db
class TestScheduleVerificationSuites:
    """Tests for the nightly scheduling task"""

    @patch("atlas.tasks.run_verification.delay")
    def test_schedules_every_suite(self, mock_delay, settings):
        """Test that one run per suite is created and queued"""
        settings.ATLAS_DEFAULT_SEED = 11
        mock_delay.return_value = MagicMock(id="task-1")

        result = schedule_verification_suites()

        assert result["status"] == "success"
        assert len(result["scheduled_runs"]) == len(SUITE_NAMES)
        assert mock_delay.call_count == len(SUITE_NAMES)
        runs = VerificationRun.objects.all()
        assert {run.suite for run in runs} == set(SUITE_NAMES)
        assert all(run.seed == 11 and run.celery_task_id == "task-1" for run in runs)

    @patch("atlas.tasks.run_verification.delay")
    def test_unknown_selector(self, mock_delay):
        """Test that nothing is queued for an unknown space"""
        result = schedule_verification_suites(selector="XYZ")

        assert "UnknownFamilyError" in result["error"]
        mock_delay.assert_not_called()
        assert VerificationRun.objects.count() == 0


@pytest.mark.integration
@pytest.mark.django_db
class TestResonanceTableTasks:
    """Tests for the partitioned resonance enumeration"""

    def test_enumerate_block(self):
        """Test one ell-row as JSON-friendly triples"""
        assert enumerate_block("DIII", 0, "40/1") == [[58, 0, 0], [90, 0, 1], [130, 0, 2]]

    def test_store_merges_blocks(self):
        """Test that blocks in any order merge into one table"""
        blocks = [enumerate_block("DIII", ell, "40/1") for ell in (1, 0)]

        result = store_resonance_table(blocks, "DIII", "40/1")

        table = ResonanceTable.objects.get(id=result["table_id"])
        assert result["row_count"] == 5
        assert [row["radius_sq"] for row in table.rows] == ["29/2", "45/2", "53/2", "65/2", "73/2"]
        assert table.max_radius_sq == "40/1"

    @patch("atlas.tasks.chord")
    def test_build_schedules_a_chord(self, mock_chord):
        """Test that one header task per ell-row is scheduled"""
        mock_chord.return_value.return_value = MagicMock(id="chord-1")

        result = build_resonance_table("DIII", "40")

        assert result == {"blocks": 2, "task_id": "chord-1", "status": "scheduled"}
        header = mock_chord.call_args[0][0]
        assert [sig.args for sig in header] == [("DIII", 0, "40/1", 1.0), ("DIII", 1, "40/1", 1.0)]

    @patch("atlas.tasks.chord")
    def test_build_below_first_resonance(self, mock_chord):
        """Test that an empty table is stored directly"""
        result = build_resonance_table("DIII", "14")

        assert result["blocks"] == 0
        mock_chord.assert_not_called()
        assert ResonanceTable.objects.get(id=result["table_id"]).row_count == 0

    def test_build_excluded_space(self):
        """Test that odd p is refused"""
        result = build_resonance_table("BDI:5", "40")

        assert "ExcludedSpaceError" in result["error"]
