import json
import math
import pytest
from unittest.mock import MagicMock, patch
from atlas.models import VerificationRun
from tests.conftest import ResonanceTableFactory, VerificationRunFactory


@pytest.mark.api
class TestCatalogEndpoints:
    """Tests for the catalog endpoints"""

    def test_list_catalog(self, client):
        """Test the default catalog"""
        response = client.get("/api/catalog")

        assert response.status_code == 200
        data = response.json()
        assert [entry["family"] for entry in data] == ["AIII", "BDI", "CII", "DIII", "EIII"]

    def test_list_catalog_at_p(self, client):
        """Test the catalog at one parameter"""
        response = client.get("/api/catalog", {"p": 5})

        assert response.status_code == 200
        bdi = next(entry for entry in response.json() if entry["family"] == "BDI")
        assert bdi["p"] == 5
        assert bdi["continuation_excluded"] is True

    def test_get_entry(self, client):
        """Test a single entry with exact rho data"""
        response = client.get("/api/catalog/CII:2")

        assert response.status_code == 200
        data = response.json()
        assert data["rho_b1"] == "3/2"
        assert data["rho_norm_sq"] == "29/2"

    def test_unknown_family(self, client):
        """Test that an unknown family is a 404"""
        response = client.get("/api/catalog/XYZ")

        assert response.status_code == 404
        assert response.json()["error"] == "UnknownFamilyError"

    def test_parameter_out_of_range(self, client):
        """Test that an invalid parameter is a 400"""
        response = client.get("/api/catalog/CII:1")

        assert response.status_code == 400
        assert response.json()["error"] == "ParameterRangeError"


@pytest.mark.api
class TestDensityEndpoint:
    """Tests for POST /api/density"""

    def test_evaluate(self, client):
        """Test direct and factored density at a generic point"""
        response = client.post(
            "/api/density",
            data=json.dumps({"space": "EIII", "spectral_point": [0.7, 0.4, 1.9, 1.1]}),
            content_type="application/json",
        )

        assert response.status_code == 200
        data = response.json()
        assert data["space"] == "EIII"
        assert data["rel_diff"] < 1e-10
        assert set(data["product"]) == {"re", "im"}

    def test_wrong_length(self, client):
        """Test that the spectral point needs four numbers"""
        response = client.post(
            "/api/density",
            data=json.dumps({"space": "EIII", "spectral_point": [0.7, 0.4, 1.9]}),
            content_type="application/json",
        )

        assert response.status_code == 400

    def test_pole(self, client):
        """Test that a pole of the density is reported as a 400"""
        response = client.post(
            "/api/density",
            data=json.dumps({"space": "DIII", "spectral_point": [1.5, 0, 3.5, 0]}),
            content_type="application/json",
        )

        assert response.status_code == 400
        assert response.json()["error"] == "PoleError"


@pytest.mark.api
class TestContinuationEndpoint:
    """Tests for POST /api/continuation"""

    def post(self, client, **payload):
        return client.post(
            "/api/continuation", data=json.dumps(payload), content_type="application/json"
        )

    def test_loop_flips_sheet(self, client):
        """Test that a loop around -iL_0 ends on the flipped sheet"""
        path = [
            [0.4 * math.cos(t), -1.5 + 0.4 * math.sin(t)]
            for t in [math.pi / 8 + 2 * math.pi * k / 64 for k in range(65)]
        ]
        response = self.post(client, space="DIII", path=path, eps=[1, 1, 1], with_values=False)

        assert response.status_code == 200
        data = response.json()
        assert len(data) == 65
        assert data[0]["eps"] == [1, 1, 1]
        assert data[-1]["eps"] == [-1, 1, 1]
        assert data[-1]["F_tilde"] is None

    def test_values(self, client):
        """Test that values come back as complex numbers"""
        response = self.post(client, space="DIII", path=[[0.5, -0.3]], eps=[1])

        assert response.status_code == 200
        assert set(response.json()[0]["F_tilde"]) == {"re", "im"}

    def test_bad_sheet(self, client):
        """Test that a sheet sign other than +-1 is a 400"""
        response = self.post(client, space="DIII", path=[[0.5, -0.3]], eps=[2])

        assert response.status_code == 400

    def test_unknown_family(self, client):
        """Test that an unknown family is a 404"""
        response = self.post(client, space="XYZ", path=[[0.5, -0.3]], eps=[1])

        assert response.status_code == 404


@pytest.mark.api
class TestResonanceEndpoints:
    """Tests for the resonance endpoints"""

    def test_by_bound(self, client):
        """Test enumeration up to an exact bound"""
        response = client.get("/api/resonances", {"space": "DIII", "max_radius_sq": "40"})

        assert response.status_code == 200
        data = response.json()
        assert data["max_radius_sq"] == "40/1"
        assert [row["radius_sq"] for row in data["rows"]] == [
            "29/2", "45/2", "53/2", "65/2", "73/2"
        ]

    def test_by_count(self, client):
        """Test enumeration by count"""
        response = client.get("/api/resonances", {"space": "EIII", "count": 2})

        assert response.status_code == 200
        data = response.json()
        assert data["max_radius_sq"] is None
        assert data["rows"][0]["radius_sq"] == "73/2"

    def test_both_bounds(self, client):
        """Test that bound and count are exclusive"""
        response = client.get(
            "/api/resonances", {"space": "DIII", "max_radius_sq": "40", "count": 2}
        )

        assert response.status_code == 400

    def test_excluded_space(self, client):
        """Test that odd p is refused"""
        response = client.get("/api/resonances", {"space": "BDI:5", "count": 2})

        assert response.status_code == 400
        assert response.json()["error"] == "ExcludedSpaceError"

    @pytest.mark.django_db
    def test_stored_tables(self, client):
        """Test listing stored tables by space"""
        ResonanceTableFactory()
        ResonanceTableFactory(space_selector="EIII")

        response = client.get("/api/resonance-tables", {"space": "diii"})

        assert response.status_code == 200
        data = response.json()
        assert len(data) == 1
        assert data[0]["space_selector"] == "DIII"
        assert data[0]["max_radius_sq"] == "40/1"


@pytest.mark.api
@pytest.mark.django_db
class TestVerificationEndpoints:
    """Tests for the verification run endpoints"""

    def test_list_runs(self, client):
        """Test listing runs filtered by suite"""
        VerificationRunFactory(suite="symmetry")
        VerificationRunFactory(suite="monodromy")

        response = client.get("/api/verification-runs", {"suite": "monodromy"})

        assert response.status_code == 200
        assert [run["suite"] for run in response.json()] == ["monodromy"]

    def test_get_run(self, client, verification_run):
        """Test getting a single run"""
        response = client.get(f"/api/verification-runs/{verification_run.id}")

        assert response.status_code == 200
        assert response.json()["suite"] == "plancherel"

    def test_get_missing_run(self, client):
        """Test that a missing run is a 404"""
        response = client.get("/api/verification-runs/99999")

        assert response.status_code == 404

    @patch("atlas.api.run_verification.delay")
    def test_create_run(self, mock_delay, client):
        """Test queueing a verification suite"""
        mock_delay.return_value = MagicMock(id="task-abc")

        response = client.post(
            "/api/verification-runs",
            data=json.dumps({"suite": "symmetry", "space_selector": "diii", "seed": 5}),
            content_type="application/json",
        )

        assert response.status_code == 200
        data = response.json()
        assert data["space_selector"] == "DIII"
        assert data["celery_task_id"] == "task-abc"
        assert data["status"] == "pending"
        run = VerificationRun.objects.get(id=data["id"])
        mock_delay.assert_called_once_with(run.id)

    @patch("atlas.api.run_verification.delay")
    def test_create_unknown_suite(self, mock_delay, client):
        """Test that unknown suites are rejected"""
        response = client.post(
            "/api/verification-runs",
            data=json.dumps({"suite": "nope"}),
            content_type="application/json",
        )

        assert response.status_code == 400
        mock_delay.assert_not_called()
        assert VerificationRun.objects.count() == 0

    @patch("atlas.api.run_verification.delay")
    def test_create_excluded_space(self, mock_delay, client):
        """Test that odd p is only accepted by the plancherel suite"""
        mock_delay.return_value = MagicMock(id="task-1")

        response = client.post(
            "/api/verification-runs",
            data=json.dumps({"suite": "monodromy", "space_selector": "BDI:5"}),
            content_type="application/json",
        )
        assert response.status_code == 400

        response = client.post(
            "/api/verification-runs",
            data=json.dumps({"suite": "plancherel", "space_selector": "BDI:5"}),
            content_type="application/json",
        )
        assert response.status_code == 200
        mock_delay.assert_called_once()
