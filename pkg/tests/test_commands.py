import csv
import io
import json
import math
import pytest
from django.core.management import call_command
from django.core.management.base import CommandError
from atlas.contour import ONE, ContourConfig, F_of_z
from atlas.exceptions import QuadratureConvergenceError
from atlas.models import VerificationRun
from atlas.rootdata import lookup_selector
from atlas.verification import SUITES


def run(name, **options):
    out = io.StringIO()
    call_command(name, stdout=out, **options)
    return out.getvalue()


@pytest.mark.unit
class TestCatalogCommand:
    """Tests for manage.py catalog"""

    def test_default_json(self):
        """Test the default catalog as JSON"""
        data = json.loads(run("catalog"))
        assert [entry["family"] for entry in data["entries"]] == ["AIII", "BDI", "CII", "DIII", "EIII"]
        assert "isomorphisms" not in data

    def test_single_space(self):
        """Test one entry with the isomorphism cross-check"""
        data = json.loads(run("catalog", space="EIII", isomorphisms=True))
        assert len(data["entries"]) == 1
        assert data["entries"][0]["rho_norm_sq"] == "73/2"
        assert data["isomorphisms"]["all_agree"] is True

    def test_csv(self):
        """Test CSV output at several parameters"""
        rows = list(csv.DictReader(io.StringIO(run("catalog", p=[2, 4], format="csv"))))
        labels = {(row["family"], row["p"]) for row in rows}
        assert ("CII", "2") in labels
        assert ("BDI", "4") in labels
        assert "group" not in rows[0]

    def test_unknown_family(self):
        """Test that an unknown family exits with 3"""
        with pytest.raises(CommandError) as excinfo:
            run("catalog", space="XYZ")
        assert excinfo.value.returncode == 3


@pytest.mark.unit
class TestDensityCommand:
    """Tests for manage.py density"""

    def test_density(self):
        """Test direct and factored values at a generic point"""
        data = json.loads(run("density", space="CII:2", spectral_point="0.7,0.4,1.9,1.1"))
        assert data["space"] == "CII:2"
        assert data["rel_diff"] < 1e-10

    def test_pole(self):
        """Test that a density pole exits with 3"""
        with pytest.raises(CommandError) as excinfo:
            run("density", space="DIII", spectral_point="1.5,0,3.5,0")
        assert excinfo.value.returncode == 3

    def test_malformed_lambda(self):
        """Test that a malformed spectral point exits with 3"""
        with pytest.raises(CommandError) as excinfo:
            run("density", space="DIII", spectral_point="1,2")
        assert excinfo.value.returncode == 3

    def test_missing_lambda(self):
        """Test that a missing required option exits with 3"""
        with pytest.raises(CommandError) as excinfo:
            run("density", space="DIII")
        assert excinfo.value.returncode == 3


@pytest.mark.unit
class TestResonancesCommand:
    """Tests for manage.py resonances"""

    def test_json(self):
        """Test the table up to an exact bound"""
        data = json.loads(run("resonances", space="DIII", max_radius_sq="40"))
        assert data["bound"] == "40/1"
        assert len(data["rows"]) == 5

    def test_csv_file(self, tmp_path):
        """Test writing CSV with residues to a file"""
        target = tmp_path / "diii.csv"
        output = run(
            "resonances", space="DIII", count=3, format="csv", symbol="gauss", out=str(target)
        )
        assert output == ""
        rows = list(csv.DictReader(target.open()))
        assert len(rows) == 3
        assert rows[2]["radius_sq"] == "53/2"
        assert rows[0]["residue"]

    def test_bound_required(self):
        """Test that one of bound and count is required"""
        with pytest.raises(CommandError) as excinfo:
            run("resonances", space="DIII")
        assert excinfo.value.returncode == 3

    def test_negative_count(self):
        """Test that a negative count exits with 3"""
        with pytest.raises(CommandError) as excinfo:
            run("resonances", space="DIII", count=-1)
        assert excinfo.value.returncode == 3

    def test_unknown_symbol(self):
        """Test that an unknown symbol exits with 3"""
        with pytest.raises(CommandError) as excinfo:
            run("resonances", space="DIII", count=1, symbol="nope")
        assert excinfo.value.returncode == 3

    def test_excluded_space(self):
        """Test that odd p exits with 4"""
        with pytest.raises(CommandError) as excinfo:
            run("resonances", space="BDI:5", count=1)
        assert excinfo.value.returncode == 4


@pytest.mark.django_db
class TestVerifyCommand:
    """Tests for manage.py verify"""

    def test_pass(self):
        """Test a passing suite with the text summary"""
        output = run("verify", suite="cancellation", space="DIII")
        assert output.startswith("cancellation: PASS")
        assert "[ok] DIII: exact vanishing set" in output

    def test_json(self):
        """Test the JSON report"""
        data = json.loads(run("verify", suite="cancellation", space="EIII", format="json", seed=3))
        assert data[0]["suite"] == "cancellation"
        assert data[0]["seed"] == 3
        assert data[0]["passed"] is True

    def test_failure_exits_with_2(self, settings):
        """Test that a failed check exits with 2"""
        settings.RES_ATLAS_TOL = "0"
        with pytest.raises(CommandError) as excinfo:
            run("verify", suite="cancellation", space="DIII")
        assert excinfo.value.returncode == 2

    def test_excluded_space(self):
        """Test that odd p exits with 4 outside the plancherel suite"""
        with pytest.raises(CommandError) as excinfo:
            run("verify", suite="monodromy", space="BDI:5")
        assert excinfo.value.returncode == 4

    def test_unknown_suite(self):
        """Test that an unknown suite exits with 3"""
        with pytest.raises(CommandError) as excinfo:
            call_command("verify", "--suite", "nope", stdout=io.StringIO())
        assert excinfo.value.returncode == 3

    def test_persist(self):
        """Test storing the report as a verification run"""
        run("verify", suite="cancellation", space="CII:2", persist=True, seed=9)

        stored = VerificationRun.objects.get()
        assert stored.suite == "cancellation"
        assert stored.space_selector == "CII:2"
        assert stored.seed == 9
        assert stored.status == "passed"

    def test_numerical_failure_exits_with_2(self, monkeypatch):
        """Test that a numerical breakdown inside a suite exits with 2"""

        def breaks_down(report, spaces, rng, tol, **options):
            raise QuadratureConvergenceError("no convergence on |w| = 1 with 32768 nodes")

        monkeypatch.setitem(SUITES, "symmetry", breaks_down)
        with pytest.raises(CommandError) as excinfo:
            run("verify", suite="symmetry", space="DIII")
        assert excinfo.value.returncode == 2


@pytest.mark.unit
class TestContinuationCommand:
    """Tests for manage.py continuation"""

    def write_path(self, tmp_path, path, eps):
        source = tmp_path / "path.json"
        source.write_text(json.dumps({"path": path, "eps": eps}))
        return str(source)

    def loop(self):
        samples = [-1.5j + 0.4 * complex(math.cos(t), math.sin(t)) for t in
                   [math.pi / 8 + 2 * math.pi * k / 64 for k in range(65)]]
        return [[z.real, z.imag] for z in samples]

    def test_sheet_trace(self, tmp_path):
        """Test that a loop around -iL_0 ends on the flipped sheet"""
        source = self.write_path(tmp_path, self.loop(), [1, 1, 1])
        rows = json.loads(run("continuation", space="DIII", path=source, no_values=True))
        assert len(rows) == 65
        assert rows[0]["eps"] == [1, 1, 1]
        assert rows[-1]["eps"] == [-1, 1, 1]
        assert rows[-1]["F_tilde"] is None

    def test_values(self, tmp_path):
        """Test that F~ on the principal sheet matches F"""
        source = self.write_path(tmp_path, [[0.5, -0.3], [0.6, -0.3]], [1])
        rows = json.loads(run("continuation", space="DIII", path=source))
        diii = lookup_selector("DIII")
        for row in rows:
            z = complex(row["z"]["re"], row["z"]["im"])
            F = F_of_z(diii, ONE, z, ContourConfig.from_settings())
            value = complex(row["F_tilde"]["re"], row["F_tilde"]["im"])
            assert abs(value - F) <= 1e-8 * abs(F)

    def test_missing_file(self, tmp_path):
        """Test that an unreadable path file exits with 3"""
        with pytest.raises(CommandError) as excinfo:
            run("continuation", space="DIII", path=str(tmp_path / "absent.json"))
        assert excinfo.value.returncode == 3

    def test_bad_sheet(self, tmp_path):
        """Test that a sheet sign other than +-1 exits with 3"""
        source = self.write_path(tmp_path, [[0.5, -0.3]], [2])
        with pytest.raises(CommandError) as excinfo:
            run("continuation", space="DIII", path=source)
        assert excinfo.value.returncode == 3

    def test_excluded_space(self, tmp_path):
        """Test that an excluded space exits with 4"""
        source = self.write_path(tmp_path, [[0.5, -0.3]], [1])
        with pytest.raises(CommandError) as excinfo:
            run("continuation", space="BDI:5", path=source)
        assert excinfo.value.returncode == 4
