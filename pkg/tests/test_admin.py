import pytest
from tests.conftest import ResonanceTableFactory, VerificationRunFactory


@pytest.mark.admin
@pytest.mark.django_db
class TestAtlasAdmin:
    """Tests for the atlas admin pages"""

    def test_verification_run_changelist(self, client, admin_user):
        """Test listing verification runs filtered by status"""
        VerificationRunFactory(suite="residues", status="failed")
        client.force_login(admin_user)

        response = client.get("/admin/atlas/verificationrun/", {"status__exact": "failed"})

        assert response.status_code == 200
        assert b"residues" in response.content

    def test_verification_run_change_page(self, client, admin_user, verification_run):
        """Test the change page with its fieldsets"""
        client.force_login(admin_user)

        response = client.get(f"/admin/atlas/verificationrun/{verification_run.id}/change/")

        assert response.status_code == 200
        assert b"Metadata" in response.content

    def test_resonance_table_changelist(self, client, admin_user):
        """Test listing stored resonance tables"""
        ResonanceTableFactory(space_selector="EIII")
        client.force_login(admin_user)

        response = client.get("/admin/atlas/resonancetable/")

        assert response.status_code == 200
        assert b"EIII" in response.content

    def test_requires_login(self, client):
        """Test that anonymous users are redirected"""
        response = client.get("/admin/atlas/resonancetable/")

        assert response.status_code == 302
