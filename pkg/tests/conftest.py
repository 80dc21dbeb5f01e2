import pytest
from django.contrib.auth.models import User
from django.test import Client
import factory
from factory.django import DjangoModelFactory
from atlas.contour import ContourConfig
from atlas.models import VerificationRun, ResonanceTable
from atlas.rootdata import lookup_selector


@pytest.fixture
def client():
    """Django test client"""
    return Client()


@pytest.fixture
def user():
    """Create a test user"""
    return User.objects.create_user(
        username="testuser", email="test@example.com", password="testpass123"
    )


@pytest.fixture
def admin_user():
    """Create an admin user"""
    return User.objects.create_superuser(
        username="admin", email="admin@example.com", password="adminpass123"
    )


class UserFactory(DjangoModelFactory):
    class Meta:
        model = User

    username = factory.Sequence(lambda n: f"user{n}")
    email = factory.LazyAttribute(lambda obj: f"{obj.username}@example.com")


class VerificationRunFactory(DjangoModelFactory):
    class Meta:
        model = VerificationRun

    suite = factory.Iterator(["plancherel", "symmetry", "enumeration"])
    space_selector = "DIII"
    seed = factory.Sequence(lambda n: n)
    status = "pending"
    requested_by = factory.SubFactory(UserFactory)


class ResonanceTableFactory(DjangoModelFactory):
    class Meta:
        model = ResonanceTable

    space_selector = "DIII"
    b = 1.0
    max_radius_sq = "40/1"
    rows = factory.LazyFunction(
        lambda: [{"h": 0, "radius_sq": "29/2", "members": [[0, 0]]}]
    )
    row_count = factory.LazyAttribute(lambda obj: len(obj.rows))


@pytest.fixture
def verification_run(user):
    """Create a pending verification run"""
    return VerificationRunFactory(requested_by=user, suite="plancherel")


@pytest.fixture
def resonance_table():
    """Create a stored resonance table"""
    return ResonanceTableFactory()


@pytest.fixture
def diii():
    """SO*(10)/U(5), the space most numerical tests run on"""
    return lookup_selector("DIII")


@pytest.fixture
def eiii():
    return lookup_selector("EIII")


@pytest.fixture
def cii2():
    return lookup_selector("CII:2")


@pytest.fixture
def aiii3():
    return lookup_selector("AIII:3")


@pytest.fixture
def bdi5():
    """SO0(5,2): in the catalog but excluded from continuation"""
    return lookup_selector("BDI:5")


@pytest.fixture
def contour_config():
    """Quadrature settings independent of Django settings"""
    return ContourConfig()
