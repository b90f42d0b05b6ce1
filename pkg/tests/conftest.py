import pytest

from key_rate.domain.entities import IntegrationSettings, SourceDetectorParams
from link_budget.domain.entities import Atmosphere, LinkParams
from orbit_geometry.domain.entities import OrbitSpec
from scenarios.domain.entities import ScenarioConfig


@pytest.fixture
def direct_orbit():
    return OrbitSpec(altitude_km=550.0)


@pytest.fixture
def offset_orbit():
    return OrbitSpec(altitude_km=550.0, ground_track_offset_km=500.0)


@pytest.fixture
def link():
    return LinkParams()


@pytest.fixture
def atmosphere():
    return Atmosphere()


@pytest.fixture
def conservative_source():
    return SourceDetectorParams(d_b_cps=250.0)


@pytest.fixture
def improved_source():
    return SourceDetectorParams(tau_s=250e-12, d_b_cps=1000.0)


@pytest.fixture
def integration():
    return IntegrationSettings()


@pytest.fixture
def scenario():
    return ScenarioConfig()
