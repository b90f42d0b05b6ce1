"""Domain entities for the Scenarios context."""
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from data_budget.domain.entities import BudgetSettings
from event_sim.domain.entities import SimConfig
from key_rate.domain.entities import FriedHistogram, IntegrationSettings, SourceDetectorParams
from link_budget.domain.entities import Atmosphere, BackgroundModel, LinkParams
from orbit_geometry.domain.entities import OrbitSpec
from shared.domain.errors import DomainError

DEFAULT_FRIED_HISTOGRAM = FriedHistogram(bins=((0.15, 116.0), (0.20, 103.0), (0.30, 9.0)))


@dataclass(frozen=True)
class SweepGrid:
    """Axes of the attenuation and link sweeps."""
    attenuation_min_db: float = 20.0
    attenuation_max_db: float = 60.0
    attenuation_step_db: float = 0.5
    dcr_values_cps: Tuple[float, ...] = (100.0, 250.0, 1000.0)
    fried_r0_values_m: Tuple[float, ...] = (0.15, 0.20, 0.25)
    wavelengths_m: Tuple[float, ...] = (808e-9, 1550e-9)
    a_atm0_values_db: Tuple[float, ...] = (3.0, 2.0)

    def __post_init__(self):
        if not self.attenuation_step_db > 0:
            raise DomainError(f"attenuation_step_db must be positive, got {self.attenuation_step_db}")
        if self.attenuation_max_db < self.attenuation_min_db:
            raise DomainError("attenuation_max_db must not be below attenuation_min_db")

    def attenuations_db(self):
        """Grid from min to max inclusive."""
        count = int(round((self.attenuation_max_db - self.attenuation_min_db) / self.attenuation_step_db)) + 1
        return [float(a) for a in np.linspace(self.attenuation_min_db,
                                              self.attenuation_min_db + (count - 1) * self.attenuation_step_db,
                                              count)]


@dataclass(frozen=True)
class YieldSettings:
    histogram: FriedHistogram = DEFAULT_FRIED_HISTOGRAM
    passes_per_year: float = 100.0

    def __post_init__(self):
        if not self.passes_per_year >= 0:
            raise DomainError(f"passes_per_year must be non-negative, got {self.passes_per_year}")


@dataclass(frozen=True)
class ScenarioConfig:
    """One complete experiment description."""
    orbit: OrbitSpec = field(default_factory=lambda: OrbitSpec(altitude_km=550.0))
    link: LinkParams = field(default_factory=LinkParams)
    atmosphere: Atmosphere = field(default_factory=Atmosphere)
    source: SourceDetectorParams = field(default_factory=SourceDetectorParams)
    background: BackgroundModel = field(default_factory=BackgroundModel)
    integration: IntegrationSettings = field(default_factory=IntegrationSettings)
    sweep: SweepGrid = field(default_factory=SweepGrid)
    budget: BudgetSettings = field(default_factory=BudgetSettings)
    yearly: YieldSettings = field(default_factory=YieldSettings)
    sim: SimConfig = field(default_factory=SimConfig)
    overrides: Tuple[Tuple[str, str], ...] = ()


SECTIONS = ("orbit", "link", "atmosphere", "source", "background", "integration", "sweep", "budget", "yearly", "sim")
