"""Application services for the Link Budget context."""
import logging
from dataclasses import dataclass, replace
from typing import List, Sequence

from link_budget.domain.entities import Atmosphere, LinkParams
from link_budget.domain.services import LinkBudgetService
from orbit_geometry.application.services import OrbitApplicationService
from orbit_geometry.domain.entities import OrbitSpec, PassSample
from shared.domain.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AttenuatedSample:
    sample: PassSample
    attenuation_db: float


class LinkBudgetApplicationService:
    """Application service for link attenuation along a pass."""

    def __init__(self):
        self.link_service = LinkBudgetService()
        self.orbit_service = OrbitApplicationService()

    def get_attenuation_profile(self, orbit: OrbitSpec, params: LinkParams, atmosphere: Atmosphere,
                                dt_s: float, min_elevation_rad: float) -> List[AttenuatedSample]:
        """Link attenuation at each sample of the pass."""
        profile = []
        for sample in self.orbit_service.get_pass(orbit, dt_s, min_elevation_rad):
            attenuation = self.link_service.link_attenuation_db(
                params, atmosphere, sample.slant_range_km, sample.zenith_rad)
            profile.append(AttenuatedSample(sample=sample, attenuation_db=attenuation))
        return profile

    def get_time_below(self, orbit: OrbitSpec, params: LinkParams, atmosphere: Atmosphere,
                       threshold_db: float, dt_s: float, min_elevation_rad: float) -> float:
        """Seconds of the pass with attenuation under ``threshold_db``."""
        profile = self.get_attenuation_profile(orbit, params, atmosphere, dt_s, min_elevation_rad)
        seconds = self.link_service.time_below_attenuation(
            (p.attenuation_db for p in profile), threshold_db, dt_s)
        logger.info("Link below %.1f dB for %.0f s (r0=%.3f m, offset=%.0f km)",
                    threshold_db, seconds, atmosphere.fried_r0_m, orbit.ground_track_offset_km)
        return seconds

    def get_link_sweep(self, orbit: OrbitSpec, params: LinkParams, atmosphere: Atmosphere,
                       wavelengths_m: Sequence[float], a_atm0_values_db: Sequence[float],
                       fried_r0_values_m: Sequence[float], dt_s: float,
                       min_elevation_rad: float) -> List[dict]:
        """Attenuation over the pass for every wavelength and reference r0."""
        if len(wavelengths_m) != len(a_atm0_values_db):
            raise DomainError(
                f"every sweep wavelength needs one zenith absorption value "
                f"({len(wavelengths_m)} wavelengths, {len(a_atm0_values_db)} absorptions)")

        rows = []
        for wavelength, a_atm0 in zip(wavelengths_m, a_atm0_values_db):
            band = replace(params, wavelength_m=wavelength, a_atm0_db=a_atm0)
            for r0 in fried_r0_values_m:
                turbulence = replace(atmosphere, fried_r0_m=r0)
                r0_link = self.link_service.fried_scale_wavelength(
                    r0, turbulence.reference_wavelength_m, wavelength)
                logger.debug("Sweeping lambda=%.3e m, r0=%.3f m (%.3f m at link wavelength)",
                             wavelength, r0, r0_link)
                for point in self.get_attenuation_profile(orbit, band, turbulence, dt_s, min_elevation_rad):
                    rows.append({
                        "wavelength_m": wavelength,
                        "fried_r0_m": r0,
                        "fried_r0_link_m": r0_link,
                        "t_s": point.sample.t_s,
                        "slant_range_km": point.sample.slant_range_km,
                        "zenith_rad": point.sample.zenith_rad,
                        "attenuation_db": point.attenuation_db,
                    })
        return rows
