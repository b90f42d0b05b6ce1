"""Application services for the Orbit Geometry context."""
import logging
from typing import List

from orbit_geometry.domain.entities import OrbitSpec, PassSample
from orbit_geometry.domain.services import OrbitGeometryService

logger = logging.getLogger(__name__)


class OrbitApplicationService:
    """Application service for pass geometry use cases."""

    def __init__(self):
        self.geometry_service = OrbitGeometryService()

    def get_pass(self, orbit: OrbitSpec, dt_s: float, min_elevation_rad: float) -> List[PassSample]:
        """Sampled pass above the elevation mask."""
        samples = self.geometry_service.pass_profile(orbit, dt_s, min_elevation_rad)
        if not samples:
            logger.warning("Pass with offset %.1f km never rises above the elevation mask",
                           orbit.ground_track_offset_km)
        else:
            logger.debug("Pass sampled: %d points, closest range %.3f km",
                         len(samples), min(s.slant_range_km for s in samples))
        return samples

    def get_pass_table(self, orbit: OrbitSpec, dt_s: float, min_elevation_rad: float) -> List[dict]:
        """Pass samples enriched with slew rates and point-ahead angle."""
        rows = []
        for sample in self.get_pass(orbit, dt_s, min_elevation_rad):
            rates = self.geometry_service.slew_rates(orbit, sample.t_s)
            ahead = self.geometry_service.point_ahead(orbit, sample.t_s)
            row = sample.to_dict()
            row.update({
                "ogs_rate_rad_s": rates.ogs_rate_rad_s,
                "sat_rate_rad_s": rates.sat_rate_rad_s,
                "light_time_s": ahead.light_time_s,
                "point_ahead_rad": ahead.angle_rad,
            })
            rows.append(row)
        return rows
