"""Domain services for the Orbit Geometry context.

Spherical, non-rotating Earth. The ground track is a great circle; the OGS sits
``ground_track_offset_km`` away from it (measured along the surface) at the
point of closest approach, reached at ``t = 0``.
"""
import math
from dataclasses import replace
from typing import List

import numpy as np
from geopy.distance import great_circle

from orbit_geometry.domain.entities import (
    Kinematics,
    OrbitSpec,
    PassSample,
    PointAhead,
    SlewRates,
    VisibilityWindow,
)
from shared.domain.errors import DomainError

EARTH_RADIUS_KM = 6378.137
GM_KM3_S2 = 398600.4418
SPEED_OF_LIGHT_KM_S = 299792.458

# Central-difference step for line-of-sight rates
SLEW_DIFF_STEP_S = 0.1


class OrbitGeometryService:
    """Service for pass geometry computations."""

    @staticmethod
    def orbit_kinematics(orbit: OrbitSpec) -> Kinematics:
        """Vis-viva speed, period and angular rate of a circular orbit."""
        radius = EARTH_RADIUS_KM + orbit.altitude_km
        speed = math.sqrt(GM_KM3_S2 / radius)
        rate = speed / radius
        return Kinematics(
            orbital_speed_km_s=speed,
            period_s=2.0 * math.pi * radius / speed,
            orbital_angular_rate_rad_s=rate,
            ground_speed_km_s=rate * EARTH_RADIUS_KM,
        )

    @staticmethod
    def _offset_angle_rad(orbit: OrbitSpec) -> float:
        beta = orbit.ground_track_offset_km / EARTH_RADIUS_KM
        if beta > math.pi / 2:
            raise DomainError(
                f"ground_track_offset_km {orbit.ground_track_offset_km} exceeds a quarter circumference")
        return beta

    @staticmethod
    def central_angle_rad(orbit: OrbitSpec, t_s: float) -> float:
        """Earth-central angle between the OGS and the sub-satellite point."""
        kin = OrbitGeometryService.orbit_kinematics(orbit)
        beta = OrbitGeometryService._offset_angle_rad(orbit)
        ogs = (math.degrees(beta), 0.0)
        along_track = math.remainder(kin.orbital_angular_rate_rad_s * t_s, 2.0 * math.pi)
        sub_satellite = (0.0, math.degrees(along_track))
        return great_circle(ogs, sub_satellite, radius=EARTH_RADIUS_KM).km / EARTH_RADIUS_KM

    @staticmethod
    def pass_sample(orbit: OrbitSpec, t_s: float) -> PassSample:
        """Slant range and pointing angles at time ``t_s`` from closest approach."""
        if orbit.altitude_km <= 0:
            raise DomainError("pass geometry needs a positive altitude")
        gamma = OrbitGeometryService.central_angle_rad(orbit, t_s)
        radius = EARTH_RADIUS_KM + orbit.altitude_km

        # law of cosines, written to stay exact at gamma = 0
        half = math.sin(gamma / 2.0)
        slant = math.sqrt(orbit.altitude_km ** 2 + 4.0 * EARTH_RADIUS_KM * radius * half * half)
        zenith = math.atan2(radius * math.sin(gamma), radius * math.cos(gamma) - EARTH_RADIUS_KM)
        return PassSample(
            t_s=t_s,
            slant_range_km=slant,
            zenith_rad=zenith,
            elevation_rad=math.pi / 2 - zenith,
            central_angle_rad=gamma,
        )

    @staticmethod
    def _line_of_sight(orbit: OrbitSpec, t_s: float) -> np.ndarray:
        kin = OrbitGeometryService.orbit_kinematics(orbit)
        beta = OrbitGeometryService._offset_angle_rad(orbit)
        radius = EARTH_RADIUS_KM + orbit.altitude_km
        phase = kin.orbital_angular_rate_rad_s * t_s
        satellite = radius * np.array([math.cos(phase), math.sin(phase), 0.0])
        ogs = EARTH_RADIUS_KM * np.array([math.cos(beta), 0.0, math.sin(beta)])
        los = satellite - ogs
        return los / np.linalg.norm(los)

    @staticmethod
    def slew_rates(orbit: OrbitSpec, t_s: float) -> SlewRates:
        """Angular rates required of the OGS telescope and of the satellite body."""
        step = SLEW_DIFF_STEP_S
        before = OrbitGeometryService._line_of_sight(orbit, t_s - step)
        after = OrbitGeometryService._line_of_sight(orbit, t_s + step)
        swept = math.atan2(np.linalg.norm(np.cross(before, after)), float(np.dot(before, after)))
        ogs_rate = swept / (2.0 * step)
        kin = OrbitGeometryService.orbit_kinematics(orbit)
        # the satellite frame co-rotates with the orbit
        return SlewRates(ogs_rate_rad_s=ogs_rate,
                         sat_rate_rad_s=ogs_rate - kin.orbital_angular_rate_rad_s)

    @staticmethod
    def point_ahead(orbit: OrbitSpec, t_s: float) -> PointAhead:
        sample = OrbitGeometryService.pass_sample(orbit, t_s)
        light_time = sample.slant_range_km / SPEED_OF_LIGHT_KM_S
        rates = OrbitGeometryService.slew_rates(orbit, t_s)
        return PointAhead(light_time_s=light_time, angle_rad=rates.ogs_rate_rad_s * light_time)

    @staticmethod
    def footprint_diameter_m(fov_rad: float, slant_range_km: float) -> float:
        """Small-angle diameter of the receiver field of view on the ground."""
        if fov_rad < 0:
            raise DomainError(f"fov_rad must be non-negative, got {fov_rad}")
        return fov_rad * slant_range_km * 1000.0

    @staticmethod
    def visibility_window(orbit: OrbitSpec, min_elevation_rad: float) -> VisibilityWindow:
        """Times around closest approach during which elevation stays above the mask."""
        radius = EARTH_RADIUS_KM + orbit.altitude_km
        beta = OrbitGeometryService._offset_angle_rad(orbit)
        gamma_max = math.acos(EARTH_RADIUS_KM * math.cos(min_elevation_rad) / radius) - min_elevation_rad
        if beta > gamma_max:
            return VisibilityWindow(t_start_s=0.0, t_end_s=0.0)

        kin = OrbitGeometryService.orbit_kinematics(orbit)
        ratio = min(1.0, math.cos(gamma_max) / math.cos(beta))
        half = math.acos(ratio) / kin.orbital_angular_rate_rad_s
        return VisibilityWindow(t_start_s=-half, t_end_s=half)

    @staticmethod
    def pass_profile(orbit: OrbitSpec, dt_s: float, min_elevation_rad: float) -> List[PassSample]:
        """Uniform samples on the grid ``k * dt_s`` inside the visibility window."""
        if dt_s <= 0:
            raise DomainError(f"dt_s must be positive, got {dt_s}")
        window = OrbitGeometryService.visibility_window(orbit, min_elevation_rad)
        if window.t_end_s <= 0.0:
            zenith_pass = OrbitGeometryService.pass_sample(orbit, 0.0)
            return [zenith_pass] if zenith_pass.clears(min_elevation_rad) else []

        steps = int(math.floor(window.t_end_s / dt_s + 1e-9))
        outbound = []
        for k in range(0, steps + 1):
            sample = OrbitGeometryService.pass_sample(orbit, k * dt_s)
            if not sample.clears(min_elevation_rad):
                break
            outbound.append(sample)

        # geometry is even in t: mirror the outbound half
        inbound = [replace(sample, t_s=-sample.t_s) for sample in reversed(outbound[1:])]
        return inbound + outbound
