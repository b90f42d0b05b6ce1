"""Domain entities for the Orbit Geometry context."""
import math
from dataclasses import asdict, dataclass

from shared.domain.errors import DomainError


@dataclass(frozen=True)
class OrbitSpec:
    """Circular orbit seen from one ground station."""
    altitude_km: float
    ground_track_offset_km: float = 0.0

    def __post_init__(self):
        if not self.altitude_km >= 0:
            raise DomainError(f"altitude_km must be non-negative, got {self.altitude_km}")
        if not self.ground_track_offset_km >= 0:
            raise DomainError(f"ground_track_offset_km must be non-negative, got {self.ground_track_offset_km}")

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return asdict(self)


@dataclass(frozen=True)
class Kinematics:
    orbital_speed_km_s: float
    period_s: float
    orbital_angular_rate_rad_s: float
    ground_speed_km_s: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PassSample:
    """Geometry of the OGS-satellite line of sight at one instant of a pass."""
    t_s: float
    slant_range_km: float
    zenith_rad: float
    elevation_rad: float
    central_angle_rad: float

    def clears(self, min_elevation_rad: float = 0.0) -> bool:
        """True when the satellite stands at or above the elevation mask."""
        return self.elevation_rad >= min_elevation_rad

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SlewRates:
    ogs_rate_rad_s: float
    sat_rate_rad_s: float


@dataclass(frozen=True)
class PointAhead:
    light_time_s: float
    angle_rad: float


@dataclass(frozen=True)
class VisibilityWindow:
    """Symmetric interval around closest approach with elevation above a mask."""
    t_start_s: float
    t_end_s: float

    @property
    def duration_s(self) -> float:
        return self.t_end_s - self.t_start_s

    @property
    def is_empty(self) -> bool:
        return self.duration_s <= 0.0 or math.isnan(self.duration_s)
