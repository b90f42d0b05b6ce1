"""Domain entities for the Link Budget context."""
from dataclasses import asdict, dataclass

from shared.domain.errors import DomainError


@dataclass(frozen=True)
class LinkParams:
    """Uplink optics and losses (wavelength, apertures, transmissions)."""
    wavelength_m: float = 808e-9
    a_atm0_db: float = 3.0
    d_r_m: float = 0.15
    d_t_m: float = 1.0
    t_r: float = 0.8
    t_t: float = 0.8
    l_p: float = 0.2
    altitude_km: float = 550.0

    def __post_init__(self):
        for name in ("wavelength_m", "d_r_m", "d_t_m", "altitude_km"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("t_r", "t_t"):
            if not 0 < getattr(self, name) <= 1:
                raise DomainError(f"{name} must lie in (0, 1], got {getattr(self, name)}")
        if not 0 <= self.l_p < 1:
            raise DomainError(f"l_p must lie in [0, 1), got {self.l_p}")
        if not self.a_atm0_db >= 0:
            raise DomainError(f"a_atm0_db must be non-negative, got {self.a_atm0_db}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Atmosphere:
    """Turbulence strength as a zenith Fried parameter at a reference wavelength."""
    fried_r0_m: float = 0.20
    reference_wavelength_m: float = 808e-9
    apply_zenith_scaling: bool = True

    def __post_init__(self):
        if not self.fried_r0_m > 0:
            raise DomainError(f"fried_r0_m must be positive, got {self.fried_r0_m}")
        if not self.reference_wavelength_m > 0:
            raise DomainError(f"reference_wavelength_m must be positive, got {self.reference_wavelength_m}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class BackgroundModel:
    """Sky radiance seen by the satellite receiver within its bandpass."""
    spectral_radiance_photons: float = 2.5e11
    fov_rad: float = 215e-6
    pde: float = 0.4

    def __post_init__(self):
        for name in ("spectral_radiance_photons", "fov_rad", "pde"):
            if not getattr(self, name) >= 0:
                raise DomainError(f"{name} must be non-negative, got {getattr(self, name)}")
        if self.pde > 1:
            raise DomainError(f"pde must not exceed 1, got {self.pde}")

    def to_dict(self) -> dict:
        return asdict(self)
