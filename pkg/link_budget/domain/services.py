"""Domain services for the Link Budget context.

Attenuations are positive dB losses; the linear transmittance is 10^(-A/10).
"""
import math
from typing import Iterable

from link_budget.domain.entities import Atmosphere, BackgroundModel, LinkParams
from shared.domain.errors import DomainError

AIRY_DIAMETER_FACTOR = 2.44
TURBULENCE_FACTOR = 2.1


def _check_zenith(zenith_rad: float) -> None:
    if not 0 <= zenith_rad < math.pi / 2:
        raise DomainError(f"zenith angle must lie in [0, pi/2), got {zenith_rad}")


class LinkBudgetService:
    """Service for uplink attenuation and background estimates."""

    @staticmethod
    def diffraction_divergence(params: LinkParams) -> float:
        """Full-cone divergence; L times this is the Airy-disk diameter."""
        return AIRY_DIAMETER_FACTOR * params.wavelength_m / params.d_t_m

    @staticmethod
    def turbulence_divergence(wavelength_m: float, fried_r0_m: float) -> float:
        if not fried_r0_m > 0:
            raise DomainError(f"fried_r0_m must be positive, got {fried_r0_m}")
        return TURBULENCE_FACTOR * wavelength_m / fried_r0_m

    @staticmethod
    def fried_scale_wavelength(r0_at_ref: float, wavelength_ref_m: float, wavelength_target_m: float) -> float:
        """r0 grows as wavelength^(6/5)."""
        if min(r0_at_ref, wavelength_ref_m, wavelength_target_m) <= 0:
            raise DomainError("Fried scaling needs positive r0 and wavelengths")
        return r0_at_ref * (wavelength_target_m / wavelength_ref_m) ** 1.2

    @staticmethod
    def fried_scale_zenith(r0_zenith: float, zenith_rad: float) -> float:
        """Slant-path r0 for a path longer by 1/cos(zenith)."""
        _check_zenith(zenith_rad)
        return r0_zenith * math.cos(zenith_rad) ** 0.6

    @staticmethod
    def atmospheric_attenuation_db(a_atm0_db: float, zenith_rad: float) -> float:
        _check_zenith(zenith_rad)
        return a_atm0_db / math.cos(zenith_rad)

    @staticmethod
    def effective_fried_r0(params: LinkParams, atmosphere: Atmosphere, zenith_rad: float) -> float:
        """r0 at the link wavelength along the slant path."""
        r0 = LinkBudgetService.fried_scale_wavelength(
            atmosphere.fried_r0_m, atmosphere.reference_wavelength_m, params.wavelength_m)
        if atmosphere.apply_zenith_scaling:
            r0 = LinkBudgetService.fried_scale_zenith(r0, zenith_rad)
        return r0

    @staticmethod
    def link_attenuation_db(params: LinkParams, atmosphere: Atmosphere,
                            slant_range_km: float, zenith_rad: float) -> float:
        """Average geometric, turbulence, optics and absorption loss of the uplink."""
        _check_zenith(zenith_rad)
        if slant_range_km < params.altitude_km * (1 - 1e-9):
            raise DomainError(
                f"slant range {slant_range_km} km is shorter than the orbit height {params.altitude_km} km")
        theta_t = LinkBudgetService.diffraction_divergence(params)
        r0 = LinkBudgetService.effective_fried_r0(params, atmosphere, zenith_rad)
        theta_atm = 0.0 if math.isinf(r0) else LinkBudgetService.turbulence_divergence(params.wavelength_m, r0)

        slant_m = slant_range_km * 1000.0
        geometric = slant_m ** 2 * (theta_t ** 2 + theta_atm ** 2) / params.d_r_m ** 2
        optics = 1.0 / (params.t_t * (1.0 - params.l_p) * params.t_r)
        atmospheric_db = LinkBudgetService.atmospheric_attenuation_db(params.a_atm0_db, zenith_rad)
        return 10.0 * math.log10(geometric * optics) + atmospheric_db

    @staticmethod
    def transmittance(attenuation_db: float) -> float:
        return 10.0 ** (-attenuation_db / 10.0)

    @staticmethod
    def background_count_rate(model: BackgroundModel, params: LinkParams, zenith_rad: float) -> float:
        """Background clicks per second from sky radiance inside the receiver etendue."""
        aperture_m2 = math.pi * params.d_r_m ** 2 / 4.0
        solid_angle_sr = math.pi * (model.fov_rad / 2.0) ** 2
        absorption = LinkBudgetService.transmittance(
            LinkBudgetService.atmospheric_attenuation_db(params.a_atm0_db, zenith_rad))
        return (model.spectral_radiance_photons * aperture_m2 * solid_angle_sr
                * params.t_r * absorption * model.pde)

    @staticmethod
    def time_below_attenuation(attenuations_db: Iterable[float], threshold_db: float, dt_s: float) -> float:
        """Time a uniformly sampled pass spends below the attenuation threshold."""
        return dt_s * sum(1 for a in attenuations_db if a < threshold_db)
