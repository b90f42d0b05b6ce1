"""Application services for the Key Rate context."""
import logging
from dataclasses import replace
from typing import List, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from key_rate.domain.entities import FriedHistogram, IntegrationSettings, SourceDetectorParams
from key_rate.domain.services import KeyRateService
from link_budget.application.services import LinkBudgetApplicationService
from link_budget.domain.entities import Atmosphere, LinkParams
from orbit_geometry.domain.entities import OrbitSpec

logger = logging.getLogger(__name__)


class KeyRateApplicationService:
    """Application service for key-rate sweeps and per-pass key integration."""

    def __init__(self):
        self.key_rate_service = KeyRateService()
        self.link_service = LinkBudgetApplicationService()

    def get_sweep(self, source: SourceDetectorParams, attenuations_db: Sequence[float],
                  dcr_values_cps: Sequence[float]) -> List[dict]:
        """Model metrics over an attenuation grid, one curve per satellite dark count rate."""
        rows = []
        for dcr in dcr_values_cps:
            params = replace(source, d_b_cps=dcr)
            logger.debug("Sweeping %d attenuations at D_B=%.0f cps", len(attenuations_db), dcr)
            for attenuation in attenuations_db:
                row = {"d_b_cps": dcr, "tau_s": params.tau_s}
                row.update(self.key_rate_service.metrics(params, attenuation).to_dict())
                rows.append(row)
        return rows

    def pass_key_profile(self, orbit: OrbitSpec, link: LinkParams, atmosphere: Atmosphere,
                         source: SourceDetectorParams, integration: IntegrationSettings) -> List[dict]:
        """Secure key rate and cumulative key along the usable part of a pass.

        Samples come from the pass above the elevation mask, limited to a window of
        ``max_window_s`` centred on closest approach. The rate is zero wherever the
        attenuation exceeds the loss cutoff.
        """
        half_window = integration.max_window_s / 2.0
        profile = [
            point for point in self.link_service.get_attenuation_profile(
                orbit, link, atmosphere, integration.dt_s, integration.min_elevation_rad)
            if abs(point.sample.t_s) <= half_window + 1e-9
        ]
        if not profile:
            return []

        times = np.array([p.sample.t_s for p in profile])
        attenuations = np.array([p.attenuation_db for p in profile])
        metrics = [self.key_rate_service.metrics(source, a) for a in attenuations]
        rates = np.array([
            m.r_secure_cps if a <= integration.loss_cutoff_db else 0.0
            for m, a in zip(metrics, attenuations)
        ])
        cumulative = cumulative_trapezoid(rates, times, initial=0.0)

        return [
            {
                "t_s": float(t),
                "attenuation_db": float(a),
                "qber": m.qber,
                "r_secure_cps": float(r),
                "cumulative_bits": float(c),
            }
            for t, a, m, r, c in zip(times, attenuations, metrics, rates, cumulative)
        ]

    def key_per_pass(self, orbit: OrbitSpec, link: LinkParams, atmosphere: Atmosphere,
                     source: SourceDetectorParams, integration: IntegrationSettings) -> float:
        """Secure key bits collected during one pass."""
        profile = self.pass_key_profile(orbit, link, atmosphere, source, integration)
        if len(profile) < 2:
            return 0.0
        bits = float(trapezoid([p["r_secure_cps"] for p in profile], [p["t_s"] for p in profile]))
        logger.info("Key per pass: %.4e bits (offset=%.0f km, r0=%.3f m, D_B=%.0f cps)",
                    bits, orbit.ground_track_offset_km, atmosphere.fried_r0_m, source.d_b_cps)
        return bits

    def get_annual_yield(self, hist: FriedHistogram, passes_per_year: float, orbit: OrbitSpec,
                         link: LinkParams, atmosphere: Atmosphere, source: SourceDetectorParams,
                         integration: IntegrationSettings) -> List[dict]:
        """Per-bin contributions to the yearly key; the last row holds the total."""
        shares = hist.pass_shares()
        keys = [
            self.key_per_pass(orbit, link, replace(atmosphere, fried_r0_m=r0), source, integration)
            for r0, _ in hist.bins
        ]
        rows = [
            {
                "fried_r0_m": r0,
                "days_per_year": days,
                "pass_share": share,
                "key_per_pass_bits": key,
                "bits_per_year": passes_per_year * share * key,
            }
            for (r0, days), share, key in zip(hist.bins, shares, keys)
        ]
        total = self.key_rate_service.annual_yield_from_keys(keys, hist, passes_per_year)
        rows.append({
            "fried_r0_m": float("nan"),
            "days_per_year": hist.total_days,
            "pass_share": float(sum(shares)),
            "key_per_pass_bits": float("nan"),
            "bits_per_year": total,
        })
        logger.info("Annual yield: %.4e bits over %g passes", total, passes_per_year)
        return rows

    def annual_yield(self, hist: FriedHistogram, passes_per_year: float, orbit: OrbitSpec,
                     link: LinkParams, atmosphere: Atmosphere, source: SourceDetectorParams,
                     integration: IntegrationSettings) -> float:
        rows = self.get_annual_yield(hist, passes_per_year, orbit, link, atmosphere, source, integration)
        return rows[-1]["bits_per_year"]
