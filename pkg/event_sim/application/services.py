"""Application services for the Event Simulation context."""
import logging
import math
from typing import List, Optional

import numpy as np
from scipy import stats

from config import get_config
from event_sim.domain.entities import SimConfig, SimulatedStreams
from event_sim.domain.services import CoincidenceAnalysisService, StreamSimulationService
from key_rate.domain.entities import SourceDetectorParams
from key_rate.domain.services import KeyRateService

logger = logging.getLogger(__name__)


def _z_score(mc: float, analytic: float, sigma: float) -> float:
    if sigma > 0:
        return (mc - analytic) / sigma
    return 0.0 if mc == analytic else math.inf


class EventSimApplicationService:
    """Application service for Monte Carlo runs checked against the analytic model."""

    def __init__(self, max_events: Optional[float] = None):
        self.simulation_service = StreamSimulationService()
        self.analysis_service = CoincidenceAnalysisService()
        self.key_rate_service = KeyRateService()
        self.max_events = max_events if max_events is not None else get_config().MAX_EVENTS

    def simulate(self, cfg: SimConfig) -> SimulatedStreams:
        streams = self.simulation_service.simulate_streams(cfg, max_events=self.max_events)
        logger.info("Simulated %.3f s: %d Alice / %d Bob events", cfg.duration_s, len(streams.alice), len(streams.bob))
        return streams

    def analytic_params(self, cfg: SimConfig, tau_s: float) -> SourceDetectorParams:
        """Model parameters equivalent to a simulation run; eta_B is passed separately."""
        return SourceDetectorParams(
            mu=cfg.pair_rate_cps * tau_s,
            tau_s=tau_s,
            d_a_cps=cfg.d_a_cps,
            d_b_cps=cfg.d_b_cps,
            b_cps=cfg.b_cps,
            n_det=cfg.n_det,
            pde=1.0,
            eta_a=cfg.eta_a,
            e_d=cfg.e_d,
        )

    def compare_with_model(self, cfg: SimConfig, tau_s: float) -> List[dict]:
        """Monte Carlo estimates next to the analytic values, with sigmas and z-scores."""
        params = self.analytic_params(cfg, tau_s)
        streams = self.simulate(cfg)
        matches = self.analysis_service.match_coincidences(streams.alice, streams.bob, tau_s, cfg.clock_offset_s)
        measured = self.analysis_service.estimate_metrics(matches, streams.alice, streams.bob, cfg.duration_s)
        accidentals = self.analysis_service.accidental_count(matches, streams.alice_truth, streams.bob_truth)

        duration = cfg.duration_s
        r_coinc = self.key_rate_service.coincidence_rate(
            params, self.key_rate_service.coincidence_probability(params, cfg.eta_b))
        qber = self.key_rate_service.qber(params, cfg.eta_b)
        visibility = self.key_rate_service.visibility(qber)
        # accidentals only involve clicks whose twin went undetected
        unpaired_receiver = self.key_rate_service.receiver_singles_cps(
            cfg.pair_rate_cps, cfg.eta_b * (1.0 - cfg.eta_a), 0.0, cfg.bob_noise_cps)
        r_acc = self.key_rate_service.accidental_rate(
            cfg.pair_rate_cps, cfg.eta_a * (1.0 - cfg.eta_b), unpaired_receiver, tau_s)
        singles = (cfg.eta_a + cfg.eta_b) * cfg.pair_rate_cps + cfg.alice_noise_cps + cfg.bob_noise_cps
        r_acc += self.analysis_service.stolen_match_rate(
            cfg.eta_a * cfg.eta_b * cfg.pair_rate_cps, singles, cfg.jitter_sigma_s, tau_s)

        sigma_coinc = stats.poisson(r_coinc * duration).std() / duration
        sigma_qber = stats.binom(measured.sifted, qber).std() / measured.sifted
        sigma_visibility = 2.0 / (1.0 + qber) ** 2 * sigma_qber
        sigma_acc = stats.poisson(r_acc * duration).std() / duration

        comparisons = [
            ("coincidence_rate_cps", r_coinc, measured.coincidence_rate_cps, sigma_coinc),
            ("qber", qber, measured.qber, sigma_qber),
            ("visibility", visibility, measured.visibility, sigma_visibility),
            ("accidental_rate_cps", r_acc, accidentals / duration, sigma_acc),
        ]

        offsets = self.analysis_service.recover_clock_offset(
            streams.alice, streams.bob, cfg.sync_bin_s, cfg.block_s, cfg.sync_search_s)
        # a partly filled last block is centred on its filled part
        centres = np.array([(e.block_start_s + min(e.block_start_s + cfg.block_s, duration)) / 2.0
                            for e in offsets])
        expected_offset = cfg.clock_offset_s + cfg.clock_drift_ppb * 1e-9 * float(centres.mean())
        recovered = float(np.mean([e.offset_s for e in offsets]))
        comparisons.append(("clock_offset_s", expected_offset, recovered,
                            cfg.sync_bin_s / math.sqrt(12.0 * len(offsets))))

        rows = []
        for metric, analytic, mc, sigma in comparisons:
            z = _z_score(mc, analytic, sigma)
            logger.info("%-22s analytic=%.6e mc=%.6e z=%+.2f", metric, analytic, mc, z)
            rows.append({"metric": metric, "analytic": analytic, "mc": mc, "sigma": sigma, "z": z})
        return rows
