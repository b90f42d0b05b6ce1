"""Domain services for the Event Simulation context."""
import logging
import math
from typing import List, Tuple

import numpy as np
from scipy import stats

from event_sim.domain.entities import (
    Channel, ClockOffsetEstimate, EstimatedMetrics, EventStream, Origin, SimConfig,
    SimulatedStreams, StreamTruth,
)
from key_rate.domain.services import KeyRateService
from shared.domain.errors import ClockLockError, ContractViolation, DomainError, ResourceLimitError, UndefinedQberError

logger = logging.getLogger(__name__)

LOCK_SIGMA = 5.0
PAIR_ID_BLOCK_SHIFT = 32


def _require_sorted(*streams: EventStream) -> None:
    for stream in streams:
        if not stream.is_sorted():
            raise ContractViolation(f"{stream.channel.value} stream is not sorted by time")


def _window_pairs(reference: np.ndarray, others: np.ndarray, low: float, high: float) -> Tuple[np.ndarray, np.ndarray]:
    """Index pairs (i, j) with reference[i] + low <= others[j] <= reference[i] + high.

    ``others`` must be sorted.
    """
    lo = np.searchsorted(others, reference + low, side="left")
    hi = np.searchsorted(others, reference + high, side="right")
    counts = np.maximum(hi - lo, 0)
    total = int(counts.sum())
    ref_idx = np.repeat(np.arange(reference.size), counts)
    first = np.cumsum(counts) - counts
    other_idx = np.repeat(lo, counts) + (np.arange(total) - np.repeat(first, counts))
    return ref_idx, other_idx


class StreamSimulationService:
    """Monte Carlo generation of detection streams."""

    @staticmethod
    def _noise(rng: np.random.Generator, rate_cps: float, start: float, span: float):
        n = rng.poisson(rate_cps * span)
        times = start + span * rng.random(n)
        bases = rng.integers(0, 2, n, dtype=np.int8)
        outcomes = rng.integers(0, 2, n, dtype=np.int8)
        return times, bases, outcomes

    @staticmethod
    def simulate_block(cfg: SimConfig, block_index: int):
        """Raw detections of one generation block, before clock transform and sorting.

        Each block draws from its own generator seeded by (seed, block index), so
        blocks can be produced in any order.
        """
        rng = np.random.default_rng([cfg.rng_seed, block_index])
        start = block_index * cfg.block_s
        span = min(cfg.block_s, cfg.duration_s - start)

        n = rng.poisson(cfg.pair_rate_cps * span)
        t_pair = start + span * rng.random(n)
        pair_ids = (np.int64(block_index) << PAIR_ID_BLOCK_SHIFT) + np.arange(n, dtype=np.int64)
        detected_a = rng.random(n) < cfg.eta_a
        detected_b = rng.random(n) < cfg.eta_b
        basis_a = rng.integers(0, 2, n, dtype=np.int8)
        basis_b = rng.integers(0, 2, n, dtype=np.int8)
        outcome_a = rng.integers(0, 2, n, dtype=np.int8)
        flipped = (rng.random(n) < cfg.e_d).astype(np.int8)
        unrelated = rng.integers(0, 2, n, dtype=np.int8)
        outcome_b = np.where(basis_a == basis_b, outcome_a ^ flipped, unrelated).astype(np.int8)
        jitter_a = rng.normal(0.0, cfg.jitter_sigma_s, n)
        jitter_b = rng.normal(0.0, cfg.jitter_sigma_s, n)

        alice = [(t_pair[detected_a] + jitter_a[detected_a], basis_a[detected_a], outcome_a[detected_a],
                  Origin.SIGNAL, pair_ids[detected_a])]
        bob = [(t_pair[detected_b] + jitter_b[detected_b], basis_b[detected_b], outcome_b[detected_b],
                Origin.SIGNAL, pair_ids[detected_b])]

        for side, rate, origin in (
            (alice, cfg.alice_noise_cps, Origin.DARK),
            (bob, cfg.bob_dark_cps, Origin.DARK),
            (bob, cfg.b_cps, Origin.BACKGROUND),
        ):
            times, bases, outcomes = StreamSimulationService._noise(rng, rate, start, span)
            side.append((times, bases, outcomes, origin, np.full(times.size, -1, dtype=np.int64)))
        return alice, bob

    @staticmethod
    def _assemble(channel: Channel, parts) -> Tuple[EventStream, StreamTruth]:
        if not parts:
            return EventStream.empty(channel), StreamTruth.empty()
        times = np.concatenate([p[0] for p in parts])
        bases = np.concatenate([p[1] for p in parts])
        outcomes = np.concatenate([p[2] for p in parts])
        origins = np.concatenate([np.full(p[0].size, int(p[3]), dtype=np.int8) for p in parts])
        pair_ids = np.concatenate([p[4] for p in parts])

        keep = times >= 0.0
        order = np.argsort(times[keep], kind="stable")
        stream = EventStream(channel, times[keep][order], bases[keep][order], outcomes[keep][order])
        truth = StreamTruth(origins=origins[keep][order], pair_ids=pair_ids[keep][order])
        return stream, truth

    @staticmethod
    def simulate_streams(cfg: SimConfig, max_events: float = 1e8) -> SimulatedStreams:
        expected = cfg.expected_event_count()
        if expected > max_events:
            raise ResourceLimitError(
                f"simulation would generate about {expected:.3g} events, above the limit of {max_events:.3g}")

        n_blocks = max(1, math.ceil(cfg.duration_s / cfg.block_s - 1e-12))
        alice_parts, bob_parts = [], []
        for block_index in range(n_blocks):
            alice, bob = StreamSimulationService.simulate_block(cfg, block_index)
            alice_parts.extend(alice)
            bob_parts.extend(bob)

        drift = 1.0 + cfg.clock_drift_ppb * 1e-9
        bob_parts = [(drift * t + cfg.clock_offset_s, b, o, origin, ids) for t, b, o, origin, ids in bob_parts]

        alice_stream, alice_truth = StreamSimulationService._assemble(Channel.ALICE, alice_parts)
        bob_stream, bob_truth = StreamSimulationService._assemble(Channel.BOB, bob_parts)
        logger.debug("Simulated %d Alice and %d Bob events over %.3f s (seed %d)",
                     len(alice_stream), len(bob_stream), cfg.duration_s, cfg.rng_seed)
        return SimulatedStreams(alice=alice_stream, bob=bob_stream, alice_truth=alice_truth,
                                bob_truth=bob_truth, duration_s=cfg.duration_s)


class CoincidenceAnalysisService:
    """Coincidence matching, metric estimation and clock recovery on recorded streams."""

    @staticmethod
    def match_coincidences(alice: EventStream, bob: EventStream, tau_s: float, offset_s: float = 0.0) -> np.ndarray:
        """Greedy nearest-neighbour matching inside the window ``|t_A - (t_B - offset)| <= tau/2``.

        Candidates are accepted in order of increasing time difference, ties broken
        by Alice index then Bob index; every event is used at most once. Returns an
        ``(n, 2)`` array of (alice index, bob index) sorted by Alice index.
        """
        if not tau_s > 0:
            raise DomainError(f"coincidence window must be positive, got {tau_s}")
        _require_sorted(alice, bob)
        half = tau_s / 2.0
        shifted_b = bob.times_s - offset_s
        a_idx, b_idx = _window_pairs(alice.times_s, shifted_b, -half, half)
        distance = np.abs(alice.times_s[a_idx] - shifted_b[b_idx])
        inside = distance <= half
        a_idx, b_idx, distance = a_idx[inside], b_idx[inside], distance[inside]

        used_a = np.zeros(len(alice), dtype=bool)
        used_b = np.zeros(len(bob), dtype=bool)
        matches = []
        for k in np.lexsort((b_idx, a_idx, distance)):
            i, j = a_idx[k], b_idx[k]
            if used_a[i] or used_b[j]:
                continue
            used_a[i] = used_b[j] = True
            matches.append((i, j))

        if not matches:
            return np.empty((0, 2), dtype=np.int64)
        result = np.array(matches, dtype=np.int64)
        return result[np.argsort(result[:, 0], kind="stable")]

    @staticmethod
    def estimate_metrics(matches: np.ndarray, alice: EventStream, bob: EventStream,
                         duration_s: float) -> EstimatedMetrics:
        """Sift the matched pairs and estimate coincidence rate, QBER and visibility."""
        if not duration_s > 0:
            raise DomainError(f"duration_s must be positive, got {duration_s}")
        a, b = matches[:, 0], matches[:, 1]
        same_basis = alice.bases[a] == bob.bases[b]
        sifted = int(same_basis.sum())
        if sifted == 0:
            raise UndefinedQberError("no sifted pairs: QBER is undefined")
        errors = int((alice.outcomes[a][same_basis] != bob.outcomes[b][same_basis]).sum())
        qber = errors / sifted
        return EstimatedMetrics(
            coincidences=int(len(matches)),
            coincidence_rate_cps=len(matches) / duration_s,
            sifted=sifted,
            errors=errors,
            qber=qber,
            visibility=KeyRateService.visibility(qber),
        )

    @staticmethod
    def _refine_peak(counts: np.ndarray, peak: int) -> float:
        """Sub-bin peak position by a three-point parabola; on log counts when all three are positive."""
        if peak == 0 or peak == counts.size - 1:
            return 0.0
        left, centre, right = (float(c) for c in counts[peak - 1:peak + 2])
        if min(left, centre, right) > 0:
            left, centre, right = math.log(left), math.log(centre), math.log(right)
        curvature = left - 2.0 * centre + right
        if curvature >= 0:
            return 0.0
        return min(0.5, max(-0.5, 0.5 * (left - right) / curvature))

    @staticmethod
    def recover_clock_offset(alice: EventStream, bob: EventStream, bin_s: float, block_s: float = 0.1,
                             search_range_s: float = 50e-6) -> List[ClockOffsetEstimate]:
        """Offset of Bob's clock relative to Alice's, one estimate per block of Alice time.

        Each block histograms the differences t_B - t_A within ``search_range_s``
        at ``bin_s`` resolution. The highest bin must be significant at 5 sigma
        against a Poisson floor, corrected for the number of bins searched.
        Blocks without such a peak (a partly filled last block, a fade) are
        skipped; ClockLockError is raised only when no block locks.
        """
        if not bin_s > 0 or not block_s > 0 or not search_range_s > 0:
            raise DomainError("bin, block and search range must be positive")
        _require_sorted(alice, bob)
        if len(alice) == 0:
            raise ClockLockError("Alice stream is empty", block_index=0)

        half_bins = int(math.ceil(search_range_s / bin_s))
        n_bins = 2 * half_bins + 1
        lock_p_value = stats.norm.sf(LOCK_SIGMA)
        n_blocks = int(alice.times_s[-1] // block_s) + 1

        estimates = []
        first_failure = None
        for block_index in range(n_blocks):
            lo = np.searchsorted(alice.times_s, block_index * block_s, side="left")
            hi = np.searchsorted(alice.times_s, (block_index + 1) * block_s, side="left")
            ta = alice.times_s[lo:hi]
            a_idx, b_idx = _window_pairs(ta, bob.times_s, -search_range_s, search_range_s)
            diffs = bob.times_s[b_idx] - ta[a_idx]
            bins = np.floor(diffs / bin_s + 0.5).astype(np.int64) + half_bins
            bins = bins[(bins >= 0) & (bins < n_bins)]
            counts = np.bincount(bins, minlength=n_bins)

            peak = int(np.argmax(counts))
            floor = np.delete(counts, np.arange(max(0, peak - 3), min(n_bins, peak + 4)))
            floor_mean = float(floor.mean()) if floor.size else 0.0
            floor_sigma = float(floor.std()) if floor.size else 0.0
            p_value = stats.poisson.sf(counts[peak] - 1, floor_mean) * n_bins
            if counts[peak] == 0 or p_value >= lock_p_value:
                message = (f"no correlation peak above {LOCK_SIGMA:g} sigma "
                           f"(peak {counts[peak]}, floor {floor_mean:.3g} +/- {floor_sigma:.3g})")
                logger.warning("Block %d skipped: %s", block_index, message)
                if first_failure is None:
                    first_failure = (block_index, message)
                continue

            delta = CoincidenceAnalysisService._refine_peak(counts, peak)
            offset = (peak - half_bins + delta) * bin_s
            logger.debug("Block %d: offset %.6e s (peak %d, floor %.3g)", block_index, offset, counts[peak], floor_mean)
            estimates.append(ClockOffsetEstimate(
                block_index=block_index,
                block_start_s=block_index * block_s,
                offset_s=offset,
                peak_counts=int(counts[peak]),
                floor_mean=floor_mean,
                floor_sigma=floor_sigma,
            ))
        if not estimates:
            block_index, message = first_failure
            raise ClockLockError(f"no block locked; first failure in block {block_index}: {message}",
                                 block_index=block_index)
        return estimates

    @staticmethod
    def clock_timing_error(stability_ppb: float, interval_s: float) -> float:
        """Time error accumulated by an oscillator of the given fractional stability."""
        if stability_ppb < 0 or interval_s < 0:
            raise DomainError("stability and interval must be non-negative")
        return stability_ppb * 1e-9 * interval_s

    @staticmethod
    def stolen_match_rate(genuine_cps: float, stray_cps: float, jitter_sigma_s: float, tau_s: float) -> float:
        """Rate at which a stray click lands closer than the jittered twin and takes its match."""
        mean_gap = 2.0 * jitter_sigma_s / math.sqrt(math.pi)
        return genuine_cps * stray_cps * tau_s * min(1.0, mean_gap / (tau_s / 2.0))

    @staticmethod
    def accidental_count(matches: np.ndarray, alice_truth: StreamTruth, bob_truth: StreamTruth) -> int:
        """Matched pairs that are not two detections of the same photon pair."""
        a, b = matches[:, 0], matches[:, 1]
        genuine = ((alice_truth.origins[a] == Origin.SIGNAL)
                   & (bob_truth.origins[b] == Origin.SIGNAL)
                   & (alice_truth.pair_ids[a] == bob_truth.pair_ids[b]))
        return int(len(matches) - genuine.sum())
