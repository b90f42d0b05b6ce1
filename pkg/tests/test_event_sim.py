import math

import numpy as np
import pytest

from event_sim.application.services import EventSimApplicationService
from event_sim.domain.entities import (
    Basis, Channel, DetectionEvent, EventStream, Origin, SimConfig, StreamTruth,
)
from event_sim.domain.services import CoincidenceAnalysisService, StreamSimulationService
from shared.domain.errors import (
    ClockLockError, ContractViolation, DomainError, ResourceLimitError, UndefinedQberError,
)

simulation = StreamSimulationService()
analysis = CoincidenceAnalysisService()


def _stream(channel, times, bases=None, outcomes=None):
    n = len(times)
    return EventStream(channel, times, bases if bases is not None else [0] * n,
                       outcomes if outcomes is not None else [0] * n)


def test_stream_round_trips_through_events():
    events = [DetectionEvent(0.5, Channel.ALICE, Basis.DA, 1), DetectionEvent(1.5, Channel.ALICE, Basis.HV, 0)]
    stream = EventStream.from_events(Channel.ALICE, events)
    assert len(stream) == 2
    assert list(stream.events()) == events


def test_invalid_events_are_rejected():
    with pytest.raises(DomainError):
        DetectionEvent(-1.0, Channel.BOB, Basis.HV, 0)
    with pytest.raises(DomainError):
        DetectionEvent(1.0, Channel.BOB, Basis.HV, 2)
    with pytest.raises(DomainError):
        EventStream(Channel.BOB, [1.0, 2.0], [0], [0, 1])


def test_empty_streams_have_no_coincidences():
    matches = analysis.match_coincidences(EventStream.empty(Channel.ALICE), EventStream.empty(Channel.BOB), 1e-9)
    assert matches.shape == (0, 2)
    with pytest.raises(UndefinedQberError):
        analysis.estimate_metrics(matches, EventStream.empty(Channel.ALICE), EventStream.empty(Channel.BOB), 1.0)


def test_identical_streams_match_one_to_one_without_errors():
    times = np.arange(1, 101) * 1e-6
    bases = np.arange(100) % 2
    outcomes = (np.arange(100) // 2) % 2
    alice = _stream(Channel.ALICE, times, bases, outcomes)
    bob = _stream(Channel.BOB, times.copy(), bases, outcomes)
    matches = analysis.match_coincidences(alice, bob, 1e-9)
    assert np.array_equal(matches, np.column_stack([np.arange(100), np.arange(100)]))
    metrics = analysis.estimate_metrics(matches, alice, bob, 1.0)
    assert metrics.sifted == 100
    assert metrics.qber == 0.0
    assert metrics.visibility == 1.0


def test_matching_window_is_inclusive_of_half_width_only():
    alice = _stream(Channel.ALICE, [10.0])
    assert len(analysis.match_coincidences(alice, _stream(Channel.BOB, [10.25]), 0.5)) == 1
    assert len(analysis.match_coincidences(alice, _stream(Channel.BOB, [10.375]), 0.5)) == 0


def test_matching_prefers_the_closest_candidate():
    alice = _stream(Channel.ALICE, [10.0, 10.5])
    bob = _stream(Channel.BOB, [10.375])
    matches = analysis.match_coincidences(alice, bob, 1.0)
    assert matches.tolist() == [[1, 0]]


def test_matching_ties_go_to_the_lower_index():
    alice = _stream(Channel.ALICE, [10.0])
    bob = _stream(Channel.BOB, [9.75, 10.25])
    assert analysis.match_coincidences(alice, bob, 1.0).tolist() == [[0, 0]]


def test_each_event_is_used_at_most_once():
    alice = _stream(Channel.ALICE, [10.0, 10.125])
    bob = _stream(Channel.BOB, [10.0625])
    assert len(analysis.match_coincidences(alice, bob, 1.0)) == 1


def test_matching_removes_clock_offset():
    alice = _stream(Channel.ALICE, [1.0, 2.0, 3.0])
    bob = _stream(Channel.BOB, [6.0, 7.0, 8.0])
    assert len(analysis.match_coincidences(alice, bob, 0.5)) == 0
    assert len(analysis.match_coincidences(alice, bob, 0.5, offset_s=5.0)) == 3


def test_unsorted_streams_violate_the_matching_contract():
    with pytest.raises(ContractViolation):
        analysis.match_coincidences(_stream(Channel.ALICE, [2.0, 1.0]), _stream(Channel.BOB, [1.0]), 1e-9)


def test_matching_needs_a_positive_window():
    with pytest.raises(DomainError):
        analysis.match_coincidences(_stream(Channel.ALICE, [1.0]), _stream(Channel.BOB, [1.0]), 0.0)


def test_estimated_qber_counts_errors_among_sifted_pairs():
    alice = _stream(Channel.ALICE, [1.0, 2.0, 3.0, 4.0], [0, 0, 1, 1], [0, 1, 0, 1])
    bob = _stream(Channel.BOB, [1.0, 2.0, 3.0, 4.0], [0, 0, 1, 0], [0, 0, 0, 1])
    metrics = analysis.estimate_metrics(analysis.match_coincidences(alice, bob, 0.1), alice, bob, 2.0)
    assert metrics.coincidences == 4
    assert metrics.coincidence_rate_cps == 2.0
    assert metrics.sifted == 3
    assert metrics.errors == 1
    assert metrics.qber == pytest.approx(1 / 3)
    assert metrics.visibility == pytest.approx(0.5)


def test_accidental_count_uses_ground_truth():
    matches = np.array([[0, 0], [1, 1], [2, 2]])
    alice_truth = StreamTruth(origins=np.array([Origin.SIGNAL, Origin.SIGNAL, Origin.DARK], dtype=np.int8),
                              pair_ids=np.array([7, 8, -1]))
    bob_truth = StreamTruth(origins=np.array([Origin.SIGNAL, Origin.SIGNAL, Origin.SIGNAL], dtype=np.int8),
                            pair_ids=np.array([7, 9, 10]))
    assert analysis.accidental_count(matches, alice_truth, bob_truth) == 2


def test_simulation_is_deterministic_for_a_seed():
    cfg = SimConfig(pair_rate_cps=1e5, duration_s=0.3, rng_seed=42)
    first = simulation.simulate_streams(cfg)
    second = simulation.simulate_streams(cfg)
    assert np.array_equal(first.alice.times_s, second.alice.times_s)
    assert np.array_equal(first.bob.outcomes, second.bob.outcomes)
    other = simulation.simulate_streams(SimConfig(pair_rate_cps=1e5, duration_s=0.3, rng_seed=43))
    assert not np.array_equal(first.alice.times_s, other.alice.times_s)


def test_blocks_can_be_generated_in_any_order():
    cfg = SimConfig(pair_rate_cps=1e4, duration_s=0.5, rng_seed=7)
    later_first = simulation.simulate_block(cfg, 3)
    simulation.simulate_block(cfg, 0)
    again = simulation.simulate_block(cfg, 3)
    assert np.array_equal(later_first[0][0][0], again[0][0][0])


def test_simulated_streams_are_sorted_and_sized_like_poisson():
    cfg = SimConfig(pair_rate_cps=1e5, duration_s=1.0, rng_seed=3)
    streams = simulation.simulate_streams(cfg)
    assert streams.alice.is_sorted() and streams.bob.is_sorted()
    assert streams.alice.times_s.min() >= 0.0
    expected_alice = cfg.eta_a * cfg.pair_rate_cps + cfg.alice_noise_cps
    assert abs(len(streams.alice) - expected_alice) < 5 * math.sqrt(expected_alice)
    expected_bob = cfg.eta_b * cfg.pair_rate_cps + cfg.bob_noise_cps
    assert abs(len(streams.bob) - expected_bob) < 5 * math.sqrt(expected_bob)
    assert len(streams.alice_truth.origins) == len(streams.alice)
    signal = np.count_nonzero(streams.bob_truth.origins == Origin.SIGNAL)
    assert signal == pytest.approx(cfg.eta_b * cfg.pair_rate_cps, rel=0.1)


def test_zero_duration_is_rejected():
    with pytest.raises(DomainError):
        SimConfig(duration_s=0.0)


def test_oversized_runs_are_refused():
    cfg = SimConfig(pair_rate_cps=1e6, duration_s=1.0)
    with pytest.raises(ResourceLimitError):
        simulation.simulate_streams(cfg, max_events=1e5)
    with pytest.raises(ResourceLimitError):
        EventSimApplicationService(max_events=1e5).simulate(cfg)


def test_monte_carlo_agrees_with_analytic_model():
    rows = EventSimApplicationService().compare_with_model(SimConfig(rng_seed=1), 1e-9)
    assert [row["metric"] for row in rows] == [
        "coincidence_rate_cps", "qber", "visibility", "accidental_rate_cps", "clock_offset_s"]
    for row in rows:
        assert abs(row["z"]) < 3.0, row
    by_metric = {row["metric"]: row for row in rows}
    assert by_metric["coincidence_rate_cps"]["mc"] == pytest.approx(3.0e4, rel=0.02)
    assert by_metric["qber"]["mc"] == pytest.approx(0.0105, abs=0.003)


def test_clock_offset_is_recovered_per_block():
    cfg = SimConfig(duration_s=0.5, clock_offset_s=12.345e-6, rng_seed=5)
    streams = simulation.simulate_streams(cfg)
    estimates = analysis.recover_clock_offset(streams.alice, streams.bob, 1e-9, 0.1, 50e-6)
    assert len(estimates) == 5
    for estimate in estimates:
        assert estimate.offset_s == pytest.approx(12.345e-6, abs=1.5e-10)
        assert estimate.peak_counts > 1000


def test_clock_drift_shows_as_a_slope_across_blocks():
    cfg = SimConfig(duration_s=2.0, clock_drift_ppb=1.0, rng_seed=11)
    streams = simulation.simulate_streams(cfg)
    estimates = analysis.recover_clock_offset(streams.alice, streams.bob, 50e-12, 0.1, 5e-6)
    assert len(estimates) == 20
    centres = np.array([e.block_start_s + 0.05 for e in estimates])
    slope = np.polyfit(centres, [e.offset_s for e in estimates], 1)[0]
    assert slope == pytest.approx(1e-9, rel=0.05)


def test_clock_recovery_fails_without_correlated_counts():
    cfg = SimConfig(duration_s=0.1, eta_b=0.0, rng_seed=2)
    streams = simulation.simulate_streams(cfg)
    with pytest.raises(ClockLockError) as excinfo:
        analysis.recover_clock_offset(streams.alice, streams.bob, 1e-9)
    assert excinfo.value.block_index == 0


def test_clock_recovery_needs_alice_events():
    with pytest.raises(ClockLockError):
        analysis.recover_clock_offset(EventStream.empty(Channel.ALICE), _stream(Channel.BOB, [1.0]), 1e-9)


@pytest.mark.parametrize("duration", [0.1001, 0.50005, 1.00002])
def test_partly_filled_last_block_does_not_break_clock_recovery(duration):
    cfg = SimConfig(duration_s=duration, clock_offset_s=3e-6, rng_seed=4)
    streams = simulation.simulate_streams(cfg)
    estimates = analysis.recover_clock_offset(streams.alice, streams.bob, 1e-9, 0.1, 50e-6)
    full_blocks = int(round(duration // 0.1))
    assert [e.block_index for e in estimates][:full_blocks] == list(range(full_blocks))
    assert len(estimates) <= full_blocks + 1
    for estimate in estimates:
        assert estimate.offset_s == pytest.approx(3e-6, abs=5e-10)


def test_model_comparison_survives_a_partly_filled_last_block():
    rows = EventSimApplicationService().compare_with_model(SimConfig(duration_s=0.1001, rng_seed=3), 1e-9)
    clock = rows[-1]
    assert clock["metric"] == "clock_offset_s"
    assert clock["mc"] == pytest.approx(0.0, abs=5e-10)


def test_clock_offset_locks_on_a_few_dozen_coincidences_per_block():
    # 0.6 * 0.05 * 1e4 cps * 0.1 s = 30 true coincidences per block
    cfg = SimConfig(pair_rate_cps=1e4, duration_s=0.5, clock_offset_s=12.345e-6, rng_seed=8)
    streams = simulation.simulate_streams(cfg)
    estimates = analysis.recover_clock_offset(streams.alice, streams.bob, 1e-9, 0.1, 50e-6)
    assert len(estimates) == 5
    for estimate in estimates:
        assert estimate.offset_s == pytest.approx(12.345e-6, abs=5e-10)
        assert 10 < estimate.peak_counts < 60
        assert estimate.floor_mean < 0.01


def test_tenth_ppb_drift_moves_the_peak_ten_ps_per_block():
    cfg = SimConfig(duration_s=2.0, clock_drift_ppb=0.1, rng_seed=11)
    streams = simulation.simulate_streams(cfg)
    estimates = analysis.recover_clock_offset(streams.alice, streams.bob, 50e-12, 0.1, 5e-6)
    centres = np.array([e.block_start_s + 0.05 for e in estimates])
    slope = np.polyfit(centres, [e.offset_s for e in estimates], 1)[0]
    assert slope * 0.1 == pytest.approx(10e-12, rel=0.2)
    assert slope * 0.1 == pytest.approx(analysis.clock_timing_error(0.1, 0.1), rel=0.2)


def test_clock_timing_error():
    assert analysis.clock_timing_error(1.0, 1.0) == pytest.approx(1e-9)
    assert analysis.clock_timing_error(0.05, 300.0) == pytest.approx(15e-9)
    assert analysis.clock_timing_error(0.1, 0.1) == pytest.approx(10e-12)
    with pytest.raises(DomainError):
        analysis.clock_timing_error(-1.0, 1.0)


def test_stolen_match_rate_is_capped_by_the_window():
    assert analysis.stolen_match_rate(100.0, 1e4, 1.0, 1e-9) == pytest.approx(100.0 * 1e4 * 1e-9)
    assert analysis.stolen_match_rate(100.0, 1e4, 0.0, 1e-9) == 0.0
