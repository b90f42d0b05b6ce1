import struct

import numpy as np
import pytest

from data_budget.application.services import DataBudgetApplicationService
from data_budget.domain.entities import BudgetSettings, TimeTagMode
from data_budget.domain.services import DataBudgetService
from data_budget.infrastructure import timetag_codec
from event_sim.domain.entities import Channel, EventStream
from shared.domain.errors import CodecError, ContractViolation, DomainError

budget = DataBudgetService()


def _random_stream(n, duration_s, seed=0):
    rng = np.random.default_rng(seed)
    return EventStream(Channel.BOB, np.sort(rng.random(n) * duration_s),
                       rng.integers(0, 2, n), rng.integers(0, 2, n))


def test_bits_per_event_for_half_a_year_at_25_ps():
    bits = budget.bits_per_event(182.5 * 86400.0, 25e-12)
    assert bits.real_bits == pytest.approx(61.13, abs=0.01)
    assert bits.stored_bits == 64


def test_bits_per_event_rounds_up_to_whole_bytes():
    bits = budget.bits_per_event(1.0, 1e-9)
    assert bits.real_bits == pytest.approx(31.897, abs=1e-3)
    assert bits.stored_bits == 32
    assert budget.bits_per_event(2.0 ** 14, 1.0).stored_bits == 16


def test_bits_per_event_needs_horizon_longer_than_resolution():
    with pytest.raises(DomainError):
        budget.bits_per_event(1e-12, 1e-9)
    with pytest.raises(DomainError):
        budget.bits_per_event(1.0, 0.0)


def test_stream_and_pass_volumes():
    rate = budget.stream_rate(1e4, 64)
    assert rate == 80000.0
    volume = budget.pass_volume(300.0, rate, 3)
    assert volume.per_experiment_bytes == 24e6
    assert volume.per_day_bytes == 72e6
    assert budget.pass_volume(440.0, rate, 1).per_experiment_bytes == pytest.approx(35.2e6)


def test_housekeeping_volume():
    assert budget.housekeeping_volume(64, 2, 1.0, 86400.0) == 11_059_200
    assert budget.housekeeping_volume(32, 2, 1.0, 86400.0) == 5_529_600
    with pytest.raises(DomainError):
        budget.housekeeping_volume(-1, 2, 1.0, 1.0)


def test_report_for_default_settings():
    rows = {row["quantity"]: row["value"] for row in DataBudgetApplicationService().get_report(BudgetSettings())}
    assert rows["bits_per_event_stored"] == 64
    assert rows["stream_rate"] == 80000.0
    assert rows["volume_per_day"] == 72e6
    assert rows["total_per_day"] == 72e6 + 11_059_200


def test_header_layout():
    data = timetag_codec.encode_records([], [], [], 25e-12)
    assert len(data) == 16
    magic, version, delta_fs, mode = struct.unpack("<4sHQBx", data)
    assert (magic, version, delta_fs, mode) == (b"NQTT", 1, 25_000, int(TimeTagMode.RELATIVE))


def test_empty_stream_decodes_to_empty_block():
    for mode in TimeTagMode:
        block = timetag_codec.decode_stream(timetag_codec.encode_records([], [], [], 1e-9, mode))
        assert len(block) == 0
        assert block.mode is mode


def test_absolute_record_packs_tick_basis_and_outcome():
    data = timetag_codec.encode_records([5], [1], [0], 1e-9, TimeTagMode.ABSOLUTE)
    assert struct.unpack_from("<Q", data, 16)[0] == (5 << 2) | 0b10


def test_relative_records_are_six_bytes():
    data = timetag_codec.encode_records([100, 103, 110], [0, 1, 1], [1, 0, 1], 1e-9)
    assert len(data) == 16 + 8 + 2 * 6
    block = timetag_codec.decode_stream(data)
    assert block.ticks.tolist() == [100, 103, 110]
    assert block.bases.tolist() == [0, 1, 1]
    assert block.outcomes.tolist() == [1, 0, 1]
    assert [r.quantized_time for r in block.records()] == [100, 103, 110]


@pytest.mark.parametrize("mode", list(TimeTagMode))
def test_round_trip_of_a_million_events(mode):
    stream = _random_stream(1_000_000, 100.0)
    data = timetag_codec.encode_stream(stream, 25e-12, mode)
    block = timetag_codec.decode_stream(data)
    assert np.array_equal(block.ticks, timetag_codec.quantize(stream.times_s, 25e-12))
    assert np.array_equal(block.bases, stream.bases)
    assert np.array_equal(block.outcomes, stream.outcomes)
    assert np.max(np.abs(block.times_s - stream.times_s)) <= 12.5e-12 + 1e-13


def test_relative_mode_saves_a_quarter_of_the_space():
    rows = DataBudgetApplicationService().get_codec_report(_random_stream(100_000, 10.0, seed=4), 25e-12)
    report = {row["quantity"]: row["value"] for row in rows}
    assert report["codec_absolute_size"] == 16 + 8 * 100_000
    assert report["codec_relative_size"] == 16 + 8 + 6 * 99_999
    assert report["codec_reduction"] == pytest.approx(0.25, abs=1e-3)


def test_long_gaps_use_an_escape_record():
    gap = timetag_codec.ESCAPE_DELTA + 10
    ticks = [0, 5, 5 + gap, 8 + gap]
    data = timetag_codec.encode_records(ticks, [0, 1, 0, 1], [1, 1, 0, 0], 25e-12)
    assert len(data) == 16 + 8 + 6 + (6 + 8) + 6
    block = timetag_codec.decode_stream(data)
    assert block.ticks.tolist() == ticks
    assert block.bases.tolist() == [0, 1, 0, 1]
    assert block.outcomes.tolist() == [1, 1, 0, 0]


def test_long_gaps_are_rejected_when_escapes_are_disabled():
    gap = timetag_codec.ESCAPE_DELTA
    with pytest.raises(CodecError, match=f"gap of {gap} ticks"):
        timetag_codec.encode_records([0, gap], [0, 0], [0, 0], 25e-12, allow_escape=False)


def test_unsorted_input_violates_the_encoding_contract():
    with pytest.raises(ContractViolation):
        timetag_codec.encode_records([10, 5], [0, 0], [0, 0], 1e-9)


def test_invalid_bits_are_rejected():
    with pytest.raises(CodecError):
        timetag_codec.encode_records([1, 2], [0, 2], [0, 0], 1e-9)


@pytest.mark.parametrize("data", [
    b"NQ",
    b"XXXX" + b"\x00" * 12,
    struct.pack("<4sHQBx", b"NQTT", 9, 1000, 1),
    struct.pack("<4sHQBx", b"NQTT", 1, 1000, 7),
    struct.pack("<4sHQBx", b"NQTT", 1, 1000, 0) + b"\x00" * 5,
    struct.pack("<4sHQBx", b"NQTT", 1, 1000, 1) + b"\x00" * 8 + b"\x01\x00\x00",
])
def test_malformed_data_is_rejected(data):
    with pytest.raises(CodecError):
        timetag_codec.decode_stream(data)


def test_dangling_escape_is_rejected():
    data = timetag_codec.encode_records([0, timetag_codec.ESCAPE_DELTA + 1], [0, 0], [0, 0], 1e-9)
    with pytest.raises(CodecError):
        timetag_codec.decode_stream(data[:-8])
