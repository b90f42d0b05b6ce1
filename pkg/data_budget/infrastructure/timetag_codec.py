"""Binary time-tag file codec.

Layout, little-endian:

    header  16 bytes   magic "NQTT", version u16, delta_t in femtoseconds u64, mode u8, pad
    absolute record    u64 = tick << 2 | basis << 1 | outcome        (62-bit tick)
    relative record    48 bits = delta << 2 | basis << 1 | outcome  (46-bit delta)

In relative mode the first record is absolute. A delta field of all ones marks
an escape: the next 8 bytes hold one absolute record.
"""
import logging
import struct

import numpy as np

from data_budget.domain.entities import TimeTagBlock, TimeTagMode
from shared.domain.errors import CodecError, ContractViolation

logger = logging.getLogger(__name__)

MAGIC = b"NQTT"
VERSION = 1
HEADER = struct.Struct("<4sHQBx")
ABSOLUTE_TICK_BITS = 62
DELTA_BITS = 46
ESCAPE_DELTA = (1 << DELTA_BITS) - 1
RELATIVE_RECORD_BYTES = 6
ABSOLUTE_RECORD_BYTES = 8
SCAN_CHUNK_RECORDS = 1 << 16


def _femtoseconds(delta_t_s: float) -> int:
    fs = int(round(delta_t_s * 1e15))
    if fs < 1:
        raise CodecError(f"delta_t of {delta_t_s} s is below the 1 fs header resolution")
    return fs


def _pack_words(ticks: np.ndarray, bases: np.ndarray, outcomes: np.ndarray) -> np.ndarray:
    return (ticks.astype(np.uint64) << np.uint64(2)) | (bases.astype(np.uint64) << np.uint64(1)) | outcomes.astype(np.uint64)


def _relative_bytes(words: np.ndarray) -> np.ndarray:
    """Low six bytes of each little-endian word, as an (n, 6) array."""
    return words.astype("<u8").view(np.uint8).reshape(-1, 8)[:, :RELATIVE_RECORD_BYTES]


def quantize(times_s, delta_t_s: float) -> np.ndarray:
    """Tick counts nearest to the given times."""
    ticks = np.rint(np.asarray(times_s, dtype=np.float64) / delta_t_s)
    if ticks.size and (ticks.min() < 0 or ticks.max() >= 2.0 ** ABSOLUTE_TICK_BITS):
        raise CodecError(f"timestamps do not fit a {ABSOLUTE_TICK_BITS}-bit tick count")
    return ticks.astype(np.uint64)


def encode_records(ticks, bases, outcomes, delta_t_s: float, mode: TimeTagMode = TimeTagMode.RELATIVE,
                   allow_escape: bool = True) -> bytes:
    ticks = np.asarray(ticks, dtype=np.uint64)
    bases = np.asarray(bases, dtype=np.uint8)
    outcomes = np.asarray(outcomes, dtype=np.uint8)
    if not ticks.shape == bases.shape == outcomes.shape:
        raise CodecError("ticks, bases and outcomes must have the same length")
    if np.any(bases > 1) or np.any(outcomes > 1):
        raise CodecError("basis and outcome values must be single bits")
    if ticks.size and int(ticks.max()) >> ABSOLUTE_TICK_BITS:
        raise CodecError(f"tick count does not fit {ABSOLUTE_TICK_BITS} bits")
    if np.any(ticks[1:] < ticks[:-1]):
        raise ContractViolation("time tags must be sorted before encoding")

    header = HEADER.pack(MAGIC, VERSION, _femtoseconds(delta_t_s), int(mode))
    if ticks.size == 0:
        return header
    words = _pack_words(ticks, bases, outcomes)
    if mode is TimeTagMode.ABSOLUTE:
        return header + words.astype("<u8").tobytes()

    deltas = np.diff(ticks)
    overflow = np.flatnonzero(deltas >= ESCAPE_DELTA)
    if overflow.size and not allow_escape:
        i = int(overflow[0])
        gap = int(deltas[i])
        raise CodecError(
            f"gap of {gap} ticks ({gap * delta_t_s:.6g} s) between events {i} and {i + 1} "
            f"exceeds the {DELTA_BITS}-bit delta field")

    relative = _pack_words(np.minimum(deltas, ESCAPE_DELTA), bases[1:], outcomes[1:])
    relative[overflow] = np.uint64(ESCAPE_DELTA) << np.uint64(2)
    relative = _relative_bytes(relative)

    parts = [header, words[:1].astype("<u8").tobytes()]
    start = 0
    for i in overflow:
        parts.append(relative[start:i + 1].tobytes())
        parts.append(words[i + 1:i + 2].astype("<u8").tobytes())
        start = i + 1
    parts.append(relative[start:].tobytes())
    if overflow.size:
        logger.debug("Encoded %d escape records", overflow.size)
    return b"".join(parts)


def encode_stream(events, delta_t_s: float, mode: TimeTagMode = TimeTagMode.RELATIVE,
                  allow_escape: bool = True) -> bytes:
    """Encode a time-sorted stream with ``times_s``, ``bases`` and ``outcomes`` columns."""
    return encode_records(quantize(events.times_s, delta_t_s), events.bases, events.outcomes,
                          delta_t_s, mode, allow_escape)


def _read_absolute(buffer: bytes, offset: int) -> int:
    return int(np.frombuffer(buffer, dtype="<u8", count=1, offset=offset)[0])


def decode_stream(data: bytes) -> TimeTagBlock:
    if len(data) < HEADER.size:
        raise CodecError(f"time-tag data of {len(data)} bytes is shorter than its header")
    magic, version, delta_fs, mode_value = HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise CodecError(f"bad magic {magic!r}")
    if version != VERSION:
        raise CodecError(f"unsupported time-tag version {version}")
    try:
        mode = TimeTagMode(mode_value)
    except ValueError:
        raise CodecError(f"unknown time-tag mode {mode_value}") from None
    delta_t_s = delta_fs * 1e-15
    body = data[HEADER.size:]

    if mode is TimeTagMode.ABSOLUTE:
        if len(body) % ABSOLUTE_RECORD_BYTES:
            raise CodecError("absolute body is not a whole number of 8-byte records")
        words = np.frombuffer(body, dtype="<u8")
        return _block(delta_t_s, mode, [words >> np.uint64(2)], [words])

    if not body:
        return _block(delta_t_s, mode, [], [])
    if len(body) < ABSOLUTE_RECORD_BYTES:
        raise CodecError("relative body is truncated before its first record")

    tick_parts, word_parts = [], []
    pending = _read_absolute(body, 0)
    pos = ABSOLUTE_RECORD_BYTES
    while True:
        start_tick = pending >> 2
        tick_parts.append(np.array([start_tick], dtype=np.uint64))
        word_parts.append(np.array([pending], dtype=np.uint64))
        escape_at = None
        while pos < len(body):
            available = (len(body) - pos) // RELATIVE_RECORD_BYTES
            count = min(available, SCAN_CHUNK_RECORDS)
            if count == 0:
                raise CodecError(f"truncated relative record at byte {HEADER.size + pos}")
            raw = np.frombuffer(body, dtype=np.uint8, count=count * RELATIVE_RECORD_BYTES, offset=pos)
            padded = np.zeros((count, 8), dtype=np.uint8)
            padded[:, :RELATIVE_RECORD_BYTES] = raw.reshape(count, RELATIVE_RECORD_BYTES)
            words = padded.view("<u8").ravel()
            escapes = np.flatnonzero((words >> np.uint64(2)) == ESCAPE_DELTA)
            if escapes.size:
                words = words[:escapes[0]]
            ticks = np.uint64(start_tick) + np.cumsum(words >> np.uint64(2), dtype=np.uint64)
            tick_parts.append(ticks)
            word_parts.append(words)
            if ticks.size:
                start_tick = int(ticks[-1])
            pos += words.size * RELATIVE_RECORD_BYTES
            if escapes.size:
                escape_at = pos
                break
        if escape_at is None:
            break
        absolute_at = escape_at + RELATIVE_RECORD_BYTES
        if absolute_at + ABSOLUTE_RECORD_BYTES > len(body):
            raise CodecError(f"escape record at byte {HEADER.size + escape_at} has no absolute record")
        pending = _read_absolute(body, absolute_at)
        pos = absolute_at + ABSOLUTE_RECORD_BYTES
    return _block(delta_t_s, mode, tick_parts, word_parts)


def _block(delta_t_s: float, mode: TimeTagMode, tick_parts, word_parts) -> TimeTagBlock:
    ticks = np.concatenate(tick_parts) if tick_parts else np.empty(0, dtype=np.uint64)
    words = np.concatenate(word_parts) if word_parts else np.empty(0, dtype=np.uint64)
    return TimeTagBlock(
        delta_t_s=delta_t_s,
        mode=mode,
        ticks=ticks.astype(np.uint64),
        bases=((words >> np.uint64(1)) & np.uint64(1)).astype(np.int8),
        outcomes=(words & np.uint64(1)).astype(np.int8),
    )
