"""Domain entities for the Event Simulation context.

Streams are column-oriented numpy arrays. The origin of each event is kept
apart from the stream in ``StreamTruth`` so that matching and estimation only
ever see what a real time tagger records.
"""
import math
from dataclasses import asdict, dataclass
from enum import Enum, IntEnum
from typing import Iterator, Optional

import numpy as np

from shared.domain.errors import DomainError


class Channel(Enum):
    ALICE = "alice"
    BOB = "bob"


class Basis(IntEnum):
    HV = 0
    DA = 1


class Origin(IntEnum):
    SIGNAL = 0
    DARK = 1
    BACKGROUND = 2


@dataclass(frozen=True)
class DetectionEvent:
    time_s: float
    channel: Channel
    basis: Basis
    outcome: int
    origin: Optional[Origin] = None

    def __post_init__(self):
        if self.time_s < 0:
            raise DomainError(f"event time must be non-negative, got {self.time_s}")
        if self.outcome not in (0, 1):
            raise DomainError(f"outcome must be 0 or 1, got {self.outcome}")


class EventStream:
    """Time-ordered detections of one side."""

    def __init__(self, channel: Channel, times_s, bases, outcomes):
        self.channel = channel
        self.times_s = np.asarray(times_s, dtype=np.float64)
        self.bases = np.asarray(bases, dtype=np.int8)
        self.outcomes = np.asarray(outcomes, dtype=np.int8)
        if not (self.times_s.shape == self.bases.shape == self.outcomes.shape) or self.times_s.ndim != 1:
            raise DomainError("stream columns must be one-dimensional and of equal length")

    @classmethod
    def empty(cls, channel: Channel) -> "EventStream":
        return cls(channel, [], [], [])

    @classmethod
    def from_events(cls, channel: Channel, events) -> "EventStream":
        events = list(events)
        return cls(
            channel,
            [e.time_s for e in events],
            [int(e.basis) for e in events],
            [e.outcome for e in events],
        )

    def __len__(self) -> int:
        return int(self.times_s.size)

    def is_sorted(self) -> bool:
        return bool(np.all(np.diff(self.times_s) >= 0))

    def event(self, index: int) -> DetectionEvent:
        return DetectionEvent(
            time_s=float(self.times_s[index]),
            channel=self.channel,
            basis=Basis(int(self.bases[index])),
            outcome=int(self.outcomes[index]),
        )

    def events(self) -> Iterator[DetectionEvent]:
        for index in range(len(self)):
            yield self.event(index)


@dataclass(frozen=True)
class StreamTruth:
    """Ground truth behind a simulated stream, one entry per event."""
    origins: np.ndarray
    pair_ids: np.ndarray

    @classmethod
    def empty(cls) -> "StreamTruth":
        return cls(origins=np.empty(0, dtype=np.int8), pair_ids=np.empty(0, dtype=np.int64))


@dataclass(frozen=True)
class SimulatedStreams:
    alice: EventStream
    bob: EventStream
    alice_truth: StreamTruth
    bob_truth: StreamTruth
    duration_s: float


@dataclass(frozen=True)
class SimConfig:
    """One Monte Carlo realization at desk scale."""
    pair_rate_cps: float = 1e6
    duration_s: float = 1.0
    eta_a: float = 0.6
    eta_b: float = 0.05
    n_det: int = 4
    d_a_cps: float = 100.0
    d_b_cps: float = 100.0
    b_cps: float = 400.0
    jitter_sigma_s: float = 100e-12 / math.sqrt(2.0)
    e_d: float = 0.01
    clock_offset_s: float = 0.0
    clock_drift_ppb: float = 0.0
    rng_seed: int = 0
    block_s: float = 0.1
    sync_bin_s: float = 1e-9
    sync_search_s: float = 50e-6

    def __post_init__(self):
        if not self.duration_s > 0:
            raise DomainError(f"duration_s must be positive, got {self.duration_s}")
        for name in ("pair_rate_cps", "d_a_cps", "d_b_cps", "b_cps", "jitter_sigma_s"):
            if not getattr(self, name) >= 0:
                raise DomainError(f"{name} must be non-negative, got {getattr(self, name)}")
        for name in ("eta_a", "eta_b"):
            if not 0 <= getattr(self, name) <= 1:
                raise DomainError(f"{name} must lie in [0, 1], got {getattr(self, name)}")
        if not 0 <= self.e_d < 0.5:
            raise DomainError(f"e_d must lie in [0, 0.5), got {self.e_d}")
        if self.n_det < 1:
            raise DomainError(f"n_det must be at least 1, got {self.n_det}")
        if not 0 <= self.rng_seed < 2 ** 64:
            raise DomainError(f"rng_seed must be a 64-bit unsigned integer, got {self.rng_seed}")
        for name in ("block_s", "sync_bin_s", "sync_search_s"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def alice_noise_cps(self) -> float:
        return self.n_det * self.d_a_cps

    @property
    def bob_dark_cps(self) -> float:
        return self.n_det * self.d_b_cps

    @property
    def bob_noise_cps(self) -> float:
        return self.bob_dark_cps + self.b_cps

    def expected_event_count(self) -> float:
        """Mean number of generated pairs and noise clicks."""
        return (self.pair_rate_cps + self.alice_noise_cps + self.bob_noise_cps) * self.duration_s

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class EstimatedMetrics:
    coincidences: int
    coincidence_rate_cps: float
    sifted: int
    errors: int
    qber: float
    visibility: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ClockOffsetEstimate:
    block_index: int
    block_start_s: float
    offset_s: float
    peak_counts: int
    floor_mean: float
    floor_sigma: float
