"""Domain entities for the Data Budget context."""
from dataclasses import asdict, dataclass
from enum import IntEnum

import numpy as np

from shared.domain.errors import DomainError

SECONDS_PER_DAY = 86400.0


class TimeTagMode(IntEnum):
    ABSOLUTE = 0
    RELATIVE = 1


@dataclass(frozen=True)
class TimeTagRecord:
    """One detector event as stored on board."""
    quantized_time: int
    basis_bit: int
    outcome_bit: int

    def __post_init__(self):
        if self.quantized_time < 0:
            raise DomainError(f"quantized_time must be non-negative, got {self.quantized_time}")
        if self.basis_bit not in (0, 1) or self.outcome_bit not in (0, 1):
            raise DomainError("basis and outcome bits must be 0 or 1")


@dataclass(frozen=True)
class TimeTagBlock:
    """Decoded content of a time-tag file."""
    delta_t_s: float
    mode: TimeTagMode
    ticks: np.ndarray
    bases: np.ndarray
    outcomes: np.ndarray

    def __len__(self) -> int:
        return int(self.ticks.size)

    @property
    def times_s(self) -> np.ndarray:
        return self.ticks.astype(np.float64) * self.delta_t_s

    def records(self):
        for tick, basis, outcome in zip(self.ticks, self.bases, self.outcomes):
            yield TimeTagRecord(quantized_time=int(tick), basis_bit=int(basis), outcome_bit=int(outcome))


@dataclass(frozen=True)
class EventBits:
    real_bits: float
    stored_bits: int


@dataclass(frozen=True)
class PassVolume:
    per_experiment_bytes: float
    per_day_bytes: float


@dataclass(frozen=True)
class BudgetSettings:
    """Storage scenario of the on-board time tagger."""
    horizon_s: float = 182.5 * SECONDS_PER_DAY
    delta_t_s: float = 25e-12
    event_rate_cps: float = 1e4
    experiment_s: float = 300.0
    passes_per_day: float = 3.0
    housekeeping_channels: int = 64
    housekeeping_bytes_per_value: int = 2
    housekeeping_rate_hz: float = 1.0
    housekeeping_duration_s: float = SECONDS_PER_DAY
    codec_mode: TimeTagMode = TimeTagMode.RELATIVE

    def __post_init__(self):
        if not self.delta_t_s > 0:
            raise DomainError(f"delta_t_s must be positive, got {self.delta_t_s}")
        if not self.horizon_s >= self.delta_t_s:
            raise DomainError("horizon_s must not be shorter than delta_t_s")
        for name in ("event_rate_cps", "experiment_s", "passes_per_day", "housekeeping_channels",
                     "housekeeping_bytes_per_value", "housekeeping_rate_hz", "housekeeping_duration_s"):
            if not getattr(self, name) >= 0:
                raise DomainError(f"{name} must be non-negative, got {getattr(self, name)}")

    def to_dict(self) -> dict:
        data = asdict(self)
        data["codec_mode"] = self.codec_mode.name.lower()
        return data
