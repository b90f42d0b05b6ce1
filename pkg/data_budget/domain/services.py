"""Domain services for the Data Budget context."""
import math

from data_budget.domain.entities import EventBits, PassVolume
from shared.domain.errors import DomainError

POLARIZATION_BITS = 2


class DataBudgetService:
    """Service for on-board storage arithmetic. Volumes are in bytes."""

    @staticmethod
    def bits_per_event(horizon_s: float, delta_t_s: float) -> EventBits:
        """Timestamp bits for ``horizon_s`` at resolution ``delta_t_s`` plus basis and outcome bits."""
        if not delta_t_s > 0 or not horizon_s >= delta_t_s:
            raise DomainError(f"need horizon >= delta_t > 0, got horizon={horizon_s}, delta_t={delta_t_s}")
        real = math.log2(horizon_s / delta_t_s) + POLARIZATION_BITS
        return EventBits(real_bits=real, stored_bits=8 * math.ceil(real / 8.0 - 1e-12))

    @staticmethod
    def stream_rate(event_rate_cps: float, bits_per_event: int) -> float:
        if event_rate_cps < 0 or bits_per_event < 0:
            raise DomainError("event rate and bits per event must be non-negative")
        return event_rate_cps * bits_per_event / 8.0

    @staticmethod
    def pass_volume(duration_s: float, rate_bytes_s: float, passes_per_day: float) -> PassVolume:
        if min(duration_s, rate_bytes_s, passes_per_day) < 0:
            raise DomainError("duration, rate and passes per day must be non-negative")
        per_experiment = duration_s * rate_bytes_s
        return PassVolume(per_experiment_bytes=per_experiment, per_day_bytes=per_experiment * passes_per_day)

    @staticmethod
    def housekeeping_volume(n_channels: int, bytes_per_value: int, sample_rate_hz: float, duration_s: float) -> float:
        if min(n_channels, bytes_per_value, sample_rate_hz, duration_s) < 0:
            raise DomainError("housekeeping parameters must be non-negative")
        return float(n_channels * bytes_per_value * sample_rate_hz * duration_s)

    @staticmethod
    def daily_volume(volume: PassVolume, housekeeping_bytes: float) -> float:
        return volume.per_day_bytes + housekeeping_bytes
