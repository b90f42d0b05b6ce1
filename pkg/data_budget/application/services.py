"""Application services for the Data Budget context."""
import logging
from typing import List

import numpy as np

from data_budget.domain.entities import BudgetSettings, TimeTagMode
from data_budget.domain.services import DataBudgetService
from data_budget.infrastructure import timetag_codec
from shared.domain.errors import CodecError

logger = logging.getLogger(__name__)


class DataBudgetApplicationService:
    """Application service for storage reports."""

    def __init__(self):
        self.budget_service = DataBudgetService()

    def get_report(self, settings: BudgetSettings) -> List[dict]:
        """Storage figures for one experiment, one day and the housekeeping channels."""
        bits = self.budget_service.bits_per_event(settings.horizon_s, settings.delta_t_s)
        rate = self.budget_service.stream_rate(settings.event_rate_cps, bits.stored_bits)
        volume = self.budget_service.pass_volume(settings.experiment_s, rate, settings.passes_per_day)
        housekeeping = self.budget_service.housekeeping_volume(
            settings.housekeeping_channels, settings.housekeeping_bytes_per_value,
            settings.housekeeping_rate_hz, settings.housekeeping_duration_s)
        daily = self.budget_service.daily_volume(volume, housekeeping)
        logger.info("Data budget: %d bits/event, %.4g B/s, %.4g B/day", bits.stored_bits, rate, daily)
        return [
            {"quantity": "bits_per_event_real", "value": bits.real_bits, "unit": "bit"},
            {"quantity": "bits_per_event_stored", "value": bits.stored_bits, "unit": "bit"},
            {"quantity": "stream_rate", "value": rate, "unit": "B/s"},
            {"quantity": "volume_per_experiment", "value": volume.per_experiment_bytes, "unit": "B"},
            {"quantity": "volume_per_day", "value": volume.per_day_bytes, "unit": "B"},
            {"quantity": "housekeeping_per_day", "value": housekeeping, "unit": "B"},
            {"quantity": "total_per_day", "value": daily, "unit": "B"},
        ]

    def get_codec_report(self, stream, delta_t_s: float) -> List[dict]:
        """Encoded size of a recorded stream in both modes, checked by decoding."""
        sizes = {}
        for mode in TimeTagMode:
            data = timetag_codec.encode_stream(stream, delta_t_s, mode)
            decoded = timetag_codec.decode_stream(data)
            if not np.array_equal(decoded.ticks, timetag_codec.quantize(stream.times_s, delta_t_s)):
                raise CodecError(f"{mode.name.lower()} round trip changed the time tags")
            sizes[mode] = len(data)
        absolute = sizes[TimeTagMode.ABSOLUTE]
        relative = sizes[TimeTagMode.RELATIVE]
        reduction = 1.0 - relative / absolute if absolute else 0.0
        logger.info("Codec: %d events, %d B absolute, %d B relative", len(stream), absolute, relative)
        return [
            {"quantity": "codec_events", "value": len(stream), "unit": "count"},
            {"quantity": "codec_absolute_size", "value": absolute, "unit": "B"},
            {"quantity": "codec_relative_size", "value": relative, "unit": "B"},
            {"quantity": "codec_reduction", "value": reduction, "unit": "fraction"},
        ]
