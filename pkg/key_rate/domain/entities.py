"""Domain entities for the Key Rate context."""
import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Tuple

from shared.domain.errors import DomainError


class CoincidenceModel(Enum):
    """Sign of the eta_A*eta_B*mu/2 term in the joint no-click denominator."""
    MA_FONG_LO = "ma-fong-lo"
    AS_PRINTED = "as-printed"


@dataclass(frozen=True)
class SourceDetectorParams:
    """Entangled source, detectors and post-processing of one experiment."""
    mu: float = 0.1
    tau_s: float = 1e-9
    q_sift: float = 0.5
    f_ec: float = 1.22
    d_a_cps: float = 100.0
    d_b_cps: float = 100.0
    b_cps: float = 400.0
    n_det: int = 4
    pde: float = 0.4
    eta_a: float = 0.6
    e0: float = 0.5
    e_d: float = 0.01
    coincidence_model: CoincidenceModel = CoincidenceModel.MA_FONG_LO

    def __post_init__(self):
        if not 0 < self.mu < 1:
            raise DomainError(f"mu must lie in (0, 1), got {self.mu}")
        if not self.tau_s > 0:
            raise DomainError(f"tau_s must be positive, got {self.tau_s}")
        if not 0 < self.q_sift <= 1:
            raise DomainError(f"q_sift must lie in (0, 1], got {self.q_sift}")
        if not self.f_ec >= 1:
            raise DomainError(f"f_ec must be at least 1, got {self.f_ec}")
        for name in ("d_a_cps", "d_b_cps", "b_cps"):
            if not getattr(self, name) >= 0:
                raise DomainError(f"{name} must be non-negative, got {getattr(self, name)}")
        if self.n_det < 1:
            raise DomainError(f"n_det must be at least 1, got {self.n_det}")
        for name in ("pde", "eta_a"):
            if not 0 <= getattr(self, name) <= 1:
                raise DomainError(f"{name} must lie in [0, 1], got {getattr(self, name)}")
        if not 0 <= self.e0 <= 0.5:
            raise DomainError(f"e0 must lie in [0, 0.5], got {self.e0}")
        if not 0 <= self.e_d < 0.5:
            raise DomainError(f"e_d must lie in [0, 0.5), got {self.e_d}")

    @property
    def pair_rate_cps(self) -> float:
        return self.mu / self.tau_s

    def to_dict(self) -> dict:
        data = asdict(self)
        data["coincidence_model"] = self.coincidence_model.value
        return data


@dataclass(frozen=True)
class KeyRateMetrics:
    """Model outputs at one operating point."""
    attenuation_db: float
    eta_b: float
    y0a: float
    y0b: float
    q_coinc: float
    r_coinc_cps: float
    qber: float
    visibility: float
    snr: float
    r_dist: float
    r_secure_cps: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class FriedHistogram:
    """Days per year spent in each Fried-parameter bin."""
    bins: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        previous = 0.0
        for r0, days in self.bins:
            if not r0 > previous:
                raise DomainError("histogram r0 bins must be positive and strictly increasing")
            if not days >= 0:
                raise DomainError(f"days per year must be non-negative, got {days}")
            previous = r0

    @property
    def total_days(self) -> float:
        return sum(days for _, days in self.bins)

    def pass_shares(self) -> Tuple[float, ...]:
        """Fraction of passes falling in each bin."""
        total = self.total_days
        if total == 0:
            return tuple(0.0 for _ in self.bins)
        return tuple(days / total for _, days in self.bins)


@dataclass(frozen=True)
class IntegrationSettings:
    """Which part of a pass counts towards the key."""
    min_elevation_rad: float = math.radians(20.0)
    loss_cutoff_db: float = 45.0
    max_window_s: float = 300.0
    dt_s: float = 1.0

    def __post_init__(self):
        if not -math.pi / 2 <= self.min_elevation_rad < math.pi / 2:
            raise DomainError(f"min_elevation_rad out of range: {self.min_elevation_rad}")
        if not self.max_window_s >= 0:
            raise DomainError(f"max_window_s must be non-negative, got {self.max_window_s}")
        if not self.dt_s > 0:
            raise DomainError(f"dt_s must be positive, got {self.dt_s}")

    def to_dict(self) -> dict:
        return asdict(self)
