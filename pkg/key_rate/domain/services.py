"""Domain services for the Key Rate context.

Analytic model of an SPDC entangled-pair link: per-window coincidence
probability, QBER, visibility and the asymptotic distillation fraction.
Attenuation enters only through eta_B = PDE * 10^(-A/10).
"""
import math
from typing import Sequence, Tuple

from scipy.optimize import brentq

from key_rate.domain.entities import CoincidenceModel, FriedHistogram, KeyRateMetrics, SourceDetectorParams
from shared.domain.errors import DomainError

BELL_CLASSICAL_BOUND = 2.0
BELL_QUANTUM_BOUND = 2.0 * math.sqrt(2.0)


class KeyRateService:
    """Service for secret key rate computations."""

    @staticmethod
    def noise_probabilities(p: SourceDetectorParams) -> Tuple[float, float]:
        """Probability of a dark or background click per coincidence window."""
        y0a = p.n_det * p.d_a_cps * p.tau_s
        y0b = (p.n_det * p.d_b_cps + p.b_cps) * p.tau_s
        return y0a, y0b

    @staticmethod
    def eta_b(p: SourceDetectorParams, attenuation_db: float) -> float:
        return p.pde * 10.0 ** (-attenuation_db / 10.0)

    @staticmethod
    def coincidence_probability(p: SourceDetectorParams, eta_b: float) -> float:
        """Probability of a two-sided click per source window."""
        y0a, y0b = KeyRateService.noise_probabilities(p)
        half = p.mu / 2.0
        sign = -1.0 if p.coincidence_model is CoincidenceModel.MA_FONG_LO else 1.0
        joint = 1.0 + p.eta_a * half + eta_b * half + sign * p.eta_a * eta_b * half
        return (1.0
                - (1.0 - y0a) / (1.0 + p.eta_a * half) ** 2
                - (1.0 - y0b) / (1.0 + eta_b * half) ** 2
                + (1.0 - y0a) * (1.0 - y0b) / joint ** 2)

    @staticmethod
    def coincidence_rate(p: SourceDetectorParams, q_coinc: float) -> float:
        return q_coinc / p.tau_s

    @staticmethod
    def receiver_singles_cps(pair_rate_cps: float, eta: float, attenuation_db: float,
                             noise_cps: float = 0.0) -> float:
        """Click rate at the satellite: attenuated signal plus noise."""
        return eta * pair_rate_cps * 10.0 ** (-attenuation_db / 10.0) + noise_cps

    @staticmethod
    def accidental_rate(pair_rate_cps: float, eta_a: float, receiver_singles_cps: float, tau_s: float) -> float:
        """Uncorrelated two-sided clicks inside the window: N_t * N_r * tau."""
        return eta_a * pair_rate_cps * receiver_singles_cps * tau_s

    @staticmethod
    def qber(p: SourceDetectorParams, eta_b: float) -> float:
        q_coinc = KeyRateService.coincidence_probability(p, eta_b)
        if q_coinc == 0.0:
            return p.e0
        half = p.mu / 2.0
        signal = ((p.e0 - p.e_d) * p.eta_a * eta_b * p.mu * (1.0 + half)
                  / ((1.0 + p.eta_a * half) * (1.0 + eta_b * half)
                     * (1.0 + p.eta_a * half + eta_b * half - p.eta_a * eta_b * half)))
        return p.e0 - signal / q_coinc

    @staticmethod
    def visibility(qber: float) -> float:
        return (1.0 - qber) / (1.0 + qber)

    @staticmethod
    def snr(qber: float) -> float:
        if qber == 0.0:
            return math.inf
        return 1.0 / qber - 1.0

    @staticmethod
    def binary_entropy(x: float) -> float:
        if not 0.0 <= x <= 1.0:
            raise DomainError(f"binary entropy needs x in [0, 1], got {x}")
        if x in (0.0, 1.0):
            return 0.0
        return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)

    @staticmethod
    def distillation_fraction(qber: float, q_sift: float, f_ec: float) -> float:
        """Asymptotic secret fraction of the coincidences, floored at zero."""
        h = KeyRateService.binary_entropy(min(max(qber, 0.0), 1.0))
        return max(0.0, q_sift * (1.0 - f_ec * h - h))

    @staticmethod
    def metrics(p: SourceDetectorParams, attenuation_db: float) -> KeyRateMetrics:
        """Evaluate the whole model at one link attenuation."""
        eta_b = KeyRateService.eta_b(p, attenuation_db)
        y0a, y0b = KeyRateService.noise_probabilities(p)
        q_coinc = KeyRateService.coincidence_probability(p, eta_b)
        r_coinc = KeyRateService.coincidence_rate(p, q_coinc)
        qber = KeyRateService.qber(p, eta_b)
        r_dist = KeyRateService.distillation_fraction(qber, p.q_sift, p.f_ec)
        return KeyRateMetrics(
            attenuation_db=attenuation_db,
            eta_b=eta_b,
            y0a=y0a,
            y0b=y0b,
            q_coinc=q_coinc,
            r_coinc_cps=r_coinc,
            qber=qber,
            visibility=KeyRateService.visibility(qber),
            snr=KeyRateService.snr(qber),
            r_dist=r_dist,
            r_secure_cps=r_coinc * r_dist,
        )

    @staticmethod
    def secure_key_rate(p: SourceDetectorParams, attenuation_db: float) -> float:
        return KeyRateService.metrics(p, attenuation_db).r_secure_cps

    @staticmethod
    def bell_test_time(p: SourceDetectorParams, attenuation_db: float, n_required: int = 1000) -> float:
        """Seconds needed to collect ``n_required`` coincidences."""
        rate = KeyRateService.metrics(p, attenuation_db).r_coinc_cps
        if rate <= 0:
            return math.inf
        return n_required / rate

    @staticmethod
    def max_tolerable_attenuation_db(p: SourceDetectorParams, qber_limit: float,
                                     upper_db: float = 80.0) -> float:
        """Attenuation at which the QBER reaches ``qber_limit``."""
        excess = lambda a: KeyRateService.qber(p, KeyRateService.eta_b(p, a)) - qber_limit
        if excess(0.0) >= 0:
            return 0.0
        if excess(upper_db) < 0:
            return math.inf
        return brentq(excess, 0.0, upper_db, xtol=1e-6)

    @staticmethod
    def qber_limit_for_efficiency(f_ec: float, q_sift: float = 0.5) -> float:
        """QBER at which the distillation fraction vanishes."""
        return brentq(lambda e: q_sift * (1.0 - (1.0 + f_ec) * KeyRateService.binary_entropy(e)),
                      1e-9, 0.5, xtol=1e-12)

    @staticmethod
    def bell_parameter(visibility: float) -> float:
        return visibility * BELL_QUANTUM_BOUND

    @staticmethod
    def bell_violation(visibility: float) -> bool:
        return KeyRateService.bell_parameter(visibility) > BELL_CLASSICAL_BOUND

    @staticmethod
    def misalignment_error(angle_rad: float) -> float:
        """Detection error caused by a rotation between the two polarization frames."""
        return math.sin(angle_rad) ** 2

    @staticmethod
    def days_above(hist: FriedHistogram, r0_threshold_m: float) -> float:
        """Days per year in bins at or above the threshold."""
        return sum(days for r0, days in hist.bins if r0 >= r0_threshold_m)

    @staticmethod
    def annual_yield_from_keys(per_pass_bits: Sequence[float], hist: FriedHistogram,
                               passes_per_year: float) -> float:
        """Histogram-weighted yearly key from the per-pass key of each bin."""
        if len(per_pass_bits) != len(hist.bins):
            raise DomainError("one per-pass key is needed for every histogram bin")
        shares = hist.pass_shares()
        return passes_per_year * sum(bits * share for bits, share in zip(per_pass_bits, shares))
