"""Fiber-link click probabilities and QBER.

Per measurement window (one clock period 1/nu) Bob sees a signal click with
probability ``mu * eta * 10^-(alpha L + L_r)/10`` and a dark click with
probability ``n_detectors * d``.  Dark counts land on a random detector, so
they contribute errors at rate 1/2 while signal clicks err at the baseline
system rate ``b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .detector import DetectorSpec
from .errors import InvalidRegimeError, ModelDomainError, UndefinedQBERError


@dataclass(frozen=True)
class LinkScenario:
    """Channel and protocol parameters for one operating point.

    Args:
        mu: Mean photon number per pulse, > 0.
        alpha_db_per_km: Fiber loss coefficient, dB/km.
        length_km: Link length L, km.
        clock_hz: Pulse repetition rate nu; the measurement window is 1/nu.
        baseline_error: Baseline system error rate b in [0, 0.5).
        detector: Bob's detector parameters.
        delay_n: Interferometer delay in clock periods (N).
        n_detectors: Number of detectors in Bob's receiver (dark counts add).
        dead_time_delta: Saturation exponent scale delta.  ``None`` selects
            1/n_detectors, i.e. each detector handles its share of clicks.
    """

    mu: float
    alpha_db_per_km: float
    length_km: float
    clock_hz: float
    baseline_error: float
    detector: DetectorSpec
    delay_n: int
    n_detectors: int = 2
    dead_time_delta: float | None = None

    def __post_init__(self):
        if self.mu <= 0.0:
            raise ModelDomainError(f"mu must be > 0, got {self.mu}")
        if self.alpha_db_per_km < 0.0:
            raise ModelDomainError(f"alpha must be >= 0, got {self.alpha_db_per_km}")
        if self.length_km < 0.0:
            raise ModelDomainError(f"length must be >= 0, got {self.length_km}")
        if self.clock_hz <= 0.0:
            raise ModelDomainError(f"clock rate must be > 0, got {self.clock_hz}")
        if not 0.0 <= self.baseline_error < 0.5:
            raise ModelDomainError(
                f"baseline error must be in [0, 0.5), got {self.baseline_error}"
            )
        if int(self.delay_n) != self.delay_n or self.delay_n < 1:
            raise ModelDomainError(f"delay_n must be an integer >= 1, got {self.delay_n}")
        if int(self.n_detectors) != self.n_detectors or self.n_detectors < 1:
            raise ModelDomainError(
                f"n_detectors must be an integer >= 1, got {self.n_detectors}"
            )
        if self.dead_time_delta is not None and self.dead_time_delta < 0.0:
            raise ModelDomainError(
                f"dead_time_delta must be >= 0, got {self.dead_time_delta}"
            )

    @property
    def effective_dead_time_delta(self) -> float:
        if self.dead_time_delta is not None:
            return self.dead_time_delta
        return 1.0 / self.n_detectors


@dataclass(frozen=True)
class ChannelStats:
    """Click probabilities and QBER of one scenario.

    ``p_signal`` and ``p_click`` are clamped to 1 (``clamped`` records
    whether clamping occurred); ``qber`` is computed from the unclamped
    values and is NaN when the click probability is zero.
    """

    p_signal: float
    p_dark: float
    p_click: float
    qber: float
    clamped: bool


def channel_stats(s: LinkScenario) -> ChannelStats:
    raw_signal = s.mu * s.detector.efficiency * 10.0 ** (
        -(s.alpha_db_per_km * s.length_km + s.detector.receiver_loss_db) / 10.0
    )
    dark = s.n_detectors * s.detector.dark_per_window
    if dark >= 1.0:
        raise InvalidRegimeError(
            f"total dark probability {dark} >= 1 "
            f"({s.n_detectors} detectors at d={s.detector.dark_per_window})"
        )
    raw_click = raw_signal + dark
    clamped = raw_click > 1.0
    if raw_click > 0.0:
        qber = (0.5 * dark + s.baseline_error * raw_signal) / raw_click
    else:
        qber = math.nan
    return ChannelStats(
        p_signal=min(raw_signal, 1.0),
        p_dark=dark,
        p_click=min(raw_click, 1.0),
        qber=qber,
        clamped=clamped,
    )


def p_signal(s: LinkScenario) -> float:
    """Signal click probability per window, clamped to <= 1."""
    return channel_stats(s).p_signal


def p_dark(s: LinkScenario) -> float:
    """Dark click probability per window (n_detectors * d)."""
    return channel_stats(s).p_dark


def p_click(s: LinkScenario) -> float:
    """Total click probability per window, clamped to <= 1."""
    return channel_stats(s).p_click


def qber(s: LinkScenario) -> float:
    """Quantum bit error rate ``(p_dark/2 + b p_signal) / p_click``."""
    stats = channel_stats(s)
    if not stats.p_click > 0.0:
        raise UndefinedQBERError("QBER is undefined: click probability is zero")
    return stats.qber
