"""Single-photon detector models.

Two detector families are supported: InGaAs/InP APDs described directly by
their operating parameters, and Si APDs sitting behind a PPLN waveguide
frequency up-converter.  For the up-conversion chain both the quantum
efficiency and the dark-count rate depend on the applied pump power through
fitted curves, so the effective detector parameters are derived from the
curve at a chosen pump.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import ModelDomainError, ModelRangeError, NoFeasiblePointError

# Pump powers (mW) the fitted curves are trusted on.  The quartic dark-rate
# fit turns unphysical far outside the measured region, so evaluation beyond
# this domain is an error rather than an extrapolation.
SUPPORTED_PUMP_MAX_MW = 30.0

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class DetectorMode(enum.Enum):
    GATED = "gated"
    NONGATED = "nongated"


@dataclass(frozen=True)
class DetectorSpec:
    """Operating parameters of one single-photon detector.

    Args:
        name: Free-form label (used in reports and CSV grouping).
        efficiency: Quantum efficiency in [0, 1].
        dark_per_window: Dark-count probability per measurement window.
            Must stay below 0.5 so that the two-detector dark probability
            remains a valid probability.
        dead_time: Recovery time after a click, in seconds.
        receiver_loss_db: Losses in the receiver unit, in dB.
        mode: Gated (InGaAs-style) or nongated (Geiger-mode Si) operation.
    """

    name: str
    efficiency: float
    dark_per_window: float
    dead_time: float
    receiver_loss_db: float
    mode: DetectorMode

    def __post_init__(self):
        if not 0.0 <= self.efficiency <= 1.0:
            raise ModelDomainError(f"efficiency must be in [0, 1], got {self.efficiency}")
        if not 0.0 <= self.dark_per_window < 0.5:
            raise ModelDomainError(
                f"dark_per_window must be in [0, 0.5), got {self.dark_per_window}"
            )
        if self.dead_time < 0.0:
            raise ModelDomainError(f"dead_time must be >= 0, got {self.dead_time}")
        if self.receiver_loss_db < 0.0:
            raise ModelDomainError(
                f"receiver_loss_db must be >= 0, got {self.receiver_loss_db}"
            )


@dataclass(frozen=True)
class UpConversionCurve:
    """Pump-power dependence of a waveguide up-conversion detector.

    ``a1 * sin^2(sqrt(a2 * p))`` gives the conversion efficiency and a
    quartic polynomial in the pump power gives the dark-count rate in 1/s.
    ``bandwidth_hz`` is the waveguide bandwidth used to convert the dark
    rate into a per-mode dark-count probability.
    """

    a1: float
    a2: float
    b0: float
    b1: float
    b2: float
    b3: float
    b4: float
    bandwidth_hz: float

    def __post_init__(self):
        if not 0.0 < self.a1 <= 1.0:
            raise ModelDomainError(f"a1 must be in (0, 1], got {self.a1}")
        if self.a2 < 0.0:
            raise ModelDomainError(f"a2 must be >= 0, got {self.a2}")
        if self.bandwidth_hz <= 0.0:
            raise ModelDomainError(f"bandwidth_hz must be > 0, got {self.bandwidth_hz}")
        # The quartic must stay non-negative over the whole supported pump
        # domain; sample densely once at construction.
        for i in range(3001):
            p = SUPPORTED_PUMP_MAX_MW * i / 3000
            if self._dark_poly(p) < 0.0:
                raise ModelRangeError(
                    f"dark-rate polynomial is negative at pump {p:.4f} mW"
                )

    def _dark_poly(self, pump_mw: float) -> float:
        return self.b0 + pump_mw * (
            self.b1 + pump_mw * (self.b2 + pump_mw * (self.b3 + pump_mw * self.b4))
        )


#: Fitted curve for a PPLN waveguide up-converter pumped at 1320 nm with a
#: 50 GHz waveguide bandwidth.
PPLN_UPCONVERTER = UpConversionCurve(
    a1=0.465,
    a2=79.75,
    b0=50.0,
    b1=826.4,
    b2=110.3,
    b3=-0.403,
    b4=0.00065,
    bandwidth_hz=50e9,
)


class DarkConvention(enum.Enum):
    """How a dark-count rate in 1/s is reduced to a per-window probability.

    PER_MODE divides by the waveguide bandwidth (up-conversion detectors);
    PER_GATE divides by the gate/bit rate (gated APDs).
    """

    PER_MODE = "per_mode"
    PER_GATE = "per_gate"


class PumpOperatingPoint(NamedTuple):
    pump_mw: float
    efficiency: float
    dark_rate_hz: float


def _check_pump(pump_mw: float) -> None:
    if pump_mw < 0.0:
        raise ModelDomainError(f"pump power must be >= 0 mW, got {pump_mw}")
    if pump_mw > SUPPORTED_PUMP_MAX_MW:
        raise ModelDomainError(
            f"pump power {pump_mw} mW is outside the supported "
            f"[0, {SUPPORTED_PUMP_MAX_MW}] mW domain"
        )


def up_efficiency(curve: UpConversionCurve, pump_mw: float) -> float:
    """Conversion efficiency ``a1 * sin^2(sqrt(a2 * p))`` at pump ``p`` mW."""
    _check_pump(pump_mw)
    s = math.sin(math.sqrt(curve.a2 * pump_mw))
    return curve.a1 * s * s


def up_dark_rate(curve: UpConversionCurve, pump_mw: float) -> float:
    """Dark-count rate in 1/s at pump ``p`` mW (quartic fit)."""
    _check_pump(pump_mw)
    rate = curve._dark_poly(pump_mw)
    if rate < 0.0:
        raise ModelRangeError(
            f"dark-rate fit is negative ({rate}) at pump {pump_mw} mW"
        )
    return rate


def dark_per_window(
    dark_rate_hz: float, convention: DarkConvention, divisor_hz: float
) -> float:
    """Convert a dark-count rate to a per-window probability.

    Args:
        dark_rate_hz: Dark counts per second, >= 0.
        convention: PER_MODE (divide by waveguide bandwidth) or PER_GATE
            (divide by the gate/bit rate).
        divisor_hz: The bandwidth or bit rate selected by ``convention``.
    """
    if dark_rate_hz < 0.0:
        raise ModelDomainError(f"dark rate must be >= 0, got {dark_rate_hz}")
    if divisor_hz <= 0.0:
        name = "bandwidth" if convention is DarkConvention.PER_MODE else "bit rate"
        raise ModelDomainError(f"{name} must be > 0, got {divisor_hz}")
    return dark_rate_hz / divisor_hz


def nep(dark_rate_hz: float, efficiency: float) -> float:
    """Normalized noise-equivalent power ``sqrt(2 D) / eta`` (lower is better)."""
    if efficiency <= 0.0:
        raise ModelDomainError(f"efficiency must be > 0, got {efficiency}")
    if dark_rate_hz < 0.0:
        raise ModelDomainError(f"dark rate must be >= 0, got {dark_rate_hz}")
    return math.sqrt(2.0 * dark_rate_hz) / efficiency


def optimize_pump(
    curve: UpConversionCurve, pump_range: tuple[float, float]
) -> PumpOperatingPoint:
    """Find the pump power minimizing the NEP over ``pump_range``.

    The NEP has one local minimum per efficiency fringe, so a coarse grid
    scan first brackets the global minimum and a golden-section search then
    refines the bracket to below 1e-6 mW.  Ties break toward smaller pump.

    Raises:
        NoFeasiblePointError: If the efficiency is zero over the whole range.
    """
    lo, hi = pump_range
    if lo > hi:
        raise ModelDomainError(f"empty pump range [{lo}, {hi}]")
    _check_pump(lo)
    _check_pump(hi)

    def objective(p: float) -> float:
        eta = up_efficiency(curve, p)
        if eta <= 0.0:
            return math.inf
        return math.sqrt(2.0 * up_dark_rate(curve, p)) / eta

    if hi - lo < 1e-12:
        if up_efficiency(curve, lo) <= 0.0:
            raise NoFeasiblePointError(
                f"efficiency is zero at the degenerate pump range [{lo}, {lo}]"
            )
        return PumpOperatingPoint(lo, up_efficiency(curve, lo), up_dark_rate(curve, lo))

    n = 2048
    best_i, best_v = 0, math.inf
    for i in range(n + 1):
        p = lo + (hi - lo) * i / n
        v = objective(p)
        if v < best_v:
            best_i, best_v = i, v
    if not math.isfinite(best_v):
        raise NoFeasiblePointError(
            f"efficiency is zero over the whole pump range [{lo}, {hi}]"
        )

    a = lo + (hi - lo) * max(best_i - 1, 0) / n
    b = lo + (hi - lo) * min(best_i + 1, n) / n
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = objective(c), objective(d)
    while b - a > 1e-6:
        if fc <= fd:  # prefer the left bracket on ties
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = objective(d)
    p_star = (a + b) / 2.0
    return PumpOperatingPoint(p_star, up_efficiency(curve, p_star), up_dark_rate(curve, p_star))


def make_detector_from_upconversion(
    curve: UpConversionCurve,
    pump_mw: float,
    dead_time: float,
    receiver_loss_db: float,
    name: str = "upconversion-si",
) -> DetectorSpec:
    """Build the effective detector for an up-converter + Si APD chain.

    Efficiency and dark counts come from the curve at the given pump; the
    dark rate is reduced per mode by the waveguide bandwidth and the Si APD
    runs nongated.
    """
    return DetectorSpec(
        name=name,
        efficiency=up_efficiency(curve, pump_mw),
        dark_per_window=dark_per_window(
            up_dark_rate(curve, pump_mw), DarkConvention.PER_MODE, curve.bandwidth_hz
        ),
        dead_time=dead_time,
        receiver_loss_db=receiver_loss_db,
        mode=DetectorMode.NONGATED,
    )
