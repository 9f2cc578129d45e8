"""Privacy-amplification bounds for individual and hybrid attacks.

The secure fraction of the sifted key follows from the shrinking factor
tau.  For individual attacks tau comes from a collision-probability bound
parameterized by the single-photon fraction beta; for the combined
beam-splitter + intercept-resend attack it is the surviving-bit fraction
gamma minus an error-dependent penalty.  Error-correction overhead f(e) is
interpolated from published algorithm benchmarks.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass

from .detector import DetectorSpec
from .errors import (
    AboveCorrectionRangeError,
    InsecureChannelError,
    ModelDomainError,
    UndefinedQBERError,
)


class AttackKind(enum.Enum):
    INDIVIDUAL_WITH_MEMORY = "individual_with_memory"
    INDIVIDUAL_NO_MEMORY = "individual_no_memory"
    HYBRID_BS_IR = "hybrid_bs_ir"


@dataclass(frozen=True)
class AttackModel:
    """Which eavesdropping strategy bounds the secure rate.

    For the individual kinds the memory capability is part of the kind;
    ``eve_memory`` selects between the two surviving-fraction formulas
    inside the hybrid attack.  ``delay_n`` overrides the scenario's delay
    when set.
    """

    kind: AttackKind
    eve_memory: bool = False
    delay_n: int | None = None

    def __post_init__(self):
        if self.delay_n is not None and (
            int(self.delay_n) != self.delay_n or self.delay_n < 1
        ):
            raise ModelDomainError(f"delay_n must be an integer >= 1, got {self.delay_n}")

    @property
    def memory(self) -> bool:
        if self.kind is AttackKind.INDIVIDUAL_WITH_MEMORY:
            return True
        if self.kind is AttackKind.INDIVIDUAL_NO_MEMORY:
            return False
        return self.eve_memory


@dataclass(frozen=True)
class ECTable:
    """Error-correction overhead f(e) sampled at increasing error rates."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.points) < 2:
            raise ModelDomainError("ECTable needs at least two breakpoints")
        es = [e for e, _ in self.points]
        if any(b <= a for a, b in zip(es, es[1:])):
            raise ModelDomainError("ECTable breakpoints must be strictly increasing in e")
        if any(f < 1.0 for _, f in self.points):
            raise ModelDomainError("error-correction overhead f must be >= 1")
        if es[0] > 0.01 or es[-1] < 0.15:
            raise ModelDomainError("ECTable must cover [0.01, 0.15]")


#: Benchmarks of the interactive cascade reconciliation algorithm.
CASCADE_EC_TABLE = ECTable(points=((0.01, 1.16), (0.05, 1.16), (0.1, 1.22), (0.15, 1.35)))


def f_ec(table: ECTable, e: float) -> float:
    """Error-correction overhead at error rate ``e``.

    Piecewise-linear between breakpoints, constant below the first one.

    Raises:
        AboveCorrectionRangeError: ``e`` beyond the last breakpoint; callers
            treat the operating point as yielding no key.
    """
    if e < 0.0:
        raise ModelDomainError(f"error rate must be >= 0, got {e}")
    es = [pe for pe, _ in table.points]
    if e <= es[0]:
        return table.points[0][1]
    if e > es[-1]:
        raise AboveCorrectionRangeError(
            f"error rate {e} exceeds the correction table range (max {es[-1]})"
        )
    i = bisect.bisect_left(es, e)
    (e0, f0), (e1, f1) = table.points[i - 1], table.points[i]
    return f0 + (f1 - f0) * (e - e0) / (e1 - e0)


def poisson_multiphoton(mu: float) -> float:
    """Probability ``1 - (1 + mu) e^-mu`` that a Poisson pulse has >= 2 photons."""
    if mu < 0.0:
        raise ModelDomainError(f"mu must be >= 0, got {mu}")
    return -math.expm1(-mu) - mu * math.exp(-mu)


def single_photon_fraction(p_click: float, p_m: float) -> float:
    """Fraction ``(p_click - p_m) / p_click`` of clicks from single photons.

    May be <= 0 when multiphoton pulses dominate; callers must treat that as
    insecure against photon-number splitting.
    """
    if p_click <= 0.0:
        raise UndefinedQBERError("single-photon fraction undefined at zero click probability")
    return (p_click - p_m) / p_click


def shrink_individual(e: float, beta: float, eve_memory: bool) -> float:
    """Privacy-amplification shrinking factor against individual attacks.

    With quantum memory Eve stores photons and measures after the delay
    announcement; without it she must measure immediately in a random basis,
    which weakens her collision probability.  Returns 0 when the bound
    leaves no secret bits.
    """
    if beta <= 0.0:
        raise InsecureChannelError(
            f"single-photon fraction {beta} <= 0: no secure key against PNS"
        )
    if beta > 1.0:
        raise ModelDomainError(f"single-photon fraction must be <= 1, got {beta}")
    if e < 0.0:
        raise ModelDomainError(f"error rate must be >= 0, got {e}")
    if eve_memory:
        x = e / beta
        arg = 0.5 + 2.0 * x - 2.0 * x * x
        scale = beta
    else:
        y = e / (1.0 + beta)
        arg = 0.5 + 4.0 * y - 8.0 * y * y
        scale = (1.0 + beta) / 2.0
    if arg <= 0.0:
        return 0.0
    return max(0.0, -scale * math.log2(arg))


def bs_transmission(detector: DetectorSpec, alpha_db_per_km: float, length_km: float) -> float:
    """Beam-splitter transmission Eve needs to mimic the lossy channel.

    Equals ``eta * 10^-(alpha L + L_r)/10``, i.e. p_signal / mu.
    """
    if alpha_db_per_km < 0.0 or length_km < 0.0:
        raise ModelDomainError("alpha and length must be >= 0")
    return detector.efficiency * 10.0 ** (
        -(alpha_db_per_km * length_km + detector.receiver_loss_db) / 10.0
    )


def surviving_fraction(
    mu: float, eta_bs: float, p_signal: float, delay_n: int, eve_memory: bool
) -> float:
    """Fraction of sifted bits unknown to a beam-splitting Eve.

    Without memory Eve's random delay choice matches Bob's with chance 1/N,
    giving ``1 - mu/N + p_signal/N``; with memory she waits for the
    announcement and the fraction drops to ``1 - 2 mu + 2 p_signal``.  The
    two published forms (via eta_bs or via p_signal) coincide because
    ``p_signal = mu * eta_bs``.  Clamped below at 0; a zero value means the
    attack leaves no secret bits.
    """
    if mu <= 0.0:
        raise ModelDomainError(f"mu must be > 0, got {mu}")
    if not 0.0 <= eta_bs <= 1.0:
        raise ModelDomainError(f"eta_bs must be in [0, 1], got {eta_bs}")
    if delay_n < 1:
        raise ModelDomainError(f"delay_n must be >= 1, got {delay_n}")
    if eve_memory:
        gamma = 1.0 - 2.0 * mu + 2.0 * p_signal
    else:
        gamma = 1.0 - mu / delay_n + p_signal / delay_n
    return max(0.0, gamma)


def shrink_hybrid(e: float, gamma: float, delay_n: int) -> float:
    """Shrinking factor ``gamma - e / (N (1 - 1/2N))`` for the hybrid attack.

    Linear and strictly decreasing in the error rate; clamped below at 0.
    """
    if delay_n < 1:
        raise ModelDomainError(f"delay_n must be >= 1, got {delay_n}")
    if not 0.0 <= gamma <= 1.0:
        raise ModelDomainError(f"gamma must be in [0, 1], got {gamma}")
    if not 0.0 <= e <= 0.5:
        raise ModelDomainError(f"error rate must be in [0, 0.5], got {e}")
    return max(0.0, gamma - e / (delay_n * (1.0 - 1.0 / (2.0 * delay_n))))


def ir_error_floor(delay_n: int) -> float:
    """Error rate ``(1 - 1/2N) / 2`` an intercept-resend with mismatched delay induces."""
    if delay_n < 1:
        raise ModelDomainError(f"delay_n must be >= 1, got {delay_n}")
    return 0.5 * (1.0 - 1.0 / (2.0 * delay_n))
