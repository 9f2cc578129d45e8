"""Secure key rate modeling for differential-phase-shift QKD links.

The package assembles the standard analysis chain: detector models (direct
APD parameters or a pump-dependent frequency up-conversion fit), per-window
link probabilities and QBER, privacy-amplification shrinking factors for
individual and hybrid beam-splitter + intercept-resend attacks, the secure
rate with error-correction cost and dead-time saturation, and a seeded
Monte Carlo sampler that cross-checks the analytic formulas.
"""

from .detector import (
    PPLN_UPCONVERTER,
    DarkConvention,
    DetectorMode,
    DetectorSpec,
    PumpOperatingPoint,
    UpConversionCurve,
    dark_per_window,
    make_detector_from_upconversion,
    nep,
    optimize_pump,
    up_dark_rate,
    up_efficiency,
)
from .link import ChannelStats, LinkScenario, channel_stats, p_click, p_dark, p_signal, qber
from .montecarlo import McConfig, McResult, simulate_intercept_resend, simulate_link
from .presets import Preset, load_presets
from .rate import (
    RatePoint,
    asymptotic_rate,
    bb84_reference,
    binary_entropy,
    dead_time_factor,
    max_secure_distance,
    optimize_mu,
    secure_rate,
    secure_rate_from_parts,
)
from .scenario import ScenarioFile, parse_scenario, serialize_scenario
from .security import (
    CASCADE_EC_TABLE,
    AttackKind,
    AttackModel,
    ECTable,
    bs_transmission,
    f_ec,
    ir_error_floor,
    poisson_multiphoton,
    shrink_hybrid,
    shrink_individual,
    single_photon_fraction,
    surviving_fraction,
)

__version__ = "0.1.0"

__all__ = [
    "PPLN_UPCONVERTER",
    "CASCADE_EC_TABLE",
    "AttackKind",
    "AttackModel",
    "ChannelStats",
    "DarkConvention",
    "DetectorMode",
    "DetectorSpec",
    "ECTable",
    "LinkScenario",
    "McConfig",
    "McResult",
    "Preset",
    "PumpOperatingPoint",
    "RatePoint",
    "ScenarioFile",
    "UpConversionCurve",
    "asymptotic_rate",
    "bb84_reference",
    "binary_entropy",
    "bs_transmission",
    "channel_stats",
    "dark_per_window",
    "dead_time_factor",
    "f_ec",
    "ir_error_floor",
    "load_presets",
    "make_detector_from_upconversion",
    "max_secure_distance",
    "nep",
    "optimize_mu",
    "optimize_pump",
    "p_click",
    "p_dark",
    "p_signal",
    "parse_scenario",
    "poisson_multiphoton",
    "qber",
    "secure_rate",
    "secure_rate_from_parts",
    "serialize_scenario",
    "shrink_hybrid",
    "shrink_individual",
    "simulate_intercept_resend",
    "simulate_link",
    "single_photon_fraction",
    "surviving_fraction",
    "up_dark_rate",
    "up_efficiency",
]
