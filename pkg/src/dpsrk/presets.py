"""Named parameter presets transcribed from published rate-vs-distance curves.

Each ``.preset`` file carries one figure's parameter set with both detector
variants (gated InGaAs/InP and nongated up-conversion Si) and the delay
values the curves were drawn for.  The packaged directory can be overridden
with the ``DPSRK_PRESET_DIR`` environment variable.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping

from .detector import DetectorMode, DetectorSpec
from .errors import ScenarioParseError
from .link import LinkScenario
from .scenario import ATTACK_NAMES, tokenize_kv
from .security import AttackModel

PRESET_DIR_ENV = "DPSRK_PRESET_DIR"

DETECTOR_VARIANTS = ("si", "ingaas")

_PRESET_FLOAT_KEYS = ("b", "mu", "f", "nu_hz", "alpha_db_per_km")
_DETECTOR_KEYS = ("efficiency", "dark_per_window", "receiver_loss_db", "dead_time_s")


@dataclass(frozen=True)
class Preset:
    """One figure's parameters with both detector variants."""

    name: str
    baseline_error: float
    mu: float
    f: float
    clock_hz: float
    alpha_db_per_km: float
    n_set: tuple[int, ...]
    detectors: Mapping[str, DetectorSpec]

    def scenario(
        self,
        detector: str = "si",
        delay_n: int = 100,
        attack: str = "hybrid_nomem",
        length_km: float = 0.0,
        delta: float | None = None,
    ) -> tuple[LinkScenario, AttackModel]:
        """Materialize the preset for one detector, delay and attack."""
        if detector not in self.detectors:
            raise KeyError(f"preset {self.name} has no detector '{detector}'")
        if attack not in ATTACK_NAMES:
            raise KeyError(f"unknown attack '{attack}'")
        kind, memory = ATTACK_NAMES[attack]
        s = LinkScenario(
            mu=self.mu,
            alpha_db_per_km=self.alpha_db_per_km,
            length_km=length_km,
            clock_hz=self.clock_hz,
            baseline_error=self.baseline_error,
            detector=self.detectors[detector],
            delay_n=delay_n,
            dead_time_delta=delta,
        )
        return s, AttackModel(kind=kind, eve_memory=memory)


def parse_preset(name: str, text: str) -> Preset:
    seen: dict[str, str] = {}
    for key, value, line, _col in tokenize_kv(text):
        if key in seen:
            raise ScenarioParseError(f"duplicate key '{key}' in preset {name}", line, 1)
        seen[key] = value

    def fetch(key: str) -> str:
        if key not in seen:
            raise ScenarioParseError(f"preset {name} is missing key '{key}'")
        return seen[key]

    floats = {key: float(fetch(key)) for key in _PRESET_FLOAT_KEYS}
    n_set = tuple(int(tok) for tok in fetch("n_set").split(","))
    detectors = {}
    for variant in DETECTOR_VARIANTS:
        params = {key: float(fetch(f"{variant}.{key}")) for key in _DETECTOR_KEYS}
        detectors[variant] = DetectorSpec(
            name=variant,
            efficiency=params["efficiency"],
            dark_per_window=params["dark_per_window"],
            dead_time=params["dead_time_s"],
            receiver_loss_db=params["receiver_loss_db"],
            mode=DetectorMode.NONGATED if variant == "si" else DetectorMode.GATED,
        )
    known = set(_PRESET_FLOAT_KEYS) | {"n_set"} | {
        f"{v}.{k}" for v in DETECTOR_VARIANTS for k in _DETECTOR_KEYS
    }
    unknown = set(seen) - known
    if unknown:
        raise ScenarioParseError(f"preset {name} has unknown keys: {', '.join(sorted(unknown))}")
    return Preset(
        name=name,
        baseline_error=floats["b"],
        mu=floats["mu"],
        f=floats["f"],
        clock_hz=floats["nu_hz"],
        alpha_db_per_km=floats["alpha_db_per_km"],
        n_set=n_set,
        detectors=detectors,
    )


def _natural_key(name: str):
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", name)]


def preset_directory() -> Path:
    override = os.environ.get(PRESET_DIR_ENV)
    if override:
        return Path(override)
    return Path(resources.files("dpsrk") / "presets")


def load_presets(directory: str | os.PathLike | None = None) -> dict[str, Preset]:
    """Load every ``*.preset`` file from the preset directory, sorted by name."""
    root = Path(directory) if directory is not None else preset_directory()
    registry: dict[str, Preset] = {}
    for path in sorted(root.glob("*.preset"), key=lambda p: _natural_key(p.stem)):
        registry[path.stem] = parse_preset(path.stem, path.read_text())
    if not registry:
        raise FileNotFoundError(f"no .preset files found in {root}")
    return registry
