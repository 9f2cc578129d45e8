"""Seeded pulse-level stochastic checks of the analytic link formulas.

This is a semiclassical per-window Bernoulli sampler, not a photonic state
simulation: each measurement window independently draws a signal click, a
dark click and an error outcome.  Its sole purpose is validating the
probability composition of the analytic model (click probability, QBER and
the intercept-resend error floor).

Randomness comes from numpy's Philox 4x64 counter-based generator.  Windows
are processed in fixed chunks of 2**20 and chunk ``j`` uses the substream
``SeedSequence(entropy=seed, spawn_key=(j,))``, so results are reproducible
across platforms and independent of how chunks would be scheduled across
workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import link
from .errors import ModelDomainError
from .link import LinkScenario

CHUNK_WINDOWS = 1 << 20


@dataclass(frozen=True)
class McConfig:
    """One simulation request.

    Args:
        scenario: Link operating point to sample.
        n_pulses: Number of measurement windows.
        seed: 64-bit stream seed; identical (config, seed) pairs give
            byte-identical results.
        ir_fraction: Fraction of windows attacked by intercept-resend in
            attack-validation mode.
        eve_delay_m: Eve's fixed interferometer delay M (clock periods).
        bob_delay_choices: Delay values Bob draws from uniformly, one per
            window.  ``None`` uses the scenario's delay alone.
    """

    scenario: LinkScenario
    n_pulses: int
    seed: int
    ir_fraction: float = 0.0
    eve_delay_m: int = 1
    bob_delay_choices: tuple[int, ...] | None = None

    def __post_init__(self):
        if int(self.n_pulses) != self.n_pulses or self.n_pulses < 1:
            raise ModelDomainError(f"n_pulses must be an integer >= 1, got {self.n_pulses}")
        if not 0 <= int(self.seed) < 2**64:
            raise ModelDomainError(f"seed must fit in 64 bits, got {self.seed}")
        if not 0.0 <= self.ir_fraction <= 1.0:
            raise ModelDomainError(f"ir_fraction must be in [0, 1], got {self.ir_fraction}")
        if int(self.eve_delay_m) != self.eve_delay_m or self.eve_delay_m < 1:
            raise ModelDomainError(f"eve_delay_m must be an integer >= 1, got {self.eve_delay_m}")
        if self.bob_delay_choices is not None:
            if not self.bob_delay_choices:
                raise ModelDomainError("bob_delay_choices must not be empty")
            if any(int(n) != n or n < 1 for n in self.bob_delay_choices):
                raise ModelDomainError("bob_delay_choices must be integers >= 1")

    @property
    def delay_choices(self) -> tuple[int, ...]:
        if self.bob_delay_choices is not None:
            return tuple(int(n) for n in self.bob_delay_choices)
        return (int(self.scenario.delay_n),)


@dataclass(frozen=True)
class McResult:
    """Counts and binomial estimates from one simulation."""

    n_windows: int
    clicks: int
    errors: int
    p_click_hat: float
    p_click_se: float
    qber_hat: float
    qber_se: float

    @classmethod
    def from_counts(cls, n_windows: int, clicks: int, errors: int) -> "McResult":
        if errors > clicks:
            raise ModelDomainError("errors cannot exceed clicks")
        p_hat = clicks / n_windows
        p_se = math.sqrt(p_hat * (1.0 - p_hat) / n_windows)
        if clicks > 0:
            q_hat = errors / clicks
            q_se = math.sqrt(q_hat * (1.0 - q_hat) / clicks)
        else:
            q_hat = math.nan
            q_se = math.nan
        return cls(n_windows, clicks, errors, p_hat, p_se, q_hat, q_se)


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(entropy=int(seed), spawn_key=(index,)))
    )


def _chunks(n: int):
    full, rem = divmod(n, CHUNK_WINDOWS)
    for j in range(full):
        yield j, CHUNK_WINDOWS
    if rem:
        yield full, rem


def simulate_link(cfg: McConfig) -> McResult:
    """Sample clicks and errors for the plain (unattacked) link.

    Per window: a signal click with probability p_signal and a dark click
    with probability p_dark are drawn independently; a window with both
    counts as one click carrying the signal's bit value (the overlap is
    O(p_signal * p_dark) and ignored by the analytic model).  Signal clicks
    flip with the baseline error rate, dark-only clicks with 1/2.
    """
    stats = link.channel_stats(cfg.scenario)
    b = cfg.scenario.baseline_error
    clicks = 0
    errors = 0
    for j, n in _chunks(cfg.n_pulses):
        rng = _chunk_rng(cfg.seed, j)
        sig = rng.random(n) < stats.p_signal
        dark = rng.random(n) < stats.p_dark
        err_sig = rng.random(n) < b
        err_dark = rng.random(n) < 0.5
        click = sig | dark
        err = np.where(sig, err_sig, err_dark) & click
        clicks += int(click.sum())
        errors += int(err.sum())
    return McResult.from_counts(cfg.n_pulses, clicks, errors)


def simulate_intercept_resend(cfg: McConfig) -> McResult:
    """Sample the link with a fraction of windows intercepted and resent.

    Bob draws his delay per window uniformly from ``delay_choices``; Eve
    measures with fixed delay M.  On attacked signal clicks with mismatched
    delay the error probability becomes the floor ``(1 - 1/2N)/2``; matched
    delays leave the baseline error rate.  With ``ir_fraction = 0`` this
    reduces exactly to :func:`simulate_link`.
    """
    stats = link.channel_stats(cfg.scenario)
    b = cfg.scenario.baseline_error
    choices = np.asarray(cfg.delay_choices, dtype=np.int64)
    floors = 0.5 * (1.0 - 1.0 / (2.0 * choices.astype(np.float64)))
    clicks = 0
    errors = 0
    for j, n in _chunks(cfg.n_pulses):
        rng = _chunk_rng(cfg.seed, j)
        sig = rng.random(n) < stats.p_signal
        dark = rng.random(n) < stats.p_dark
        u_err_sig = rng.random(n)
        err_dark = rng.random(n) < 0.5
        attacked = rng.random(n) < cfg.ir_fraction
        bob_idx = rng.integers(0, len(choices), size=n)
        mismatch = choices[bob_idx] != cfg.eve_delay_m
        p_err_sig = np.where(attacked & mismatch, floors[bob_idx], b)
        err_sig = u_err_sig < p_err_sig
        click = sig | dark
        err = np.where(sig, err_sig, err_dark) & click
        clicks += int(click.sum())
        errors += int(err.sum())
    return McResult.from_counts(cfg.n_pulses, clicks, errors)


def link_expectation(cfg: McConfig) -> tuple[float, float]:
    """Analytic (p_click, qber) the plain-link simulation converges to."""
    stats = link.channel_stats(cfg.scenario)
    return stats.p_click, stats.qber


def intercept_resend_expectation(cfg: McConfig) -> tuple[float, float]:
    """Analytic (p_click, qber) for the intercept-resend mode.

    The per-window error probability on signal clicks averages the floor
    over Bob's delay choices that mismatch Eve's, weighted by the attacked
    fraction.
    """
    stats = link.channel_stats(cfg.scenario)
    b = cfg.scenario.baseline_error
    choices = cfg.delay_choices
    per_choice = [
        0.5 * (1.0 - 1.0 / (2.0 * n)) if n != cfg.eve_delay_m else b for n in choices
    ]
    e_sig = (1.0 - cfg.ir_fraction) * b + cfg.ir_fraction * sum(per_choice) / len(choices)
    if stats.p_click > 0.0:
        qber = (0.5 * stats.p_dark + e_sig * stats.p_signal) / (stats.p_signal + stats.p_dark)
    else:
        qber = math.nan
    return stats.p_click, qber
