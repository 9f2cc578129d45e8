"""Command-line front end.

Subcommands: ``rate``, ``sweep``, ``max-distance``, ``optimize-mu``,
``optimize-pump``, ``mc``, ``plot`` and ``presets list``.  Exit codes form a
small contract so shell pipelines can branch: 0 secure/ok, 1 usage or parse
failure, 2 insecure operating point, 3 Monte Carlo self-check failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

from . import montecarlo, rate
from .detector import (
    PPLN_UPCONVERTER,
    DarkConvention,
    UpConversionCurve,
    dark_per_window,
    make_detector_from_upconversion,
    nep,
    optimize_pump,
)
from .errors import DpsrkError, NoSecureDistanceError, ScenarioParseError
from .link import LinkScenario
from .montecarlo import McConfig
from .plotscript import render_plot_script
from .presets import load_presets
from .rate import RatePoint
from .scenario import ATTACK_NAMES, parse_scenario
from .security import AttackModel

CSV_HEADER = (
    "L_km,p_signal,p_dark,p_click,qber,tau,f,"
    "sifted_bps,secure_bps,secure_deadtime_bps,flags"
)

MC_CSV_HEADER = (
    "mode,n_pulses,seed,clicks,errors,p_click_hat,p_click_se,p_click_analytic,"
    "z_p_click,qber_hat,qber_se,qber_analytic,z_qber"
)


class UsageError(DpsrkError):
    """Bad command-line usage (maps to exit code 1)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); keep the exit-code contract
        raise UsageError(message)


@dataclass(frozen=True)
class _Source:
    """A resolved scenario source (file or preset) to build at any length."""

    build: Callable[[float], tuple[LinkScenario, AttackModel]]
    caption_f: float | None
    curve: UpConversionCurve | None
    label: str


def _load_source(args) -> _Source:
    if bool(args.scenario) == bool(args.preset):
        raise UsageError("exactly one of --scenario or --preset is required")
    if args.scenario:
        sf = parse_scenario(Path(args.scenario).read_text())
        if args.attack is not None:
            sf = replace(sf, attack=args.attack)
        if args.n is not None:
            sf = replace(sf, delay_n=args.n)
        if args.delta is not None:
            sf = replace(sf, delta=args.delta)
        return _Source(
            build=sf.build,
            caption_f=None,
            curve=sf.upconversion_curve(),
            label=sf.detector_name,
        )
    registry = load_presets()
    if args.preset not in registry:
        raise UsageError(
            f"unknown preset '{args.preset}' (available: {', '.join(registry)})"
        )
    preset = registry[args.preset]
    detector = args.detector or "si"
    delay_n = args.n if args.n is not None else 100
    attack = args.attack or "hybrid_nomem"

    def build(length_km: float):
        return preset.scenario(
            detector=detector,
            delay_n=delay_n,
            attack=attack,
            length_km=length_km,
            delta=args.delta,
        )

    return _Source(build=build, caption_f=preset.f, curve=None, label=detector)


def _f_fixed(args, source: _Source) -> float | None:
    if args.f_mode != "fixed":
        return None
    if args.f_value is not None:
        return args.f_value
    return source.caption_f if source.caption_f is not None else 1.16


def _fmt(value: float) -> str:
    return repr(float(value))


def _flags_str(point: RatePoint) -> str:
    return "|".join(sorted(point.flags))


def _point_row(point: RatePoint) -> str:
    return ",".join(
        [
            _fmt(point.length_km),
            _fmt(point.p_signal),
            _fmt(point.p_dark),
            _fmt(point.p_click),
            _fmt(point.qber),
            _fmt(point.tau),
            _fmt(point.f_used),
            _fmt(point.sifted_rate_hz),
            _fmt(point.secure_rate_hz),
            _fmt(point.secure_rate_deadtime_hz),
            _flags_str(point),
        ]
    )


def _print_point(point: RatePoint) -> None:
    rows = [
        ("length_km", _fmt(point.length_km)),
        ("p_signal", _fmt(point.p_signal)),
        ("p_dark", _fmt(point.p_dark)),
        ("p_click", _fmt(point.p_click)),
        ("qber", _fmt(point.qber)),
        ("tau", _fmt(point.tau)),
        ("f_used", _fmt(point.f_used)),
        ("sifted_bps", _fmt(point.sifted_rate_hz)),
        ("secure_bps", _fmt(point.secure_rate_hz)),
        ("secure_deadtime_bps", _fmt(point.secure_rate_deadtime_hz)),
        ("flags", _flags_str(point) or "-"),
        ("secure", "yes" if point.secure else "no"),
    ]
    width = max(len(name) for name, _ in rows) + 2
    for name, value in rows:
        print(f"{name:<{width}}{value}")


def _write_text(path: str, text: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _emit_csv(path: str | None, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    if path:
        _write_text(path, text)
    else:
        sys.stdout.write(text)


def _cmd_rate(args) -> int:
    source = _load_source(args)
    scenario, attack = source.build(args.length)
    point = rate.secure_rate(scenario, attack, f_fixed=_f_fixed(args, source))
    _print_point(point)
    if args.csv:
        new_file = not Path(args.csv).exists()
        with open(args.csv, "a", newline="\n") as fh:
            if new_file:
                fh.write(CSV_HEADER + "\n")
            fh.write(_point_row(point) + "\n")
    return 0 if point.secure else 2


def _cmd_sweep(args) -> int:
    if args.steps < 2:
        raise UsageError("--steps must be >= 2")
    if not args.lo < args.hi:
        raise UsageError("--lo must be < --hi")
    source = _load_source(args)
    f_fixed = _f_fixed(args, source)
    lines = [CSV_HEADER]
    for i in range(args.steps):
        value = args.lo + (args.hi - args.lo) * i / (args.steps - 1)
        if args.axis == "distance":
            scenario, attack = source.build(value)
        elif args.axis == "mu":
            scenario, attack = source.build(args.length)
            scenario = replace(scenario, mu=value)
        else:  # pump
            if source.curve is None:
                raise UsageError("pump sweep needs a scenario with an upconv block")
            scenario, attack = source.build(args.length)
            det = make_detector_from_upconversion(
                source.curve,
                value,
                dead_time=scenario.detector.dead_time,
                receiver_loss_db=scenario.detector.receiver_loss_db,
                name=scenario.detector.name,
            )
            scenario = replace(scenario, detector=det)
        point = rate.secure_rate(scenario, attack, f_fixed=f_fixed)
        lines.append(_point_row(point))
    _emit_csv(args.csv, lines)
    return 0


def _cmd_max_distance(args) -> int:
    source = _load_source(args)
    scenario, attack = source.build(0.0)
    try:
        distance = rate.max_secure_distance(
            scenario, attack, r_min=args.rmin, f_fixed=_f_fixed(args, source)
        )
    except NoSecureDistanceError:
        print("no secure distance", file=sys.stderr)
        return 2
    print(f"max secure distance: {distance:.2f} km")
    return 0


def _cmd_optimize_mu(args) -> int:
    source = _load_source(args)
    scenario, attack = source.build(args.length)
    mu_star, point = rate.optimize_mu(
        scenario, attack, (args.lo, args.hi), f_fixed=_f_fixed(args, source)
    )
    print(f"optimal mu: {_fmt(mu_star)}")
    _print_point(point)
    return 0 if point.secure else 2


def _cmd_optimize_pump(args) -> int:
    curve = PPLN_UPCONVERTER
    if args.scenario:
        sf = parse_scenario(Path(args.scenario).read_text())
        file_curve = sf.upconversion_curve()
        if file_curve is None:
            raise UsageError("scenario file has no upconv block")
        curve = file_curve
    point = optimize_pump(curve, (args.lo, args.hi))
    rows = [
        ("pump_mw", _fmt(point.pump_mw)),
        ("efficiency", _fmt(point.efficiency)),
        ("dark_rate_hz", _fmt(point.dark_rate_hz)),
        ("nep", _fmt(nep(point.dark_rate_hz, point.efficiency))),
        (
            "dark_per_window",
            _fmt(
                dark_per_window(
                    point.dark_rate_hz, DarkConvention.PER_MODE, curve.bandwidth_hz
                )
            ),
        ),
    ]
    width = max(len(name) for name, _ in rows) + 2
    for name, value in rows:
        print(f"{name:<{width}}{value}")
    return 0


def _z_score(estimate: float, analytic: float, se: float) -> float:
    if se > 0.0:
        return (estimate - analytic) / se
    if math.isnan(estimate) or estimate == analytic:
        return 0.0
    return math.inf if estimate > analytic else -math.inf


def _cmd_mc(args) -> int:
    source = _load_source(args)
    scenario, _attack = source.build(args.length)
    bob_choices = None
    if args.bob_n:
        bob_choices = tuple(int(tok) for tok in args.bob_n.split(","))
    ir_fraction = args.ir_fraction
    if ir_fraction is None:
        ir_fraction = 1.0 if args.mode == "ir" else 0.0
    cfg = McConfig(
        scenario=scenario,
        n_pulses=args.pulses,
        seed=args.seed,
        ir_fraction=ir_fraction,
        eve_delay_m=args.eve_m,
        bob_delay_choices=bob_choices,
    )
    if args.mode == "ir":
        result = montecarlo.simulate_intercept_resend(cfg)
        p_ref, q_ref = montecarlo.intercept_resend_expectation(cfg)
    else:
        result = montecarlo.simulate_link(cfg)
        p_ref, q_ref = montecarlo.link_expectation(cfg)

    # Self-check z-scores use the analytic probabilities in the SE so a
    # single-window run cannot divide by zero.
    se_p = math.sqrt(p_ref * (1.0 - p_ref) / cfg.n_pulses)
    z_p = _z_score(result.p_click_hat, p_ref, se_p)
    if result.clicks > 0 and not math.isnan(q_ref) and 0.0 < q_ref < 1.0:
        se_q = math.sqrt(q_ref * (1.0 - q_ref) / result.clicks)
        z_q = _z_score(result.qber_hat, q_ref, se_q)
    elif result.clicks > 0 and not math.isnan(q_ref):
        z_q = _z_score(result.qber_hat, q_ref, 0.0)
    else:
        z_q = 0.0

    print(f"windows  {result.n_windows}")
    print(f"clicks   {result.clicks}")
    print(f"errors   {result.errors}")
    header = f"{'quantity':<10}{'estimate':<24}{'std_error':<24}{'analytic':<24}{'z':<10}"
    print(header)
    print(
        f"{'p_click':<10}{_fmt(result.p_click_hat):<24}"
        f"{_fmt(result.p_click_se):<24}{_fmt(p_ref):<24}{z_p:<10.3f}"
    )
    print(
        f"{'qber':<10}{_fmt(result.qber_hat):<24}"
        f"{_fmt(result.qber_se):<24}{_fmt(q_ref):<24}{z_q:<10.3f}"
    )
    if args.csv:
        row = ",".join(
            [
                args.mode,
                str(cfg.n_pulses),
                str(cfg.seed),
                str(result.clicks),
                str(result.errors),
                _fmt(result.p_click_hat),
                _fmt(result.p_click_se),
                _fmt(p_ref),
                _fmt(z_p),
                _fmt(result.qber_hat),
                _fmt(result.qber_se),
                _fmt(q_ref),
                _fmt(z_q),
            ]
        )
        _emit_csv(args.csv, [MC_CSV_HEADER, row])
    bad = max(abs(z_p), abs(z_q) if not math.isnan(z_q) else 0.0)
    return 3 if bad > 5.0 else 0


def _cmd_plot(args) -> int:
    try:
        csv_text = Path(args.csv_path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read CSV: {exc}") from None
    script = render_plot_script(args.csv_path, csv_text)
    out = args.out or args.csv_path + ".plot.py"
    _write_text(out, script)
    print(out)
    return 0


def _cmd_presets(args) -> int:
    registry = load_presets()
    if args.action == "list":
        header = (
            f"{'name':<8}{'mu':<7}{'nu_hz':<9}{'b':<6}{'f':<6}"
            f"{'alpha':<7}{'n_set':<12}detectors"
        )
        print(header)
        for preset in registry.values():
            n_set = ",".join(str(n) for n in preset.n_set)
            detectors = " ".join(
                f"{name}(eta={spec.efficiency},d={spec.dark_per_window})"
                for name, spec in preset.detectors.items()
            )
            print(
                f"{preset.name:<8}{preset.mu:<7g}{preset.clock_hz:<9g}"
                f"{preset.baseline_error:<6g}{preset.f:<6g}"
                f"{preset.alpha_db_per_km:<7g}{n_set:<12}{detectors}"
            )
    return 0


def _add_source_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--scenario", metavar="PATH", help="scenario file path")
    sp.add_argument("--preset", metavar="NAME", help="preset name (see 'presets list')")
    sp.add_argument(
        "--detector", choices=("si", "ingaas"), default=None,
        help="detector variant for presets (default si)",
    )
    sp.add_argument("--n", type=int, default=None, help="interferometer delay N")
    sp.add_argument(
        "--attack", choices=sorted(ATTACK_NAMES), default=None,
        help="attack model (preset default hybrid_nomem)",
    )
    sp.add_argument("--delta", type=float, default=None,
                    help="dead-time exponent scale (default 1/n_detectors)")
    sp.add_argument("--f-mode", choices=("table", "fixed"), default="table",
                    help="error-correction overhead: table interpolation or fixed value")
    sp.add_argument("--f-value", type=float, default=None,
                    help="overhead used with --f-mode fixed (default: preset f or 1.16)")


def build_parser() -> _Parser:
    parser = _Parser(prog="dpsrk", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sp = sub.add_parser("rate", help="evaluate one operating point")
    _add_source_args(sp)
    sp.add_argument("--length", type=float, default=0.0, help="link length in km")
    sp.add_argument("--csv", metavar="PATH", help="append the point as a CSV row")
    sp.set_defaults(func=_cmd_rate)

    sp = sub.add_parser("sweep", help="sweep an axis and emit CSV")
    _add_source_args(sp)
    sp.add_argument("--axis", choices=("distance", "pump", "mu"), required=True)
    sp.add_argument("--lo", type=float, required=True)
    sp.add_argument("--hi", type=float, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--length", type=float, default=0.0,
                    help="fixed link length for mu/pump sweeps")
    sp.add_argument("--csv", metavar="PATH", help="output path (default stdout)")
    sp.set_defaults(func=_cmd_sweep)

    sp = sub.add_parser("max-distance", help="largest secure distance")
    _add_source_args(sp)
    sp.add_argument("--rmin", type=float, default=0.0,
                    help="minimum acceptable rate in bit/s")
    sp.set_defaults(func=_cmd_max_distance)

    sp = sub.add_parser("optimize-mu", help="maximize the rate over mu")
    _add_source_args(sp)
    sp.add_argument("--length", type=float, default=0.0, help="link length in km")
    sp.add_argument("--lo", type=float, default=0.01)
    sp.add_argument("--hi", type=float, default=1.0)
    sp.set_defaults(func=_cmd_optimize_mu)

    sp = sub.add_parser("optimize-pump", help="NEP-optimal up-conversion pump")
    sp.add_argument("--scenario", metavar="PATH",
                    help="scenario file with an upconv block (default: built-in fit)")
    sp.add_argument("--lo", type=float, default=0.0)
    sp.add_argument("--hi", type=float, default=30.0)
    sp.set_defaults(func=_cmd_optimize_pump)

    sp = sub.add_parser("mc", help="Monte Carlo validation of the analytic model")
    _add_source_args(sp)
    sp.add_argument("--length", type=float, default=0.0, help="link length in km")
    sp.add_argument("--pulses", type=int, default=1_000_000, help="number of windows")
    sp.add_argument("--seed", type=int, default=0, help="64-bit stream seed")
    sp.add_argument("--mode", choices=("link", "ir"), default="link")
    sp.add_argument("--ir-fraction", type=float, default=None,
                    help="attacked window fraction (default 1.0 in ir mode)")
    sp.add_argument("--eve-m", type=int, default=1, help="Eve's delay M")
    sp.add_argument("--bob-n", metavar="N1,N2,...", default=None,
                    help="Bob's random delay choices (default: scenario delay)")
    sp.add_argument("--csv", metavar="PATH", help="also write the result as CSV")
    sp.set_defaults(func=_cmd_mc)

    sp = sub.add_parser("plot", help="emit a plotting script for a sweep CSV")
    sp.add_argument("csv_path", metavar="CSV")
    sp.add_argument("--out", metavar="PATH", help="script path (default CSV + .plot.py)")
    sp.set_defaults(func=_cmd_plot)

    sp = sub.add_parser("presets", help="inspect the preset registry")
    sp.add_argument("action", choices=("list",))
    sp.set_defaults(func=_cmd_presets)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ScenarioParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NoSecureDistanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DpsrkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
