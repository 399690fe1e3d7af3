"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 numerical error,
4 no crossing found.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .attack import attack_report, critical_distance, null_key_distance
from .errors import ConfigError, EstimationError, NumericalError, ParameterError
from .figures import FIGURE_IDS, run_figure
from .keyrate import key_rate
from .params import (
    CHI_T_MODES,
    KEFF_DENOMINATORS,
    PRESETS,
    Config,
    config_from_dict,
    load_config,
)
from .report import attack_row, keyrate_row, write_rows
from .sweep import SWEEP_AXES, SweepSpec, run_mc_validate, run_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_NOT_FOUND = 4


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON config file")
    common.add_argument("--preset", choices=sorted(PRESETS), default=None)
    common.add_argument("--out-dir", type=Path, default=None)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--samples", type=int, default=1_000_000)
    common.add_argument("--keff-denominator", choices=KEFF_DENOMINATORS, default=None)
    common.add_argument("--chi-t-mode", choices=CHI_T_MODES, default=None)
    common.add_argument("--length", type=float, default=None, help="channel length, km")
    common.add_argument("--alpha-low", type=float, default=None, help="reference-leg loss, dB/km")

    p = argparse.ArgumentParser(prog="rpa-cvqkd", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)
    sub.add_parser("keyrate", parents=[common], help="attack-free key rate at one length")
    sub.add_parser("attack", parents=[common], help="attack report at one scenario")
    f = sub.add_parser("figure", parents=[common], help="figure CSV + SVG")
    f.add_argument("fig_id", choices=FIGURE_IDS + ("all",))
    f.add_argument("--no-svg", action="store_true")
    s = sub.add_parser("sweep", parents=[common], help="one-axis sweep to CSV")
    s.add_argument("--axis", required=True, choices=SWEEP_AXES)
    s.add_argument("--start", type=float, required=True)
    s.add_argument("--stop", type=float, required=True)
    s.add_argument("--steps", type=int, required=True)
    m = sub.add_parser("mc-validate", parents=[common], help="Monte Carlo checks")
    m.add_argument("--dump-batch", action="store_true", help="also write per-pulse CSVs")
    sub.add_parser("critical-distance", parents=[common], help="K_eff = 1 and null-key distances")
    return p


def _config(args: argparse.Namespace) -> Config:
    doc: dict = {}
    if args.config is not None:
        try:
            doc = json.loads(args.config.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
    if args.preset is not None:
        doc["preset"] = args.preset
    elif args.config is None:
        doc["preset"] = "paper2017"
    overrides = {
        "keff_denominator": args.keff_denominator,
        "chi_t_mode": args.chi_t_mode,
        "length_km": args.length,
        "alpha_low": args.alpha_low,
    }
    doc.update({k: v for k, v in overrides.items() if v is not None})
    return config_from_dict(doc)


def _emit(text: str, out_dir: Path | None, name: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / name).write_text(text, encoding="utf-8")


def _run(args: argparse.Namespace) -> int:
    cfg = _config(args)
    params, scenario, options = cfg.params, cfg.scenario, cfg.options

    if args.cmd == "keyrate":
        rep = key_rate(params, scenario, options)
        _emit(write_rows(None, [keyrate_row(rep)]), args.out_dir, "keyrate.csv")
    elif args.cmd == "attack":
        rep = attack_report(params, scenario, options)
        _emit(write_rows(None, [attack_row(rep)]), args.out_dir, "attack.csv")
    elif args.cmd == "figure":
        out_dir = args.out_dir or Path(".")
        ids = FIGURE_IDS if args.fig_id == "all" else (args.fig_id,)
        for fig_id in ids:
            csv_path, svg_path = run_figure(fig_id, params, out_dir, options, svg=not args.no_svg)
            print(csv_path)
            if svg_path is not None:
                print(svg_path)
    elif args.cmd == "sweep":
        spec = SweepSpec(args.axis, args.start, args.stop, args.steps, params, scenario)
        out_dir = args.out_dir or Path(".")
        out_dir.mkdir(parents=True, exist_ok=True)
        out = out_dir / f"sweep_{args.axis}.csv"
        run_sweep(spec, out, options)
        print(out)
    elif args.cmd == "mc-validate":
        out_path = None
        if args.out_dir is not None:
            args.out_dir.mkdir(parents=True, exist_ok=True)
            out_path = args.out_dir / "mc_validate.json"
        dump = args.out_dir if (args.dump_batch and args.out_dir is not None) else None
        summary = run_mc_validate(params, scenario, args.samples, args.seed, out_path, dump)
        print(json.dumps(summary, indent=2, sort_keys=True))
        return EXIT_OK if summary["all_passed"] else EXIT_NUMERICAL
    elif args.cmd == "critical-distance":
        crit = critical_distance(params, scenario.alpha_low, options=options)
        null = null_key_distance(params, options)
        summary = {
            "alpha_low": scenario.alpha_low,
            "critical_km": crit,
            "null_key_km": null,
            "keff_denominator": options.keff_denominator,
            "chi_t_mode": options.chi_t_mode,
        }
        _emit(json.dumps(summary, indent=2), args.out_dir, "critical_distance.json")
        if crit is None:
            return EXIT_NOT_FOUND
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _run(args)
    except (ConfigError, ParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, EstimationError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
