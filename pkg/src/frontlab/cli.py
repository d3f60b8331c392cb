"""Command-line interface.

Subcommands:
    simulate <config> [--out DIR]   run a configuration file, write artifacts
    preset <name> [--out DIR]       run a named figure preset
    verify <subject>                hypothesis | envelope | sandwich | convergence
    classify --alpha A --family F --beta B [--mu M --scale S]

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 runtime/numerical error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import presets, reporting
from .config import parse_config
from .envelope import classify_regime
from .errors import (AnalysisError, CalibrationError, ConfigError,
                     FrontlabError, InputError, NumericalError,
                     ParameterError, SolverError)
from .initial_data import Family, InitialDataSpec
from .measurement import select_model
from .solver import run
from .verify import SUBJECTS, run_verification

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frontlab",
        description="Front propagation lab for the weakly monostable "
                    "reaction-diffusion equation")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a configuration file")
    p_sim.add_argument("config", help="path to the configuration file")
    p_sim.add_argument("--out", default=None, help="output directory")

    p_pre = sub.add_parser("preset", help="run a named figure preset")
    p_pre.add_argument("name")
    p_pre.add_argument("--out", default=".", help="output root directory")

    p_ver = sub.add_parser("verify", help="run a verification suite")
    p_ver.add_argument("subject", help=" | ".join(SUBJECTS))

    p_cls = sub.add_parser("classify", help="print the predicted spreading regime")
    p_cls.add_argument("--alpha", type=float, required=True)
    p_cls.add_argument("--family", required=True,
                       help="sub_exponential | algebraic | algebraic_raw | logarithmic")
    p_cls.add_argument("--beta", type=float, required=True)
    p_cls.add_argument("--mu", type=float, default=5.0)
    p_cls.add_argument("--scale", type=float, default=100.0)
    return parser


def _cmd_simulate(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    config = parse_config(text)
    out_dir = args.out or os.path.splitext(os.path.basename(args.config))[0]
    os.makedirs(out_dir, exist_ok=True)
    result = run(config)
    reporting.write_snapshots_csv(os.path.join(out_dir, "snapshots.csv"),
                                  result.snapshots)
    trace_files = reporting.write_traces(out_dir, result.traces)
    entries = []
    alpha, r = config.reaction.params.alpha, config.reaction.params.r
    predicted = classify_regime(alpha, config.data)
    for lam, trace in sorted(result.traces.items()):
        try:
            fit, regime = select_model(trace, alpha, r)
        except (AnalysisError, InputError) as exc:
            print(f"lambda={lam}: fit skipped ({exc})")
            continue
        entries.append((f"lambda_{lam!r}", fit, regime.value))
        print(f"lambda={lam}: fitted {fit.model} (headline {fit.exponent:.4g}), "
              f"measured {regime.value}, predicted {predicted.regime.value}")
    reporting.write_fit_report(os.path.join(out_dir, "fits.txt"), entries)
    with open(os.path.join(out_dir, "plot.gp"), "w", encoding="ascii") as fh:
        fh.write(reporting.snapshot_plot_script("snapshots.csv", "simulation"))
        fh.write(reporting.trace_plot_script(trace_files, "level positions"))
    diag = result.diagnostics
    print(f"done: {diag.n_steps} steps, {diag.final_cells} cells, "
          f"{diag.clamp_events} clamp events, {diag.growth_events} growths"
          + (", TRUNCATED" if diag.truncated else ""))
    return EXIT_OK


def _cmd_preset(args) -> int:
    out_dir = presets.run_preset(args.name, out_root=args.out)
    print(f"artifacts written to {out_dir}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    _, passed = run_verification(args.subject)
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


def _cmd_classify(args) -> int:
    family = Family(args.family.lower())
    spec = InitialDataSpec(
        family=family,
        beta=args.beta,
        mu=args.mu if family is Family.SUB_EXPONENTIAL else None,
        scale=args.scale if family is Family.ALGEBRAIC else None,
    )
    cls = classify_regime(args.alpha, spec)
    print(f"family={family.value} alpha={args.alpha} beta={args.beta}")
    print(f"regime: {cls.regime.value}")
    print(f"threshold beta = 1/(alpha+1) = {cls.threshold_beta!r}")
    print(cls.describe())
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "preset":
            return _cmd_preset(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_classify(args)
    except (ConfigError, InputError, ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, NumericalError, CalibrationError, AnalysisError,
            FrontlabError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    raise SystemExit(main())
