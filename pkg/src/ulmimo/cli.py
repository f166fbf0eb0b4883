"""Command-line surface: parse a scenario, run one experiment, emit CSVs.

Commands map one-to-one onto the experiment runners; ``validate`` runs a
quick invariant self-check. Every run writes its manifest next to the
CSVs, and the manifest (command, scenario hash, seed, overrides) fully
determines every output byte. Exit codes: 0 success, 2 configuration
error, 3 fixed-point non-convergence, 4 other numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, experiments
from .errors import (ConvergenceError, InvalidInputError, NumericalError)
from .experiments import ALL_FILTERS, write_csv
from .scenario import (Scenario, parse_scenario, scenario_hash,
                       serialize_scenario)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3
EXIT_NUMERICAL = 4

_DEFAULT_ALPHAS = {
    "asymptotic": [round(0.05 * i, 2) for i in range(1, 31)],
    "montecarlo": [0.2, 0.5, 1.0],
    "percentile": [0.2, 0.5, 1.0],
    "rates": [round(0.1 * i, 1) for i in range(1, 11)],
    "rategap": [0.2, 0.4, 0.6, 0.8, 1.0],
}
_DEFAULT_BETA_GRID = [0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1]


def _parse_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise InvalidInputError(f"could not parse list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ulmimo",
        description="Uplink multi-cell MIMO: large-system SINR and Monte Carlo")
    parser.add_argument("command",
                        choices=["asymptotic", "montecarlo", "percentile",
                                 "rates", "rategap", "validate"])
    parser.add_argument("--scenario", default="idealized-01",
                        help="scenario file path or bundled scenario name")
    parser.add_argument("--seed", type=int, default=0, help="64-bit master seed")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--alpha", default=None,
                        help="comma-separated loading values")
    parser.add_argument("--antennas", type=int, default=50, metavar="M")
    parser.add_argument("--trials", type=int, default=None)
    parser.add_argument("--estimate", default="noiseless",
                        choices=["noiseless", "noisy", "training"])
    parser.add_argument("--filters", default="mf,mmse,mmse-perfect",
                        help="comma-separated subset of mf,mmse,mmse-perfect")
    return parser


def _manifest(args, scenario: Scenario) -> dict:
    return {
        "schema": 1,
        "tool": "ulmimo",
        "version": __version__,
        "command": args.command,
        "scenario_path": str(args.scenario),
        "scenario_name": scenario.name,
        "scenario_sha": scenario_hash(scenario),
        "seed": int(args.seed),
        "out_dir": str(args.out),
        "overrides": {
            "alpha": args.alpha,
            "antennas": args.antennas,
            "trials": args.trials,
            "estimate": args.estimate,
            "filters": args.filters,
        },
    }


def dispatch(args) -> int:
    scenario = parse_scenario(args.scenario)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    alphas = _parse_list(args.alpha) if args.alpha else _DEFAULT_ALPHAS.get(
        args.command, [scenario.alpha])
    filters = tuple(tok for tok in args.filters.split(",") if tok)
    for f in filters:
        if f not in ALL_FILTERS:
            raise InvalidInputError(f"unknown filter {f!r}")

    if args.command == "validate":
        ok = run_validation()
        return EXIT_OK if ok else EXIT_NUMERICAL

    if args.command == "asymptotic":
        result = experiments.asymptotic_sweep(scenario, alphas)
        outputs = {"asymptotic.csv": result}
    elif args.command == "montecarlo":
        trials = args.trials or 500
        result = experiments.monte_carlo_result(
            scenario, args.antennas, alphas, trials, filters,
            args.estimate, args.seed)
        outputs = {"montecarlo.csv": result}
    elif args.command == "percentile":
        trials = args.trials or 500
        result = experiments.percentile_sweep(
            scenario, args.antennas, alphas, trials, args.seed,
            estimate_mode=args.estimate)
        outputs = {"percentile.csv": result}
    elif args.command == "rates":
        result = experiments.rate_table(
            scenario, alphas, args.seed, M=args.antennas,
            trials=args.trials, estimate_mode=args.estimate)
        outputs = {"rates.csv": result}
    elif args.command == "rategap":
        result = experiments.rate_gap_sweep(scenario, alphas,
                                            _DEFAULT_BETA_GRID)
        outputs = {"rategap.csv": result}
    else:  # pragma: no cover - argparse restricts choices
        raise InvalidInputError(f"unknown command {args.command!r}")

    for fname, res in outputs.items():
        write_csv(res, out_dir / fname)
    (out_dir / "manifest.json").write_text(
        json.dumps(_manifest(args, scenario), indent=2, sort_keys=True) + "\n")
    (out_dir / "scenario.json").write_text(serialize_scenario(scenario))
    return EXIT_OK


def run_validation() -> bool:
    """Fast self-check of the package's core invariants."""
    from . import validate
    return validate.run_all(print)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = dispatch(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_CONVERGENCE
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_CONFIG
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_NUMERICAL
    return code


if __name__ == "__main__":
    sys.exit(main())
