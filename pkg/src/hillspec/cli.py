"""Command line interface.

Subcommands: spectrum | kappa | residuals | interp | baseline.
Exit codes: 0 success, 1 property violation, 2 configuration error,
3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .campaign import (
    EXIT_CONFIG,
    EXIT_SOLVER,
    CampaignConfig,
    ConfigError,
    cache_key,
    resolve_out_dir,
    run_baseline,
    run_interp_campaign,
    run_kappa,
    run_residuals,
    run_spectrum,
)
from .rk import IntegrationError
from .schrodinger import SpectralError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hillspec",
        description=(
            "Spectral quantities of -d^2/dx^2 + q with periodic mean-zero q, "
            "residual-decay campaigns, and a three-lines interpolation verifier."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("spectrum", "Dirichlet/periodic spectra and Floquet exponents"),
        ("kappa", "kappa sign calibration and circle analyticity checks"),
        ("residuals", "residual decay ensembles over sampled potentials"),
        ("interp", "three-lines and interpolated-norm campaigns"),
        ("baseline", "exact diagonal-multiplier interpolation baseline"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", type=Path, default=None, help="JSON config file")
        cmd.add_argument("--out", type=Path, default=None, help="output directory")
        cmd.add_argument("--seed", type=int, default=None, help="override config seed")
        cmd.add_argument("--jobs", type=int, default=1, help="parallel workers (residuals)")
        cmd.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    return parser


def load_config(args) -> CampaignConfig:
    data = {}
    if args.config is not None:
        data = json.loads(Path(args.config).read_text())
        if not isinstance(data, dict):
            raise ConfigError("config root must be a JSON object")
    if args.seed is not None:
        data["seed"] = args.seed
    if args.no_figures:
        data["figures"] = False
    return CampaignConfig.from_dict(data)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
    except (ConfigError, json.JSONDecodeError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = resolve_out_dir(config, args.command, args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    print(f"hillspec {args.command}: key={cache_key(config)} out={out_dir}")
    try:
        if args.command == "spectrum":
            status = run_spectrum(config, out_dir)
        elif args.command == "kappa":
            status = run_kappa(config, out_dir)
        elif args.command == "residuals":
            status = run_residuals(config, out_dir, jobs=max(1, args.jobs))
        elif args.command == "interp":
            status = run_interp_campaign(config, out_dir)
        else:
            status = run_baseline(config, out_dir)
    except (SpectralError, IntegrationError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    summary = out_dir / "summary.txt"
    if summary.exists():
        print(summary.read_text(), end="")
    return status


if __name__ == "__main__":
    sys.exit(main())
