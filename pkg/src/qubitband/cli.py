"""Command-line interface.

    qubitband reconstruct --config cfg.ini --out out/
    qubitband spectrum    --config cfg.ini --out out/ [--noiseless]
    qubitband sweep       --config cfg.ini --out out/ [--reps 20]
    qubitband timing      --config cfg.ini --out out/

Exit codes: 0 success, 2 configuration error, 3 runtime or fit error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .config import ConfigError, parse_config
from .harness import run_reconstruction, run_spectrum, run_timing, sweep_estimates


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qubitband",
        description="Characterize simulated qubit oscillations via sinc or "
        "interleaved sampling and a spectral resonance fit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("reconstruct", "sample and reconstruct the oscillation with both schemes"),
        ("spectrum", "amplitude spectrum and resonance fit of the interleaved scheme"),
        ("sweep", "repeat the pipeline over a sweep of n or m"),
        ("timing", "minimum-measurement-time comparison of the configured plans"),
    ]:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="experiment configuration file")
        cmd.add_argument("--out", default="out", help="output directory (default: out)")
        cmd.add_argument("--seed", type=int, default=None, help="override base seed")
        cmd.add_argument("--reps", type=int, default=None, help="override repetition count")
        cmd.add_argument(
            "--noiseless", action="store_true",
            help="replace measured averages with the exact oscillation values",
        )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = parse_config(args.config)
        if args.seed is not None:
            config = dataclasses.replace(config, base_seed=args.seed)
        if args.reps is not None:
            if args.reps < 1:
                raise ConfigError(f"--reps must be >= 1, got {args.reps}")
            config = dataclasses.replace(config, reps=args.reps)

        if args.command == "reconstruct":
            summary = run_reconstruction(config, args.out, noiseless=args.noiseless)
            for label, entry in summary["schemes"].items():
                print(f"{label}: m={entry['m']} n={entry['n']} "
                      f"central RMS={entry['rms_central'][0]:.4g}")
            print(f"sample count ratio (interleaved/sinc): {summary['sample_count_ratio']:.4g}")
        elif args.command == "spectrum":
            summary = run_spectrum(config, args.out, noiseless=args.noiseless)
            print(f"f_hat={summary['mean_f_hat']:.6g} "
                  f"tau_hat={summary['mean_tau_hat']:.6g} "
                  f"time ratio vs sinc={summary['timing']['min_time_ratio']:.4g}")
        elif args.command == "sweep":
            rows = sweep_estimates(config, args.out, noiseless=args.noiseless)
            for row in rows:
                status = row["status"] if row["status"] == "ok" else f"FAILED ({row['status']})"
                print(f"{row['axis']}={row['value']} {row['scheme']}: "
                      f"tau={row['mean_tau']:.4g} +- {row['std_tau']:.4g}  {status}")
        else:
            report = run_timing(config, args.out)
            for pair, row in report["ratios"].items():
                print(f"{pair}: time ratio={row['min_total_time']:.4g} "
                      f"count ratio={row['sample_count']:.4g}")
        print(f"artifacts written to {args.out}")
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
