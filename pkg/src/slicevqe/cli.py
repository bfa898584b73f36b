"""Command-line entry point: run, validate and plot experiments.

Exit codes: 0 on full success, 1 on configuration or usage errors, 2 when
some sweep cells failed but the run completed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ConfigError, SliceVqeError
from .experiment import emit_plots, load_config, load_records, run_experiment


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slicevqe",
        description="Sliced warm-start VQE experiments on Heisenberg and Hubbard models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run every sweep cell of a config")
    run_p.add_argument("config", help="path to the experiment config file")
    run_p.add_argument("--workers", type=int, default=1, help="parallel cell workers")
    run_p.add_argument(
        "--cells",
        default=None,
        help="comma list of cell ids to run, e.g. L2S1,L3S0 (default: all)",
    )
    run_p.add_argument("--output", default=None, help="override the config output_dir")

    val_p = sub.add_parser("validate", help="parse a config and echo the resolved form")
    val_p.add_argument("config", help="path to the experiment config file")

    plot_p = sub.add_parser("plot", help="emit plot data and SVGs from cell records")
    plot_p.add_argument("records_dir", help="directory holding cell_*.json records")
    plot_p.add_argument("--output", default=None, help="plot output directory")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            cfg = load_config(args.config)
            sys.stdout.write(cfg.to_text())
            print(f"# ok: {cfg.n_qubits()} qubits, hash {cfg.config_hash()}")
            return 0
        if args.command == "run":
            cfg = load_config(args.config)
            records, failures = run_experiment(
                cfg, workers=args.workers, cells=args.cells, output_dir=args.output
            )
            out_dir = Path(args.output or cfg.output_dir)
            for record in records:
                print(
                    f"{record.cell_id} {record.arm}: energy={record.energy:.9f} "
                    f"fidelity={record.fidelity:.9f} evals={record.cost_evals}"
                )
            for cell, message in sorted(failures.items()):
                print(f"{cell} FAILED: {message}", file=sys.stderr)
            print(f"outputs in {out_dir}")
            return 2 if failures else 0
        if args.command == "plot":
            records = load_records(args.records_dir)
            out = Path(args.output or args.records_dir)
            written = emit_plots(records, out)
            print(f"wrote {len(written)} plot files to {out}")
            return 0
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SliceVqeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
