"""Command-line entry point: ``cvkaf run | gradcheck | dataset export``.

Exit status is 0 on success, 1 for invalid configuration or input data (and
for a failed gradient check), 2 for failures while running.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .activations import ActivationKind
from .data import export_csv
from .experiments import MODELS, TASKS, ConfigError, load_config, run_experiment, task_dataset, write_run
from .gradcheck import GRADCHECK_TOL, run_gradcheck

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2

logger = logging.getLogger("cvkaf")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cvkaf", description="Complex-valued KAF network benchmarks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="train and evaluate one benchmark configuration")
    run.add_argument("--config", type=Path, help="TOML config, or a manifest.json to reproduce a run")
    run.add_argument("--task", choices=TASKS)
    run.add_argument("--model", choices=MODELS)
    run.add_argument("--seed", type=int)
    run.add_argument("--out", help="output directory (default: the config's 'out')")
    run.add_argument("--workers", type=int, help="parallel repetitions (0 = all cores)")

    gc = sub.add_parser("gradcheck", help="compare analytic and finite-difference gradients")
    gc.add_argument("--seeds", type=int, default=10, help="number of random problems per kind and head")
    gc.add_argument("--corrupt", metavar="KIND", help="perturb this activation's derivative (negative control)")

    ds = sub.add_parser("dataset", help="dataset utilities")
    ds_sub = ds.add_subparsers(dest="dataset_command", required=True)
    ex = ds_sub.add_parser("export", help="write the preprocessed dataset of repetition 0 to CSV")
    ex.add_argument("--config", type=Path)
    ex.add_argument("--task", choices=TASKS)
    ex.add_argument("--seed", type=int)
    ex.add_argument("--out", type=Path, required=True, help="CSV file to write")
    return p


def _cmd_run(args) -> int:
    cfg = load_config(args.config, task=args.task, model=args.model, seed=args.seed, out=args.out, workers=args.workers)
    manifest = run_experiment(cfg)
    out = write_run(manifest, cfg.out)
    for name, agg in manifest.aggregate.items():
        print(f"{cfg.task}/{cfg.model}: {name} = {agg['mean']:.4f} +/- {agg['std']:.4f} over {agg['n']} repetition(s)")
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_gradcheck(args) -> int:
    if args.seeds < 1:
        raise ConfigError("--seeds must be positive")
    if args.corrupt:
        try:
            ActivationKind.parse(args.corrupt)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    report = run_gradcheck(range(args.seeds), corrupt=args.corrupt)
    failed = [kind for kind, err in report.items() if not err <= GRADCHECK_TOL]
    for kind, err in report.items():
        print(f"{kind:<14} {err:.3e}  {'FAIL' if kind in failed else 'ok'}")
    if failed:
        print(f"gradient check failed for: {', '.join(failed)}", file=sys.stderr)
        return EXIT_INVALID
    print(f"all {len(report)} activation kinds within {GRADCHECK_TOL:g}")
    return EXIT_OK


def _cmd_export(args) -> int:
    cfg = load_config(args.config, task=args.task, seed=args.seed)
    ds, _ = task_dataset(cfg)
    path = export_csv(ds, args.out)
    print(f"wrote {len(ds)} rows to {path}")
    return EXIT_OK


_INVALID = (ConfigError, ValueError, TypeError, FileNotFoundError)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    handler = {"run": _cmd_run, "gradcheck": _cmd_gradcheck, "dataset": _cmd_export}[args.command]
    try:
        return handler(args)
    except _INVALID as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001 - any other failure is a runtime error
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
