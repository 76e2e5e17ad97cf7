"""Command-line entry point.

    importcast run [--config exp.json] [--countries IRN,USA] [--seed N] ...
    importcast gradcheck [--backend all] [--epsilon 1e-5]
    importcast --version

`run` executes the full pipeline and writes the output tree; `gradcheck`
verifies BPTT gradients against central finite differences for both
candidate modes and 1/2/3-layer stacks.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from importcast import __version__, backends
from importcast.config import DEFAULTS, load_config_file, validate_config
from importcast.errors import ImportcastError
from importcast.lstm import init_params
from importcast.pipeline import run_experiment
from importcast.training import finite_diff_check
from importcast.rng import Xoshiro256StarStar

GRADCHECK_TOLERANCE = 1e-4
GRADCHECK_STACKS = ((4,), (4, 4), (4, 4, 4))
GRADCHECK_SAMPLES = 8


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="importcast",
        description="Quarterly import forecasting with a from-scratch LSTM.",
    )
    parser.add_argument(
        "--version", action="version", version=f"importcast {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the forecasting experiment")
    run.add_argument("--config", help="JSON config file; flags override its values")
    run.add_argument(
        "--input", help="annual series CSV (default: bundled 10-country fixture)"
    )
    run.add_argument(
        "--countries",
        help="comma-separated 3-letter codes, or 'all' (default: all)",
    )
    run.add_argument("--seed", type=int, help=f"RNG seed (default {DEFAULTS['seed']})")
    run.add_argument("--out", dest="out_dir", help="output directory (default out/)")
    run.add_argument(
        "--epochs", type=int, help=f"training epochs (default {DEFAULTS['epochs']})"
    )
    run.add_argument(
        "--lr",
        dest="learning_rate",
        type=float,
        help=f"Adam learning rate (default {DEFAULTS['learning_rate']})",
    )
    run.add_argument(
        "--lookback",
        type=int,
        help=f"window length in quarters (default {DEFAULTS['lookback']})",
    )
    run.add_argument(
        "--hidden-sizes",
        dest="hidden_sizes",
        help="comma-separated LSTM layer sizes (default 16,16,16)",
    )
    run.add_argument(
        "--candidate-mode",
        dest="candidate_mode",
        choices=["sigmoid", "tanh"],
        help="candidate-state activation (default sigmoid)",
    )
    run.add_argument(
        "--disaggregation",
        choices=["smooth", "flat"],
        help=f"annual-to-quarterly method (default {DEFAULTS['disaggregation']})",
    )
    run.add_argument(
        "--steps",
        dest="forecast_steps",
        type=int,
        help=f"recursive forecast length in quarters (default {DEFAULTS['forecast_steps']})",
    )
    run.add_argument(
        "--report-from",
        dest="report_from",
        help=f"first reported quarter, e.g. 2021q1 (default {DEFAULTS['report_from']})",
    )
    run.add_argument(
        "--report-to",
        dest="report_to",
        help=f"last reported quarter (default {DEFAULTS['report_to']})",
    )
    run.add_argument(
        "--jobs", type=int, help="parallel country workers (default: cpu count)"
    )
    run.add_argument(
        "--expect-span",
        dest="expect_span",
        help="required span as START:LEN, or 'none' (default 1970:50)",
    )
    run.add_argument(
        "--dump-quarterly",
        dest="dump_quarterly",
        help="also write the disaggregated series to this CSV path",
    )

    grad = sub.add_parser(
        "gradcheck", help="verify BPTT against central finite differences"
    )
    grad.add_argument(
        "--backend",
        default="active",
        choices=["active", "python", "cython", "all"],
        help="kernel backend(s) to check (default: the active one)",
    )
    grad.add_argument("--epsilon", type=float, default=1e-5)
    grad.add_argument("--seed", type=int, default=0)
    return parser


RUN_KEYS = (
    "input",
    "countries",
    "seed",
    "out_dir",
    "epochs",
    "learning_rate",
    "lookback",
    "hidden_sizes",
    "candidate_mode",
    "disaggregation",
    "forecast_steps",
    "report_from",
    "report_to",
    "jobs",
    "expect_span",
    "dump_quarterly",
)


def cmd_run(args: argparse.Namespace) -> int:
    raw = load_config_file(args.config) if args.config else {}
    for key in RUN_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value
    config = validate_config(raw)

    summary = run_experiment(config)
    for code in sorted(summary.reports):
        r = summary.reports[code]
        print(
            f"{code}: ok  train_mse={r.train_mse:.3e} test_mse={r.test_mse:.3e} "
            f"r_all={r.regression_all:.4f} best_epoch={r.best_epoch + 1}"
        )
    for code in sorted(summary.failures):
        print(f"{code}: FAILED  {summary.failures[code]}", file=sys.stderr)
    print(f"outputs written to {config.out_dir}/")
    return 0 if summary.ok else 1


def _gradcheck_case(layer_sizes, mode, seed, epsilon, backend) -> float:
    params = init_params(layer_sizes, seed)
    rng = Xoshiro256StarStar(seed + 1)
    windows = np.asarray(
        [[rng.uniform(0.0, 1.0) for _ in range(4)] for _ in range(GRADCHECK_SAMPLES)]
    )
    targets = np.asarray([rng.uniform(0.0, 1.0) for _ in range(GRADCHECK_SAMPLES)])
    return finite_diff_check(
        params, windows, targets, mode, epsilon=epsilon, backend=backend
    )


def cmd_gradcheck(args: argparse.Namespace) -> int:
    if args.backend == "active":
        names = [backends.active_backend()]
    elif args.backend == "all":
        names = backends.available_backends()
    else:
        names = [args.backend]

    worst = 0.0
    failed = False
    for name in names:
        kernel = backends.get_backend(name)
        for mode in ("sigmoid", "tanh"):
            for layer_sizes in GRADCHECK_STACKS:
                disc = _gradcheck_case(
                    layer_sizes, mode, args.seed, args.epsilon, kernel
                )
                worst = max(worst, disc)
                ok = disc < GRADCHECK_TOLERANCE
                failed |= not ok
                print(
                    f"gradcheck backend={name} mode={mode} "
                    f"layers={list(layer_sizes)} max_rel_discrepancy={disc:.3e} "
                    f"{'PASS' if ok else 'FAIL'}"
                )
    print(
        f"gradcheck overall max_rel_discrepancy={worst:.3e} tolerance="
        f"{GRADCHECK_TOLERANCE:.0e} {'FAIL' if failed else 'PASS'}"
    )
    return 1 if failed else 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "gradcheck":
            return cmd_gradcheck(args)
    except ImportcastError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
