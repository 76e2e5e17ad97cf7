"""Benchmark the compiled LSTM kernels against the NumPy fallback.

Times full-batch forward+backward epochs on the production-sized workload
(147 windows of 4 quarters, three hidden layers of 16) plus a couple of
other shapes, and cross-checks that both backends agree numerically.

Usage: python benchmarks/bench_backends.py [--repeats 200]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from importcast import backends
from importcast.lstm import init_params
from importcast.training import bptt_gradients

WORKLOADS = (
    # (name, hidden sizes, batch, lookback)
    ("production", (16, 16, 16), 147, 4),
    ("wide", (64, 64), 147, 4),
    ("long-window", (16, 16, 16), 147, 16),
)


def time_epochs(kernel, params, windows, targets, repeats: int) -> float:
    bptt_gradients(params, windows, targets, backend=kernel)  # warm up
    start = time.perf_counter()
    for _ in range(repeats):
        bptt_gradients(params, windows, targets, backend=kernel)
    return (time.perf_counter() - start) / repeats


def agreement(params, windows, targets) -> float:
    grads = {}
    for name in backends.available_backends():
        g = bptt_gradients(params, windows, targets, backend=backends.get_backend(name))
        grads[name] = np.concatenate([arr.ravel() for _, arr in g.blocks()])
    names = sorted(grads)
    if len(names) < 2:
        return 0.0
    a, b = grads[names[0]], grads[names[1]]
    return float(np.max(np.abs(a - b) / np.maximum(1e-12, np.abs(a) + np.abs(b))))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=200)
    args = parser.parse_args()

    names = backends.available_backends()
    print(f"backends available: {', '.join(names)} (active: {backends.active_backend()})")
    print(f"{'workload':<12} {'backend':<8} {'ms/epoch':>10} {'speedup':>8}")
    for label, hidden, batch, lookback in WORKLOADS:
        params = init_params(hidden, seed=0)
        rng = np.random.default_rng(0)
        windows = rng.uniform(0, 1, size=(batch, lookback))
        targets = rng.uniform(0, 1, size=batch)
        times = {}
        for name in names:
            times[name] = time_epochs(
                backends.get_backend(name), params, windows, targets, args.repeats
            )
        base = times["python"]
        for name in names:
            print(
                f"{label:<12} {name:<8} {times[name] * 1e3:>10.3f} "
                f"{base / times[name]:>7.2f}x"
            )
        rel = agreement(params, windows, targets)
        print(f"{label:<12} max relative gradient disagreement: {rel:.2e}")


if __name__ == "__main__":
    main()
