"""Time the compiled walk-step kernel against the numpy fallback.

Usage: python benchmarks/bench_step.py [--d 3] [--steps 20] [--repeat 3]
"""
import argparse
import time

import numpy as np

from optiwalk import kernels
from optiwalk.optics import builtin_coin
from optiwalk.walk import WalkConfig, step


def run(config, backend):
    state = config.initial_state()
    t0 = time.perf_counter()
    for _ in range(config.steps):
        state = step(state, config.coin, backend=backend)
    return time.perf_counter() - t0, state


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--d", type=int, default=3)
    parser.add_argument("--steps", type=int, default=20)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    config = WalkConfig(args.d, args.steps, builtin_coin("grover", args.d))
    backends = {"numpy": kernels.python_coin_shift}
    if kernels.compiled_coin_shift is not None:
        backends["cython"] = kernels.compiled_coin_shift
    else:
        print("compiled kernel not built; timing the fallback only")

    print(f"grover walk d={args.d}, {args.steps} steps, window {config.window_radius()}")
    finals = {}
    for name, backend in backends.items():
        best = min(run(config, backend)[0] for _ in range(args.repeat))
        finals[name] = run(config, backend)[1]
        print(f"{name:>7}: {best:.4f} s (best of {args.repeat})")
    if len(finals) == 2:
        diff = np.abs(finals["numpy"].amplitudes - finals["cython"].amplitudes).max()
        print(f"max amplitude difference: {diff:.1e}")


if __name__ == "__main__":
    main()
