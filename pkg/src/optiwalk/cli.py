"""``optiwalk`` command line.

Exit codes: 0 success, 2 usage error, 3 unreadable or malformed input,
4 matrix not unitary, 5 numeric verification failed, 6 window overflow.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import secrets
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import Partition, multidegree_profile
from .dof import feasibility_check, orthogonality_report
from .io import (
    FormatError,
    circuit_from_doc,
    circuit_to_doc,
    config_from_doc,
    distribution_csv,
    dumps,
    matrix_from_doc,
    matrix_to_doc,
    read_json,
    state_from_doc,
    state_to_doc,
)
from .optics import COIN_NAMES, CoinSpec, builtin_coin, circuit_to_matrix, compile_coin
from .unitary_core import DEFAULT_TOL, DecompositionError, NotUnitaryError, haar_unitary
from .walk import WindowOverflowError, evolve, spread

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_NOT_UNITARY = 4
EXIT_VERIFY = 5
EXIT_OVERFLOW = 6

OUTPUT_DIR_ENV = "OPTIWALK_OUTPUT_DIR"


class UsageError(Exception):
    pass


class VerificationError(Exception):
    pass


def _out_path(arg: str | None, default_name: str) -> Path:
    base = Path(os.environ.get(OUTPUT_DIR_ENV, "."))
    path = Path(arg) if arg else base / default_name
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _digest(*parts: bytes) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p)
        h.update(b"\0")
    return h.hexdigest()


def _write_manifest(command: str, digest: str, seed: int | None, outputs: list[Path]) -> None:
    manifest = {
        "command": command,
        "config_digest": digest,
        "seed": seed,
        "tool_version": __version__,
        "outputs": [str(p) for p in outputs],
    }
    outputs[0].with_name(outputs[0].name + ".manifest.json").write_text(dumps(manifest))


# -- compile / verify -------------------------------------------------------


def cmd_compile(args) -> int:
    if args.builtin:
        if args.unitary:
            raise UsageError("give either a unitary file or --builtin, not both")
        coin = builtin_coin(args.builtin, args.d)
        raw = f"builtin:{args.builtin}:{args.d}".encode()
    elif args.unitary:
        m = matrix_from_doc(read_json(args.unitary))
        raw = Path(args.unitary).read_bytes()
        if m.shape[0] % 2:
            raise FormatError(f"coin dimension must be even, got {m.shape[0]}")
        coin = CoinSpec.from_matrix(m, Path(args.unitary).stem)
    else:
        raise UsageError("compile needs a unitary file or --builtin NAME")
    circuit = compile_coin(coin, args.tol, merge=not args.no_merge)
    out = _out_path(args.out, "circuit.json")
    out.write_text(dumps(circuit_to_doc(circuit)))
    _write_manifest("compile", _digest(raw, str(args.tol).encode()), None, [out])
    print(f"census: {circuit.census()}")
    if args.verify:
        err = float(np.abs(circuit_to_matrix(circuit) - coin.matrix).max())
        print(f"verify: max error {err:.3e} (tol {args.tol:g})")
        if err >= args.tol:
            raise VerificationError(f"circuit deviates from coin by {err:.3e}")
    return EXIT_OK


def cmd_verify(args) -> int:
    circuit = circuit_from_doc(read_json(args.circuit))
    target = matrix_from_doc(read_json(args.unitary))
    if target.shape != (2 * circuit.d, 2 * circuit.d):
        raise FormatError(f"circuit is for d={circuit.d} but unitary is {target.shape[0]}x{target.shape[0]}")
    err = float(np.abs(circuit_to_matrix(circuit) - target).max())
    print(f"census: {circuit.census()}")
    print(f"verify: max error {err:.3e} (tol {args.tol:g})")
    if err >= args.tol:
        raise VerificationError(f"circuit deviates from unitary by {err:.3e}")
    return EXIT_OK


# -- simulate ---------------------------------------------------------------


def _simulate_one(config_path: str, dist_out: Path, state_out: Path | None) -> list[str]:
    raw = Path(config_path).read_bytes()
    config, dims = config_from_doc(read_json(config_path), Path(config_path).parent)
    lines = []
    if dims:
        for w in feasibility_check(config, dims):
            lines.append(f"warning: {w}")
        report = orthogonality_report(dims, config.window_radius())
        for e in report.entries:
            if not e.passed:
                lines.append(
                    f"warning: dimension {e.dim} time bins overlap {e.worst_overlap:.3g} "
                    f"(threshold {report.threshold:g})"
                )
    state = evolve(config)
    dist_out.parent.mkdir(parents=True, exist_ok=True)
    dist_out.write_text(distribution_csv(state))
    outputs = [dist_out]
    if state_out is not None:
        state_out.parent.mkdir(parents=True, exist_ok=True)
        state_out.write_text(dumps(state_to_doc(state)))
        outputs.append(state_out)
    _write_manifest("simulate", _digest(raw), None, outputs)
    lines.append(f"norm: {state.norm():.15f}")
    for n in range(1, config.d + 1):
        mean, std = spread(state, n)
        lines.append(f"x{n}: mean {mean:.6g} std {std:.6g}")
    return lines


def cmd_simulate(args) -> int:
    if len(args.config) == 1:
        dist = _out_path(args.out, "distribution.csv")
        state = Path(args.state) if args.state else None
        for line in _simulate_one(args.config[0], dist, state):
            print(line, file=sys.stderr if line.startswith("warning") else sys.stdout)
        return EXIT_OK
    # sweep: one output directory per config, no shared files
    root = _out_path(args.out, "sweep")
    jobs = []
    with ProcessPoolExecutor(max_workers=args.jobs) as pool:
        for cfg in args.config:
            sub = root / Path(cfg).stem
            state = sub / "state.json" if args.state else None
            jobs.append((cfg, pool.submit(_simulate_one, cfg, sub / "distribution.csv", state)))
        for cfg, fut in jobs:
            print(f"[{cfg}]")
            for line in fut.result():
                print(line)
    return EXIT_OK


# -- analyze ----------------------------------------------------------------


def cmd_analyze(args) -> int:
    state = state_from_doc(read_json(args.state))
    try:
        parts = [Partition.parse(p) for p in args.partition] if args.partition else None
        if parts:
            for p in parts:
                p.axes(state.d)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    profile = multidegree_profile(state, partitions=parts)
    out = _out_path(args.out, "profile.csv")
    out.write_text(profile.to_csv())
    _write_manifest("analyze", _digest(Path(args.state).read_bytes(), repr(args.partition).encode()), None, [out])
    sys.stdout.write(profile.to_csv())
    return EXIT_OK


# -- random-coin ------------------------------------------------------------


def cmd_random_coin(args) -> int:
    if args.dim < 2 or args.dim % 2:
        raise UsageError(f"--dim must be even and >= 2, got {args.dim}")
    seed = args.seed if args.seed is not None else secrets.randbits(64)
    u = haar_unitary(args.dim, np.random.default_rng(seed))
    out = _out_path(args.out, "coin.json")
    out.write_text(dumps(matrix_to_doc(u)))
    _write_manifest("random-coin", _digest(str(args.dim).encode()), seed, [out])
    return EXIT_OK


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="numeric tolerance")
    common.add_argument("--seed", type=_seed, default=None, help="unsigned 64-bit RNG seed")
    common.add_argument("--out", default=None, help=f"output path (default: in ${OUTPUT_DIR_ENV} or .)")

    parser = argparse.ArgumentParser(prog="optiwalk", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"optiwalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", parents=[common], help="lower a coin to an optical circuit")
    p.add_argument("unitary", nargs="?", help="unitary matrix document")
    p.add_argument("--builtin", choices=COIN_NAMES, help="compile a built-in coin instead")
    p.add_argument("--d", type=int, default=2, help="walk dimension for --builtin")
    p.add_argument("--verify", action="store_true", help="check the circuit against the coin")
    p.add_argument("--no-merge", action="store_true", help="skip the leaf merge pass")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("verify", parents=[common], help="compare a circuit with a unitary")
    p.add_argument("circuit")
    p.add_argument("unitary")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", parents=[common], help="run a walk from a config document")
    p.add_argument("config", nargs="+", help="config document(s); several run as a sweep")
    p.add_argument("--state", help="also write the final state snapshot here (sweep: flag only)")
    p.add_argument("--jobs", type=int, default=None, help="worker processes for a sweep")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", parents=[common], help="entanglement profile of a state snapshot")
    p.add_argument("state")
    p.add_argument("--partition", action="append", help="e.g. coin, x1, coin+x2 (repeatable)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("random-coin", parents=[common], help="sample a Haar-random unitary")
    p.add_argument("--dim", type=int, required=True, help="even matrix dimension 2d")
    p.set_defaults(func=cmd_random_coin)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"optiwalk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotUnitaryError as exc:
        print(f"optiwalk: not unitary: {exc}", file=sys.stderr)
        return EXIT_NOT_UNITARY
    except (VerificationError, DecompositionError) as exc:
        print(f"optiwalk: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except WindowOverflowError as exc:
        print(f"optiwalk: window overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except (FormatError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"optiwalk: bad input: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
