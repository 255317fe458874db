"""Command-line front end.

Streaming subcommands (``partial``, ``balance``, ``full``, ``dyadic``) read one
vector per line from stdin and write one sign per line to stdout, flushing
after every sign so the process can sit in a lock-step pipe.  Vectors are
either dense (``0.5,0,-0.5``) or sparse (``0:0.5 2:-0.5``, indices 0-based
and ascending).

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 malformed input or a vector of norm above 1.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .balancer import RNG_NAME, SparseVector
from .errors import DomainError, NormError
from .harness import ALGORITHMS, GENERATORS, SUITES, make_signer, run_experiment, run_verification

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_INPUT = 0, 1, 2, 3
SEED_ENV = "GAUSSWALK_SEED"


class InputError(ValueError):
    pass


def parse_vector(line, fmt="dense"):
    """Parse one input line into a :class:`SparseVector`."""
    text = line.strip()
    if not text:
        return SparseVector((), ())
    try:
        if fmt == "dense":
            values = [float(tok) for tok in text.split(",")]
            return SparseVector.from_dense(values)
        pairs = []
        for tok in text.split():
            i, sep, a = tok.partition(":")
            if not sep:
                raise InputError(f"expected index:value, got {tok!r}")
            pairs.append((int(i), float(a)))
        return SparseVector.from_pairs(pairs)
    except NormError as exc:
        raise InputError(str(exc)) from None
    except ValueError as exc:
        raise InputError(str(exc)) from None


def format_vector(v, fmt="dense", n=None):
    """Inverse of :func:`parse_vector`; floats keep 17 significant digits."""
    if fmt == "dense":
        dense = v.to_dense(n if n is not None else (v.indices[-1] + 1 if v.indices else 0))
        return ",".join(f"{a:.17g}" for a in dense.tolist())
    return " ".join(f"{i}:{a:.17g}" for i, a in zip(v.indices, v.values))


def _resolve_seed(seed):
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env:
        return int(env)
    return int(np.random.SeedSequence().entropy % 2**64)


def _add_common(p, sigma_default=1.0):
    p.add_argument("--sigma", type=float, default=sigma_default)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=None, help=f"u64 seed; falls back to ${SEED_ENV}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gausswalk", description="Online vector signing with Gaussian-preserving lattice walks."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("partial", "signs in {-1, 0, +1}"),
        ("balance", "signs in {-1, +1, +2}; needs --sigma >= 1"),
        ("full", "signs in {-1, +1} by rerunning on omitted vectors"),
        ("dyadic", "per-length-scale balancers, signs in {-1, +1, +2}"),
    ):
        p = sub.add_parser(name, help=text)
        _add_common(p)
        p.add_argument("--format", choices=("dense", "sparse"), default="dense")
        p.add_argument("--stats-out", help="write the summary JSON here instead of stderr")
        if name == "full":
            p.add_argument("--max-rounds", type=int, default=64)

    p = sub.add_parser("verify", help="run the numerical verification suites")
    p.add_argument("--suite", choices=("all",) + tuple(SUITES), default="all")
    p.add_argument("--stats-out", help="write the verification report here instead of stdout")

    p = sub.add_parser("simulate", help="run one seeded discrepancy experiment")
    _add_common(p)
    p.add_argument("--gen", choices=GENERATORS, default="random_unit")
    p.add_argument("--mode", choices=ALGORITHMS, default="partial")
    p.add_argument("--t", type=int, default=10**4)
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--report", choices=("json", "csv"), default="json")
    p.add_argument("--stats-out", help="write the report here instead of stdout")
    p.add_argument("--timing", action="store_true", help="include wall time in the JSON report")
    return parser


def _emit(text, path, stream):
    if path:
        with open(path, "w") as fh:
            fh.write(text + ("" if text.endswith("\n") else "\n"))
    else:
        stream.write(text + ("" if text.endswith("\n") else "\n"))
        stream.flush()


def run_stream(args, stdin, stdout, stderr):
    seed = _resolve_seed(args.seed)
    try:
        if args.command == "full":
            signer = make_signer("full", args.sigma, args.delta, seed, args.max_rounds)
        elif args.command == "dyadic":
            signer = make_signer("dyadic", args.sigma, args.delta, seed)
        else:
            signer = make_signer(args.command, args.sigma, args.delta, seed)
    except DomainError as exc:
        stderr.write(f"gausswalk: {exc}\n")
        return EXIT_CONFIG

    lineno = 0
    while True:
        line = stdin.readline()
        if not line:
            break
        lineno += 1
        try:
            v = parse_vector(line, args.format)
        except InputError as exc:
            stderr.write(f"gausswalk: line {lineno}: {exc}\n")
            return EXIT_INPUT
        stdout.write(f"{signer.process(v).sign}\n")
        stdout.flush()

    counts = dict(signer.sign_counts)
    t = signer.t
    summary = {
        "mode": args.command,
        "sigma": args.sigma,
        "delta": args.delta,
        "seed": seed,
        "rng": RNG_NAME,
        "t": t,
        "max_running_discrepancy": signer.running_max,
        "final_discrepancy": signer.discrepancy()[1],
        "used_fraction": 1.0 - counts.get(0, 0) / t if t else 1.0,
        "sign_histogram": {str(s): c for s, c in sorted(counts.items())},
        "n_filtered": getattr(signer, "n_filtered", 0),
    }
    if args.command == "full":
        summary["rounds"] = signer.rounds
    _emit(json.dumps(summary, sort_keys=True), args.stats_out, stderr)
    return EXIT_OK


def run_verify(args, stdout):
    report = run_verification(args.suite)
    _emit(json.dumps(report, indent=2, sort_keys=True, default=float), args.stats_out, stdout)
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def run_simulate(args, stdout, stderr):
    seed = _resolve_seed(args.seed)
    try:
        report = run_experiment(
            generator=args.gen,
            algorithm=args.mode,
            sigma=args.sigma,
            t=args.t,
            n=args.n,
            delta=args.delta,
            seed=seed,
            trace=args.report == "csv",
        )
    except DomainError as exc:
        stderr.write(f"gausswalk: {exc}\n")
        return EXIT_CONFIG
    text = report.to_json(args.timing) if args.report == "json" else report.trace_csv()
    _emit(text, args.stats_out, stdout)
    stderr.write(
        f"{report.algorithm} on {report.generator}: t={report.t} n={report.n} seed={report.seed} "
        f"max_disc={report.max_running_discrepancy:.4f} bound={report.bound:.4f} "
        f"used={report.used_fraction:.4f} wall={report.wall_time:.2f}s\n"
    )
    return EXIT_OK


def main(argv=None, stdin=None, stdout=None, stderr=None):
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    for name in ("sigma", "delta"):
        value = getattr(args, name, None)
        if value is not None and not math.isfinite(value):
            stderr.write(f"gausswalk: --{name} must be finite\n")
            return EXIT_CONFIG
    if args.command == "verify":
        return run_verify(args, stdout)
    if args.command == "simulate":
        return run_simulate(args, stdout, stderr)
    return run_stream(args, stdin, stdout, stderr)


if __name__ == "__main__":
    sys.exit(main())
