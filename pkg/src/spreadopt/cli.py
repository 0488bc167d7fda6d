"""Command-line interface: generate, evaluate, optimize, simulate, scatter.

Structured outputs are JSON (reports) and CSV with a single header row (plot
data).  Every command is deterministic given its flags and seed, and file
outputs round-trip byte-exactly: rerunning a command with the same arguments
rewrites identical files regardless of --threads.  A run manifest (command,
flags, seed, version, timestamp) is written next to file outputs; timestamps
never appear inside the structured outputs themselves.

Exit codes: 0 success, 1 usage or validation error, 2 numerical failure.
"""

import argparse
import csv
import datetime
import json
import os
import sys

import numpy as np

from . import __version__
from .interference import CdmaConfig, snr
from .metrics import correlation_peaks, sarwate_check
from .optimizer import SolverConfig, solve_multistart
from .sequences import ChipSequence, fzc_sequence, gold_family, single_tone_sequence
from .simulator import estimate_snr
from .spectral import decompose

__all__ = ["main", "read_sequence_set", "write_sequence_set"]

FORMAT_VERSION = 1

# default physical parameters: P and T cancel in the noiseless SNR
DEFAULT_POWER = 1.0
DEFAULT_SYMBOL_DURATION = 1.0
DEFAULT_NOISE = 0.0

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


class CliError(Exception):
    """Usage or validation failure (exit code 1)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(message)


# ---------------------------------------------------------------------------
# sequence-set files


def write_sequence_set(path: str, sequences: list[ChipSequence]) -> None:
    """Serialize a sequence set; floats keep full round-trip precision."""
    n_chips = sequences[0].n_chips
    payload = {
        "format_version": FORMAT_VERSION,
        "n_chips": n_chips,
        "sequences": [
            {
                "label": s.label,
                "entries": [[float(z.real), float(z.imag)] for z in s.entries],
            }
            for s in sequences
        ],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_sequence_set(path: str) -> list[ChipSequence]:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read sequence set {path!r}: {exc}") from exc
    try:
        if payload["format_version"] != FORMAT_VERSION:
            raise CliError(
                f"unsupported format_version {payload['format_version']} in {path!r}"
            )
        n_chips = int(payload["n_chips"])
        sequences = []
        for item in payload["sequences"]:
            entries = np.array([complex(re, im) for re, im in item["entries"]])
            if entries.shape[0] != n_chips:
                raise CliError(f"sequence length mismatch in {path!r}")
            if not np.all(np.isfinite(entries.view(float))):
                raise CliError(f"non-finite entries in {path!r}")
            sequences.append(ChipSequence(entries, label=str(item["label"])))
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"malformed sequence set {path!r}: {exc}") from exc
    if not sequences:
        raise CliError(f"sequence set {path!r} is empty")
    return sequences


def _write_manifest(directory: str, command: str, args: argparse.Namespace, seed) -> None:
    manifest = {
        "command": command,
        "flags": {k: v for k, v in sorted(vars(args).items()) if k != "func"},
        "seed": seed,
        "version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    with open(os.path.join(directory, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, default=str)
        fh.write("\n")


def _print_json(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _snr_value(breakdown) -> object:
    return "unbounded" if breakdown.unbounded else breakdown.snr


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise CliError(f"{flag} expects a comma-separated list of integers") from exc
    if not values:
        raise CliError(f"{flag} must name at least one value")
    return values


def _select_users(sequences, users: list[int]):
    for u in users:
        if not 1 <= u <= len(sequences):
            raise CliError(f"user {u} out of range 1..{len(sequences)}")
    if len(set(users)) != len(users):
        raise CliError("duplicate user indices")
    return [sequences[u - 1] for u in users]


# ---------------------------------------------------------------------------
# commands


def cmd_generate(args) -> int:
    if args.family == "gold":
        family = gold_family(args.degree)
        if args.indices is not None:
            picks = _parse_int_list(args.indices, "--indices")
            for idx in picks:
                if not 0 <= idx < len(family):
                    raise CliError(f"gold index {idx} out of range 0..{len(family) - 1}")
            family = [family[idx] for idx in picks]
        sequences = family
    elif args.family == "fzc":
        ms = _parse_int_list(args.m, "--m")
        sequences = [fzc_sequence(args.n, m) for m in ms]
    else:  # tone
        ks = _parse_int_list(args.k, "--k")
        sequences = [single_tone_sequence(args.n, k) for k in ks]
    write_sequence_set(args.out, sequences)
    out_dir = os.path.dirname(os.path.abspath(args.out))
    _write_manifest(out_dir, "generate", args, seed=None)
    print(f"wrote {len(sequences)} sequences of length {sequences[0].n_chips} to {args.out}")
    return EXIT_OK


def _evaluate_payload(sequences, users, power, symbol_duration, noise):
    selected = _select_users(sequences, users)
    n_chips = selected[0].n_chips
    cfg = CdmaConfig(
        n_chips=n_chips,
        n_users=len(selected),
        power=power,
        symbol_duration=symbol_duration,
        noise_density=noise,
    )
    breakdowns = [snr(cfg, selected, u) for u in range(1, len(selected) + 1)]
    coeffs = [decompose(s) for s in selected]
    peaks = correlation_peaks(coeffs)
    payload = {
        "command": "evaluate",
        "n_chips": n_chips,
        "users": users,
        "labels": [s.label for s in selected],
        "power": power,
        "symbol_duration": symbol_duration,
        "noise_density": noise,
        "snr": [_snr_value(b) for b in breakdowns],
        "interference_variance": [b.interference_variance for b in breakdowns],
        "noise_variance": breakdowns[0].noise_variance,
        "peaks": {
            "theta_a": peaks.theta_a,
            "theta_c": peaks.theta_c,
            "theta_hat_a": peaks.theta_hat_a,
            "theta_hat_c": peaks.theta_hat_c,
        },
    }
    if len(selected) >= 2:
        report = sarwate_check(peaks, n_chips, len(selected))
        payload["sarwate"] = {
            "lhs_periodic": report.lhs_periodic,
            "lhs_aperiodic": report.lhs_aperiodic,
            "satisfied_periodic": report.satisfied_periodic,
            "satisfied_aperiodic": report.satisfied_aperiodic,
        }
    else:
        payload["sarwate"] = None
    return payload, peaks, breakdowns


def cmd_evaluate(args) -> int:
    sequences = read_sequence_set(args.set_file)
    users = _parse_int_list(args.users, "--users")
    payload, peaks, breakdowns = _evaluate_payload(
        sequences, users, args.power, args.symbol_duration, args.noise
    )
    _print_json(payload)
    if args.csv:
        snr_1 = breakdowns[0]
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["label", "theta_a", "theta_c", "theta_hat_a", "theta_hat_c", "snr"])
            label = "+".join(s.label for s in _select_users(sequences, users))
            writer.writerow([
                label, repr(peaks.theta_a), repr(peaks.theta_c),
                repr(peaks.theta_hat_a), repr(peaks.theta_hat_c),
                "unbounded" if snr_1.unbounded else repr(snr_1.snr),
            ])
        _write_manifest(os.path.dirname(os.path.abspath(args.csv)), "evaluate", args, seed=None)
    return EXIT_OK


def _report_payload(report, seed) -> dict:
    return {
        "command": "optimize",
        "n_chips": report.n_chips,
        "seed": seed,
        "converged": report.converged,
        "status": report.status,
        "objective": report.objective,
        "snr": report.snr,
        "e1": report.e1,
        "e2": report.e2,
        "kkt_residual": report.kkt_residual,
        "iterations": report.iterations,
        "restarts": len(report.restart_snrs),
        "restarts_converged": int(sum(report.restart_converged)),
    }


def cmd_optimize(args) -> int:
    if args.n < 2:
        raise CliError("--n must be at least 2")
    cfg = SolverConfig(
        restarts=args.restarts,
        max_iterations=args.max_iter,
        kkt_tolerance=args.tol,
        constraint_tolerance=args.constraint_tol,
        seed=args.seed,
    )
    threads = args.threads or os.cpu_count() or 1
    report = solve_multistart(args.n, cfg, threads=threads)
    os.makedirs(args.out, exist_ok=True)
    write_sequence_set(os.path.join(args.out, "sequences.json"), report.best_sequences)
    with open(os.path.join(args.out, "report.json"), "w") as fh:
        json.dump(_report_payload(report, args.seed), fh, indent=2)
        fh.write("\n")
    with open(os.path.join(args.out, "restart_snrs.csv"), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["snr"])
        for value in report.restart_snrs:
            writer.writerow([repr(value)])
    _write_manifest(args.out, "optimize", args, seed=args.seed)
    print(f"best snr: {report.snr}")
    print(f"e1: {report.e1}")
    print(f"e2: {report.e2}")
    if not report.converged:
        print(f"FAILED: {report.status}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_simulate(args) -> int:
    sequences = read_sequence_set(args.set_file)
    users = _parse_int_list(args.users, "--users")
    selected = _select_users(sequences, users)
    n_chips = selected[0].n_chips
    cfg = CdmaConfig(
        n_chips=n_chips,
        n_users=len(selected),
        power=args.power,
        symbol_duration=args.symbol_duration,
        noise_density=args.noise,
    )
    if args.trials < 100:
        raise CliError("--trials must be at least 100")
    threads = args.threads or os.cpu_count() or 1
    estimate = estimate_snr(cfg, selected, 1, args.trials, args.seed, threads=threads)
    analytic = snr(cfg, selected, 1)
    if estimate.var_interference_stderr > 0:
        z = (estimate.var_interference_mean - analytic.interference_variance) / (
            estimate.var_interference_stderr
        )
    else:
        z = None
    payload = {
        "command": "simulate",
        "n_chips": n_chips,
        "users": users,
        "labels": [s.label for s in selected],
        "trials": args.trials,
        "seed": args.seed,
        "estimate": {
            "var_interference_mean": estimate.var_interference_mean,
            "var_interference_stderr": estimate.var_interference_stderr,
            "snr": "unbounded" if estimate.unbounded else estimate.snr_estimate,
        },
        "analytic": {
            "var_interference": analytic.interference_variance,
            "snr": _snr_value(analytic),
        },
        "z_score": z,
    }
    _print_json(payload)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "simulate.json"), "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        _write_manifest(args.out, "simulate", args, seed=args.seed)
    return EXIT_OK


def cmd_scatter(args) -> int:
    rows = []
    for path in args.set_files:
        try:
            sequences = read_sequence_set(path)
            coeffs = [decompose(s) for s in sequences]
            peaks = correlation_peaks(coeffs)
            cfg = CdmaConfig(n_chips=sequences[0].n_chips, n_users=len(sequences))
            breakdown = snr(cfg, sequences, 1) if len(sequences) >= 2 else None
        except (CliError, ValueError) as exc:
            print(f"warning: skipping {path}: {exc}", file=sys.stderr)
            continue
        label = os.path.splitext(os.path.basename(path))[0]
        snr_text = "unbounded" if breakdown is None or breakdown.unbounded else repr(breakdown.snr)
        rows.append([
            label, repr(peaks.theta_a), repr(peaks.theta_c),
            repr(peaks.theta_hat_a), repr(peaks.theta_hat_c), snr_text,
        ])
    if not rows:
        raise CliError("no readable sequence sets")
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label", "theta_a", "theta_c", "theta_hat_a", "theta_hat_c", "snr"])
        writer.writerows(rows)
    _write_manifest(os.path.dirname(os.path.abspath(args.out)), "scatter", args, seed=None)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> _Parser:
    parser = _Parser(prog="spreadopt", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"spreadopt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a baseline sequence family to a file")
    gen_sub = gen.add_subparsers(dest="family", required=True)
    gold = gen_sub.add_parser("gold", help="Gold family (two m-sequences plus combinations)")
    gold.add_argument("--degree", type=int, default=5, help="LFSR degree (5, 6 or 7)")
    gold.add_argument("--indices", type=str, default=None,
                      help="comma-separated family indices to keep (default: all)")
    gold.set_defaults(func=cmd_generate)
    fzc = gen_sub.add_parser("fzc", help="Frank-Zadoff-Chu sequences")
    fzc.add_argument("--n", type=int, required=True, help="sequence length")
    fzc.add_argument("--m", type=str, required=True,
                     help="comma-separated root indices, each coprime to n")
    fzc.set_defaults(func=cmd_generate)
    tone = gen_sub.add_parser("tone", help="single complex tones")
    tone.add_argument("--n", type=int, required=True, help="sequence length")
    tone.add_argument("--k", type=str, required=True,
                      help="comma-separated tone indices in 0..n-1")
    tone.set_defaults(func=cmd_generate)
    for p in (gold, fzc, tone):
        p.add_argument("--out", type=str, required=True, help="output sequence-set path")

    ev = sub.add_parser("evaluate", help="SNR, correlation peaks and Sarwate bound")
    ev.add_argument("set_file", type=str)
    ev.add_argument("--users", type=str, required=True,
                    help="comma-separated 1-based user indices, e.g. 1,2")
    ev.add_argument("--power", type=float, default=DEFAULT_POWER)
    ev.add_argument("--symbol-duration", type=float, default=DEFAULT_SYMBOL_DURATION)
    ev.add_argument("--noise", type=float, default=DEFAULT_NOISE,
                    help="one-sided noise density N0")
    ev.add_argument("--csv", type=str, default=None, help="also write a scatter-style CSV row")
    ev.set_defaults(func=cmd_evaluate)

    opt = sub.add_parser("optimize", help="multi-restart two-user sequence design")
    opt.add_argument("--n", type=int, required=True, help="sequence length")
    opt.add_argument("--restarts", type=int, default=200)
    opt.add_argument("--seed", type=int, default=0)
    opt.add_argument("--tol", type=float, default=1e-9, help="KKT residual tolerance")
    opt.add_argument("--constraint-tol", type=float, default=1e-10)
    opt.add_argument("--max-iter", type=int, default=5000)
    opt.add_argument("--threads", type=int, default=None,
                     help="worker processes (default: machine parallelism)")
    opt.add_argument("--out", type=str, required=True, help="output directory")
    opt.set_defaults(func=cmd_optimize)

    sim = sub.add_parser("simulate", help="Monte Carlo check of the interference model")
    sim.add_argument("set_file", type=str)
    sim.add_argument("--users", type=str, required=True)
    sim.add_argument("--trials", type=int, default=100000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--power", type=float, default=DEFAULT_POWER)
    sim.add_argument("--symbol-duration", type=float, default=DEFAULT_SYMBOL_DURATION)
    sim.add_argument("--noise", type=float, default=DEFAULT_NOISE)
    sim.add_argument("--threads", type=int, default=None,
                     help="worker threads (default: machine parallelism)")
    sim.add_argument("--out", type=str, default=None, help="optional output directory")
    sim.set_defaults(func=cmd_simulate)

    sc = sub.add_parser("scatter", help="peak/SNR CSV rows for several sequence sets")
    sc.add_argument("set_files", nargs="+", type=str)
    sc.add_argument("--out", type=str, required=True, help="output CSV path")
    sc.set_defaults(func=cmd_scatter)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
