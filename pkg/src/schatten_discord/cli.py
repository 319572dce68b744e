"""Command-line entry point: seeded runs that write figure data as CSV or JSON.

Exit codes: 0 on success, 2 for invalid input (including correlation
vectors outside the tetrahedron), 3 when an eigensolver fails to converge.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import channels, measures, oracle, spinchain
from .io import dumps_csv, dumps_json, emit, metadata
from .linalg import ConvergenceError
from .states import (
    _ball_vectors,
    bd_density_matrix,
    correlation_stats,
    require_physical,
    sample_bd_uniform_batch,
)

EXIT_OK, EXIT_INPUT, EXIT_CONVERGENCE = 0, 2, 3
MAX_SEED = 2**64 - 1


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _positive_int(text: str) -> int:
    value = int(float(text))
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _write(args, command: str, params: dict, payload: dict, rows=None, columns=None) -> None:
    """Emit ``payload`` as JSON, or ``rows`` as CSV when ``--format csv``."""
    meta = metadata(command, args.seed, params)
    if args.format == "csv":
        if rows is None:
            rows, columns = [payload], list(payload)
        emit(dumps_csv(rows, columns, meta), args.out)
    else:
        emit(dumps_json(payload, meta), args.out)


def _c_param(c) -> list[float]:
    return [float(x) for x in c]


# --- subcommands -------------------------------------------------------------

def cmd_measures(args) -> None:
    c = require_physical(args.c)
    m = measures.measure_set(c)
    payload = {
        "c": _c_param(c),
        "Q": m.entropic_q,
        "DG": m.geometric_2norm,
        "D1": m.geometric_1norm,
        "N": m.negativity,
        "hierarchy_ok": measures.hierarchy_check(c).ok,
    }
    if args.format == "csv":
        row = {"c1": c.c1, "c2": c.c2, "c3": c.c3, **{k: v for k, v in payload.items() if k != "c"}}
        _write(args, "measures", {"c": _c_param(c)}, row, [row], list(row))
    else:
        _write(args, "measures", {"c": _c_param(c)}, payload)


def _deltas_path(args) -> Path | None:
    if args.deltas_csv:
        return Path(args.deltas_csv)
    if args.out and args.out != "-":
        out = Path(args.out)
        return out.with_name(out.stem + "_deltas.csv")
    return None


def cmd_histogram(args) -> None:
    params = {"N_states": args.n_states, "Nc": args.nc, "bins": args.bins, "family": args.family}
    stats = oracle.delta_histogram(
        args.n_states, args.nc, args.bins, seed=args.seed, threads=args.threads, family=args.family
    )
    if args.fit:
        params.update(fit_states=args.fit_states, fit_nc=list(args.fit_nc))
        points, fit = oracle.delta_decay(args.fit_states, args.fit_nc, seed=args.seed, threads=args.threads)
        stats.fit, stats.fit_points = fit, points
    payload = stats.to_dict()
    edges = stats.bin_edges
    bins = [
        {"bin_lo": float(edges[k]), "bin_hi": float(edges[k + 1]), "count": int(stats.counts[k])}
        for k in range(len(stats.counts))
    ]
    _write(args, "histogram", params, payload, bins, ["bin_lo", "bin_hi", "count"])

    path = _deltas_path(args)
    if path is not None:
        rows = [
            {"index": i, "c1": c[0], "c2": c[1], "c3": c[2], "min_distance": m, "delta": d}
            for i, (c, m, d) in enumerate(zip(stats.states, stats.minima, stats.deltas))
        ]
        cols = ["index", "c1", "c2", "c3", "min_distance", "delta"]
        emit(dumps_csv(rows, cols, metadata("histogram", args.seed, params)), path)


def cmd_monotonicity_map(args) -> None:
    params = {"resolution": args.resolution, "step": args.step, "rule": args.rule, "eps": args.eps}
    rows = measures.monotonicity_map(args.resolution, args.step, args.eps, args.rule)
    dict_rows = [r._asdict() for r in rows]
    _write(args, "monotonicity-map", params, {"rows": dict_rows}, dict_rows, list(measures.MONOTONICITY_COLUMNS))


def cmd_xxz(args) -> None:
    params = {"delta_min": args.delta_min, "delta_max": args.delta_max, "step": args.step,
              "L": args.L, "h": args.h}
    records = spinchain.sweep((args.delta_min, args.delta_max), args.step, args.L, args.h, args.threads)
    rows = [r.row() for r in records]
    payload = {"rows": rows, "crossover_delta": spinchain.crossover_delta(records)}
    _write(args, "xxz", params, payload, rows, list(spinchain.SWEEP_COLUMNS))


def cmd_channels(args) -> None:
    rng = np.random.default_rng(args.seed)
    c = require_physical(args.c)
    sigma = channels.AncillaState(tuple(args.r))
    channel = channels.PauliChannel(*args.q)
    params = {"report": args.report, "c": _c_param(c), "r": list(args.r), "p": args.p,
              "q": list(args.q), "nc": args.nc, "samples": args.samples}
    selected = ("scaling", "contractivity", "witness", "sweep") if args.report == "all" else (args.report,)
    payload: dict = {}
    if "scaling" in selected:
        payload["scaling"] = channels.dp_scaling_check(c, sigma, args.p, args.nc, rng).to_dict()
    if "contractivity" in selected:
        report = channels.contractivity_check(c, channel)
        payload["contractivity"] = {**report.to_dict(), "ok": report.ok}
    if "witness" in selected:
        payload["witness"] = channels.dg_noncontractivity_witness(tuple(args.r), tuple(c))
    if "sweep" in selected:
        payload["sweep"] = _channel_sweep(rng, args.samples)
    _write(args, "channels", params, payload, *_channel_rows(payload))


def _channel_sweep(rng: np.random.Generator, n: int) -> dict:
    violations = channels.random_contractivity_sweep(n, rng)
    n_triples = min(n, 1000)
    cs = sample_bd_uniform_batch(rng, n_triples)
    rs = _ball_vectors(rng, n_triples)
    ps = rng.choice(channels.SUPPORTED_P, n_triples)
    worst = max(
        channels.dp_scaling_check(c, channels.AncillaState(tuple(r)), int(p)).norm_identity_residual
        for c, r, p in zip(cs, rs, ps)
    )
    return {"pauli_samples": n, "d1_violations": violations,
            "norm_triples": n_triples, "max_norm_identity_residual": worst}


def _channel_rows(payload: dict):
    rows = []
    for name, report in payload.items():
        for key, value in report.items():
            rows.append({"report": name, "field": key, "value": value})
    return rows, ["report", "field", "value"]


def cmd_noq_min(args) -> None:
    c = require_physical(args.c)
    value, u = measures.noq_minimize(c, args.grid)
    payload = {
        "c": _c_param(c),
        "value": value,
        "argmin_u": [float(x) for x in u],
        "at_vertex": bool(np.isclose(np.max(u), 1.0)),
        "c0": correlation_stats(c).c_zero,
        "axis_min": measures.d1_by_classical_axes(c),
    }
    _write(args, "noq-min", {"c": _c_param(c), "grid": args.grid}, payload)


def cmd_oracle_d1(args) -> None:
    c = require_physical(args.c)
    rng = np.random.default_rng(args.seed)
    rho = bd_density_matrix(c)
    if args.norm == 1:
        sampled = oracle.d1_sample_min(rho, args.nc, rng, args.family)
        analytic = measures.geometric_discord_1norm(c)
    else:
        sampled = oracle.d2_sample_min(rho, (2, 2), args.nc, rng, args.b_states)
        analytic = measures.geometric_discord_2norm(c)
    params = {"c": _c_param(c), "Nc": args.nc, "norm": args.norm,
              "family": args.family, "b_states": args.b_states}
    payload = {"c": _c_param(c), "Nc": args.nc, "norm": args.norm, "sampled_min": sampled,
               "analytic": analytic, "delta": sampled - analytic}
    _write(args, "oracle-d1", params, payload)


# --- parser ------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, fmt: str) -> None:
    p.add_argument("--seed", type=_seed, default=0, help="master RNG seed (64-bit unsigned)")
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.add_argument("--format", choices=("csv", "json"), default=fmt)
    p.add_argument("--threads", type=_positive_int, default=1, help="worker cap; results do not depend on it")


def _c_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("c", type=float, nargs=3, metavar=("C1", "C2", "C3"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schatten-discord",
        description="Discord measures for Bell-diagonal states, sampling oracles and XXZ sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measures", help="Q, D_G, D_1 and negativity of one state")
    _c_args(p)
    _common(p, "json")
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("histogram", help="delta statistic histogram and optional power-law fit")
    p.add_argument("--n-states", type=_positive_int, default=1000)
    p.add_argument("--nc", type=_positive_int, default=10_000)
    p.add_argument("--bins", type=_positive_int, default=oracle.HISTOGRAM_BINS)
    p.add_argument("--family", choices=("random", "measured"), default="random")
    p.add_argument("--fit", action="store_true", help="also fit mean delta against Nc")
    p.add_argument("--fit-states", type=_positive_int, default=200)
    p.add_argument("--fit-nc", type=_positive_int, nargs="+", default=list(oracle.FIT_NC))
    p.add_argument("--deltas-csv", help="raw delta CSV (default: next to --out)")
    _common(p, "json")
    p.set_defaults(func=cmd_histogram)

    p = sub.add_parser("monotonicity-map", help="c3-derivative classification of the c1 = c2 plane")
    p.add_argument("--resolution", type=_positive_int, default=101)
    p.add_argument("--step", type=float, default=1e-4)
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--rule", choices=("product", "sign"), default="product")
    _common(p, "csv")
    p.set_defaults(func=cmd_monotonicity_map)

    p = sub.add_parser("xxz", help="anisotropy sweep of the periodic XXZ chain")
    p.add_argument("--delta-min", type=float, default=-2.0)
    p.add_argument("--delta-max", type=float, default=2.0)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--L", type=int, default=12)
    p.add_argument("--h", type=float, default=spinchain.DEFAULT_H, help="central-difference step")
    _common(p, "csv")
    p.set_defaults(func=cmd_xxz)

    p = sub.add_parser("channels", help="ancilla scaling and Pauli-channel reports")
    p.add_argument("--report", choices=("scaling", "contractivity", "witness", "sweep", "all"), default="all")
    p.add_argument("--c", type=float, nargs=3, default=[1.0, 1.0, -1.0])
    p.add_argument("--r", type=float, nargs=3, default=[0.0, 0.0, 0.0], help="ancilla Bloch vector")
    p.add_argument("--p", type=int, choices=channels.SUPPORTED_P, default=2)
    p.add_argument("--q", type=float, nargs=4, default=[0.75, 0.0, 0.0, 0.25], metavar=("Q0", "QX", "QY", "QZ"))
    p.add_argument("--nc", type=int, default=0, help="sampled extended-system minimum (p = 1, 2)")
    p.add_argument("--samples", type=_positive_int, default=10_000)
    _common(p, "json")
    p.set_defaults(func=cmd_channels)

    p = sub.add_parser("noq-min", help="simplex minimization of the measured-state distance")
    _c_args(p)
    p.add_argument("--grid", type=_positive_int, default=100)
    _common(p, "json")
    p.set_defaults(func=cmd_noq_min)

    p = sub.add_parser("oracle-d1", help="sampled distance to classical states against the closed form")
    _c_args(p)
    p.add_argument("--nc", type=_positive_int, default=100_000)
    p.add_argument("--norm", type=int, choices=(1, 2), default=1)
    p.add_argument("--family", choices=("random", "measured"), default="random")
    p.add_argument("--b-states", choices=("conditional", "random"), default="conditional")
    _common(p, "json")
    p.set_defaults(func=cmd_oracle_d1)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
