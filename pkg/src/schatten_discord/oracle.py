"""Brute-force checks of the closed forms by sampling classical states.

Classical-quantum states are drawn in fixed-size chunks from the caller's
generator, so the first ``k`` samples do not depend on how many are asked
for. Minima over ``Nc`` and ``Nc' > Nc`` samples are therefore nested, and
``delta`` can only shrink as ``Nc`` grows for a given stream.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .linalg import kron
from .states import (
    _unit_vectors,
    bd_density_matrix,
    correlation_stats,
    cq_matrices,
    qubit_state,
    require_physical,
    sample_bd_uniform_batch,
    sample_classical_params,
    validate_density_matrix,
)

CHUNK = 4096
HISTOGRAM_BINS = 40
DELTA_FLOOR = -1e-9
FIT_NC = (10, 100, 1_000, 10_000, 100_000)


@dataclass
class DeltaStats:
    seed: int | None
    n_states: int
    nc: int
    minima: np.ndarray
    deltas: np.ndarray
    bin_edges: np.ndarray
    counts: np.ndarray
    fit: tuple[float, float] | None = None
    fit_points: list[tuple[int, float]] = field(default_factory=list)
    states: np.ndarray | None = None

    @property
    def mean_delta(self) -> float:
        return float(np.mean(self.deltas))

    def to_dict(self) -> dict:
        out = {
            "seed": self.seed,
            "N_states": self.n_states,
            "Nc": self.nc,
            "mean_delta": self.mean_delta,
            "min_delta": float(np.min(self.deltas)),
            "bin_edges": [float(x) for x in self.bin_edges],
            "counts": [int(x) for x in self.counts],
        }
        if self.fit is not None:
            out["fit"] = {"amplitude": self.fit[0], "exponent": self.fit[1]}
            out["fit_points"] = [[int(n), float(m)] for n, m in self.fit_points]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _pmap(fn: Callable, items: Sequence, threads: int = 1) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _classical_chunk(rng: np.random.Generator) -> np.ndarray:
    return cq_matrices(*sample_classical_params(rng, CHUNK))


def _trace_norms(x: np.ndarray) -> np.ndarray:
    # LAPACK here: this loop runs tens of millions of 4x4 spectra
    return np.abs(np.linalg.eigvalsh(x)).sum(axis=-1)


def _prefix_minima(next_chunk: Callable[[], np.ndarray], checkpoints: Sequence[int]) -> list[float]:
    """Running minimum over a chunked sample stream, read off at each checkpoint."""
    out: list[float] = []
    best = np.inf
    consumed = 0
    current = np.empty(0)
    offset = 0
    for nc in sorted(checkpoints):
        while consumed < nc:
            if offset == len(current):
                current, offset = next_chunk(), 0
            take = min(len(current) - offset, nc - consumed)
            best = min(best, float(np.min(current[offset:offset + take])))
            offset += take
            consumed += take
        out.append(best)
    return out


def _d1_stream(rho: np.ndarray, rng: np.random.Generator, family: str) -> Callable[[], np.ndarray]:
    if family == "random":
        return lambda: _trace_norms(rho[None] - _classical_chunk(rng))
    if family == "measured":
        def measured() -> np.ndarray:
            axes = _unit_vectors(rng, CHUNK)
            return _trace_norms(rho[None] - _measure_a(rho, axes))
        return measured
    raise ValueError(f"unknown classical family {family!r}; use 'random' or 'measured'")


def _measure_a(rho: np.ndarray, axes: np.ndarray, db: int = 2) -> np.ndarray:
    out = 0.0
    for sign in (1.0, -1.0):
        proj = kron(qubit_state(sign * axes), np.eye(db))
        out = out + proj @ rho @ proj
    return out


def d1_sample_minima(
    rho: np.ndarray, checkpoints: Sequence[int], rng: np.random.Generator, family: str = "random"
) -> list[float]:
    """Minimum trace distance to the first ``Nc`` sampled classical states, per checkpoint."""
    if min(checkpoints) < 1:
        raise ValueError("Nc must be at least 1")
    rho = validate_density_matrix(rho)
    if rho.shape != (4, 4):
        raise ValueError("expected a two-qubit density matrix")
    return _prefix_minima(_d1_stream(rho, rng, family), checkpoints)


def d1_sample_min(rho: np.ndarray, nc: int, rng: np.random.Generator, family: str = "random") -> float:
    """Minimum trace distance from ``rho`` to ``nc`` sampled classical states.

    ``family="random"`` draws classical-quantum states with uniform weight,
    Haar-random measurement axis and Bloch-ball conditional states.
    ``family="measured"`` draws Haar-random axes and uses the measured
    state of ``rho`` along each; both are subsets of the classical set, so
    either minimum bounds the true distance from above.
    """
    if nc < 1:
        raise ValueError("Nc must be at least 1")
    return d1_sample_minima(rho, [nc], rng, family)[0]


def delta_statistic(c, nc: int, rng: np.random.Generator, family: str = "random") -> float:
    c = require_physical(c)
    return d1_sample_min(bd_density_matrix(c), nc, rng, family) - correlation_stats(c).c_zero


def _state_streams(seed, n_states: int):
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    state_seq, work_seq = root.spawn(2)
    cs = sample_bd_uniform_batch(np.random.default_rng(state_seq), n_states)
    return cs, work_seq.spawn(n_states)


def delta_curves(
    n_states: int,
    checkpoints: Sequence[int],
    seed=0,
    threads: int = 1,
    family: str = "random",
) -> tuple[np.ndarray, np.ndarray]:
    """Per-state deltas at each Nc checkpoint using one nested stream per state.

    Returns ``(cs, deltas)`` with ``deltas`` of shape ``(n_states, len(checkpoints))``.
    Results depend only on ``seed``, never on ``threads``.
    """
    checkpoints = sorted(int(x) for x in checkpoints)
    cs, seqs = _state_streams(seed, n_states)
    c0 = np.sort(np.abs(cs), axis=1)[:, 1]

    def work(i: int) -> list[float]:
        rng = np.random.default_rng(seqs[i])
        return d1_sample_minima(bd_density_matrix(cs[i]), checkpoints, rng, family)

    minima = np.asarray(_pmap(work, range(n_states), threads))
    return cs, minima - c0[:, None]


def histogram(deltas: np.ndarray, bins: int = HISTOGRAM_BINS) -> tuple[np.ndarray, np.ndarray]:
    """Uniform bins from 0 (or the smallest delta, if below 0) to the largest delta."""
    lo = min(0.0, float(np.min(deltas)))
    hi = max(float(np.max(deltas)), lo + 1e-12)
    counts, edges = np.histogram(deltas, bins=bins, range=(lo, hi))
    return edges, counts


def delta_histogram(
    n_states: int,
    nc: int,
    bins: int = HISTOGRAM_BINS,
    seed=0,
    threads: int = 1,
    family: str = "random",
) -> DeltaStats:
    """Delta for ``n_states`` uniform Bell-diagonal states against ``nc`` classical samples."""
    if n_states < 1 or nc < 1:
        raise ValueError("N_states and Nc must be positive")
    cs, deltas = delta_curves(n_states, [nc], seed, threads, family)
    deltas = deltas[:, 0]
    c0 = np.sort(np.abs(cs), axis=1)[:, 1]
    edges, counts = histogram(deltas, bins)
    return DeltaStats(
        seed=seed if isinstance(seed, int) else None,
        n_states=n_states,
        nc=nc,
        minima=deltas + c0,
        deltas=deltas,
        bin_edges=edges,
        counts=counts,
        states=cs,
    )


def powerlaw_fit(points: Iterable[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares line through ``(log10 Nc, log10 mean)``; returns ``(10**intercept, slope)``."""
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 3:
        raise ValueError("power-law fit needs at least three points")
    if np.any(pts <= 0):
        raise ValueError("power-law fit needs positive Nc and mean values")
    slope, intercept = np.polyfit(np.log10(pts[:, 0]), np.log10(pts[:, 1]), 1)
    return float(10.0**intercept), float(slope)


def delta_decay(
    n_states: int = 200,
    nc_values: Sequence[int] = FIT_NC,
    seed=0,
    threads: int = 1,
) -> tuple[list[tuple[int, float]], tuple[float, float]]:
    """Mean delta against Nc on one set of states, and its power-law fit."""
    _, deltas = delta_curves(n_states, nc_values, seed, threads)
    points = [(int(n), float(m)) for n, m in zip(sorted(nc_values), deltas.mean(axis=0))]
    return points, powerlaw_fit(points)


# --- Hilbert-Schmidt oracle --------------------------------------------------

def _random_states(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    g = rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))
    w = g @ np.swapaxes(g.conj(), -1, -2)
    return w / np.real(np.trace(w, axis1=-2, axis2=-1))[:, None, None]


def _conditional_blocks(rho: np.ndarray, axes: np.ndarray, db: int) -> np.ndarray:
    """Classical state ``sum_k Pi_k x tr_a[(Pi_k x I) rho]`` for each axis."""
    out = 0.0
    t = rho.reshape(2, db, 2, db)
    for sign in (1.0, -1.0):
        proj = qubit_state(sign * axes)
        block = np.einsum("mji,ikjl->mkl", proj, t)
        out = out + kron(proj, block)
    return out


def d2_sample_min(
    rho: np.ndarray,
    dims: Sequence[int],
    nc: int,
    rng: np.random.Generator,
    b_states: str = "conditional",
) -> float:
    """Minimum squared Hilbert-Schmidt distance to ``nc`` sampled classical states.

    Qubit a is measured along a Haar-random axis. With
    ``b_states="conditional"`` the b-side operators are the blocks
    ``tr_a[(Pi_k x I) rho]``, the Hilbert-Schmidt optimum for that axis.
    With ``b_states="random"`` the weights are uniform and the b-side
    states are normalized Ginibre matrices ``G G^dag / tr``.
    """
    da, db = (int(d) for d in dims)
    if da != 2 or db not in (2, 4):
        raise ValueError(f"unsupported dims {tuple(dims)}; need (2, 2) or (2, 4)")
    if nc < 1:
        raise ValueError("Nc must be at least 1")
    rho = validate_density_matrix(rho)
    if rho.shape != (da * db, da * db):
        raise ValueError("rho does not match dims")

    def chunk() -> np.ndarray:
        axes = _unit_vectors(rng, CHUNK)
        if b_states == "conditional":
            sigma = _conditional_blocks(rho, axes, db)
        elif b_states == "random":
            p = rng.random(CHUNK)[:, None, None]
            sigma = (p * kron(qubit_state(axes), _random_states(rng, CHUNK, db))
                     + (1 - p) * kron(qubit_state(-axes), _random_states(rng, CHUNK, db)))
        else:
            raise ValueError(f"unknown b_states {b_states!r}")
        diff = rho[None] - sigma
        return np.einsum("nij,nij->n", diff.real, diff.real) + np.einsum("nij,nij->n", diff.imag, diff.imag)

    return _prefix_minima(chunk, [nc])[0]

