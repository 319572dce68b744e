"""Exact diagonalization of the periodic spin-1/2 XXZ chain.

The Hamiltonian is

    H = -1/2 sum_i (sx_i sx_{i+1} + sy_i sy_{i+1} + Delta sz_i sz_{i+1})

with periodic wrap. It conserves total Sz, so the ground state is found
sector by sector. Site 0 is the most significant bit of a basis index and
bit value 0 means spin up, matching ``np.kron`` ordering.

Everything here is finite-L. The transition signatures (jump at
``Delta = 1``, ``|Gxx|``/``|Gzz|`` crossover near ``Delta = -1``) show up
qualitatively; thermodynamic-limit values are out of reach.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .linalg import PAULI, lanczos_lowest
from .measures import MeasureSet, measure_set
from .oracle import _pmap
from .states import CorrelationVector

L_MIN, L_MAX = 2, 16
SWEEP_L_MIN = 4
DEGENERACY_TOL = 1e-10
PATTERN_TOL = 1e-10
DENSE_MAX = 256
DEFAULT_H = 1e-3
CRITICAL_DELTA = 1.0
DELTA_RANGE = (-2.5, 2.5)

SWEEP_COLUMNS = (
    "delta", "L", "energy_density", "dE_dDelta", "Gxx", "Gyy", "Gzz",
    "c1", "c3", "Q", "DG", "D1", "N", "hf_res1", "hf_res2",
)


class PatternError(ValueError):
    """Two-site density matrix lacks the X-state pattern of the chain."""


@dataclass(frozen=True)
class XXZParameters:
    L: int
    delta: float

    def __post_init__(self):
        if self.L % 2:
            raise ValueError(f"L must be even, got {self.L}")
        if not L_MIN <= self.L <= L_MAX:
            raise ValueError(f"L must lie in [{L_MIN}, {L_MAX}], got {self.L}")
        if not math.isfinite(self.delta):
            raise ValueError("delta must be finite")

    @property
    def dim(self) -> int:
        return 1 << self.L


def _bits(L: int) -> np.ndarray:
    """``bits[n, i]`` is the spin bit of site ``i`` in basis state ``n``."""
    n = np.arange(1 << L)
    return (n[:, None] >> (L - 1 - np.arange(L))[None, :]) & 1


def build_hamiltonian(p: XXZParameters) -> sp.csr_matrix:
    """Sparse real Hamiltonian in the full ``2^L`` basis.

    Every bond ``(i, i+1 mod L)`` is summed, so at ``L = 2`` the single
    physical bond appears twice.
    """
    L = p.L
    dim = p.dim
    bits = _bits(L)
    spins = 1 - 2 * bits
    idx = np.arange(dim)
    diag = np.zeros(dim)
    rows, cols = [], []
    for i in range(L):
        j = (i + 1) % L
        diag += spins[:, i] * spins[:, j]
        anti = bits[:, i] != bits[:, j]
        mask = (1 << (L - 1 - i)) | (1 << (L - 1 - j))
        rows.append(idx[anti])
        cols.append(idx[anti] ^ mask)
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    # sx sx + sy sy = 2 (s+ s- + s- s+), times the overall -1/2
    off = sp.coo_matrix((-np.ones(rows.size), (rows, cols)), shape=(dim, dim))
    h = off + sp.diags(-0.5 * p.delta * diag)
    return sp.csr_matrix(h)


def total_sz(L: int) -> sp.dia_matrix:
    return sp.diags((1 - 2 * _bits(L)).sum(axis=1).astype(float))


def sz_commutator_norm(h: sp.spmatrix, L: int) -> float:
    sz = total_sz(L)
    comm = h @ sz - sz @ h
    return float(abs(comm).max()) if comm.nnz else 0.0


@dataclass
class GroundState:
    """Ground energy and an orthonormal basis of the ground space.

    A degenerate ground space stands for the equal-weight mixture of its
    basis vectors.
    """

    energy: float
    vectors: np.ndarray  # (g, 2^L)
    residual: float
    sectors: list[int] = field(default_factory=list)

    @property
    def degeneracy(self) -> int:
        return self.vectors.shape[0]

    def density_matrix(self) -> np.ndarray:
        v = self.vectors
        return v.T @ v / v.shape[0]

    def expectation(self, op: sp.spmatrix) -> float:
        return float(np.mean([v @ (op @ v) for v in self.vectors]))


def _sector_lowest(hs: sp.csr_matrix) -> tuple[np.ndarray, np.ndarray, float]:
    """Ground level of one sector, with all vectors within DEGENERACY_TOL."""
    n = hs.shape[0]
    if n <= DENSE_MAX:
        w, v = np.linalg.eigh(hs.toarray())
        keep = w <= w[0] + DEGENERACY_TOL
        vecs = v[:, keep].T
        res = max(float(np.linalg.norm(hs @ x - w[0] * x)) for x in vecs)
        return w[keep], vecs, res

    energies, vecs, residuals = [], [], []
    while len(vecs) < n:
        e, x, r = lanczos_lowest(hs.dot, n, deflate=vecs)
        if energies and e > energies[0] + DEGENERACY_TOL:
            break
        energies.append(e)
        vecs.append(x)
        residuals.append(r)
    return np.array(energies), np.array(vecs), max(residuals)


def ground_state(h: sp.csr_matrix, p: XXZParameters) -> GroundState:
    """Lowest level over all Sz sectors; degenerate levels are kept in full.

    Sectors up to ``DENSE_MAX`` states use dense diagonalization, larger
    ones Lanczos with deflation. Raises ``ConvergenceError`` (with the
    residual) if Lanczos stalls.
    """
    L = p.L
    up_count = L - _bits(L).sum(axis=1)
    levels = []
    for k in range(L + 1):
        idx = np.flatnonzero(up_count == k)
        hs = h[idx][:, idx].tocsr()
        e, vecs, res = _sector_lowest(hs)
        levels.append((k, idx, e, vecs, res))

    e0 = min(float(lv[2][0]) for lv in levels)
    vectors, sectors, residual = [], [], 0.0
    for k, idx, e, vecs, res in levels:
        for ek, x in zip(e, vecs):
            if ek <= e0 + DEGENERACY_TOL:
                full = np.zeros(p.dim)
                full[idx] = x
                vectors.append(full)
                sectors.append(2 * k - L)
                residual = max(residual, res)
    return GroundState(energy=e0, vectors=np.array(vectors), residual=residual, sectors=sectors)


def two_site_rdm(gs: GroundState, L: int, sites: tuple[int, int] = (0, 1)) -> np.ndarray:
    """Reduced density matrix of two sites, averaged over the ground space."""
    i, j = sites
    if not (0 <= i < L and 0 <= j < L) or i == j:
        raise IndexError(f"bad site pair {sites} for L={L}")
    rho = np.zeros((4, 4))
    for v in gs.vectors:
        t = np.moveaxis(v.reshape((2,) * L), (i, j), (0, 1)).reshape(4, -1)
        rho += t @ t.T
    return rho / gs.degeneracy


def correlators(rdm: np.ndarray) -> tuple[float, float, float]:
    """``(Gxx, Gyy, Gzz)`` from a two-site density matrix."""
    return tuple(float(np.real(np.trace(rdm @ np.kron(s, s)))) for s in PAULI)


def check_pattern(rdm: np.ndarray, tol: float = PATTERN_TOL) -> None:
    """Raise ``PatternError`` unless ``rdm`` has the chain's X-state form.

    Nonzero entries only at the diagonal and the (01, 10) pair, with
    ``a = d``, ``b1 = b2`` and a real coherence ``z``.
    """
    r = np.asarray(rdm)
    allowed = np.eye(4, dtype=bool)
    allowed[1, 2] = allowed[2, 1] = True
    problems = []
    if np.max(np.abs(r[~allowed]), initial=0.0) > tol:
        problems.append("entries outside the X pattern")
    if abs(r[0, 0] - r[3, 3]) > tol:
        problems.append("a != d")
    if abs(r[1, 1] - r[2, 2]) > tol:
        problems.append("b1 != b2")
    if abs(r[1, 2] - np.conj(r[2, 1])) > tol or abs(np.imag(r[1, 2])) > tol:
        problems.append("z not real")
    if problems:
        raise PatternError("; ".join(problems))


def correlation_vector(rdm: np.ndarray) -> CorrelationVector:
    """``c1 = c2 = 2z``, ``c3 = 4a - 1`` after checking the X pattern."""
    check_pattern(rdm)
    z = float(np.real(rdm[1, 2]))
    a = float(np.real(rdm[0, 0]))
    return CorrelationVector(2 * z, 2 * z, 4 * a - 1)


def energy_density(p: XXZParameters) -> float:
    return ground_state(build_hamiltonian(p), p).energy / p.L


@dataclass(frozen=True)
class HFResult:
    de_ddelta: float
    residual_1: float
    residual_2: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.residual_1 < self.bound and self.residual_2 < self.bound


def hellmann_feynman_check(
    p: XXZParameters,
    h: float = DEFAULT_H,
    correlators_at: tuple[float, float, float] | None = None,
    eps: float | None = None,
) -> HFResult:
    """Compare the central-difference ``d eps / d Delta`` with the correlators.

    ``residual_1 = |Delta eps' - eps - (Gxx + Gyy)/2|`` and
    ``residual_2 = |Gzz + 2 eps'|``. Precomputed ``correlators_at`` and
    ``eps`` at ``p.delta`` skip one diagonalization.
    """
    if h <= 0:
        raise ValueError("step must be positive")
    if abs(p.delta - CRITICAL_DELTA) <= h:
        raise ValueError(f"Delta={p.delta} is within h={h} of the level crossing at 1")
    if correlators_at is None or eps is None:
        h0 = build_hamiltonian(p)
        gs = ground_state(h0, p)
        eps = gs.energy / p.L
        correlators_at = correlators(two_site_rdm(gs, p.L))
    gxx, gyy, gzz = correlators_at
    e_plus = energy_density(XXZParameters(p.L, p.delta + h))
    e_minus = energy_density(XXZParameters(p.L, p.delta - h))
    de = (e_plus - e_minus) / (2 * h)
    return HFResult(
        de_ddelta=de,
        residual_1=abs(p.delta * de - eps - (gxx + gyy) / 2),
        residual_2=abs(gzz + 2 * de),
        bound=max(1e-6, 10 * h * h),
    )


@dataclass
class SweepRecord:
    delta: float
    L: int
    energy_density: float
    dE_dDelta: float
    Gxx: float
    Gyy: float
    Gzz: float
    sz: float
    c: CorrelationVector
    measures: MeasureSet
    hf_residuals: tuple[float, float]

    def row(self) -> dict:
        m = self.measures
        return {
            "delta": self.delta,
            "L": self.L,
            "energy_density": self.energy_density,
            "dE_dDelta": self.dE_dDelta,
            "Gxx": self.Gxx,
            "Gyy": self.Gyy,
            "Gzz": self.Gzz,
            "c1": self.c.c1,
            "c3": self.c.c3,
            "Q": m.entropic_q,
            "DG": m.geometric_2norm,
            "D1": m.geometric_1norm,
            "N": m.negativity,
            "hf_res1": self.hf_residuals[0],
            "hf_res2": self.hf_residuals[1],
        }


def sweep_point(delta: float, L: int, h: float = DEFAULT_H) -> SweepRecord:
    """One anisotropy point; derivative columns are NaN within 2h of Delta = 1."""
    p = XXZParameters(L, float(delta))
    gs = ground_state(build_hamiltonian(p), p)
    rdm = two_site_rdm(gs, L)
    gxx, gyy, gzz = correlators(rdm)
    c = correlation_vector(rdm)
    eps = gs.energy / L
    sz = gs.expectation(total_sz(L)) / L
    if abs(p.delta - CRITICAL_DELTA) < 2 * h:
        de, res = math.nan, (math.nan, math.nan)
    else:
        hf = hellmann_feynman_check(p, h, (gxx, gyy, gzz), eps)
        de, res = hf.de_ddelta, (hf.residual_1, hf.residual_2)
    return SweepRecord(
        delta=p.delta, L=L, energy_density=eps, dE_dDelta=de,
        Gxx=gxx, Gyy=gyy, Gzz=gzz, sz=sz, c=c,
        measures=measure_set(c), hf_residuals=res,
    )


def sweep_deltas(delta_range: tuple[float, float], step: float) -> np.ndarray:
    lo, hi = delta_range
    if lo > hi or step <= 0:
        raise ValueError("need lo <= hi and a positive step")
    if lo < DELTA_RANGE[0] - 1e-12 or hi > DELTA_RANGE[1] + 1e-12:
        raise ValueError(f"delta range must lie within {DELTA_RANGE}")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(n), 12)


def sweep(
    delta_range: tuple[float, float],
    step: float,
    L: int,
    h: float = DEFAULT_H,
    threads: int = 1,
) -> list[SweepRecord]:
    """Sweep records on an evenly spaced Delta grid; order and values ignore ``threads``."""
    if L < SWEEP_L_MIN:
        raise ValueError(f"sweeps need L >= {SWEEP_L_MIN}")
    deltas = sweep_deltas(delta_range, step)
    return _pmap(lambda d: sweep_point(d, L, h), list(deltas), threads)


def crossover_delta(records: Sequence[SweepRecord]) -> float | None:
    """Delta where ``|Gxx| - |Gzz|`` changes sign, by linear interpolation."""
    d = np.array([r.delta for r in records])
    g = np.array([abs(r.Gxx) - abs(r.Gzz) for r in records])
    for k in range(len(d) - 1):
        if g[k] == 0:
            return float(d[k])
        if g[k] * g[k + 1] < 0:
            return float(d[k] - g[k] * (d[k + 1] - d[k]) / (g[k + 1] - g[k]))
    return None
