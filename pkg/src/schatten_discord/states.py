"""Bell-diagonal and classical-quantum two-qubit states.

A Bell-diagonal state is fixed by its correlation vector ``c = (c1, c2, c3)``::

    rho = (I x I + c1 sx x sx + c2 sy x sy + c3 sz x sz) / 4

and is physical when ``c`` lies inside the tetrahedron spanned by the four
Bell states ``(1, 1, -1)``, ``(-1, -1, -1)``, ``(1, -1, 1)``, ``(-1, 1, 1)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .linalg import I2, PAULI, is_hermitian, kron, partial_trace

PHYSICAL_TOL = 1e-12
MARGINAL_TOL = 1e-8

BELL_VERTICES = ((1.0, 1.0, -1.0), (-1.0, -1.0, -1.0), (1.0, -1.0, 1.0), (-1.0, 1.0, 1.0))

_SIGMA_PAIRS = np.array([np.kron(s, s) for s in PAULI])
_PAULI_STACK = np.array(PAULI)


class UnphysicalStateError(ValueError):
    pass


@dataclass(frozen=True)
class CorrelationVector:
    c1: float
    c2: float
    c3: float

    def __iter__(self) -> Iterator[float]:
        return iter((self.c1, self.c2, self.c3))

    def __array__(self, dtype=None, copy=None):
        return np.array([self.c1, self.c2, self.c3], dtype=dtype or float)

    @classmethod
    def of(cls, c) -> "CorrelationVector":
        if isinstance(c, cls):
            return c
        c1, c2, c3 = (float(x) for x in c)
        return cls(c1, c2, c3)

    @property
    def norm_sq(self) -> float:
        return self.c1**2 + self.c2**2 + self.c3**2

    @property
    def alpha(self) -> np.ndarray:
        return np.array([self.c1**2, self.c2**2, self.c3**2])

    @property
    def beta(self) -> np.ndarray:
        a1, a2, a3 = self.alpha
        return np.array([a2 * a3, a1 * a3, a1 * a2])

    def to_json(self) -> str:
        return json.dumps([self.c1, self.c2, self.c3])

    @classmethod
    def from_json(cls, text: str) -> "CorrelationVector":
        return cls.of(json.loads(text))


class CorrelationTriple(NamedTuple):
    c_plus: float
    c_zero: float
    c_minus: float


@dataclass(frozen=True)
class ClassicalQuantumState:
    """``sum_k p_k Pi_k x rho_k`` with ``Pi_+- = (I +- n.sigma)/2`` on qubit a.

    ``weights`` is ``(p_plus, p_minus)`` and ``bloch_b`` holds the Bloch
    vectors of the two conditional states of qubit b.
    """

    weights: tuple[float, float]
    axis: tuple[float, float, float]
    bloch_b: tuple[tuple[float, float, float], tuple[float, float, float]]

    def __post_init__(self):
        p = np.asarray(self.weights, dtype=float)
        if p.shape != (2,) or np.any(p < -PHYSICAL_TOL) or abs(p.sum() - 1.0) > PHYSICAL_TOL:
            raise ValueError(f"weights must be a probability pair, got {self.weights}")
        if abs(np.linalg.norm(self.axis) - 1.0) > PHYSICAL_TOL:
            raise ValueError("measurement axis must be a unit vector")
        for r in self.bloch_b:
            if np.linalg.norm(r) > 1.0 + PHYSICAL_TOL:
                raise ValueError("Bloch vector outside the unit ball")


@dataclass(frozen=True)
class BellDiagonalClassicalState:
    axis: int
    l: float

    def __post_init__(self):
        if self.axis not in (1, 2, 3):
            raise ValueError("axis must be 1, 2 or 3")
        if abs(self.l) > 1.0 + PHYSICAL_TOL:
            raise ValueError(f"|l| must not exceed 1, got {self.l}")

    @property
    def correlation(self) -> CorrelationVector:
        c = [0.0, 0.0, 0.0]
        c[self.axis - 1] = self.l
        return CorrelationVector.of(c)


@dataclass(frozen=True)
class MeasurementDirection:
    """Squared components ``u = (n1^2, n2^2, n3^2)`` of a measurement axis."""

    u1: float
    u2: float
    u3: float

    def __post_init__(self):
        u = np.array([self.u1, self.u2, self.u3])
        if np.any(u < -PHYSICAL_TOL) or abs(u.sum() - 1.0) > PHYSICAL_TOL:
            raise ValueError(f"u must lie on the unit simplex, got {tuple(u)}")

    @classmethod
    def from_axis(cls, n) -> "MeasurementDirection":
        n = np.asarray(n, dtype=float)
        n = n / np.linalg.norm(n)
        return cls(*(n**2))

    def __array__(self, dtype=None, copy=None):
        return np.array([self.u1, self.u2, self.u3], dtype=dtype or float)


def bd_eigenvalues(c) -> np.ndarray:
    """Eigenvalues ``(l00, l01, l10, l11)`` of the Bell-diagonal state ``c``.

    Works on a single vector or on an array of shape ``(..., 3)``.
    """
    c = np.asarray(c, dtype=float)
    c1, c2, c3 = c[..., 0], c[..., 1], c[..., 2]
    lam = [
        (1 + (-1) ** i * c1 - (-1) ** (i + j) * c2 + (-1) ** j * c3) / 4
        for i in (0, 1)
        for j in (0, 1)
    ]
    return np.stack(lam, axis=-1)


def is_physical(c, tol: float = PHYSICAL_TOL):
    out = np.min(bd_eigenvalues(c), axis=-1) >= -tol
    return bool(out) if np.ndim(out) == 0 else out


def require_physical(c) -> CorrelationVector:
    c = CorrelationVector.of(c)
    if not is_physical(c):
        raise UnphysicalStateError(f"correlation vector {tuple(c)} lies outside tetrahedron")
    return c


def bd_density_matrix(c) -> np.ndarray:
    """4x4 Bell-diagonal density matrix; ``c`` may be a stack of shape (..., 3)."""
    arr = np.asarray(c, dtype=float)
    if not np.all(is_physical(arr)):
        raise UnphysicalStateError(f"correlation vector {arr.tolist()} lies outside tetrahedron")
    return _bd_operator(arr)


def _bd_operator(c: np.ndarray) -> np.ndarray:
    return 0.25 * (np.eye(4) + np.tensordot(c, _SIGMA_PAIRS, axes=([-1], [0])))


def correlations_of(rho: np.ndarray) -> np.ndarray:
    """``tr[rho (s_i x s_i)]`` for i = x, y, z; no validation."""
    return np.real(np.einsum("...ij,kji->...k", rho, _SIGMA_PAIRS))


def validate_density_matrix(rho: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if not is_hermitian(rho, 1e-12):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ValueError(f"density matrix trace {np.trace(rho).real} != 1")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def from_density_matrix(rho: np.ndarray) -> CorrelationVector:
    """Correlation vector of a Bell-diagonal 4x4 density matrix.

    Raises ``ValueError`` if either marginal differs from ``I/2`` by more
    than 1e-8 or if the matrix has weight outside the Bell-diagonal span.
    """
    rho = validate_density_matrix(rho)
    if rho.shape != (4, 4):
        raise ValueError("expected a two-qubit (4x4) density matrix")
    for which in ("a", "b"):
        if np.max(np.abs(partial_trace(rho, (2, 2), which) - I2 / 2)) > MARGINAL_TOL:
            raise ValueError("marginals are not maximally mixed; state is not Bell-diagonal")
    c = correlations_of(rho)
    if np.max(np.abs(_bd_operator(c) - rho)) > MARGINAL_TOL:
        raise ValueError("state has correlations outside the Bell-diagonal span")
    return CorrelationVector.of(c)


def qubit_state(r) -> np.ndarray:
    """``(I + r.sigma)/2`` for Bloch vectors of shape (..., 3)."""
    r = np.asarray(r, dtype=float)
    return 0.5 * (I2 + np.tensordot(r, _PAULI_STACK, axes=([-1], [0])))


def cq_matrices(p, n, r_plus, r_minus) -> np.ndarray:
    """Vectorized classical-quantum assembly; all arguments batch along axis 0."""
    p = np.asarray(p, dtype=float)[..., None, None]
    proj_plus = qubit_state(n)
    proj_minus = qubit_state(-np.asarray(n, dtype=float))
    return p * kron(proj_plus, qubit_state(r_plus)) + (1 - p) * kron(proj_minus, qubit_state(r_minus))


def cq_density_matrix(s: ClassicalQuantumState) -> np.ndarray:
    return cq_matrices(s.weights[0], s.axis, s.bloch_b[0], s.bloch_b[1])


def bd_classical_density_matrix(s: BellDiagonalClassicalState) -> np.ndarray:
    return bd_density_matrix(s.correlation)


def correlation_stats(c) -> CorrelationTriple:
    """Largest, middle and smallest of ``|c1|, |c2|, |c3|``."""
    lo, mid, hi = np.sort(np.abs(np.asarray(c, dtype=float)))
    return CorrelationTriple(float(hi), float(mid), float(lo))


def measured_state(rho: np.ndarray, n, dims=(2, 2)) -> np.ndarray:
    """Non-selective projective measurement along ``n`` on the first factor.

    ``n`` may be a stack of axes of shape (m, 3); the result then has shape
    ``(m, d, d)``.
    """
    da, db = dims
    if da != 2:
        raise ValueError("the measured side must be a qubit")
    out = 0.0
    for sign in (1.0, -1.0):
        proj = kron(qubit_state(sign * np.asarray(n, dtype=float)), np.eye(db))
        out = out + proj @ rho @ proj
    return out


# --- sampling ---------------------------------------------------------------

def sample_bd_uniform(rng: np.random.Generator) -> CorrelationVector:
    """One correlation vector uniform in the tetrahedron (cube rejection)."""
    while True:
        c = rng.uniform(-1.0, 1.0, size=3)
        if is_physical(c):
            return CorrelationVector.of(c)


def sample_bd_uniform_batch(
    rng: np.random.Generator, n: int, return_acceptance: bool = False
):
    """``n`` correlation vectors, shape (n, 3), uniform in the tetrahedron."""
    out = np.empty((0, 3))
    drawn = 0
    while out.shape[0] < n:
        need = n - out.shape[0]
        cand = rng.uniform(-1.0, 1.0, size=(3 * need + 16, 3))
        drawn += cand.shape[0]
        out = np.vstack([out, cand[is_physical(cand)]])
    # acceptance counts everything drawn, including the surplus that is discarded
    kept = out[:n]
    if return_acceptance:
        return kept, out.shape[0] / drawn
    return kept


def _unit_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _ball_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    return _unit_vectors(rng, n) * rng.random(n)[:, None] ** (1.0 / 3.0)


def sample_classical_params(rng: np.random.Generator, n: int):
    """Raw parameters of ``n`` random classical-quantum states.

    ``p`` uniform on [0, 1], axis uniform on the sphere, both conditional
    qubit states uniform in the Bloch ball. Draw order is fixed so equal
    seeds give equal streams.
    """
    p = rng.random(n)
    axis = _unit_vectors(rng, n)
    r_plus = _ball_vectors(rng, n)
    r_minus = _ball_vectors(rng, n)
    return p, axis, r_plus, r_minus


def sample_classical(rng: np.random.Generator) -> ClassicalQuantumState:
    p, n, rp, rm = sample_classical_params(rng, 1)
    return ClassicalQuantumState(
        weights=(float(p[0]), float(1 - p[0])),
        axis=tuple(float(x) for x in n[0]),
        bloch_b=(tuple(float(x) for x in rp[0]), tuple(float(x) for x in rm[0])),
    )
