"""Correlation measures for Bell-diagonal two-qubit states.

All closed forms take a correlation vector ``c`` (anything iterable of three
floats, or a :class:`~schatten_discord.states.CorrelationVector`) and reject
vectors outside the physical tetrahedron.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .linalg import partial_trace, partial_transpose, schatten_norm, von_neumann_entropy
from .states import (
    CorrelationVector,
    MeasurementDirection,
    UnphysicalStateError,
    bd_density_matrix,
    bd_eigenvalues,
    correlation_stats,
    is_physical,
    measured_state,
    qubit_state,
    require_physical,
    validate_density_matrix,
)

HIERARCHY_TOL = 1e-10
RADICAND_ERROR = 1e-9


@dataclass(frozen=True)
class MeasureSet:
    entropic_q: float
    geometric_2norm: float
    geometric_1norm: float
    negativity: float

    def as_dict(self) -> dict:
        return asdict(self)


class GammaPair(NamedTuple):
    gamma_minus: float
    gamma_plus: float


@dataclass(frozen=True)
class HierarchyReport:
    d1_sq: float
    two_dg: float
    q_sq: float
    n_sq: float
    d1_over_dg: bool
    dg_over_q: bool
    dg_over_n: bool

    @property
    def ok(self) -> bool:
        return self.d1_over_dg and self.dg_over_q and self.dg_over_n


def _xlog2x(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0.0, x, 1.0)
    return np.where(x > 0.0, x * np.log2(safe), 0.0)


def entropic_discord_bd(c) -> float:
    """Entropic discord of a Bell-diagonal state from its spectrum and ``c_plus``.

    Uses ``0 log 0 = 0`` so the Bell vertices and tetrahedron faces are
    finite. Roundoff below zero is clipped.
    """
    c = require_physical(c)
    lam = np.clip(bd_eigenvalues(c), 0.0, None)
    c_plus = correlation_stats(c).c_plus
    q = (
        2.0
        + float(np.sum(_xlog2x(lam)))
        - 0.5 * float(_xlog2x(1.0 - c_plus) + _xlog2x(1.0 + c_plus))
    )
    return max(q, 0.0)


def geometric_discord_2norm(c) -> float:
    c = require_physical(c)
    t = correlation_stats(c)
    return (t.c_minus**2 + t.c_zero**2) / 4.0


def geometric_discord_1norm(c) -> float:
    """Trace-norm geometric discord: the middle value of ``|c_i|``."""
    return correlation_stats(require_physical(c)).c_zero


def negativity(rho: np.ndarray, dims=(2, 2)) -> float:
    rho = validate_density_matrix(rho)
    value = schatten_norm(partial_transpose(rho, dims, "a"), 1) - 1.0
    if value < -1e-12:
        raise ValueError(f"negativity {value} below roundoff; input is not a state")
    return max(value, 0.0)


def negativity_bd(c) -> float:
    return negativity(bd_density_matrix(require_physical(c)))


def measure_set(c) -> MeasureSet:
    c = require_physical(c)
    return MeasureSet(
        entropic_q=entropic_discord_bd(c),
        geometric_2norm=geometric_discord_2norm(c),
        geometric_1norm=geometric_discord_1norm(c),
        negativity=negativity_bd(c),
    )


# --- entropic discord by direct minimization over projective measurements --

def _axes(theta, phi) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return np.stack(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1
    )


def conditional_entropy(rho: np.ndarray, axes: np.ndarray) -> np.ndarray:
    """``sum_k p_k S(rho_b|k)`` after measuring qubit a along each axis."""
    axes = np.atleast_2d(axes)
    total = np.zeros(axes.shape[0])
    for sign in (1.0, -1.0):
        proj = qubit_state(sign * axes)
        # tr_a[(Pi x I) rho] for each axis
        blocks = np.einsum("mji,ikjl->mkl", proj, rho.reshape(2, 2, 2, 2))
        p = np.real(np.trace(blocks, axis1=1, axis2=2))
        live = p > 1e-14
        cond = np.where(live[:, None, None], blocks / np.where(live, p, 1.0)[:, None, None],
                        np.eye(2) / 2)
        total += np.where(live, p * von_neumann_entropy(cond), 0.0)
    return total


def entropic_discord_numeric(c, grid_resolution: int = 64, return_axis: bool = False):
    """Entropic discord by brute-force search over projective measurements on a.

    A ``(theta, phi)`` grid on the upper hemisphere seeds a Nelder-Mead
    refinement. All entropies come from matrix spectra, independent of
    the closed form in :func:`entropic_discord_bd`.
    """
    c = require_physical(c)
    rho = bd_density_matrix(c)
    rho_a = partial_trace(rho, (2, 2), "b")
    s_a = von_neumann_entropy(rho_a)
    s_ab = von_neumann_entropy(rho)

    thetas = np.linspace(0.0, np.pi / 2, grid_resolution + 1)
    phis = np.linspace(0.0, 2 * np.pi, 2 * grid_resolution, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    values = conditional_entropy(rho, _axes(tt.ravel(), pp.ravel()))
    best = int(np.argmin(values))
    x0 = np.array([tt.ravel()[best], pp.ravel()[best]])

    res = minimize(
        lambda x: float(conditional_entropy(rho, _axes(x[0], x[1])[None])[0]),
        x0,
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 2000},
    )
    cond_min = min(float(res.fun), float(values[best]))
    axis = _axes(*res.x) if res.fun <= values[best] else _axes(*x0)
    q = s_a - s_ab + cond_min
    if return_axis:
        return q, axis
    return q


# --- trace-norm minimization along the classical axes ------------------------

def _cyclic(c: np.ndarray, axis: int) -> tuple[float, float, float]:
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {axis}")
    i = axis - 1
    return c[i], c[(i + 1) % 3], c[(i + 2) % 3]


def classical_axis_eigenvalues(c, axis: int, l: float) -> np.ndarray:
    """Spectrum of ``rho - rho_c`` where ``rho_c`` sits at ``l`` on a classical axis."""
    ci, cj, ck = _cyclic(np.asarray(CorrelationVector.of(c), dtype=float), axis)
    return np.array([
        ((-1) ** p * (ci - l) - (-1) ** (p + q) * cj + (-1) ** q * ck) / 4.0
        for p in (0, 1)
        for q in (0, 1)
    ])


def classical_axis_distance(c, axis: int, l: float) -> float:
    """Trace distance from ``c`` to the Bell-diagonal classical state ``l e_axis``."""
    c = require_physical(c)
    if abs(l) > 1.0 + 1e-12:
        raise ValueError(f"|l| must not exceed 1, got {l}")
    ci, cj, ck = _cyclic(np.asarray(c, dtype=float), axis)
    d = l - ci
    d_plus, d_minus = ck + cj, ck - cj
    return (abs(d + d_plus) + abs(d - d_plus) + abs(d + d_minus) + abs(d - d_minus)) / 4.0


def classical_axis_min(c, axis: int) -> float:
    """Minimum over ``l`` of :func:`classical_axis_distance`, reached at ``l = c_axis``."""
    c = require_physical(c)
    return classical_axis_distance(c, axis, np.asarray(c)[axis - 1])


def d1_by_classical_axes(c) -> float:
    return min(classical_axis_min(c, i) for i in (1, 2, 3))


# --- negativity of quantumness: distance to the measured state -------------

def _pivot_root(a: tuple, u: tuple, i: int, j: int, k: int) -> np.ndarray:
    """``sqrt(A^2 - 4 beta.u)`` written around pivot ``i``.

    On the simplex the discriminant equals
    ``(u_i (a_j - a_k) + u_j (a_i - a_k) - u_k (a_i - a_j))^2
    + 4 u_j u_k (a_i - a_k)(a_i - a_j)``. With ``a_i`` the largest entry the
    second term is nonnegative, so the root carries no cancellation error.
    """
    lin = u[i] * (a[j] - a[k]) + u[j] * (a[i] - a[k]) - u[k] * (a[i] - a[j])
    cross = np.clip(u[j] * u[k] * (a[i] - a[k]) * (a[i] - a[j]), 0.0, None)
    return np.hypot(lin, 2.0 * np.sqrt(cross))


def _gammas(alpha: np.ndarray, beta: np.ndarray, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """gamma_minus, gamma_plus for ``alpha``/``beta`` of shape (..., 3) and ``u`` of shape (m, 3).

    Output arrays have shape (..., m). With ``sum(u) = 1`` the first radicand
    term equals ``sum_i u_i (a_j + a_k)``. ``gamma_minus`` comes from
    ``A^2 - B^2 = disc`` as ``sqrt(disc / (A + B))``, with the discriminant
    in the sum-of-squares form of :func:`_pivot_root`; the direct
    ``sqrt(A - B)`` loses most of its digits wherever ``gamma_minus`` is small.
    """
    alpha = np.asarray(alpha, dtype=float)[..., None, :]
    beta = np.asarray(beta, dtype=float)[..., None, :]
    a = (alpha[..., 0], alpha[..., 1], alpha[..., 2])
    uu = (u[:, 0], u[:, 1], u[:, 2])
    big_a = uu[0] * (a[1] + a[2]) + uu[1] * (a[0] + a[2]) + uu[2] * (a[0] + a[1])
    bu = np.clip(np.sum(u * beta, axis=-1), 0.0, None)
    big_b = 2.0 * np.sqrt(bu)
    if np.any(big_a - big_b < -RADICAND_ERROR):
        raise ValueError("negative radicand in gamma_minus; inputs are inconsistent")
    pivot = np.argmax(alpha, axis=-1)
    root = np.select(
        [pivot == 0, pivot == 1],
        [_pivot_root(a, uu, 0, 1, 2), _pivot_root(a, uu, 1, 2, 0)],
        _pivot_root(a, uu, 2, 0, 1),
    )
    plus = np.clip(big_a + big_b, 0.0, None)
    safe = np.sqrt(np.where(plus > 0.0, plus, 1.0))
    minus = np.where(plus > 0.0, root / safe, 0.0)
    # the two forms differ by roundoff where gamma_minus = gamma_plus
    minus = np.minimum(minus, np.sqrt(plus))
    return minus / 4.0, np.sqrt(plus) / 4.0


def _alpha_beta(c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    alpha = np.asarray(c, dtype=float) ** 2
    beta = np.stack(
        [alpha[..., 1] * alpha[..., 2], alpha[..., 0] * alpha[..., 2], alpha[..., 0] * alpha[..., 1]],
        axis=-1,
    )
    return alpha, beta


def gamma_pm(c, u) -> GammaPair:
    """Magnitudes of the eigenvalues of ``rho - rho'`` for measurement direction ``u``."""
    c = require_physical(c)
    u = np.asarray(MeasurementDirection(*np.asarray(u, dtype=float)), dtype=float)
    gm, gp = _gammas(*_alpha_beta(np.asarray(c)), u[None, :])
    return GammaPair(float(gm[0]), float(gp[0]))


def simplex_lattice(resolution: int) -> np.ndarray:
    """Barycentric lattice ``(i, j, k)/R`` with ``i + j + k = R``; includes the vertices."""
    if resolution < 1:
        raise ValueError("resolution must be at least 1")
    pts = [
        (i, j, resolution - i - j)
        for i in range(resolution + 1)
        for j in range(resolution + 1 - i)
    ]
    return np.asarray(pts, dtype=float) / resolution


_VERTICES = np.eye(3)


def noq_objective(c, u: np.ndarray) -> np.ndarray:
    """``2 (gamma_minus + gamma_plus)`` for each row of ``u``.

    ``c`` may also be a stack of physical vectors of shape (n, 3); the
    result then has shape (n, len(u)).
    """
    c = np.asarray(c, dtype=float)
    if not np.all(is_physical(c)):
        raise UnphysicalStateError("correlation vector lies outside tetrahedron")
    gm, gp = _gammas(*_alpha_beta(c), np.atleast_2d(np.asarray(u, dtype=float)))
    return 2.0 * (gm + gp)


def noq_minimize(c, grid_resolution: int = 100) -> tuple[float, np.ndarray]:
    """Minimize the measured-state trace distance over the simplex of ``u``.

    Returns the minimum and a lattice point that attains it. The vertices
    are always part of the lattice; when a vertex ties the lattice minimum
    to within 1e-12 the vertex is reported.
    """
    u = simplex_lattice(grid_resolution)
    values = noq_objective(c, u)
    best = int(np.argmin(values))
    vertex_values = noq_objective(c, _VERTICES)
    v = int(np.argmin(vertex_values))
    if vertex_values[v] <= values[best] + 1e-12:
        return float(vertex_values[v]), _VERTICES[v].copy()
    return float(values[best]), u[best]


def noq_grid_and_vertex_min(cs: np.ndarray, grid_resolution: int = 100, chunk: int = 256):
    """Batched lattice minimum and vertex minimum for a stack of vectors (n, 3)."""
    cs = np.atleast_2d(np.asarray(cs, dtype=float))
    u = simplex_lattice(grid_resolution)
    grid_min = np.empty(len(cs))
    for start in range(0, len(cs), chunk):
        block = cs[start:start + chunk]
        grid_min[start:start + chunk] = noq_objective(block, u).min(axis=1)
    vertex_min = noq_objective(cs, _VERTICES).min(axis=1)
    return grid_min, vertex_min


def noq_vertex_min(c) -> float:
    return float(np.min(noq_objective(c, _VERTICES)))


def noq_by_matrix(c, n) -> float:
    """Trace distance between ``rho`` and its measured version, computed from matrices."""
    rho = bd_density_matrix(require_physical(c))
    return schatten_norm(rho - measured_state(rho, n), 1)


# --- hierarchy and monotonicity --------------------------------------------

def hierarchy_check(c, tol: float = HIERARCHY_TOL) -> HierarchyReport:
    m = measure_set(c)
    d1_sq = m.geometric_1norm**2
    two_dg = 2.0 * m.geometric_2norm
    q_sq = m.entropic_q**2
    n_sq = m.negativity**2
    return HierarchyReport(
        d1_sq=d1_sq,
        two_dg=two_dg,
        q_sq=q_sq,
        n_sq=n_sq,
        d1_over_dg=d1_sq >= two_dg - tol,
        dg_over_q=two_dg >= q_sq - tol,
        dg_over_n=two_dg >= n_sq - tol,
    )


class MonotonicityRow(NamedTuple):
    c1: float
    c3: float
    dQ_dc3: float
    dDG_dc3: float
    dD1_dc3: float
    related_Q_DG: bool
    related_Q_D1: bool


MONOTONICITY_COLUMNS = MonotonicityRow._fields


def u1_boundary_distance(c1: float, c3: float) -> float:
    """Distance along c3 from ``(c1, c1, c3)`` to the edge of the physical triangle."""
    return min(c3 + 1.0, 1.0 - 2.0 * abs(c1) - c3)


def c3_derivatives(c1: float, c3: float, step: float = 1e-4) -> tuple[float, float, float]:
    """Central differences of (Q, D_G, D_1) along c3 for U(1) states ``(c1, c1, c3)``."""
    if step <= 0:
        raise ValueError("step must be positive")
    if u1_boundary_distance(c1, c3) < step:
        raise ValueError(
            f"step {step} exceeds the distance from ({c1}, {c3}) to the triangle boundary"
        )
    lo = (c1, c1, c3 - step)
    hi = (c1, c1, c3 + step)
    return (
        (entropic_discord_bd(hi) - entropic_discord_bd(lo)) / (2 * step),
        (geometric_discord_2norm(hi) - geometric_discord_2norm(lo)) / (2 * step),
        (geometric_discord_1norm(hi) - geometric_discord_1norm(lo)) / (2 * step),
    )


def _related(dx: float, dy: float, rule: str, eps: float, zero_tol: float) -> bool:
    if rule == "product":
        return dx * dy >= -eps
    if rule == "sign":
        sx = 0 if abs(dx) < zero_tol else int(np.sign(dx))
        sy = 0 if abs(dy) < zero_tol else int(np.sign(dy))
        return sx == sy
    raise ValueError(f"unknown rule {rule!r}; use 'product' or 'sign'")


def monotonicity_point(
    c1: float, c3: float, step: float = 1e-4, eps: float = 1e-8,
    rule: str = "product", zero_tol: float = 1e-6,
) -> MonotonicityRow:
    dq, dg, d1 = c3_derivatives(c1, c3, step)
    return MonotonicityRow(
        c1, c3, dq, dg, d1,
        _related(dq, dg, rule, eps, zero_tol),
        _related(dq, d1, rule, eps, zero_tol),
    )


def monotonicity_map(
    resolution: int = 101,
    step: float = 1e-4,
    eps: float = 1e-8,
    rule: str = "product",
    zero_tol: float = 1e-6,
) -> list[MonotonicityRow]:
    """Classify the U(1) triangle ``c1 = c2`` on a square grid.

    ``rule="product"`` calls two measures related where the product of
    their c3-derivatives is at least ``-eps``. ``rule="sign"`` instead asks
    for matching signs, treating ``|d| < zero_tol`` as zero; with it, a
    measure that is flat along c3 (like D_1 here) is only related to Q where
    Q is flat too. Grid points closer than ``step`` to the boundary are
    skipped.
    """
    axis = np.linspace(-1.0, 1.0, resolution)
    rows = []
    for c1 in axis:
        for c3 in axis:
            if u1_boundary_distance(c1, c3) <= step:
                continue
            rows.append(monotonicity_point(float(c1), float(c3), step, eps, rule, zero_tol))
    return rows


def su2_line(n: int = 101) -> np.ndarray:
    """Rows ``(t, Q, D_G, D_1)`` along ``c = (t, t, t)`` for ``t`` in [0, 1/3]."""
    ts = np.linspace(0.0, 1.0 / 3.0, n)
    return np.array([
        (t, entropic_discord_bd((t, t, t)), geometric_discord_2norm((t, t, t)),
         geometric_discord_1norm((t, t, t)))
        for t in ts
    ])


__all__ = [
    "MeasureSet", "GammaPair", "HierarchyReport", "MonotonicityRow",
    "entropic_discord_bd", "entropic_discord_numeric", "geometric_discord_2norm",
    "geometric_discord_1norm", "negativity", "negativity_bd", "measure_set",
    "classical_axis_eigenvalues", "classical_axis_distance", "classical_axis_min",
    "d1_by_classical_axes", "gamma_pm", "noq_objective", "noq_minimize", "noq_vertex_min",
    "noq_by_matrix", "noq_grid_and_vertex_min", "simplex_lattice", "hierarchy_check", "monotonicity_point",
    "monotonicity_map", "c3_derivatives", "su2_line", "UnphysicalStateError", "is_physical",
]
