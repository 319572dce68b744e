"""Local operations on the unmeasured qubit and the norm laws they expose.

Attaching an ancilla ``sigma`` to qubit b rescales every Schatten p-norm
distance by ``||sigma||_p``; only for ``p = 1`` is that factor one for
every state. Pauli channels keep Bell-diagonal states Bell-diagonal, so
the closed-form trace-norm discord is available before and after.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .linalg import PAULI, kron, partial_trace, schatten_norm, trace_distance
from .measures import geometric_discord_1norm, geometric_discord_2norm
from .oracle import CHUNK, _prefix_minima, _trace_norms, d2_sample_min
from .states import (
    CorrelationVector,
    _unit_vectors,
    bd_density_matrix,
    is_physical,
    qubit_state,
    require_physical,
    sample_bd_uniform_batch,
)

SUPPORTED_P = (1, 2, 3)


@dataclass(frozen=True)
class AncillaState:
    r: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if np.linalg.norm(self.r) > 1.0 + 1e-12:
            raise ValueError("ancilla Bloch vector outside the unit ball")

    @property
    def matrix(self) -> np.ndarray:
        return qubit_state(self.r)

    @property
    def purity(self) -> float:
        return (1.0 + float(np.dot(self.r, self.r))) / 2.0

    def norm_p(self, p: int) -> float:
        """``||sigma||_p`` from the eigenvalues ``(1 +- |r|)/2``."""
        rr = float(np.linalg.norm(self.r))
        return (((1 + rr) / 2) ** p + ((1 - rr) / 2) ** p) ** (1.0 / p)


@dataclass(frozen=True)
class PauliChannel:
    q0: float = 1.0
    qx: float = 0.0
    qy: float = 0.0
    qz: float = 0.0

    def __post_init__(self):
        q = np.array([self.q0, self.qx, self.qy, self.qz])
        if np.any(q < -1e-12) or abs(q.sum() - 1.0) > 1e-12:
            raise ValueError(f"Pauli probabilities must be nonnegative and sum to 1, got {q}")

    @property
    def eta(self) -> np.ndarray:
        """Contraction factors of the x, y, z Bloch components."""
        return np.array([
            1 - 2 * (self.qy + self.qz),
            1 - 2 * (self.qx + self.qz),
            1 - 2 * (self.qx + self.qy),
        ])

    def kraus(self) -> list[np.ndarray]:
        ops = (np.eye(2, dtype=complex),) + PAULI
        probs = (self.q0, self.qx, self.qy, self.qz)
        return [np.sqrt(max(q, 0.0)) * op for q, op in zip(probs, ops)]

    @classmethod
    def random(cls, rng: np.random.Generator) -> "PauliChannel":
        return cls(*rng.dirichlet(np.ones(4)))


def attach_ancilla(rho: np.ndarray, sigma: AncillaState) -> np.ndarray:
    """``rho x sigma``: the ancilla joins the b side, giving a 2 x 4 system."""
    return kron(rho, sigma.matrix)


def remove_ancilla(rho_ext: np.ndarray) -> np.ndarray:
    return partial_trace(rho_ext, (rho_ext.shape[0] // 2, 2), "b")


def apply_channel_b(rho: np.ndarray, channel: PauliChannel) -> np.ndarray:
    """Apply ``channel`` to the last qubit of ``rho`` through its Kraus operators."""
    out = np.zeros_like(rho, dtype=complex)
    for k in channel.kraus():
        op = kron(np.eye(rho.shape[0] // 2), k)
        out += op @ rho @ op.conj().T
    return out


def apply_channel_a(rho: np.ndarray, channel: PauliChannel) -> np.ndarray:
    out = np.zeros_like(rho, dtype=complex)
    for k in channel.kraus():
        op = kron(k, np.eye(rho.shape[0] // 2))
        out += op @ rho @ op.conj().T
    return out


def apply_pauli_channel_b(c, channel: PauliChannel):
    """Correlation vector after ``channel`` acts on qubit b."""
    c = require_physical(c)
    return CorrelationVector.of(channel.eta * np.asarray(c))


def closest_bd_classical(c) -> np.ndarray:
    """Bell-diagonal classical state on the axis of the largest ``|c_i|``.

    Closest classical state for both the trace and Hilbert-Schmidt norms.
    """
    c = np.asarray(require_physical(c), dtype=float)
    k = int(np.argmax(np.abs(c)))
    l = np.zeros(3)
    l[k] = c[k]
    return bd_density_matrix(l)


@dataclass
class ScalingReport:
    c: list
    ancilla_r: list
    p: int
    sigma_norm_pp: float
    base_value: float
    predicted_extended: float
    extended_candidate: float
    norm_identity_residual: float
    sampled_extended: float | None
    nc: int
    norm_identity_ok: bool
    upper_bound_ok: bool
    floor_ok: bool | None

    def to_dict(self) -> dict:
        return asdict(self)


def _extended_d1_min(rho_ext: np.ndarray, nc: int, rng: np.random.Generator) -> float:
    """Sampled trace-norm distance from a 2 x 4 state to measured states along random axes."""
    def chunk() -> np.ndarray:
        axes = _unit_vectors(rng, CHUNK)
        out = 0.0
        for sign in (1.0, -1.0):
            proj = kron(qubit_state(sign * axes), np.eye(4))
            out = out + proj @ rho_ext @ proj
        return _trace_norms(rho_ext[None] - out)

    return _prefix_minima(chunk, [nc])[0]


def dp_scaling_check(
    c,
    sigma: AncillaState,
    p: int,
    nc: int = 0,
    rng: np.random.Generator | None = None,
    tol: float = 1e-10,
) -> ScalingReport:
    """Compare p-norm discord before and after attaching ``sigma`` to qubit b.

    Three checks. The exact identity
    ``||(rho - rho_c) x sigma||_p^p = ||rho - rho_c||_p^p ||sigma||_p^p``
    for the closest Bell-diagonal classical state ``rho_c``. The upper bound
    given by the extended candidate ``rho_c x sigma``. With ``nc > 0`` and
    ``p`` in {1, 2}, a sampled minimum over classical states of the 2 x 4
    system, which may not drop below the predicted scaled value.
    """
    if p not in SUPPORTED_P:
        raise ValueError(f"p must be one of {SUPPORTED_P}")
    c = require_physical(c)
    rho = bd_density_matrix(c)
    rho_c = closest_bd_classical(c)
    diff = rho - rho_c
    base = schatten_norm(diff, p) ** p
    s_pp = sigma.norm_p(p) ** p
    ext = schatten_norm(kron(diff, sigma.matrix), p) ** p
    predicted = base * s_pp
    residual = abs(ext - predicted)

    sampled = None
    floor_ok = None
    if nc > 0 and p in (1, 2):
        rng = rng if rng is not None else np.random.default_rng(0)
        rho_ext = attach_ancilla(rho, sigma)
        if p == 1:
            sampled = _extended_d1_min(rho_ext, nc, rng)
            analytic = geometric_discord_1norm(c)
        else:
            sampled = d2_sample_min(rho_ext, (2, 4), nc, rng)
            analytic = geometric_discord_2norm(c)
        floor_ok = sampled >= analytic * s_pp - 1e-9

    return ScalingReport(
        c=list(c),
        ancilla_r=list(sigma.r),
        p=p,
        sigma_norm_pp=s_pp,
        base_value=base,
        predicted_extended=predicted,
        extended_candidate=ext,
        norm_identity_residual=residual,
        sampled_extended=sampled,
        nc=nc,
        norm_identity_ok=residual < tol,
        upper_bound_ok=ext <= predicted + tol,
        floor_ok=floor_ok,
    )


@dataclass
class ContractivityReport:
    c: list
    channel: list
    c_out: list
    d1_before: float
    d1_after: float
    distance_before: float
    distance_after: float
    d1_ok: bool
    distance_ok: bool

    @property
    def ok(self) -> bool:
        return self.d1_ok and self.distance_ok

    def to_dict(self) -> dict:
        return asdict(self)


def contractivity_check(c, channel: PauliChannel) -> ContractivityReport:
    """Trace-norm discord and distance to the closest classical state under ``channel`` on b."""
    c = require_physical(c)
    c_out = apply_pauli_channel_b(c, channel)
    rho = bd_density_matrix(c)
    rho_c = closest_bd_classical(c)
    before = trace_distance(rho, rho_c)
    after = trace_distance(apply_channel_b(rho, channel), apply_channel_b(rho_c, channel))
    d1_before = geometric_discord_1norm(c)
    d1_after = geometric_discord_1norm(c_out)
    return ContractivityReport(
        c=list(c),
        channel=[channel.q0, channel.qx, channel.qy, channel.qz],
        c_out=list(c_out),
        d1_before=d1_before,
        d1_after=d1_after,
        distance_before=before,
        distance_after=after,
        d1_ok=d1_after <= d1_before + 1e-12,
        distance_ok=after <= before + 1e-10,
    )


def dg_noncontractivity_witness(r=(0.0, 0.0, 0.0), c=(1.0, 1.0, -1.0)) -> dict:
    """Worked example: Hilbert-Schmidt discord grows when a mixed ancilla is removed.

    Attaching ``sigma`` multiplies the 2-norm discord by ``tr sigma^2``;
    dropping the ancilla again (a local reversible step on b) undoes the
    factor, an increase whenever ``sigma`` is mixed. The trace-norm value
    stays put.
    """
    sigma = AncillaState(tuple(float(x) for x in r))
    c = require_physical(c)
    rho = bd_density_matrix(c)
    diff = rho - closest_bd_classical(c)
    dg = geometric_discord_2norm(c)
    d1 = geometric_discord_1norm(c)
    ext_dg_norm = schatten_norm(kron(diff, sigma.matrix), 2) ** 2
    ext_d1_norm = schatten_norm(kron(diff, sigma.matrix), 1)
    factor = sigma.purity
    return {
        "c": list(c),
        "ancilla_r": list(sigma.r),
        "purity": factor,
        "dg": dg,
        "dg_extended_predicted": dg * factor,
        "dg_extended_norm": ext_dg_norm,
        "dg_gain_on_removal": dg / (dg * factor) if dg > 0 else 1.0,
        "d1": d1,
        "d1_extended_predicted": d1,
        "d1_extended_norm": ext_d1_norm,
        "anomaly": factor < 1.0 - 1e-12 and dg > 0,
        "ok": abs(ext_dg_norm - dg * factor) < 1e-10 and abs(ext_d1_norm - d1) < 1e-10,
    }


def random_contractivity_sweep(n: int, rng: np.random.Generator) -> int:
    """Number of D_1 increases over ``n`` random (state, Pauli channel) pairs.

    A Pauli channel rescales the correlation vector the same way on either
    qubit, so this covers channels on a as well.
    """
    cs = sample_bd_uniform_batch(rng, n)
    violations = 0
    for c in cs:
        ch = PauliChannel.random(rng)
        c_out = ch.eta * c
        if not is_physical(c_out):
            violations += 1
            continue
        if geometric_discord_1norm(c_out) > geometric_discord_1norm(c) + 1e-12:
            violations += 1
    return violations
