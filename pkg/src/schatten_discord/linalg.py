"""Dense complex matrix kernel.

Every function accepts a single matrix of shape ``(d, d)`` or a stack of
matrices of shape ``(..., d, d)`` and broadcasts over the leading axes.
Plain ``numpy`` arrays stand in for matrices; nothing here mutates its
inputs.
"""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-13

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SX, SY, SZ)


class NotHermitianError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    """Raised when an iterative eigensolver stops short of its target."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, batched over leading axes."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim == 2 and b.ndim == 2:
        return np.kron(a, b)
    ra, ca = a.shape[-2:]
    rb, cb = b.shape[-2:]
    out = a[..., :, None, :, None] * b[..., None, :, None, :]
    return out.reshape(out.shape[:-4] + (ra * rb, ca * cb))


def _check_dims(m: np.ndarray, dims: Sequence[int]) -> tuple[int, int]:
    da, db = (int(d) for d in dims)
    if m.shape[-1] != da * db or m.shape[-2] != da * db:
        raise ValueError(
            f"matrix of shape {m.shape[-2:]} does not match subsystem dims {da}x{db}"
        )
    return da, db


def _subsystem_index(which) -> int:
    if which in (0, "a", "A"):
        return 0
    if which in (1, "b", "B"):
        return 1
    raise ValueError(f"unknown subsystem {which!r}; use 'a' or 'b'")


def partial_transpose(m: np.ndarray, dims: Sequence[int] = (2, 2), which="a") -> np.ndarray:
    """Transpose the indices of one factor of a bipartite operator."""
    m = np.asarray(m)
    da, db = _check_dims(m, dims)
    t = m.reshape(m.shape[:-2] + (da, db, da, db))
    if _subsystem_index(which) == 0:
        t = np.swapaxes(t, -4, -2)
    else:
        t = np.swapaxes(t, -3, -1)
    return t.reshape(m.shape)


def partial_trace(m: np.ndarray, dims: Sequence[int] = (2, 2), which="b") -> np.ndarray:
    """Trace out subsystem ``which`` and return the reduced operator on the other."""
    m = np.asarray(m)
    da, db = _check_dims(m, dims)
    t = m.reshape(m.shape[:-2] + (da, db, da, db))
    if _subsystem_index(which) == 1:
        return np.einsum("...ijkj->...ik", t)
    return np.einsum("...ijil->...jl", t)


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return bool(np.all(np.abs(m - np.swapaxes(m.conj(), -1, -2)) <= tol))


def symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + np.swapaxes(np.conj(m), -1, -2))


_TINY = np.finfo(float).tiny


def jacobi_eigh(
    m: np.ndarray,
    tol: float = JACOBI_TOL,
    max_sweeps: int = 50,
    vectors: bool = False,
):
    """Cyclic Jacobi diagonalization of complex Hermitian matrices.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the real two-by-two Jacobi rotation that zeroes it. Sweeps run
    over all pivots in row order until the off-diagonal Frobenius norm of
    every matrix in the batch drops below ``tol * max(1, ||m||_F)``.

    Parameters
    ----------
    m : array_like, shape (..., n, n)
        Hermitian matrices. They are symmetrized before rotating.
    tol : float
        Off-diagonal target.
    max_sweeps : int
        Raises ``ConvergenceError`` when exceeded.
    vectors : bool
        Also return the eigenvectors as columns.

    Returns
    -------
    w : ndarray, shape (..., n)
        Eigenvalues in ascending order.
    v : ndarray, shape (..., n, n)
        Only when ``vectors`` is true.
    """
    m = np.asarray(m, dtype=complex)
    batch_shape = m.shape[:-2]
    n = m.shape[-1]
    a = symmetrize(m).reshape((-1, n, n)).copy()
    nb = a.shape[0]
    u = np.broadcast_to(np.eye(n, dtype=complex), (nb, n, n)).copy() if vectors else None

    scale = np.maximum(1.0, np.sqrt(np.einsum("bij,bij->b", a.real, a.real)
                                    + np.einsum("bij,bij->b", a.imag, a.imag)))
    offmask = ~np.eye(n, dtype=bool)

    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a[:, offmask]) ** 2, axis=1))
        active = off >= tol * scale
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        sub = a[idx]
        usub = u[idx] if vectors else None
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = sub[:, p, q]
                r = np.abs(apq)
                # subnormal pivots overflow the phase division; they are already zero
                live = r > _TINY
                if not live.any():
                    continue
                phase = np.where(live, apq / np.where(live, r, 1.0), 1.0)
                app = sub[:, p, p].real
                aqq = sub[:, q, q].real
                theta = np.where(live, (aqq - app) / (2.0 * np.where(live, r, 1.0)), 0.0)
                t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
                t = np.where(theta == 0.0, 1.0, t)
                t = np.where(live, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ce = c * phase.conj()
                se = s * phase.conj()

                col_p = sub[:, :, p].copy()
                col_q = sub[:, :, q]
                sub[:, :, p] = c[:, None] * col_p - se[:, None] * col_q
                sub[:, :, q] = s[:, None] * col_p + ce[:, None] * col_q
                row_p = sub[:, p, :].copy()
                row_q = sub[:, q, :]
                sub[:, p, :] = c[:, None] * row_p - (s * phase)[:, None] * row_q
                sub[:, q, :] = s[:, None] * row_p + (c * phase)[:, None] * row_q
                sub[:, p, q] = 0.0
                sub[:, q, p] = 0.0
                sub[:, p, p] = sub[:, p, p].real
                sub[:, q, q] = sub[:, q, q].real
                if vectors:
                    up = usub[:, :, p].copy()
                    uq = usub[:, :, q]
                    usub[:, :, p] = c[:, None] * up - se[:, None] * uq
                    usub[:, :, q] = s[:, None] * up + ce[:, None] * uq
        a[idx] = sub
        if vectors:
            u[idx] = usub
    else:
        off = np.sqrt(np.sum(np.abs(a[:, offmask]) ** 2, axis=1))
        if np.any(off >= tol * scale):
            raise ConvergenceError("Jacobi sweeps exhausted", float(np.max(off / scale)))

    w = np.real(np.diagonal(a, axis1=1, axis2=2))
    order = np.argsort(w, axis=1)
    w = np.take_along_axis(w, order, axis=1).reshape(batch_shape + (n,))
    if not vectors:
        return w
    u = np.take_along_axis(u, order[:, None, :], axis=2).reshape(batch_shape + (n, n))
    return w, u


def hermitian_eigenvalues(m: np.ndarray, method: str = "jacobi") -> np.ndarray:
    """Ascending real spectrum of a Hermitian matrix (or stack of them).

    ``method="jacobi"`` uses :func:`jacobi_eigh`; ``method="lapack"`` defers
    to ``numpy.linalg.eigvalsh`` and exists for the large sampling loops.
    """
    m = np.asarray(m)
    if not is_hermitian(m):
        raise NotHermitianError("matrix is not Hermitian within 1e-12")
    if method == "jacobi":
        return jacobi_eigh(m)
    if method == "lapack":
        return np.linalg.eigvalsh(symmetrize(m))
    raise ValueError(f"unknown eigenvalue method {method!r}")


def schatten_norm(m: np.ndarray, p: int = 1, method: str = "jacobi") -> np.ndarray | float:
    """Schatten p-norm ``(sum |eig|^p)^(1/p)`` of a Hermitian matrix."""
    if p <= 0:
        raise ValueError("Schatten norm needs p >= 1")
    w = np.abs(hermitian_eigenvalues(m, method=method))
    if p == 1:
        out = w.sum(axis=-1)
    else:
        out = np.sum(w**p, axis=-1) ** (1.0 / p)
    return float(out) if np.ndim(out) == 0 else out


def trace_distance(a: np.ndarray, b: np.ndarray, method: str = "jacobi"):
    """Trace norm of ``a - b``; no factor 1/2, so orthogonal pure states sit at 2."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-2:] != b.shape[-2:]:
        raise ValueError(f"dimension mismatch {a.shape[-2:]} vs {b.shape[-2:]}")
    return schatten_norm(a - b, 1, method=method)


def von_neumann_entropy(m: np.ndarray, method: str = "jacobi"):
    """Entropy in bits; eigenvalues below 1e-15 contribute zero."""
    w = hermitian_eigenvalues(m, method=method)
    w = np.where(w > 1e-15, w, 1.0)
    out = -np.sum(w * np.log2(w), axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def lanczos_lowest(
    matvec: Callable[[np.ndarray], np.ndarray],
    dim: int,
    *,
    deflate: Sequence[np.ndarray] = (),
    v0: np.ndarray | None = None,
    tol: float = 1e-10,
    max_iter: int = 500,
    seed: int = 0,
) -> tuple[float, np.ndarray, float]:
    """Lowest eigenpair of a real symmetric operator by Lanczos.

    Every new Krylov vector is reorthogonalized against the whole basis and
    against ``deflate`` (previously found eigenvectors), so repeated calls
    with a growing ``deflate`` list walk up a degenerate eigenspace.

    The start vector is drawn from ``seed + len(deflate)``: reusing one
    start vector after deflating would leave no component along a
    degenerate partner of the vector just removed.

    Returns ``(energy, vector, residual)`` where ``residual`` is
    ``||H v - E v||``.
    """
    deflate = [np.asarray(d, dtype=float) for d in deflate]
    if len(deflate) >= dim:
        raise ValueError("nothing left to find after deflation")

    def project(x):
        for d in deflate:
            x = x - d * (d @ x)
        return x

    if v0 is None:
        v0 = np.random.default_rng(seed + len(deflate)).standard_normal(dim)
    v = project(np.asarray(v0, dtype=float))
    v /= np.linalg.norm(v)

    basis = np.empty((min(max_iter, dim - len(deflate)) + 1, dim))
    alphas: list[float] = []
    betas: list[float] = []
    basis[0] = v
    energy, ritz, residual = np.nan, None, np.inf
    k_max = basis.shape[0] - 1

    for k in range(k_max):
        w = project(matvec(basis[k]))
        alpha = float(basis[k] @ w)
        w -= alpha * basis[k]
        if k > 0:
            w -= betas[-1] * basis[k - 1]
        # two passes of classical Gram-Schmidt keep the basis orthogonal to roundoff
        for _ in range(2):
            w -= basis[: k + 1].T @ (basis[: k + 1] @ w)
            w = project(w)
        beta = float(np.linalg.norm(w))
        alphas.append(alpha)

        evals, evecs = eigh_tridiagonal(
            np.array(alphas), np.array(betas), select="i", select_range=(0, 0)
        )
        energy, ritz = float(evals[0]), evecs[:, 0]
        residual = abs(beta * ritz[-1])
        if residual < tol or beta < 1e-14 or k + 1 == k_max:
            break
        betas.append(beta)
        basis[k + 1] = w / beta

    vec = basis[: len(alphas)].T @ ritz
    vec /= np.linalg.norm(vec)
    true_residual = float(np.linalg.norm(matvec(vec) - energy * vec))
    if true_residual > max(tol, 1e-9):
        raise ConvergenceError("Lanczos did not reach the residual target", true_residual)
    return energy, vec, true_residual
