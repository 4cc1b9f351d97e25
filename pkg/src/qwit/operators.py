"""Dense Hermitian operator algebra.

Operators are plain ``numpy`` complex arrays. Every public function runs its
inputs through :func:`as_hermitian`, which symmetrizes away floating-point
drift and rejects anything that is genuinely not self-adjoint.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-12
DEFAULT_TOL = 1e-10

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class QwitError(ValueError):
    """Base class for all precondition and domain errors raised by qwit."""


class NotHermitianError(QwitError):
    pass


class DimensionMismatchError(QwitError):
    pass


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, paired with eigenvalues


def max_asymmetry(H) -> float:
    H = np.asarray(H)
    return float(np.max(np.abs(H - H.conj().T))) if H.size else 0.0


def as_hermitian(H, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate ``H`` as a square Hermitian matrix and return ``(H + H^dagger)/2``.

    Raises :class:`NotHermitianError` when the largest entry of ``H - H^dagger``
    exceeds ``tol * max(1, max|H_ij|)``.
    """
    H = np.array(H, dtype=complex)
    if H.ndim == 0:
        H = H.reshape(1, 1)
    if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] < 1:
        raise NotHermitianError(f"expected a non-empty square matrix, got shape {H.shape}")
    if not np.all(np.isfinite(H)):
        raise NotHermitianError("matrix has non-finite entries")
    asym = max_asymmetry(H)
    if asym > tol * max(1.0, float(np.max(np.abs(H)))):
        raise NotHermitianError(f"matrix is not Hermitian: max |H - H^dagger| = {asym:.3e} > {tol:.1e}")
    return (H + H.conj().T) / 2


def _check_same_dim(*ops: np.ndarray) -> None:
    dims = {op.shape[0] for op in ops}
    if len(dims) != 1:
        raise DimensionMismatchError(f"operator dimensions differ: {sorted(dims)}")


def _fix_phase(v: np.ndarray, atol: float = 1e-14) -> np.ndarray:
    # first entry with non-negligible magnitude becomes real positive
    idx = np.flatnonzero(np.abs(v) > atol * max(1.0, np.max(np.abs(v))))
    if idx.size == 0:
        return v
    a = v[idx[0]]
    return v * (abs(a) / a)


def _jacobi_rotate(M: np.ndarray, V: np.ndarray, p: int, q: int) -> None:
    apq = M[p, q]
    mag = abs(apq)
    phase = apq / mag
    app, aqq = M[p, p].real, M[q, q].real
    tau = (aqq - app) / (2.0 * mag)
    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    # U = diag(1, conj(phase)) @ [[c, s], [-s, c]] zeroes the (p, q) entry
    U = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
    cols = [p, q]
    M[:, cols] = M[:, cols] @ U
    M[cols, :] = U.conj().T @ M[cols, :]
    V[:, cols] = V[:, cols] @ U
    M[p, q] = M[q, p] = 0.0
    M[p, p] = M[p, p].real
    M[q, q] = M[q, q].real


def eig_hermitian(H, max_sweeps: int = 100) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.

    Eigenvalues come back ascending (stable tie-break on the post-sweep
    diagonal order). Each eigenvector is phase-fixed so that its first
    non-negligible component is real and positive, which makes the output a
    deterministic function of ``H``.
    """
    M = as_hermitian(H)
    n = M.shape[0]
    V = np.eye(n, dtype=complex)
    eps = np.finfo(float).eps
    frob = float(np.linalg.norm(M))
    skip = max(1e-2 * eps * frob, np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(np.triu(M, 1)))
        if off <= eps * frob:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(M[p, q]) > skip:
                    _jacobi_rotate(M, V, p, q)
    w = np.diag(M).real.copy()
    order = np.argsort(w, kind="stable")
    vecs = V[:, order]
    for k in range(n):
        vecs[:, k] = _fix_phase(vecs[:, k])
    return EigenDecomposition(w[order], vecs)


def eigvalsh(H) -> np.ndarray:
    return eig_hermitian(H).eigenvalues


def min_eig(H) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue and its (phase-fixed) eigenvector."""
    dec = eig_hermitian(H)
    return float(dec.eigenvalues[0]), dec.eigenvectors[:, 0]


def is_psd(H, tol: float = DEFAULT_TOL) -> bool:
    if tol < 0:
        raise QwitError("tol must be non-negative")
    return bool(eigvalsh(H)[0] >= -tol)


def leq(A, B, tol: float = DEFAULT_TOL) -> bool:
    """Operator order ``A <= B``: ``B - A`` positive semidefinite."""
    A, B = as_hermitian(A), as_hermitian(B)
    _check_same_dim(A, B)
    return is_psd(B - A, tol)


def anticommutator(X, Y) -> np.ndarray:
    X, Y = as_hermitian(X), as_hermitian(Y)
    _check_same_dim(X, Y)
    return as_hermitian(X @ Y + Y @ X)


def commutator(X, Y) -> np.ndarray:
    """Plain commutator ``XY - YX`` (anti-Hermitian for Hermitian inputs)."""
    X, Y = np.asarray(X, dtype=complex), np.asarray(Y, dtype=complex)
    _check_same_dim(X, Y)
    return X @ Y - Y @ X


def commutator_i(X, Y) -> np.ndarray:
    """``i[X, Y]``, which is Hermitian whenever X and Y are."""
    X, Y = as_hermitian(X), as_hermitian(Y)
    return as_hermitian(1j * commutator(X, Y))


def kron(*ops) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def square(H) -> np.ndarray:
    H = as_hermitian(H)
    return as_hermitian(H @ H)


# -- JSON operator schema: {"dim": n, "re": [[...]], "im": [[...]]} -------------------

def operator_to_dict(H) -> dict:
    H = np.asarray(H, dtype=complex)
    return {"dim": int(H.shape[0]), "re": H.real.tolist(), "im": H.imag.tolist()}


def operator_from_dict(data: dict) -> np.ndarray:
    try:
        dim = int(data["dim"])
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise QwitError(f"malformed operator JSON: {exc}") from exc
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise QwitError(f"operator JSON declares dim {dim} but entries have shapes {re.shape}, {im.shape}")
    return as_hermitian(re + 1j * im)
