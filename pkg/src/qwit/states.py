"""Density matrices, Bloch-sphere pure states and expectation values."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .operators import (
    DEFAULT_TOL,
    QwitError,
    _check_same_dim,
    _fix_phase,
    as_hermitian,
    eig_hermitian,
    operator_from_dict,
    operator_to_dict,
)


class InvalidStateError(QwitError):
    pass


class BlochDecomposition(NamedTuple):
    """``rho = (1 - r) I/2 + r |psi><psi|`` for a qubit state."""

    r: float
    psi: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (1 - self.r) * np.eye(2) / 2 + self.r * np.outer(self.psi, self.psi.conj())


def as_density_matrix(rho, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Validate ``rho`` as a unit-trace PSD Hermitian matrix."""
    rho = as_hermitian(rho)
    tr = np.trace(rho).real
    if abs(tr - 1) > tol:
        raise InvalidStateError(f"trace of density matrix is {tr!r}, expected 1")
    lam = eig_hermitian(rho).eigenvalues[0]
    if lam < -tol:
        raise InvalidStateError(f"density matrix has negative eigenvalue {lam:.3e}")
    return rho


def pure_state(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).ravel()
    norm = np.linalg.norm(v)
    if norm == 0:
        raise InvalidStateError("zero vector is not a state")
    v = v / norm
    return np.outer(v, v.conj())


def bloch_vector(theta: float, phi: float) -> np.ndarray:
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def pure_from_bloch(theta: float, phi: float) -> np.ndarray:
    """Projector onto ``cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>``."""
    if not 0 <= theta <= np.pi:
        raise InvalidStateError(f"theta={theta} outside [0, pi]")
    if not 0 <= phi < 2 * np.pi:
        raise InvalidStateError(f"phi={phi} outside [0, 2pi)")
    v = bloch_vector(theta, phi)
    return np.outer(v, v.conj())


def maximally_mixed(n: int) -> np.ndarray:
    if n < 1:
        raise InvalidStateError("dimension must be >= 1")
    return np.eye(n, dtype=complex) / n


def expectation(rho, A) -> float:
    """``Tr(rho A)`` (real part; the imaginary part vanishes for Hermitian A)."""
    rho = np.asarray(rho, dtype=complex)
    A = as_hermitian(A)
    _check_same_dim(rho, A)
    return float(np.einsum("ij,ji->", rho, A).real)


def vector_expectation(v, A) -> float:
    v = np.asarray(v, dtype=complex)
    return float(np.vdot(v, np.asarray(A) @ v).real)


def bloch_decompose(rho) -> BlochDecomposition:
    """Split a qubit density matrix into its mixed and pure parts.

    ``r`` is the eigenvalue gap and ``psi`` the top eigenvector. For the
    maximally mixed state ``psi`` is fixed to ``|0>``.
    """
    rho = as_density_matrix(rho)
    if rho.shape != (2, 2):
        raise InvalidStateError(f"bloch_decompose needs a qubit state, got dim {rho.shape[0]}")
    w, v = eig_hermitian(rho)
    r = float(w[1] - w[0])
    if r <= 1e-14:
        return BlochDecomposition(0.0, np.array([1.0, 0.0], dtype=complex))
    return BlochDecomposition(r, _fix_phase(v[:, 1]))


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random state ``G G^dagger / Tr(G G^dagger)`` from a complex Gaussian ``G``."""
    rank = dim if rank is None else rank
    G = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = G @ G.conj().T
    return as_hermitian(rho / np.trace(rho).real)


def state_to_dict(rho) -> dict:
    return {"kind": "state", **operator_to_dict(rho)}


def state_from_dict(data: dict) -> np.ndarray:
    return as_density_matrix(operator_from_dict(data))
