"""Additive N-body observables ``A = (1/N) sum_i a_i`` and their witness ``B^2 - A^2``.

The witness splits into single-site terms ``(1/N^2) sum_i v_i`` and a cross
term ``(1/N^2) sum_{i != j} (b_i + a_i)(b_j - a_j)`` that is positive
semidefinite, so the most negative eigenvalue shrinks at least like ``mu/N``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import DEFAULT_TOL, QwitError, as_hermitian, eigvalsh, kron, leq, square
from .witnesses import PreconditionError

MAX_DIM = 4096


class DimensionCapError(QwitError):
    pass


def _check_cap(d: int, N: int, cap: int) -> None:
    if d**N > cap:
        raise DimensionCapError(f"d^N = {d}^{N} = {d ** N} exceeds the dense cap {cap}")


def lift(x, slot: int, N: int, cap: int = MAX_DIM) -> np.ndarray:
    """Embed single-site ``x`` at ``slot`` (1-based) of an ``N``-fold tensor product."""
    x = np.asarray(x, dtype=complex)
    if not 1 <= slot <= N:
        raise QwitError(f"slot {slot} outside 1..{N}")
    d = x.shape[0]
    _check_cap(d, N, cap)
    eye = np.eye(d, dtype=complex)
    return kron(*[x if k == slot else eye for k in range(1, N + 1)])


def collective(x, N: int, cap: int = MAX_DIM) -> np.ndarray:
    return sum(lift(x, i, N, cap) for i in range(1, N + 1)) / N


@dataclass
class CollectiveWitness:
    V: np.ndarray
    diag_part: np.ndarray
    cross_part: np.ndarray
    cross_product_form: np.ndarray  # (1/N^2) sum_{i != j} (b_i + a_i)(b_j - a_j), Hermitized

    @property
    def decomposition_residual(self) -> float:
        return float(np.max(np.abs(self.V - self.diag_part - self.cross_part)))

    @property
    def cross_form_residual(self) -> float:
        return float(np.max(np.abs(self.cross_part - self.cross_product_form)))


def _check_pair(a, b, tol):
    a, b = as_hermitian(a), as_hermitian(b)
    if not leq(np.zeros_like(a), a, tol):
        raise PreconditionError("single-site pair violates 0 <= a")
    if not leq(a, b, tol):
        raise PreconditionError("single-site pair violates a <= b")
    return a, b


def collective_witness(a, b, N: int, tol: float = DEFAULT_TOL, cap: int = MAX_DIM) -> CollectiveWitness:
    a, b = _check_pair(a, b, tol)
    _check_cap(a.shape[0], N, cap)
    a_sites = [lift(a, i, N, cap) for i in range(1, N + 1)]
    b_sites = [lift(b, i, N, cap) for i in range(1, N + 1)]
    A, B = sum(a_sites) / N, sum(b_sites) / N
    V = square(B) - square(A)
    diag = sum(lift(square(b) - square(a), i, N, cap) for i in range(1, N + 1)) / N**2
    cross_form = np.zeros_like(V)
    for i in range(N):
        for j in range(N):
            if i != j:
                cross_form += (b_sites[i] + a_sites[i]) @ (b_sites[j] - a_sites[j])
    cross_form = (cross_form + cross_form.conj().T) / (2 * N**2)
    return CollectiveWitness(V, diag, V - diag, cross_form)


def single_site_mu(a, b) -> float:
    """``mu = -lambda_min(b^2 - a^2)``."""
    return float(-eigvalsh(square(b) - square(a))[0])


def product_state_mean(a, b, psi, N: int) -> float:
    """Closed form of ``<psi^N| B^2 - A^2 |psi^N>``.

    ``<v>/N + (N - 1)/N (<b>^2 - <a>^2)`` for the single-site ``v = b^2 - a^2``.
    """
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)

    def m(op):
        return float(np.vdot(psi, op @ psi).real)

    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    return m(b @ b - a @ a) / N + (N - 1) / N * (m(b) ** 2 - m(a) ** 2)


def product_state_mean_direct(a, b, psi, N: int, cap: int = MAX_DIM) -> float:
    """Same mean, by building ``psi^{(x)N}`` and the dense ``V``."""
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    big = kron(*[psi[:, None]] * N).ravel()
    A, B = collective(a, N, cap), collective(b, N, cap)
    V = B @ B - A @ A
    return float(np.vdot(big, V @ big).real)


@dataclass(frozen=True)
class ScalingRow:
    N: int
    lambda_min: float
    bound: float
    cross_min: float
    decomposition_residual: float


def scaling_report(a, b, N_max: int, tol: float = DEFAULT_TOL, cap: int = MAX_DIM) -> list[ScalingRow]:
    """``lambda_min(V)`` against the bound ``-mu/N`` for ``N = 1..N_max``."""
    a, b = _check_pair(a, b, tol)
    _check_cap(a.shape[0], N_max, cap)
    mu = single_site_mu(a, b)
    rows = []
    for N in range(1, N_max + 1):
        cw = collective_witness(a, b, N, tol, cap)
        rows.append(ScalingRow(N, float(eigvalsh(cw.V)[0]), -mu / N,
                               float(eigvalsh(cw.cross_part)[0]), cw.decomposition_residual))
    return rows
