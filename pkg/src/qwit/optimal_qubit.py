"""Optimal single-qubit witness ``V = B^2 - A^2`` under the normalization ``Tr B = 2``.

Two parameterizations of ordered pairs ``0 <= A <= B`` are provided:

``p, q, r, s``
    ``A = s I + a.sigma`` and ``B = I + b.sigma`` with ``p = |a|^2``,
    ``q = |b|^2``, ``r = |b - a|^2``.
``t, u, z``
    ``B - A = diag(2t, 0)``; saturating ``z^2 = u(1 - u - t)`` leaves a
    two-parameter family whose minimum eigenvalue ``-4/27`` is attained at
    ``t = 1/3``, ``u = 4/9``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np
from scipy import ndimage

from .operators import (
    DEFAULT_TOL,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    QwitError,
    as_hermitian,
    eigvalsh,
    leq,
    square,
)
from .witnesses import WitnessReport, build_V

RADICAND_CLAMP = 1e-12
OPTIMAL_T = 1 / 3
OPTIMAL_U = 4 / 9
OPTIMAL_Z = 2 * np.sqrt(2) / 9
OPTIMAL_LAMBDA = -4 / 27
# certifying vector in the form usually quoted with the closed-form optimum
EXPECTED_CERTIFYING_VECTOR = np.array([2 * np.sqrt(2) / 3, 1 / 3])


class DomainError(QwitError):
    pass


def _sqrt_clamped(x, what: str):
    x = np.asarray(x, dtype=float)
    if np.any(x < -RADICAND_CLAMP):
        raise DomainError(f"negative radicand in {what}: {np.min(x):.3e}")
    return np.sqrt(np.clip(x, 0.0, None))


# -- p, q, r, s ---------------------------------------------------------------------

class PQRSParams(NamedTuple):
    p: float
    q: float
    r: float
    s: float

    def is_ordered(self, tol: float = 1e-12) -> bool:
        return self.s * self.s >= self.p - tol and (1 - self.s) ** 2 >= self.r - tol

    @classmethod
    def from_operators(cls, A, B) -> "PQRSParams":
        """Read off ``a0, a, b`` from ``A = a0 I + a.sigma``, ``B = I + b.sigma``."""
        A, B = as_hermitian(A), as_hermitian(B)
        if abs(np.trace(B).real - 2) > 1e-10:
            raise DomainError(f"B must have trace 2, got {np.trace(B).real:.12g}")
        paulis = (SIGMA_X, SIGMA_Y, SIGMA_Z)
        a = np.array([np.trace(A @ P).real / 2 for P in paulis])
        b = np.array([np.trace(B @ P).real / 2 for P in paulis])
        return cls(float(a @ a), float(b @ b), float((b - a) @ (b - a)), float(np.trace(A).real / 2))


def lambda_minus_pqrs(params: PQRSParams) -> float:
    p, q, r, s = params
    if not params.is_ordered():
        raise DomainError(f"{params} violates s^2 >= p or (1 - s)^2 >= r")
    rad = q - q * s + (r + p * (-1 + s)) * s
    return float(1 - p + q - s * s - 2 * _sqrt_clamped(rad, "lambda_minus_pqrs"))


# -- t, u, z ------------------------------------------------------------------------

class TUZParams(NamedTuple):
    t: float
    u: float
    z: float

    def validate(self, tol: float = 1e-12) -> None:
        t, u, z = self
        if t < -tol or u < -tol:
            raise DomainError(f"t and u must be non-negative, got t={t}, u={u}")
        if z * z > u * (1 - u - t) + tol:
            raise DomainError(f"z^2 = {z * z:.6g} exceeds u(1 - u - t) = {u * (1 - u - t):.6g}")

    @classmethod
    def saturated(cls, t: float, u: float) -> "TUZParams":
        return cls(t, u, float(_sqrt_clamped(u * (1 - u - t), "z saturation")))


def build_AB_tuz(params: TUZParams) -> tuple[np.ndarray, np.ndarray]:
    params = TUZParams(*params)
    params.validate()
    t, u, z = params
    A = np.array([[-2 * (-1 + t + u), 2 * z], [2 * z, 2 * u]], dtype=complex)
    B = np.array([[2 - 2 * u, 2 * z], [2 * z, 2 * u]], dtype=complex)
    return A, B


def v_tuz(t: float, u: float, z: float) -> np.ndarray:
    return np.array([[-4 * t * (-2 + t + 2 * u), 4 * t * z], [4 * t * z, 0]], dtype=complex)


def lambda_minus_tuz(t, u, z):
    return -2 * (t * (-2 + t + 2 * u) + _sqrt_clamped(t * t * ((-2 + t + 2 * u) ** 2 + 4 * z * z), "lambda_minus_tuz"))


def lambda_minus_tu(t, u):
    """Lower eigenvalue of ``V`` with ``z`` saturated; accepts scalars or arrays."""
    t, u = np.asarray(t, dtype=float), np.asarray(u, dtype=float)
    if np.any(u * (1 - u - t) < -RADICAND_CLAMP):
        raise DomainError("u(1 - u - t) < 0")
    root = _sqrt_clamped(t * t * ((-2 + t) ** 2 - 4 * u), "lambda_minus_tu")
    out = -2 * (root + t * (-2 + t + 2 * u))
    return float(out) if out.ndim == 0 else out


def stationarity(t: float, u: float) -> tuple[float, float]:
    """Closed-form ``(d lambda / du, d lambda / dt)`` of :func:`lambda_minus_tu`."""
    disc = (t - 2) ** 2 - 4 * u
    if disc <= 0:
        raise DomainError(f"(t - 2)^2 - 4u = {disc:.3e} must be positive")
    root = np.sqrt(disc)
    d_du = 4 * t * (-1 + 1 / root)
    d_dt = -4 * (-1 + t + (2 + t * (t - 3) - 2 * u) / root + u)
    return float(d_du), float(d_dt)


def detA_zero_u(t: float) -> float:
    """``u`` on the branch ``(t - 2)^2 = 4u + 1`` where ``d lambda / du`` vanishes."""
    return ((t - 2) ** 2 - 1) / 4


def d_dt_on_branch(t: float) -> float:
    # reduces to -(t - 1)(3t - 1); roots t = 1 (trivial) and t = 1/3
    return -(t - 1) * (3 * t - 1)


# -- the closed-form optimum --------------------------------------------------------

def optimal_pair() -> tuple[np.ndarray, np.ndarray]:
    """Optimal ``(A, B)`` in the basis where ``B`` is diagonal."""
    r33 = np.sqrt(33)
    off = 4 * np.sqrt(2 / 33) / 3
    A = np.array([[2 / 99 * (33 + 5 * r33), off], [off, 2 / 3 - 10 / (3 * r33)]], dtype=complex)
    B = np.diag([(9 + r33) / 9, (9 - r33) / 9]).astype(complex)
    return A, B


def reflected_tuz_pair() -> tuple[np.ndarray, np.ndarray]:
    """Optimal ``t, u, z`` pair conjugated by ``sigma_x sigma_z``.

    In this basis the certifying vector of ``V`` is ``(2 sqrt(2)/3, 1/3)`` up
    to sign, the form in which it is usually quoted.
    """
    A, B = build_AB_tuz(TUZParams(OPTIMAL_T, OPTIMAL_U, OPTIMAL_Z))
    U = (SIGMA_X @ SIGMA_Z).real
    return U @ A @ U.T, U @ B @ U.T


def _spectra_match(P, Q, atol=1e-12) -> float:
    return float(np.max(np.abs(eigvalsh(P) - eigvalsh(Q))))


def optimal_witness(tol: float = DEFAULT_TOL) -> WitnessReport:
    """Witness report for the closed-form optimal pair, with consistency checks in ``extras``."""
    A, B = optimal_pair()
    report = build_V(A, B, tol)
    At, Bt = build_AB_tuz(TUZParams(OPTIMAL_T, OPTIMAL_U, OPTIMAL_Z))
    vec = report.certifying_vector
    report.extras.update(
        trace_B=float(np.trace(B).real),
        ordered=bool(leq(np.zeros((2, 2)), A, tol) and leq(A, B, tol)),
        expected_lambda_min=OPTIMAL_LAMBDA,
        expected_vector_overlap=float(abs(np.vdot(EXPECTED_CERTIFYING_VECTOR, vec))),
        tuz_spectra_residual=max(
            _spectra_match(A, At), _spectra_match(B, Bt), _spectra_match(report.witness, square(Bt) - square(At))
        ),
        tuz_trace_AB_residual=float(abs(np.trace(A @ B) - np.trace(At @ Bt))),
    )
    return report


# -- independent numeric search -----------------------------------------------------

class SearchResult(NamedTuple):
    t: float
    u: float
    lam: float


def _feasible(t: float, u: float) -> bool:
    return t >= 0 and u >= 0 and t + u <= 1


def numeric_search(grid_n: int = 200, refine_iters: int = 400, seed: int = 0,
                   t_fixed: float | None = None, u_fixed: float | None = None) -> SearchResult:
    """Grid search plus shrinking-step coordinate descent on :func:`lambda_minus_tu`.

    The domain is ``t, u >= 0`` with ``t + u <= 1`` (so that ``A >= 0``).
    Either coordinate may be pinned with ``t_fixed`` / ``u_fixed``. ``seed``
    only permutes the order in which coordinates are visited.
    """
    if grid_n < 50:
        raise QwitError("grid_n must be >= 50")
    ts = np.array([t_fixed]) if t_fixed is not None else np.linspace(0, 1, grid_n)
    us = np.array([u_fixed]) if u_fixed is not None else np.linspace(0, 1, grid_n)
    T, U = np.meshgrid(ts, us, indexing="ij")
    ok = (T + U <= 1 + 1e-15) & (T >= 0) & (U >= 0)
    if not ok.any():
        raise DomainError("search domain is empty")
    vals = np.full(T.shape, np.inf)
    vals[ok] = lambda_minus_tu(T[ok], np.minimum(U[ok], 1 - T[ok]))
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    x = {"t": float(T[i, j]), "u": float(min(U[i, j], 1 - T[i, j]))}
    best = float(vals[i, j])

    free = [k for k, pinned in (("t", t_fixed), ("u", u_fixed)) if pinned is None]
    rng = np.random.default_rng(seed)
    step = 1 / (grid_n - 1)
    for _ in range(refine_iters):
        improved = False
        for k in rng.permutation(free):
            for direction in (1.0, -1.0):
                trial = dict(x)
                trial[k] += direction * step
                if not _feasible(trial["t"], trial["u"]):
                    continue
                val = lambda_minus_tu(trial["t"], trial["u"])
                if val < best:
                    x, best, improved = trial, val, True
                    break
        if not improved:
            step /= 2
            if step < 1e-14:
                break
    return SearchResult(x["t"], x["u"], best)


# -- Bloch-sphere scan --------------------------------------------------------------

@dataclass
class ScanTable:
    theta: np.ndarray
    phi: np.ndarray
    mean_BmA: np.ndarray  # shape (n_theta, n_phi)
    mean_V: np.ndarray

    def rows(self) -> Iterator[tuple[float, float, float, float]]:
        for i, th in enumerate(self.theta):
            for j, ph in enumerate(self.phi):
                yield th, ph, self.mean_BmA[i, j], self.mean_V[i, j]

    def summary(self) -> dict:
        out = {}
        for name in ("mean_BmA", "mean_V"):
            col = getattr(self, name)
            i, j = np.unravel_index(np.argmin(col), col.shape)
            out[name] = {"min": float(col[i, j]), "argmin_theta": float(self.theta[i]),
                         "argmin_phi": float(self.phi[j])}
        return out

    def negative_components(self, threshold: float = 0.0) -> int:
        """Connected components of ``{mean_V < threshold}`` under 4-neighbour adjacency.

        The grid is glued as a sphere: the phi seam wraps around, and a row
        sitting exactly on a pole counts as a single point.
        """
        mask = self.mean_V < threshold
        labels, count = ndimage.label(mask)
        if count == 0:
            return 0
        parent = list(range(count + 1))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a, b):
            if a and b:
                parent[find(a)] = find(b)

        for i in range(labels.shape[0]):
            union(labels[i, 0], labels[i, -1])
        for i, th in enumerate(self.theta):
            if np.isclose(th, 0.0) or np.isclose(th, np.pi):
                row = labels[i][labels[i] > 0]
                for lab in row[1:]:
                    union(lab, row[0])
        return len({find(k) for k in range(1, count + 1)})


def bloch_scan(A, B, n_theta: int, n_phi: int) -> ScanTable:
    """Means of ``B - A`` and ``B^2 - A^2`` on the pure states ``psi(theta, phi)``.

    ``theta`` covers ``[0, pi]`` with both endpoints, ``phi`` covers
    ``[0, 2 pi)`` without the seam.
    """
    if n_theta < 2 or n_phi < 2:
        raise QwitError("n_theta and n_phi must be >= 2")
    A, B = as_hermitian(A), as_hermitian(B)
    if A.shape != (2, 2) or B.shape != (2, 2):
        raise QwitError("bloch_scan needs qubit operators")
    theta = np.linspace(0, np.pi, n_theta)
    phi = np.arange(n_phi) * (2 * np.pi / n_phi)
    c = np.cos(theta / 2)[:, None]
    s = np.sin(theta / 2)[:, None]
    e = np.exp(1j * phi)[None, :]

    def mean(M):
        return (M[0, 0].real * c * c + M[1, 1].real * s * s + 2 * (M[0, 1] * e).real * c * s)

    V = square(B) - square(A)
    return ScanTable(theta, phi, mean(B - A), mean(V))
