"""CHSH observables as a source of positive pairs and the Bell-observable identity.

For dichotomic ``A_i`` (party 1) and ``B_j`` (party 2), ``X = 2 + s(A1 B1 + A1 B2)``
and ``Y = 2 + s(A2 B1 - A2 B2)`` are positive semidefinite. Expanding
``C = XY + YX`` gives ``k * Bell = C + [A1, A2][B1, B2]`` for a single integer
``k``, which :func:`identity_audit` determines numerically instead of
trusting a hard-coded constant.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .operators import (
    DEFAULT_TOL,
    SIGMA_X,
    SIGMA_Z,
    QwitError,
    anticommutator,
    as_hermitian,
    commutator,
    eigvalsh,
    kron,
)

CONVENTIONAL_IDENTITY_FACTOR = 2
CANDIDATE_FACTORS = (1, 2, 3, 4)


def as_dichotomic(op, tol: float = DEFAULT_TOL) -> np.ndarray:
    op = as_hermitian(op)
    err = float(np.max(np.abs(op @ op - np.eye(op.shape[0]))))
    if err > tol:
        raise QwitError(f"observable is not dichotomic: max |O^2 - I| = {err:.3e}")
    return op


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """QR of a complex Gaussian matrix, with R's diagonal phases pushed into Q."""
    G = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    Q, R = np.linalg.qr(G)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_dichotomic(dim: int, seed, mixed: bool = False) -> np.ndarray:
    """``U diag(+-1) U^dagger`` from a seeded unitary and a seeded sign pattern.

    With ``mixed=True`` (and ``dim >= 2``) both signs occur, so the result is
    never ``+-I``.
    """
    if dim < 1:
        raise QwitError("dim must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    U = haar_unitary(dim, rng)
    signs = rng.choice([-1.0, 1.0], size=dim)
    if mixed and dim >= 2 and abs(signs.sum()) == dim:
        signs[rng.integers(dim)] *= -1
    return as_dichotomic(U @ np.diag(signs) @ U.conj().T)


@dataclass
class BellSetting:
    A1: np.ndarray
    A2: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    sign: int = -1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise QwitError("sign must be +1 or -1")
        self.A1, self.A2 = as_dichotomic(self.A1), as_dichotomic(self.A2)
        self.B1, self.B2 = as_dichotomic(self.B1), as_dichotomic(self.B2)
        if self.A1.shape != self.A2.shape or self.B1.shape != self.B2.shape:
            raise QwitError("observables of one party must share a dimension")

    @property
    def dims(self) -> tuple[int, int]:
        return self.A1.shape[0], self.B1.shape[0]

    def corr(self, Ai, Bj) -> np.ndarray:
        return kron(Ai, Bj)

    @classmethod
    def random(cls, seed, dim: int = 2, sign: int = -1, mixed: bool = True) -> "BellSetting":
        """Seeded setting; ``mixed`` keeps every observable away from ``+-I``."""
        rng = np.random.default_rng(seed)
        return cls(*(random_dichotomic(dim, rng, mixed) for _ in range(4)), sign=sign)

    @classmethod
    def tsirelson(cls, sign: int = -1) -> "BellSetting":
        r2 = np.sqrt(2)
        return cls(SIGMA_Z, SIGMA_X, (SIGMA_Z + SIGMA_X) / r2, (SIGMA_Z - SIGMA_X) / r2, sign=sign)


def chsh_xy(setting: BellSetting) -> tuple[np.ndarray, np.ndarray]:
    s = setting
    n = s.dims[0] * s.dims[1]
    eye = np.eye(n, dtype=complex)
    X = 2 * eye + s.sign * (s.corr(s.A1, s.B1) + s.corr(s.A1, s.B2))
    Y = 2 * eye + s.sign * (s.corr(s.A2, s.B1) - s.corr(s.A2, s.B2))
    return as_hermitian(X), as_hermitian(Y)


def chsh_operator(setting: BellSetting) -> np.ndarray:
    s = setting
    return s.corr(s.A1, s.B1) + s.corr(s.A1, s.B2) + s.corr(s.A2, s.B1) - s.corr(s.A2, s.B2)


def bell_operator(setting: BellSetting) -> np.ndarray:
    n = setting.dims[0] * setting.dims[1]
    return as_hermitian(2 * np.eye(n) + setting.sign * chsh_operator(setting))


@dataclass(frozen=True)
class LHVBound:
    bound: int
    positivity_holds: bool  # x * y >= 0 for every deterministic assignment and both signs
    values: dict = field(default_factory=dict)


def lhv_chsh_bound() -> LHVBound:
    """Enumerate the 16 deterministic +-1 strategies."""
    values = {}
    positive = True
    for a1, a2, b1, b2 in product((1, -1), repeat=4):
        values[(a1, a2, b1, b2)] = a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2
        for sign in (1, -1):
            x = 2 + sign * (a1 * b1 + a1 * b2)
            y = 2 + sign * (a2 * b1 - a2 * b2)
            positive &= x >= 0 and y >= 0 and x * y >= 0
    return LHVBound(max(abs(v) for v in values.values()), positive, values)


@dataclass(frozen=True)
class IdentityAudit:
    k_star: int | None
    residuals: dict

    @property
    def matches_conventional(self) -> bool:
        return self.k_star == CONVENTIONAL_IDENTITY_FACTOR


def identity_audit(setting: BellSetting, tol: float = DEFAULT_TOL) -> IdentityAudit:
    """Residual ``max|k Bell - C - [A1, A2] (x) [B1, B2]|`` for each candidate ``k``."""
    X, Y = chsh_xy(setting)
    C = anticommutator(X, Y)
    comm = kron(commutator(setting.A1, setting.A2), commutator(setting.B1, setting.B2))
    bell = bell_operator(setting)
    residuals = {k: float(np.max(np.abs(k * bell - C - comm))) for k in CANDIDATE_FACTORS}
    hits = [k for k, r in residuals.items() if r <= tol]
    return IdentityAudit(hits[0] if len(hits) == 1 else None, residuals)


def audit_many(n_seeds: int, dim: int = 2, master_seed: int = 0, sign: int = -1) -> dict:
    """Run :func:`identity_audit` on seeded random settings; each uses stream ``(master_seed, index)``."""
    k_values = set()
    max_residual = 0.0
    xy_psd = True
    min_bell = np.inf
    for idx in range(n_seeds):
        setting = BellSetting.random([master_seed, idx], dim=dim, sign=sign)
        audit = identity_audit(setting)
        k_values.add(audit.k_star)
        if audit.k_star is not None:
            max_residual = max(max_residual, audit.residuals[audit.k_star])
        X, Y = chsh_xy(setting)
        xy_psd &= bool(eigvalsh(X)[0] >= -DEFAULT_TOL and eigvalsh(Y)[0] >= -DEFAULT_TOL)
        min_bell = min(min_bell, float(eigvalsh(bell_operator(setting))[0]))
    return {
        "k_values": sorted(k for k in k_values if k is not None) + ([None] if None in k_values else []),
        "k_star": next(iter(k_values)) if len(k_values) == 1 else None,
        "max_residual": max_residual,
        "xy_psd": xy_psd,
        "min_bell_lambda": min_bell,
    }
