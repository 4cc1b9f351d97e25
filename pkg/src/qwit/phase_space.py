"""Truncated oscillator algebra and phase-space quantumness witnesses.

``K_m = (a^dag)^2 a^2 - 2m a^dag a + m^2`` has the non-negative coherent-state
symbol ``(|z|^2 - m)^2``, so its mean on any mixture of coherent states is
non-negative, while Fock levels inside the window
``(m + 1/2 - sqrt(m + 1/4), m + 1/2 + sqrt(m + 1/4))`` give negative means.

Everything lives on the Fock levels ``0..D-1``. The cutoff is picked so that
both the Poisson tail of the coherent amplitudes and the part of the ``K_m``
mean carried by the dropped levels fit in the tail budget. The truncated
``[a, a^dag]`` differs from the identity only in its last diagonal entry.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

import numpy as np
from scipy.special import gammainc

from .operators import QwitError, as_hermitian, eigvalsh, min_eig

TAIL_BUDGET = 1e-12
MIN_DIM = 16


class TruncationError(QwitError):
    pass


@dataclass(frozen=True)
class FockTruncation:
    D: int
    a: np.ndarray
    n_op: np.ndarray

    @classmethod
    def build(cls, D: int) -> "FockTruncation":
        if D < 1:
            raise TruncationError("cutoff must be >= 1")
        a = np.diag(np.sqrt(np.arange(1, D, dtype=float)), k=1).astype(complex)
        return cls(D, a, np.diag(np.arange(D, dtype=float)).astype(complex))

    @property
    def adag(self) -> np.ndarray:
        return self.a.conj().T

    def commutator(self) -> np.ndarray:
        return self.a @ self.adag - self.adag @ self.a


class Window(NamedTuple):
    lo: float
    hi: float
    levels: tuple


def km_entry(n: int, m: int) -> int:
    return n * n - (2 * m + 1) * n + m * m


def negative_window(m: int) -> Window:
    """Open interval of ``n`` where ``K_m`` is negative, with the integer levels inside it."""
    if m < 1:
        raise QwitError("m must be >= 1")
    half = math.sqrt(m + 0.25)
    lo, hi = m + 0.5 - half, m + 0.5 + half
    levels = tuple(n for n in range(0, math.ceil(hi) + 1) if km_entry(n, m) < 0)
    return Window(lo, hi, levels)


def k_m_operator(trunc: FockTruncation, m: int) -> np.ndarray:
    """``K_m = N^2 - (2m + 1) N + m^2`` on the truncation (exact integer diagonal)."""
    if m < 1:
        raise QwitError("m must be >= 1")
    if trunc.D <= m + 1 + math.sqrt(m + 0.25):
        raise TruncationError(f"D={trunc.D} too small to hold the negative window of K_{m}")
    n = np.arange(trunc.D)
    return np.diag([float(km_entry(int(k), m)) for k in n]).astype(complex)


def k_m_ladder(trunc: FockTruncation, m: int) -> np.ndarray:
    """``K_m`` assembled from ladder operators, for cross-checking :func:`k_m_operator`."""
    a, ad = trunc.a, trunc.adag
    return ad @ ad @ a @ a - 2 * m * ad @ a + m * m * np.eye(trunc.D)


def poisson_tail(D: int, mean: float) -> float:
    """``P(n >= D)`` for a Poisson law with the given mean."""
    if mean == 0:
        return 0.0
    return float(gammainc(D, mean))


def cutoff_for(z: complex, budget: float = TAIL_BUDGET, min_dim: int = MIN_DIM) -> int:
    nbar = abs(z) ** 2
    D = min_dim
    while poisson_tail(D, nbar) > budget:
        D += 1
    return D


@dataclass(frozen=True)
class CoherentVector:
    z: complex
    amps: np.ndarray
    tail_mass: float
    eigen_residual: float  # ||a v - z v||, nonzero only through the cutoff


def coherent(z: complex, trunc: FockTruncation | int | None = None, budget: float = TAIL_BUDGET) -> CoherentVector:
    """Truncated coherent vector ``c_n = exp(-|z|^2/2) z^n / sqrt(n!)``."""
    z = complex(z)
    if trunc is None:
        trunc = cutoff_for(z, budget)
    D = trunc.D if isinstance(trunc, FockTruncation) else int(trunc)
    tail = poisson_tail(D, abs(z) ** 2)
    if tail > budget:
        raise TruncationError(
            f"cutoff D={D} leaves Poisson tail {tail:.3e} > {budget:.1e} for |z|^2={abs(z) ** 2:.6g}; "
            f"use D >= {cutoff_for(z, budget)}"
        )
    amps = np.empty(D, dtype=complex)
    amps[0] = math.exp(-abs(z) ** 2 / 2)
    for n in range(1, D):
        amps[n] = amps[n - 1] * z / math.sqrt(n)
    return CoherentVector(z, amps, tail, float(abs(z * amps[-1])))


def coherent_mean(W, z: complex, budget: float = TAIL_BUDGET) -> float:
    """``<z| W |z>`` with ``W`` given on a Fock truncation."""
    W = np.asarray(W, dtype=complex)
    v = coherent(z, W.shape[0], budget).amps
    return float(np.vdot(v, W @ v).real)


def classical_mixture_mean(W, weights: Sequence[float], zs: Sequence[complex], budget: float = TAIL_BUDGET) -> float:
    """Mean of ``W`` on ``sum_k w_k |z_k><z_k|``."""
    w = np.asarray(weights, dtype=float)
    if len(w) != len(zs):
        raise QwitError("weights and amplitudes differ in length")
    if np.any(w < 0) or abs(w.sum() - 1) > 1e-12:
        raise QwitError("mixture weights must be non-negative and sum to 1")
    return float(sum(wk * coherent_mean(W, z, budget) for wk, z in zip(w, zs)))


def km_symbol(m: int, z: complex) -> float:
    return (abs(z) ** 2 - m) ** 2


def km_tail_mean(m: int, D: int, nbar: float) -> float:
    """Bound on ``sum_{n >= D} p_n |K_m(n)|`` for a Poisson law with mean ``nbar``.

    Uses the factorial moments ``sum_{n >= D} p_n n(n-1) = nbar^2 P(n >= D-2)``
    and ``sum_{n >= D} p_n n = nbar P(n >= D-1)``.
    """
    return (nbar**2 * poisson_tail(max(D - 2, 1), nbar) + 2 * m * nbar * poisson_tail(max(D - 1, 1), nbar)
            + m * m * poisson_tail(D, nbar))


def km_cutoff(m: int, z: complex, budget: float = TAIL_BUDGET) -> int:
    """Smallest cutoff whose probability tail and dropped ``K_m`` mean both stay within ``budget``."""
    D = cutoff_for(z, budget)
    nbar = abs(z) ** 2
    while km_tail_mean(m, D, nbar) > budget:
        D += 1
    return D


def km_for(m: int, zs: Sequence[complex] = (0,), budget: float = TAIL_BUDGET) -> tuple[FockTruncation, np.ndarray]:
    """``K_m`` on a cutoff large enough for the window and every amplitude in ``zs``."""
    D = max([km_cutoff(m, z, budget) for z in zs] + [math.floor(m + 1 + math.sqrt(m + 0.25)) + 1])
    trunc = FockTruncation.build(D)
    return trunc, k_m_operator(trunc, m)


def fock_state(n: int, D: int) -> np.ndarray:
    v = np.zeros(D, dtype=complex)
    v[n] = 1
    return v


@dataclass
class KmSpectrum:
    m: int
    levels: list
    entries: list
    negative_levels: list
    window: tuple

    def to_dict(self) -> dict:
        return {"m": self.m, "levels": self.levels, "entries": self.entries,
                "negative_levels": self.negative_levels, "window": list(self.window)}


def km_spectrum(m: int, D: int | None = None) -> KmSpectrum:
    win = negative_window(m)
    D = D or max(MIN_DIM, math.ceil(win.hi) + 2)
    trunc = FockTruncation.build(D)
    diag = np.diag(k_m_operator(trunc, m)).real
    return KmSpectrum(m, list(range(D)), [float(x) for x in diag],
                      [n for n in range(D) if diag[n] < 0], (win.lo, win.hi))


def km_scan(m: int, zmax: float, nz: int, budget: float = TAIL_BUDGET) -> list[tuple[float, float, float]]:
    """Rows ``(|z|^2, <z|K_m|z>, (|z|^2 - m)^2)`` for real ``z`` in ``[0, zmax]``."""
    if nz < 2:
        raise QwitError("nz must be >= 2")
    rows = []
    for r in np.linspace(0.0, zmax, nz):
        _, K = km_for(m, [r], budget)
        rows.append((r * r, coherent_mean(K, r, budget), km_symbol(m, r)))
    return rows


# -- normally ordered polynomials sum c_mn (a^dag)^m a^n --------------------------------

def normal_ordered(coeffs: Mapping[tuple[int, int], complex], trunc: FockTruncation) -> tuple[np.ndarray, float]:
    """Hermitized ``sum c_mn (a^dag)^m a^n`` and the discarded anti-Hermitian residual."""
    a, ad = trunc.a, trunc.adag
    M = np.zeros((trunc.D, trunc.D), dtype=complex)
    for (m, n), c in coeffs.items():
        M += c * np.linalg.matrix_power(ad, m) @ np.linalg.matrix_power(a, n)
    return (M + M.conj().T) / 2, float(np.max(np.abs(M - M.conj().T)) / 2)


def normal_symbol(coeffs: Mapping[tuple[int, int], complex], z: complex) -> float:
    return float(sum(c * np.conj(z) ** m * z**n for (m, n), c in coeffs.items()).real)


def check_phase_space_witness(coeffs: Mapping[tuple[int, int], complex], D: int, r_max: float = 4.0,
                              n_r: int = 81, n_angle: int = 72, tol: float = 1e-10) -> dict:
    """Phase-space witness test: symbol ``w(z) >= 0`` on a polar grid, operator with a negative eigenvalue.

    The eigenvalue is taken on the ``D``-level truncation; high powers of
    ``a^dag`` are clipped at the cutoff, so ``D`` should sit well above the
    levels of interest.
    """
    trunc = FockTruncation.build(D)
    W, residual = normal_ordered(coeffs, trunc)
    radii = np.linspace(0.0, r_max, n_r)
    angles = np.arange(n_angle) * (2 * np.pi / n_angle)
    symbol_min = min(normal_symbol(coeffs, r * np.exp(1j * t)) for r in radii for t in angles)
    lam, vec = min_eig(as_hermitian(W))
    return {
        "symbol_min": symbol_min,
        "lambda_min": lam,
        "certifying_vector": vec,
        "hermitian_residual": residual,
        "is_phase_space_witness": bool(symbol_min >= -tol and lam < -tol),
    }


def spectrum(W) -> np.ndarray:
    return eigvalsh(W)
