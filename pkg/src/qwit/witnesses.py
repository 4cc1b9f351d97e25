"""Quantumness witnesses built from ordered or positive operator pairs.

Two families are covered:

* ``V = B^2 - A^2`` for ``0 <= A <= B`` and ``C = XY + YX`` for ``X, Y >= 0``.
  Both are positive semidefinite whenever the operators commute, so a negative
  eigenvalue certifies that no commutative (classical) model reproduces them.
* Generalized witnesses ``W(R; S)``, ordered polynomials whose commutative
  symbol ``w(r, s)`` is non-negative on ``Spec(R) x Spec(S)`` while the
  operator itself has a negative eigenvalue.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from .operators import (
    DEFAULT_TOL,
    QwitError,
    _check_same_dim,
    anticommutator,
    as_hermitian,
    eig_hermitian,
    eigvalsh,
    min_eig,
    square,
)
from .states import as_density_matrix, bloch_decompose, expectation

KIND_V = "V_from_ordered_pair"
KIND_C = "C_from_positive_pair"
KIND_GENERALIZED = "generalized"


class PreconditionError(QwitError):
    pass


class NoWitnessExists(QwitError):
    """Raised for the maximally mixed state, on which every such witness has non-negative mean."""


@dataclass
class WitnessReport:
    kind: str
    constituents: tuple
    witness: np.ndarray
    lambda_min: float
    certifying_vector: np.ndarray
    is_witness: bool
    extras: dict = field(default_factory=dict)

    def combination_residual(self) -> float:
        """Max-entry distance between ``witness`` and the combination its kind declares."""
        if self.kind == KIND_V:
            A, B = self.constituents
            expected = B @ B - A @ A
        elif self.kind == KIND_C:
            X, Y = self.constituents
            expected = X @ Y + Y @ X
        else:
            R, S = self.constituents
            expected = hermitize(word_polynomial(self.extras["coeffs"], R, S))[0]
        return float(np.max(np.abs(self.witness - expected)))

    def to_dict(self) -> dict:
        from .serialize import complex_vector_to_list
        from .operators import operator_to_dict

        return {
            "kind": self.kind,
            "constituents": [operator_to_dict(c) for c in self.constituents],
            "witness": operator_to_dict(self.witness),
            "lambda_min": self.lambda_min,
            "certifying_vector": complex_vector_to_list(self.certifying_vector),
            "is_quantumness_witness": self.is_witness,
            **{k: v for k, v in self.extras.items() if k != "coeffs"},
        }


def _report(kind, constituents, witness, tol, **extras) -> WitnessReport:
    lam, vec = min_eig(witness)
    return WitnessReport(kind, tuple(constituents), witness, lam, vec, lam < -tol, dict(extras))


def build_V(A, B, tol: float = DEFAULT_TOL) -> WitnessReport:
    """Witness ``B^2 - A^2`` for an ordered pair ``0 <= A <= B``."""
    A, B = as_hermitian(A), as_hermitian(B)
    _check_same_dim(A, B)
    low_a = eigvalsh(A)[0]
    if low_a < -tol:
        raise PreconditionError(f"0 <= A violated: min eigenvalue of A is {low_a:.3e}")
    low_gap = eigvalsh(B - A)[0]
    if low_gap < -tol:
        raise PreconditionError(f"A <= B violated: min eigenvalue of B - A is {low_gap:.3e}")
    return _report(KIND_V, (A, B), square(B) - square(A), tol)


def build_C(X, Y, tol: float = DEFAULT_TOL) -> WitnessReport:
    """Witness ``XY + YX`` for positive semidefinite ``X`` and ``Y``."""
    X, Y = as_hermitian(X), as_hermitian(Y)
    _check_same_dim(X, Y)
    for name, op in (("X", X), ("Y", Y)):
        low = eigvalsh(op)[0]
        if low < -tol:
            raise PreconditionError(f"{name} >= 0 violated: min eigenvalue is {low:.3e}")
    return _report(KIND_C, (X, Y), anticommutator(X, Y), tol)


def rank1_anticommutator_eigs(alpha: float) -> tuple[float, float]:
    """Eigenvalues ``(alpha(alpha+1), alpha(alpha-1))`` of ``{|a><a|, |d><d|}`` with ``|<a|d>| = alpha``."""
    if not 0 <= alpha <= 1:
        raise PreconditionError(f"alpha={alpha} outside [0, 1]")
    return alpha * (alpha + 1), alpha * (alpha - 1)


def rank1_pair(alpha: float, beta_phase: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Projectors onto ``|0>`` and ``alpha|0> + beta|1>`` with ``|beta| = sqrt(1 - alpha^2)``."""
    beta = np.sqrt(max(0.0, 1 - alpha**2)) * np.exp(1j * beta_phase)
    d = np.array([alpha, beta], dtype=complex)
    X = np.diag([1.0, 0.0]).astype(complex)
    return X, np.outer(d, d.conj())


def complete_unitary(v) -> np.ndarray:
    """Unitary whose first column is the unit vector ``v``, completed by Gram-Schmidt."""
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    n = v.size
    cols = [v]
    for e in np.eye(n, dtype=complex):
        w = e - sum(np.vdot(c, e) * c for c in cols)
        norm = np.linalg.norm(w)
        if norm > 1e-8:
            cols.append(w / norm)
        if len(cols) == n:
            break
    return np.column_stack(cols)


def _aligned_pair(alpha: float) -> tuple[np.ndarray, np.ndarray]:
    # rotate the fiducial pair so the lambda_- eigenvector of {X, Y} becomes |0>
    X0, Y0 = rank1_pair(alpha)
    _, u = min_eig(anticommutator(X0, Y0))
    U = complete_unitary(u).conj().T
    return U @ X0 @ U.conj().T, U @ Y0 @ U.conj().T


def _top_two_subspace(rho: np.ndarray, tol: float):
    n = rho.shape[0]
    if n == 2:
        dec = bloch_decompose(rho)
        if dec.r <= tol:
            raise NoWitnessExists("maximally mixed state admits no witness of this type")
        return complete_unitary(dec.psi), 1.0, dec.r
    w, v = eig_hermitian(rho)
    if w[-1] - w[0] <= tol:
        raise NoWitnessExists("maximally mixed state admits no witness of this type")
    hi = n - 1
    lo = n - 2 if w[-1] - w[-2] > tol else 0  # degenerate top pair: fall back to the smallest eigenvalue
    rho1, rho2 = w[hi], w[lo]
    basis = np.column_stack([v[:, hi], v[:, lo]])
    return basis, rho1 + rho2, (rho1 - rho2) / (rho1 + rho2)


def construct_for_state(rho, alpha: float | None = None, tol: float = DEFAULT_TOL) -> WitnessReport:
    """Build ``C = {X, Y}`` from rank-one projectors with ``Tr(rho C) < 0``.

    For a qubit, ``rho = (1 - r) I/2 + r|psi><psi|`` and the pair is rotated
    so that ``psi`` is the negative-eigenvalue eigenvector of ``C``, giving
    ``Tr(rho C) = alpha (alpha - r)``. For larger ``rho`` the pair lives on the
    span of two eigenvectors with eigenvalues ``rho1 > rho2`` and the mean is
    ``(rho1 + rho2) alpha (alpha - r_eff)`` with
    ``r_eff = (rho1 - rho2) / (rho1 + rho2)``.

    ``alpha`` must lie in ``(0, r_eff)``; it defaults to ``r_eff / 2``.
    """
    rho = as_density_matrix(rho)
    basis, weight, r_eff = _top_two_subspace(rho, tol)
    if alpha is None:
        alpha = r_eff / 2
    if not 0 < alpha < r_eff:
        raise PreconditionError(f"alpha={alpha} outside the admissible range (0, {r_eff:.12g})")
    X2, Y2 = _aligned_pair(alpha)
    X = as_hermitian(basis @ X2 @ basis.conj().T)
    Y = as_hermitian(basis @ Y2 @ basis.conj().T)
    report = build_C(X, Y, tol)
    predicted = weight * alpha * (alpha - r_eff)
    report.extras.update(
        alpha=float(alpha),
        r_eff=float(r_eff),
        predicted_mean=float(predicted),
        mean=expectation(rho, report.witness),
    )
    return report


def construct_v_for_state(rho, alpha: float | None = None, t: float | None = None,
                          tol: float = DEFAULT_TOL) -> WitnessReport:
    """Ordered-pair witness from the same construction: ``A = X``, ``B = X + tY``.

    ``B^2 - A^2 = t(tY + {X, Y})``, so the mean on ``rho`` is negative for
    ``0 < t < -Tr(rho C) / Tr(rho Y)``; by default ``t`` is half that bound.
    """
    c_report = construct_for_state(rho, alpha, tol)
    X, Y = c_report.constituents
    rho = np.asarray(rho, dtype=complex)
    c_mean = c_report.extras["mean"]
    t_max = -c_mean / expectation(rho, Y)
    if t is None:
        t = t_max / 2
    if t <= 0:
        raise PreconditionError("t must be positive")
    report = build_V(X, X + t * Y, tol)
    report.extras.update(
        alpha=c_report.extras["alpha"], t=float(t), t_max=float(t_max),
        mean=expectation(rho, report.witness),
    )
    return report


@dataclass(frozen=True)
class ForwardStep:
    t: float
    diff_lambda_min: float  # of (X + tY)^2 - X^2
    diff_is_psd: bool
    scaled_lambda_min: float  # of tY^2 + {X, Y}


def square_order_probe(X, Y, t_grid: Sequence[float], tol: float = DEFAULT_TOL) -> list[ForwardStep]:
    """Probe ``(X + tY)^2 - X^2 = t(tY^2 + {X, Y})`` along ``t_grid``.

    A negative eigenvalue at small ``t`` exposes a negative eigenvalue of
    ``{X, Y}``; for commuting ``X, Y >= 0`` every step is PSD.
    """
    X, Y = as_hermitian(X), as_hermitian(Y)
    anti = anticommutator(X, Y)
    Y2 = square(Y)
    steps = []
    for t in t_grid:
        B = X + t * Y
        lam = eigvalsh(square(B) - square(X))[0]
        steps.append(ForwardStep(float(t), float(lam), bool(lam >= -tol), float(eigvalsh(t * Y2 + anti)[0])))
    return steps


# -- generalized witnesses W(R; S) -----------------------------------------------------

@dataclass
class GeneralizedWitnessSpec:
    """Ordered polynomial in ``R`` and ``S``: word (e.g. ``"RS"``) -> real coefficient.

    The empty word stands for the identity.
    """

    coeffs: Mapping[str, float]
    R: np.ndarray
    S: np.ndarray

    def __post_init__(self):
        self.R, self.S = as_hermitian(self.R), as_hermitian(self.S)
        _check_same_dim(self.R, self.S)
        for word, c in self.coeffs.items():
            if set(word) - {"R", "S"}:
                raise PreconditionError(f"word {word!r} uses letters other than R and S")
            if not np.isfinite(c):
                raise PreconditionError(f"coefficient of {word!r} is not finite")


def word_polynomial(coeffs: Mapping[str, float], R, S) -> np.ndarray:
    n = R.shape[0]
    ops = {"R": np.asarray(R, dtype=complex), "S": np.asarray(S, dtype=complex)}
    total = np.zeros((n, n), dtype=complex)
    for word, c in coeffs.items():
        M = np.eye(n, dtype=complex)
        for letter in word:
            M = M @ ops[letter]
        total += c * M
    return total


def hermitize(M) -> tuple[np.ndarray, float]:
    """``(M + M^dagger)/2`` and the max entry of the discarded anti-Hermitian part."""
    M = np.asarray(M, dtype=complex)
    return (M + M.conj().T) / 2, float(np.max(np.abs(M - M.conj().T)) / 2)


def symbol(coeffs: Mapping[str, float], r: float, s: float) -> float:
    """Commutative symbol ``w(r, s)``: each word becomes ``r^#R s^#S``."""
    return float(sum(c * r ** word.count("R") * s ** word.count("S") for word, c in coeffs.items()))


def check_generalized(spec: GeneralizedWitnessSpec, tol: float = DEFAULT_TOL) -> WitnessReport:
    """Test ``W(R; S)`` against the generalized witness definition.

    The symbol is minimised over the exact computed spectra of ``R`` and
    ``S``. ``is_witness`` holds iff that minimum is ``>= -tol`` and the
    Hermitized operator has an eigenvalue below ``-tol``.
    """
    W, residual = hermitize(word_polynomial(spec.coeffs, spec.R, spec.S))
    spec_r, spec_s = eigvalsh(spec.R), eigvalsh(spec.S)
    scalar_min = min(symbol(spec.coeffs, r, s) for r, s in product(spec_r, spec_s))
    lam, vec = min_eig(W)
    verdict = scalar_min >= -tol and lam < -tol
    return WitnessReport(
        KIND_GENERALIZED, (spec.R, spec.S), W, lam, vec, bool(verdict),
        {"coeffs": dict(spec.coeffs), "scalar_min": float(scalar_min), "hermitian_residual": residual},
    )
