"""Classical (commutative) models on a partition into unit cells, and the
minimal-model check on finite moment datasets.

A step observable is a vector of per-cell values and a state is the vector of
cell masses, so every expectation is a finite sum. Inputs given as
:class:`fractions.Fraction` stay exact end to end.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .operators import QwitError

DEFAULT_TOL = 1e-9


class DatasetError(QwitError):
    pass


@dataclass(frozen=True)
class StepObservable:
    cells: tuple

    def __post_init__(self):
        if len(self.cells) < 1:
            raise DatasetError("a step observable needs at least one cell")
        object.__setattr__(self, "cells", tuple(self.cells))


@dataclass(frozen=True)
class CellState:
    weights: tuple

    def __post_init__(self):
        w = tuple(self.weights)
        if any(x < 0 for x in w):
            raise DatasetError("cell weights must be non-negative")
        if abs(sum(w) - 1) > 1e-12:
            raise DatasetError(f"cell weights sum to {sum(w)}, expected 1")
        object.__setattr__(self, "weights", w)


def classical_expectation(f: StepObservable, p: CellState, power: int = 1):
    """``sum_i p_i f_i^power``."""
    if power not in (1, 2):
        raise DatasetError("power must be 1 or 2")
    if len(f.cells) != len(p.weights):
        raise DatasetError(f"observable has {len(f.cells)} cells but state has {len(p.weights)}")
    return sum(pi * fi**power for pi, fi in zip(p.weights, f.cells))


def peaked_state(n: int, cell: int) -> CellState:
    """Cell mass of a density concentrated inside one cell (0-based)."""
    return CellState(tuple(Fraction(int(i == cell)) for i in range(n)))


# Step functions on [0, 3] with unit cells
STEP_A = StepObservable((Fraction(3, 2), Fraction(3, 2), Fraction(0)))
STEP_B = StepObservable((Fraction(3), Fraction(1), Fraction(1)))
COARSE_Q1 = CellState((Fraction(1, 2), Fraction(1, 2), Fraction(0)))
COARSE_Q2 = CellState((Fraction(0), Fraction(1, 2), Fraction(1, 2)))


def _ordered_cellwise(f: StepObservable, g: StepObservable) -> bool:
    return all(a <= b for a, b in zip(f.cells, g.cells))


def unordered_steps_demo() -> dict:
    """Peaked states resolve every cell, and they show A and B are not ordered."""
    rows = []
    for cell in range(3):
        p = peaked_state(3, cell)
        rows.append({
            "state": f"e{cell + 1}",
            "mean_A": classical_expectation(STEP_A, p),
            "mean_B": classical_expectation(STEP_B, p),
        })
    a_le_b = all(r["mean_A"] <= r["mean_B"] for r in rows)
    b_le_a = all(r["mean_B"] <= r["mean_A"] for r in rows)
    verdict = "ordered" if (a_le_b or b_le_a) else "unordered"
    return {"states": rows, "verdict": verdict,
            "dataset_verdict": minimal_model_check(peaked_states_dataset(), ("A", "B")).verdict.value}


def coarse_states_demo() -> dict:
    """Coarse states order A below B on average, yet one of them has ``<B^2> < <A^2>``."""
    rows = []
    for name, q in (("q1", COARSE_Q1), ("q2", COARSE_Q2)):
        rows.append({
            "state": name,
            "mean_A": classical_expectation(STEP_A, q),
            "mean_B": classical_expectation(STEP_B, q),
            "gap_first": classical_expectation(STEP_B, q) - classical_expectation(STEP_A, q),
            "gap_second": classical_expectation(STEP_B, q, 2) - classical_expectation(STEP_A, q, 2),
        })
    check = minimal_model_check(coarse_states_dataset(), ("A", "B"))
    return {
        "states": rows,
        "q2_gap": rows[1]["gap_second"],
        "verdict": check.verdict.value,
        "witness_states": check.witness_states,
        "model_is_classical": True,
        "observables_ordered_cellwise": _ordered_cellwise(STEP_A, STEP_B),
    }


# -- moment datasets ----------------------------------------------------------------

class Verdict(str, enum.Enum):
    NO_MINIMAL_CLASSICAL_MODEL = "NoMinimalClassicalModel"
    ORDERING_NOT_ESTABLISHED = "OrderingNotEstablished"
    CLASSICAL_CONSISTENT = "ClassicalConsistent"


@dataclass
class MomentDataset:
    observables: list
    states: list
    m1: dict  # m1[state][obs]
    m2: dict = field(default_factory=dict)

    def __post_init__(self):
        for s in self.states:
            for o in self.observables:
                if s in self.m2 and o in self.m2[s] and s in self.m1 and o in self.m1[s]:
                    if self.m2[s][o] < self.m1[s][o] ** 2 - 1e-9:
                        raise DatasetError(f"negative variance for state {s!r}, observable {o!r}")

    @classmethod
    def from_json(cls, data: Mapping) -> "MomentDataset":
        try:
            return cls(list(data["observables"]), list(data["states"]),
                       {s: dict(v) for s, v in data["m1"].items()},
                       {s: dict(v) for s, v in data.get("m2", {}).items()})
        except (KeyError, TypeError, AttributeError) as exc:
            raise DatasetError(f"malformed dataset JSON: {exc}") from exc

    def to_json(self) -> dict:
        return {"observables": list(self.observables), "states": list(self.states),
                "m1": self.m1, "m2": self.m2}

    @classmethod
    def from_classical(cls, observables: Mapping[str, StepObservable],
                       states: Mapping[str, CellState]) -> "MomentDataset":
        m1 = {s: {o: classical_expectation(f, p) for o, f in observables.items()} for s, p in states.items()}
        m2 = {s: {o: classical_expectation(f, p, 2) for o, f in observables.items()} for s, p in states.items()}
        return cls(list(observables), list(states), m1, m2)

    @classmethod
    def from_quantum(cls, observables: Mapping[str, np.ndarray], states: Mapping[str, np.ndarray]) -> "MomentDataset":
        """Moments ``Tr(rho O)`` and ``Tr(rho O^2)`` of Hermitian observables."""
        from .states import expectation

        m1 = {s: {o: expectation(r, O) for o, O in observables.items()} for s, r in states.items()}
        m2 = {s: {o: expectation(r, O @ O) for o, O in observables.items()} for s, r in states.items()}
        return cls(list(observables), list(states), m1, m2)


@dataclass(frozen=True)
class ModelCheck:
    verdict: Verdict
    witness_states: list
    violating_states: list  # states breaking 0 <= <A> <= <B>

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.value, "witness_states": self.witness_states,
                "violating_states": self.violating_states}


def minimal_model_check(data: MomentDataset, obs_pair: Sequence[str], tol: float = DEFAULT_TOL) -> ModelCheck:
    """Can the dataset be reproduced by a minimal classical model for this pair?

    If ``0 <= <A> <= <B>`` on every state in the dataset, a minimal classical
    model must also have ``<A^2> <= <B^2>`` everywhere, so any state with
    ``<A^2> > <B^2>`` rules it out. Only the finite set of listed states is
    quantified over.
    """
    a, b = obs_pair
    for name in (a, b):
        if name not in data.observables:
            raise DatasetError(f"unknown observable {name!r}")
    violating, witnesses = [], []
    for s in data.states:
        try:
            ma, mb = data.m1[s][a], data.m1[s][b]
            sa, sb = data.m2[s][a], data.m2[s][b]
        except KeyError as exc:
            raise DatasetError(f"missing moment for state {s!r}: {exc}") from exc
        if not (-tol <= ma <= mb + tol):
            violating.append(s)
        if sa > sb + tol:
            witnesses.append(s)
    if violating:
        return ModelCheck(Verdict.ORDERING_NOT_ESTABLISHED, [], violating)
    if witnesses:
        return ModelCheck(Verdict.NO_MINIMAL_CLASSICAL_MODEL, witnesses, [])
    return ModelCheck(Verdict.CLASSICAL_CONSISTENT, [], [])


def peaked_states_dataset() -> MomentDataset:
    return MomentDataset.from_classical({"A": STEP_A, "B": STEP_B},
                                        {f"e{i + 1}": peaked_state(3, i) for i in range(3)})


def coarse_states_dataset() -> MomentDataset:
    return MomentDataset.from_classical({"A": STEP_A, "B": STEP_B}, {"q1": COARSE_Q1, "q2": COARSE_Q2})
