"""Shared domain types, evaluation plumbing and constraint-dominance comparisons.

Constraints are always stored in normalized form: a value ``>= 0`` means the
constraint is satisfied. The scalar violation of a solution is the sum of the
negative parts of its constraint values.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


class ContractError(ValueError):
    """Raised when a caller breaks a precondition (shape, bounds, parameters)."""


class CatalogError(KeyError):
    """Raised for an unknown problem identifier."""


class Ordering(enum.Enum):
    A_BETTER = "a"
    B_BETTER = "b"
    TIE = "tie"


@dataclass(frozen=True)
class Evaluation:
    objectives: np.ndarray
    constraint_values: np.ndarray
    violation: float

    @property
    def feasible(self) -> bool:
        return self.violation == 0.0


@dataclass(frozen=True)
class Individual:
    x: np.ndarray
    evaluation: Evaluation

    @property
    def objectives(self) -> np.ndarray:
        return self.evaluation.objectives

    @property
    def violation(self) -> float:
        return self.evaluation.violation


ObjectiveFn = Callable[[np.ndarray], np.ndarray]
ConstraintFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class Problem:
    """A box-bounded, inequality-constrained bi-objective benchmark.

    ``objective_fn`` maps a ``(k, n)`` batch of decision vectors to ``(k, m)``
    objectives; ``constraint_fn`` maps ``(F, X)`` to ``(k, q)`` constraint
    values. ``front_curve`` gives the unconstrained optimal front (``g = 1``) as
    ``f2 = front_curve(f1)`` over ``front_f1_range`` and is only used to build
    reference fronts.
    """

    name: str
    n: int
    lower: np.ndarray
    upper: np.ndarray
    objective_fn: ObjectiveFn
    constraint_fn: ConstraintFn
    n_constraints: int
    m: int = 2
    front_curve: Callable[[np.ndarray], np.ndarray] | None = None
    front_f1_range: tuple[float, float] = (0.0, 1.0)
    params: dict = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        if self.lower.shape != (self.n,) or self.upper.shape != (self.n,):
            raise ContractError(f"{self.name}: bounds must have shape ({self.n},)")
        if not np.all(self.lower < self.upper):
            raise ContractError(f"{self.name}: every lower bound must be below its upper bound")

    @property
    def bounds(self) -> list[tuple[float, float]]:
        return [(float(lo), float(hi)) for lo, hi in zip(self.lower, self.upper)]

    def evaluate_many(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Evaluate a batch without contract checks (hot path for the algorithms).

        Returns:
            ``(F, G, CV)``: objectives ``(k, m)``, constraint values ``(k, q)``
            and aggregate violations ``(k,)``.
        """
        F = self.objective_fn(X)
        G = self.constraint_fn(F, X)
        return F, G, violations(G)

    def evaluate(self, x) -> Evaluation:
        return evaluate(self, x)


def aggregate_violation(constraint_values) -> float:
    """Sum of ``max(0, -v)`` over all constraint values."""
    v = np.asarray(constraint_values, dtype=float)
    return float(np.maximum(-v, 0.0).sum())


def violations(G: np.ndarray) -> np.ndarray:
    """Row-wise :func:`aggregate_violation` for a ``(k, q)`` array."""
    return np.maximum(-G, 0.0).sum(axis=1)


def evaluate(problem: Problem, x) -> Evaluation:
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.n,):
        raise ContractError(f"{problem.name} expects a vector of length {problem.n}, got shape {x.shape}")
    if np.any(x < problem.lower) or np.any(x > problem.upper):
        raise ContractError(f"{problem.name}: decision vector outside the box; repair it first")
    F, G, CV = problem.evaluate_many(x[None, :])
    return Evaluation(objectives=F[0], constraint_values=G[0], violation=float(CV[0]))


def make_individual(problem: Problem, x) -> Individual:
    x = np.array(x, dtype=float)
    return Individual(x=x, evaluation=evaluate(problem, x))


def pareto_dominates(a, b) -> bool:
    """True iff ``a`` is no worse in every objective and strictly better in one."""
    a = np.asarray(getattr(a, "objectives", a), dtype=float)
    b = np.asarray(getattr(b, "objectives", b), dtype=float)
    if a.shape != b.shape:
        raise ContractError(f"objective count mismatch: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def cdp_compare(a: Individual, b: Individual) -> Ordering:
    """Constraint-dominance comparison.

    Feasibility first, then smaller violation, then Pareto dominance among
    feasible solutions. Ties are reported, never broken here.
    """
    va, vb = a.violation, b.violation
    if va == 0.0 and vb == 0.0:
        if pareto_dominates(a.objectives, b.objectives):
            return Ordering.A_BETTER
        if pareto_dominates(b.objectives, a.objectives):
            return Ordering.B_BETTER
        return Ordering.TIE
    if va < vb:
        return Ordering.A_BETTER
    if vb < va:
        return Ordering.B_BETTER
    return Ordering.TIE


def cdp_dominance_matrix(F: np.ndarray, CV: np.ndarray) -> np.ndarray:
    """Boolean matrix ``D[i, j]``: row ``i`` constraint-dominates row ``j``."""
    feas = CV == 0.0
    le = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=2)
    pareto = le & lt
    both_feasible = feas[:, None] & feas[None, :]
    any_infeasible = ~both_feasible
    # an infeasible i can never beat a feasible j: CV[i] > 0 = CV[j]
    by_violation = CV[:, None] < CV[None, :]
    return np.where(both_feasible, pareto, any_infeasible & by_violation)
