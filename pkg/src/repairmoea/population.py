"""Array-backed population container and the per-generation trace record."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Evaluation, Individual, Problem


@dataclass
class Population:
    X: np.ndarray
    F: np.ndarray
    G: np.ndarray
    CV: np.ndarray

    @classmethod
    def evaluate(cls, problem: Problem, X: np.ndarray) -> "Population":
        F, G, CV = problem.evaluate_many(X)
        return cls(X=X, F=F, G=G, CV=CV)

    @classmethod
    def random(cls, problem: Problem, size: int, rng: np.random.Generator) -> "Population":
        X = problem.lower + rng.random((size, problem.n)) * (problem.upper - problem.lower)
        return cls.evaluate(problem, X)

    def __len__(self) -> int:
        return len(self.X)

    def take(self, idx) -> "Population":
        return Population(self.X[idx], self.F[idx], self.G[idx], self.CV[idx])

    def concat(self, other: "Population") -> "Population":
        return Population(
            np.vstack((self.X, other.X)),
            np.vstack((self.F, other.F)),
            np.vstack((self.G, other.G)),
            np.concatenate((self.CV, other.CV)),
        )

    @property
    def feasible(self) -> np.ndarray:
        return self.CV == 0.0

    def individuals(self) -> list[Individual]:
        return [
            Individual(x=self.X[k].copy(),
                       evaluation=Evaluation(self.F[k].copy(), self.G[k].copy(), float(self.CV[k])))
            for k in range(len(self))
        ]


@dataclass
class RunOutput:
    population: Population
    evals: int
    trace: list[dict] = field(default_factory=list)


def trace_record(generation: int, evals: int, pop: Population, reference=None, ref_point=None) -> dict:
    """Generation summary; IGD/HV are added when a reference front is supplied."""
    from .metrics import hv, igd, nondominated_filter

    rec = {
        "generation": generation,
        "evals": evals,
        "best_violation": float(pop.CV.min()),
        "mean_violation": float(pop.CV.mean()),
        "feasible_fraction": float(pop.feasible.mean()),
    }
    if reference is not None:
        feas = pop.F[pop.feasible]
        if len(feas):
            front = nondominated_filter(feas)
            rec["igd"] = igd(reference, front)
            rec["hv"] = hv(front, ref_point) if ref_point is not None else None
        else:
            rec["igd"] = None
            rec["hv"] = 0.0 if ref_point is not None else None
    return rec
