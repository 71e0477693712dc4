"""NSGA-II with constrained-dominance sorting (NSGA-II-CDP).

Reproduction reuses the DE step of the decomposition algorithm: after binary
tournament selection, offspring ``k`` takes mating-pool member ``k`` as its
base vector and two other pool members as the difference pair. Every offspring
is repaired with the configured :class:`~repairmoea.repair.RepairKind` and then
mutated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ConfigError, RunConfig
from .core import Problem, cdp_dominance_matrix
from .population import Population, RunOutput, trace_record
from .repair import RepairKind, repair_unchecked
from .variation import de_offspring, mutate_with


@dataclass
class RankedPopulation:
    population: Population
    rank: np.ndarray
    crowding: np.ndarray
    fronts: list[np.ndarray]


def fast_nondominated_fronts(F: np.ndarray, CV: np.ndarray) -> list[np.ndarray]:
    """Partition indices into constrained-dominance fronts (Deb's bookkeeping sort)."""
    D = cdp_dominance_matrix(F, CV)
    counts = D.sum(axis=0)
    remaining = np.ones(len(F), dtype=bool)
    fronts = []
    while remaining.any():
        current = np.flatnonzero(remaining & (counts == 0))
        fronts.append(current)
        remaining[current] = False
        counts = counts - D[current].sum(axis=0)
    return fronts


def crowding_distance(F: np.ndarray) -> np.ndarray:
    """Crowding distance of the points of one front.

    Boundary points get ``inf``. An objective with zero range adds nothing and
    marks no boundary.
    """
    F = np.asarray(F, dtype=float)
    k, m = F.shape
    if k <= 2:
        return np.full(k, np.inf)
    dist = np.zeros(k)
    for j in range(m):
        order = np.argsort(F[:, j], kind="stable")
        col = F[order, j]
        span = col[-1] - col[0]
        if span == 0:
            # no spread, so no boundary either: the objective is skipped
            continue
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        dist[order[1:-1]] += (col[2:] - col[:-2]) / span
    return dist


def constrained_nondominated_sort(pop: Population) -> RankedPopulation:
    fronts = fast_nondominated_fronts(pop.F, pop.CV)
    rank = np.empty(len(pop), dtype=int)
    crowd = np.empty(len(pop))
    for r, idx in enumerate(fronts):
        rank[idx] = r
        crowd[idx] = crowding_distance(pop.F[idx])
    return RankedPopulation(population=pop, rank=rank, crowding=crowd, fronts=fronts)


def binary_tournament(rank, crowding, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` winners of tournaments between uniformly drawn pairs (with replacement).

    Lower rank wins, then larger crowding distance, then a fair coin.
    """
    n = len(rank)
    a = rng.integers(n, size=size)
    b = rng.integers(n, size=size)
    coin = rng.random(size) < 0.5
    ra, rb = rank[a], rank[b]
    ca, cb = crowding[a], crowding[b]
    a_wins = (ra < rb) | ((ra == rb) & ((ca > cb) | ((ca == cb) & coin)))
    return np.where(a_wins, a, b)


def survivors(ranked: RankedPopulation, N: int) -> np.ndarray:
    """Best ``N`` indices by rank, then by descending crowding distance."""
    order = np.lexsort((-ranked.crowding, ranked.rank))
    return order[:N]


def _donor_pairs(N: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    # r1, r2 uniform over the other N - 1 members, distinct from each other
    base = np.arange(N)
    o1 = rng.integers(N - 1, size=N)
    o2 = rng.integers(N - 2, size=N)
    o2 = o2 + (o2 >= o1)
    return (base + 1 + o1) % N, (base + 1 + o2) % N


def make_offspring(parents: Population, problem: Problem, repair: RepairKind, config: RunConfig,
                   rng: np.random.Generator) -> np.ndarray:
    N = len(parents)
    var = config.variation
    r1, r2 = _donor_pairs(N, rng)
    X = parents.X
    children = de_offspring(X, X[r1], X[r2], var, rng)
    children = repair_unchecked(children, problem.lower, problem.upper, repair)
    pm = var.mutation_rate(problem.n)
    hits = rng.random(children.shape) < pm
    u = rng.random(children.shape)
    return mutate_with(children, problem.lower, problem.upper, var.eta_m, hits, u)


def nsga2_cdp_run(problem: Problem, repair: RepairKind, config: RunConfig, rng: np.random.Generator,
                  reference=None, ref_point=None, trace_every: int = 1) -> RunOutput:
    """Generational NSGA-II-CDP; stops at the first generation boundary past the budget."""
    config.validate()
    if config.algorithm != "nsga2":
        raise ConfigError(f"config is for {config.algorithm!r}, not NSGA-II")
    repair = RepairKind.parse(repair)
    N = config.pop_size

    pop = Population.random(problem, N, rng)
    ranked = constrained_nondominated_sort(pop)
    evals = N
    trace = [trace_record(0, evals, pop, reference, ref_point)]
    generation = 0
    while evals < config.budget:
        generation += 1
        mating = binary_tournament(ranked.rank, ranked.crowding, N, rng)
        X_child = make_offspring(pop.take(mating), problem, repair, config, rng)
        children = Population.evaluate(problem, X_child)
        evals += N
        union = pop.concat(children)
        ranked_union = constrained_nondominated_sort(union)
        keep = survivors(ranked_union, N)
        pop = union.take(keep)
        ranked = RankedPopulation(pop, ranked_union.rank[keep], ranked_union.crowding[keep], [])
        if generation % trace_every == 0 or evals >= config.budget:
            trace.append(trace_record(generation, evals, pop, reference, ref_point))
    return RunOutput(population=pop, evals=evals, trace=trace)
