"""MOEA/D with constraint-dominance replacement (MOEA/D-CDP).

Each offspring is built from its subproblem's own solution plus a scaled
difference of two mates, repaired back into the box with the configured
:class:`~repairmoea.repair.RepairKind`, mutated, and offered to at most ``n_r``
members of its replacement pool.
"""

from __future__ import annotations

import numpy as np

from .config import ConfigError, RunConfig
from .core import ContractError, Problem
from .population import Population, RunOutput, trace_record
from .repair import RepairKind, repair_unchecked
from .variation import mutate_with


def uniform_weights(N: int, m: int = 2) -> np.ndarray:
    if m != 2:
        raise NotImplementedError("uniform weights are implemented for two objectives only")
    if N < 2:
        raise ContractError("need at least two weight vectors")
    w1 = np.arange(N) / (N - 1)
    return np.column_stack((w1, 1.0 - w1))


def neighborhoods(weights: np.ndarray, T: int) -> np.ndarray:
    """Indices of the ``T`` closest weight vectors to each weight (itself first)."""
    d = np.linalg.norm(weights[:, None, :] - weights[None, :, :], axis=2)
    return np.argsort(d, axis=1, kind="stable")[:, :T]


def tchebycheff(f, lam, z_star):
    """``max_i lam_i * |f_i - z*_i|``; vectorised over leading axes of ``f``/``lam``."""
    f = np.asarray(f, dtype=float)
    return np.max(np.asarray(lam) * np.abs(f - np.asarray(z_star)), axis=-1)


def cdp_replace(child_f, child_cv: float, neighbor_f, neighbor_cv: float, lam, z_star) -> bool:
    """Does the child take the neighbour's slot?"""
    if child_cv == 0.0 and neighbor_cv > 0.0:
        return True
    if child_cv > 0.0 and neighbor_cv > 0.0:
        return child_cv < neighbor_cv
    if child_cv == 0.0 and neighbor_cv == 0.0:
        return tchebycheff(child_f, lam, z_star) < tchebycheff(neighbor_f, lam, z_star)
    return False


def _replace_mask(child_f, child_cv, pool_F, pool_CV, pool_W, z_star):
    # vectorised cdp_replace over a whole pool
    if child_cv == 0.0:
        g_child = (pool_W * np.abs(child_f - z_star)).max(axis=1)
        g_pool = (pool_W * np.abs(pool_F - z_star)).max(axis=1)
        return (pool_CV > 0.0) | (g_child < g_pool)
    # a feasible neighbour has CV == 0 and is never beaten here
    return child_cv < pool_CV


def _two_mates(pool, N: int, i: int, u, rng):
    # rejection sampling from pre-drawn uniforms; falls back to the stream
    size = N if pool is None else len(pool)
    picks = []
    for r in u:
        k = int(r * size)
        cand = k if pool is None else int(pool[k])
        if cand != i and cand not in picks:
            picks.append(cand)
            if len(picks) == 2:
                return picks[0], picks[1]
    while len(picks) < 2:
        k = int(rng.integers(size))
        cand = k if pool is None else int(pool[k])
        if cand != i and cand not in picks:
            picks.append(cand)
    return picks[0], picks[1]


def moead_cdp_run(problem: Problem, repair: RepairKind, config: RunConfig, rng: np.random.Generator,
                  reference=None, ref_point=None, trace_every: int = 1) -> RunOutput:
    """Run MOEA/D-CDP until the evaluation budget is spent.

    The budget is checked between generations (one pass over all N
    subproblems), so the run stops with ``budget <= evals < budget + N``.
    """
    config.validate()
    if config.algorithm != "moead":
        raise ConfigError(f"config is for {config.algorithm!r}, not MOEA/D")
    repair = RepairKind.parse(repair)
    N, T, n_r = config.pop_size, config.T, config.n_r
    var = config.variation
    lower, upper = problem.lower, problem.upper

    W = uniform_weights(N, problem.m)
    B = neighborhoods(W, T)
    pop = Population.random(problem, N, rng)
    X, F, CV = pop.X, pop.F, pop.CV
    G = pop.G
    z = F.min(axis=0)
    evals = N
    trace = [trace_record(0, evals, pop, reference, ref_point)]

    pm = var.mutation_rate(problem.n)
    F_scale = var.F
    all_idx = np.arange(N)
    generation = 0
    while evals < config.budget:
        generation += 1
        # state-independent draws for the whole generation
        local_flags = rng.random(N) < config.delta
        hits = rng.random((N, problem.n)) < pm
        uniforms = rng.random((N, problem.n))
        cr_mask = rng.random((N, problem.n)) < var.CR if var.CR < 1.0 else None
        forced = rng.integers(problem.n, size=N) if var.CR < 1.0 else None
        mate_u = rng.random((N, 4))
        for i in range(N):
            local = bool(local_flags[i])
            pool = B[i] if local else None
            r1, r2 = _two_mates(pool, N, i, mate_u[i], rng)
            child = X[i] + F_scale * (X[r1] - X[r2])
            if cr_mask is not None:
                keep = ~cr_mask[i]
                keep[forced[i]] = False
                child[keep] = X[i][keep]
            child = repair_unchecked(child, lower, upper, repair)
            if hits[i].any():
                child = mutate_with(child, lower, upper, var.eta_m, hits[i], uniforms[i])
            cF, cG, cCV = problem.evaluate_many(child[None, :])
            evals += 1
            cf, ccv = cF[0], float(cCV[0])
            np.minimum(z, cf, out=z)

            candidates = pool if local else all_idx
            order = candidates[rng.permutation(len(candidates))]
            mask = _replace_mask(cf, ccv, F[order], CV[order], W[order], z)
            winners = order[mask][:n_r]
            if len(winners):
                X[winners] = child
                F[winners] = cf
                G[winners] = cG[0]
                CV[winners] = ccv
        if generation % trace_every == 0 or evals >= config.budget:
            trace.append(trace_record(generation, evals, pop, reference, ref_point))

    return RunOutput(population=pop, evals=evals, trace=trace)
