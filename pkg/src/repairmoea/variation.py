"""Offspring generation: the target-based DE step and bounded polynomial mutation.

Randomness always comes from a :class:`numpy.random.Generator` passed in by the
caller; nothing here touches global random state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ContractError


@dataclass(frozen=True)
class VariationParams:
    F: float = 0.5
    CR: float = 1.0
    pm: float | None = None  # None means 1/n
    eta_m: float = 20.0

    def mutation_rate(self, n: int) -> float:
        return 1.0 / n if self.pm is None else self.pm


def make_rng(seed) -> np.random.Generator:
    """One independent PCG64 stream per run."""
    return np.random.default_rng(seed)


def de_offspring(base, donor1, donor2, params: VariationParams, rng: np.random.Generator) -> np.ndarray:
    """``base + F * (donor1 - donor2)`` under binomial crossover with rate ``CR``.

    Works on single vectors or ``(k, n)`` batches (one forced index per row).
    The result may leave the box; repair is the caller's next step.
    """
    base = np.asarray(base, dtype=float)
    donor1 = np.asarray(donor1, dtype=float)
    donor2 = np.asarray(donor2, dtype=float)
    if not (base.shape == donor1.shape == donor2.shape):
        raise ContractError(f"shape mismatch: {base.shape}, {donor1.shape}, {donor2.shape}")
    mutant = base + params.F * (donor1 - donor2)
    if params.CR >= 1.0:
        return mutant
    n = base.shape[-1]
    mask = rng.random(base.shape) < params.CR
    forced = rng.integers(n, size=base.shape[:-1])
    np.put_along_axis(mask, np.expand_dims(forced, -1), True, axis=-1)
    return np.where(mask, mutant, base)


def polynomial_mutation(x, lower, upper, params: VariationParams, rng: np.random.Generator) -> np.ndarray:
    """Bounded polynomial mutation (Deb & Goyal form).

    Each component is perturbed with probability ``pm``; the perturbation is
    scaled by the distance to each bound so the result stays inside the box.
    """
    x = np.asarray(x, dtype=float)
    pm = params.mutation_rate(x.shape[-1])
    if pm <= 0.0:
        return x.copy()
    hit = rng.random(x.shape) < pm
    u = rng.random(x.shape)
    return mutate_with(x, lower, upper, params.eta_m, hit, u)


def mutate_with(x, lower, upper, eta: float, hit, u) -> np.ndarray:
    """Polynomial mutation driven by pre-drawn ``hit`` flags and uniforms ``u``."""
    y = np.array(x, dtype=float)
    flat_y = y.reshape(-1)
    n = y.shape[-1]
    if np.ndim(lower) == 0 or np.ndim(upper) == 0:
        lower = np.broadcast_to(np.asarray(lower, dtype=float), (n,))
        upper = np.broadcast_to(np.asarray(upper, dtype=float), (n,))
    flat_u = np.asarray(u).reshape(-1)
    power = 1.0 / (eta + 1.0)
    for k in np.flatnonzero(hit):
        j = k % n
        lo, hi = float(lower[j]), float(upper[j])
        v, r = float(flat_y[k]), float(flat_u[k])
        width = hi - lo
        if r < 0.5:
            d1 = (v - lo) / width
            val = 2.0 * r + (1.0 - 2.0 * r) * (1.0 - d1) ** (eta + 1.0)
            delta = val ** power - 1.0
        else:
            d2 = (hi - v) / width
            val = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * (1.0 - d2) ** (eta + 1.0)
            delta = 1.0 - val ** power
        # rounding can nudge a value one ulp past a bound
        flat_y[k] = min(hi, max(lo, v + delta * width))
    return y


def select_pool(neighborhood, population_size: int, delta: float, rng: np.random.Generator):
    """Return ``(pool, local)``: the neighbourhood with probability ``delta``, else everyone."""
    if rng.random() < delta:
        return np.asarray(neighborhood), True
    return None, False


def draw_distinct(pool, population_size: int, i: int, rng: np.random.Generator) -> tuple[int, int]:
    """Two distinct members of ``pool`` (or of ``range(population_size)``) other than ``i``."""
    if pool is None:
        size = population_size
        others = size - (1 if 0 <= i < size else 0)
    else:
        size = len(pool)
        others = size - int(np.count_nonzero(pool == i))
    if others < 2:
        raise ContractError("mating pool too small to draw two distinct partners")
    while True:
        k = int(rng.integers(size))
        r1 = k if pool is None else int(pool[k])
        if r1 != i:
            break
    while True:
        k = int(rng.integers(size))
        r2 = k if pool is None else int(pool[k])
        if r2 != i and r2 != r1:
            break
    return r1, r2


def pick_mating_indices(i: int, neighborhood, population_size: int, delta: float,
                        rng: np.random.Generator) -> tuple[int, int]:
    if len(neighborhood) == 0:
        raise ContractError("neighbourhood must be non-empty")
    if population_size < 3:
        raise ContractError("population size must be at least 3")
    pool, _ = select_pool(neighborhood, population_size, delta, rng)
    return draw_distinct(pool, population_size, i, rng)
