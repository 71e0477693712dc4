import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from repairmoea.config import ConfigError, RunConfig
from repairmoea.nsga2 import (binary_tournament, constrained_nondominated_sort, crowding_distance,
                              fast_nondominated_fronts, nsga2_cdp_run, survivors)
from repairmoea.population import Population
from repairmoea.problems import get_problem
from repairmoea.variation import make_rng


def pop_of(F, CV):
    F = np.asarray(F, dtype=float)
    CV = np.asarray(CV, dtype=float)
    k = len(F)
    return Population(X=np.zeros((k, 1)), F=F, G=-CV[:, None], CV=CV)


def random_population(rng, k):
    # small integer grid so ties and duplicates actually happen
    F = rng.integers(0, 6, size=(k, 2)).astype(float)
    CV = np.where(rng.random(k) < 0.6, 0.0, rng.integers(1, 4, size=k) * 0.5)
    return F, CV


def test_single_front():
    r = constrained_nondominated_sort(pop_of([[0, 3], [1, 2], [2, 1], [3, 0]], [0, 0, 0, 0]))
    np.testing.assert_array_equal(r.rank, 0)
    assert len(r.fronts) == 1


def test_feasible_before_infeasible():
    r = constrained_nondominated_sort(pop_of([[5, 5], [0, 0]], [0.0, 0.1]))
    np.testing.assert_array_equal(r.rank, [0, 1])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 50))
def test_sort_matches_brute_force(seed, k):
    F, CV = random_population(np.random.default_rng(seed), k)
    r = constrained_nondominated_sort(pop_of(F, CV))
    assert list(r.rank) == oracles.brute_force_ranks(F.tolist(), CV.tolist())


def test_front_partition_properties():
    rng = np.random.default_rng(1)
    F, CV = random_population(rng, 40)
    fronts = fast_nondominated_fronts(F, CV)
    assert sorted(np.concatenate(fronts).tolist()) == list(range(40))
    rank = np.empty(40, int)
    for r, idx in enumerate(fronts):
        rank[idx] = r
    for i in range(40):
        for j in range(40):
            if rank[j] < rank[i]:
                assert not oracles.cdp_dominates(F[i], CV[i], F[j], CV[j])
        if rank[i] > 0:
            assert any(oracles.cdp_dominates(F[j], CV[j], F[i], CV[i]) for j in fronts[rank[i] - 1])


def test_crowding_examples():
    np.testing.assert_array_equal(crowding_distance([[0, 1], [1, 0]]), [np.inf, np.inf])
    d = crowding_distance([[0, 1], [0.5, 0.5], [1, 0]])
    assert d[1] == 2.0
    assert np.isinf(d[0]) and np.isinf(d[2])


def test_crowding_zero_range_objective():
    d = crowding_distance([[0, 1], [0.25, 1], [1, 1], [0.5, 1]])
    # second objective is constant: only the first contributes
    assert d[1] == pytest.approx(0.5)
    assert d[3] == pytest.approx(0.75)


def test_tournament_identical_competitors():
    rng = make_rng(0)
    winners = binary_tournament(np.zeros(1, int), np.zeros(1), 50, rng)
    np.testing.assert_array_equal(winners, 0)


def test_tournament_prefers_rank_then_crowding():
    rng = make_rng(0)
    rank = np.array([0, 1])
    wins = binary_tournament(rank, np.array([0.0, 5.0]), 2000, rng)
    # index 1 only wins when drawn against itself
    assert abs((wins == 1).mean() - 0.25) < 0.04
    wins = binary_tournament(np.zeros(2, int), np.array([1.0, 2.0]), 2000, rng)
    assert abs((wins == 1).mean() - 0.75) < 0.04


def test_tournament_tie_is_fair():
    rng = make_rng(3)
    wins = binary_tournament(np.zeros(2, int), np.ones(2), 20_000, rng)
    assert abs((wins == 0).mean() - 0.5) < 0.02


def test_survivors_keep_first_front():
    rng = np.random.default_rng(2)
    F, CV = random_population(rng, 40)
    ranked = constrained_nondominated_sort(pop_of(F, CV))
    keep = survivors(ranked, 20)
    first = ranked.fronts[0]
    if len(first) <= 20:
        assert set(first) <= set(keep.tolist())
    ranks = ranked.rank[keep]
    assert np.all(np.diff(ranks) >= 0)


def small_config(**kw):
    base = dict(problem="CTP3", algorithm="nsga2", pop_size=20, budget=600)
    base.update(kw)
    return RunConfig(**base)


def test_budget_equal_to_population_returns_initial():
    p = get_problem("CTP3")
    out = nsga2_cdp_run(p, "clip", small_config(budget=20), make_rng(4))
    np.testing.assert_array_equal(out.population.X, Population.random(p, 20, make_rng(4)).X)


def test_odd_population_rejected():
    with pytest.raises(ConfigError):
        nsga2_cdp_run(get_problem("CTP3"), "clip", small_config(pop_size=21), make_rng(0))


@pytest.mark.parametrize("repair", ["clip", "reflect", "reverse"])
def test_run_bounds_and_budget(repair):
    p = get_problem("MCOP5")
    out = nsga2_cdp_run(p, repair, small_config(problem="MCOP5", budget=610), make_rng(2))
    assert 610 <= out.evals < 630
    assert np.all((out.population.X >= 0) & (out.population.X <= 1))


def test_elitism_first_front_never_lost():
    p = get_problem("CTP2")
    cfg = small_config(problem="CTP2")
    best = None
    for budget in range(20, 400, 20):
        out = nsga2_cdp_run(p, "reverse", cfg.with_(budget=budget), make_rng(6))
        pop = out.population
        feas = pop.F[pop.feasible]
        if best is not None and len(best):
            # every earlier non-dominated feasible point is matched or dominated now
            for b in best:
                assert any(np.all(f <= b) for f in feas)
        ranked = constrained_nondominated_sort(pop)
        best = pop.F[ranked.fronts[0]][pop.feasible[ranked.fronts[0]]]


def test_same_seed_same_run():
    p = get_problem("CTP5")
    a = nsga2_cdp_run(p, "reflect", small_config(problem="CTP5"), make_rng(9))
    b = nsga2_cdp_run(p, "reflect", small_config(problem="CTP5"), make_rng(9))
    assert a.population.X.tobytes() == b.population.X.tobytes()
