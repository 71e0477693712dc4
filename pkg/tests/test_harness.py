import os
import time

import numpy as np
import pytest

from repairmoea import __version__
from repairmoea.config import RunConfig
from repairmoea.harness import (CSV_COLUMNS, IncompleteMatrixError, RunRecord, RunResult, best_hv_run,
                                derive_seed, export_plot_data, final_metrics, load_results, make_tables,
                                matrix_configs, read_polylines, results_csv_text, run_matrix,
                                write_tables)
from repairmoea.metrics import read_front
from repairmoea.problems import CTP_PARAMS, PROBLEM_NAMES, ctp_constraint, ellipse_constraints
from repairmoea.stats import summarize, t_test

SMOKE = dict(problems=["MCOP1"], algorithms=["moead"], pop_size=40, budget=4000, runs=2)


@pytest.fixture(scope="module")
def smoke(tmp_path_factory):
    out = tmp_path_factory.mktemp("smoke")
    start = time.perf_counter()
    results = run_matrix(matrix_configs(**SMOKE), out)
    return out, results, time.perf_counter() - start


def test_smoke_counts_and_speed(smoke):
    out, results, elapsed = smoke
    assert len(results) == 3
    assert sum(len(r.records) for r in results) == 6
    assert elapsed < 10.0
    assert len(os.listdir(out / "runs")) == 6
    for r in results:
        assert len(r.records) == r.config.runs
        assert all(rec.seed == derive_seed(0, "MCOP1", "moead", r.config.repair, rec.run_index)
                   for rec in r.records)


def test_results_csv_schema(smoke):
    out, results, _ = smoke
    lines = (out / "results.csv").read_text().splitlines()
    header = [line for line in lines if line.startswith("#")]
    assert any(line.startswith("# config_hash: ") for line in header)
    assert any(line.startswith("# master_seed: 0") for line in header)
    assert any(__version__ in line for line in header)
    body = [line for line in lines if not line.startswith("#")]
    assert body[0] == ",".join(CSV_COLUMNS)
    assert len(body) == 7


def test_determinism(smoke, tmp_path):
    _, first, _ = smoke
    second = run_matrix(matrix_configs(**SMOKE), tmp_path)
    assert [r.igd for res in first for r in res.records] == [r.igd for res in second for r in res.records]
    assert results_csv_text(first, timing=False) == results_csv_text(second, timing=False)
    t1, t2 = make_tables(first), make_tables(second)
    assert {k: v.to_csv() for k, v in t1.items()} == {k: v.to_csv() for k, v in t2.items()}


def test_resume_equals_uninterrupted(smoke, tmp_path):
    _, full, _ = smoke
    run_matrix(matrix_configs(**{**SMOKE, "runs": 1}), tmp_path)
    # simulate a crash that lost one finished record
    os.remove(tmp_path / "runs" / "MCOP1_moead_reflect_000.json")
    resumed = run_matrix(matrix_configs(**SMOKE), tmp_path)
    assert results_csv_text(resumed, timing=False) == results_csv_text(full, timing=False)


def test_reuses_existing_records(smoke):
    out, results, _ = smoke
    again = run_matrix(matrix_configs(**SMOKE), out)
    assert [r.wall_ms for res in again for r in res.records] == [r.wall_ms for res in results for r in res.records]


def test_load_results_round_trip(smoke):
    out, results, _ = smoke
    loaded = load_results(out)
    assert results_csv_text(loaded) == results_csv_text(results)


def test_missing_front_fails_fast(tmp_path):
    fronts = tmp_path / "fronts"
    fronts.mkdir()
    with pytest.raises(FileNotFoundError):
        run_matrix(matrix_configs(**SMOKE), tmp_path / "out", fronts_dir=fronts)
    assert not (tmp_path / "out").exists()


def test_derive_seed_stable_and_distinct():
    a = derive_seed(7, "CTP2", "moead", "clip", 0)
    assert a == derive_seed(7, "ctp2", "moead", "A", 0)
    others = {derive_seed(7, "CTP2", "moead", "clip", k) for k in range(1, 50)}
    others |= {derive_seed(8, "CTP2", "moead", "clip", 0), derive_seed(7, "CTP2", "nsga2", "clip", 0)}
    assert a not in others
    assert 0 <= a < 2**63


def test_failed_run_metrics():
    F = np.array([[0.1, 0.9], [0.5, 0.5]])
    igd_value, hv_value = final_metrics(F, np.array([0.2, 1.0]), F, np.array([1.0, 1.0]))
    assert igd_value is None and hv_value == 0.0


def fake(problem, algorithm, repair, igds, hvs):
    cfg = RunConfig(problem=problem, algorithm=algorithm, repair=repair, runs=len(hvs))
    recs = [RunRecord(problem, algorithm, cfg.repair.value, k, k, i, h, 1.0, 100, 0)
            for k, (i, h) in enumerate(zip(igds, hvs))]
    return RunResult(cfg, recs)


def test_tables_equal_summaries():
    a = [0.1, 0.2, 0.4, 0.3]
    b = [0.5, 0.6, 0.55, 0.9]
    res = [fake("CTP2", "moead", "clip", a, b), fake("CTP2", "moead", "reverse", b, a)]
    tables = make_tables(res)
    row = tables["igd_moead"].rows[0]
    header = tables["igd_moead"].header
    assert row[header.index("clip_mean")] == summarize(a).mean
    assert row[header.index("clip_std")] == summarize(a).std
    assert row[header.index("reverse_mean")] == summarize(b).mean
    tt = tables["ttest_igd_moead"]
    assert tt.header == ["problem", "C_vs_A_h", "C_vs_A_p"]
    assert tt.rows[0][1:] == list(t_test(b, a))


def test_identical_results_give_h_zero():
    vals = [0.3, 0.1, 0.2]
    res = [fake("MCOP2", "nsga2", r, vals, vals) for r in ("clip", "reflect", "reverse")]
    tables = make_tables(res)
    for name in ("ttest_igd_nsga2", "ttest_hv_nsga2"):
        row = tables[name].rows[0]
        assert row[1] == 0 and row[3] == 0


def test_paper_shaped_tables_have_fourteen_rows():
    rng = np.random.default_rng(0)
    res = [fake(p, a, r, rng.random(3).tolist(), rng.random(3).tolist())
           for a in ("moead", "nsga2") for r in ("clip", "reflect", "reverse") for p in PROBLEM_NAMES]
    tables = make_tables(res)
    assert set(tables) == {f"{kind}_{a}" for kind in ("igd", "hv", "ttest_igd", "ttest_hv")
                           for a in ("moead", "nsga2")}
    for t in tables.values():
        assert [row[0] for row in t.rows] == list(PROBLEM_NAMES)


def test_failed_runs_counted_not_averaged():
    res = [fake("MCOP6", "moead", "clip", [None, 0.2, 0.4], [0.0, 0.5, 0.7]),
           fake("MCOP6", "moead", "reverse", [0.1, 0.1, 0.3], [0.5, 0.5, 0.6])]
    t = make_tables(res)
    h = t["igd_moead"].header
    row = t["igd_moead"].rows[0]
    assert row[h.index("clip_failed")] == 1
    assert row[h.index("clip_mean")] == pytest.approx(0.3)
    hv_row = t["hv_moead"].rows[0]
    assert hv_row[t["hv_moead"].header.index("clip_mean")] == pytest.approx(0.4)


def test_incomplete_matrix_reported():
    res = [fake("CTP2", "moead", "clip", [0.1, 0.2], [1, 2]),
           fake("CTP3", "moead", "clip", [0.1, 0.2], [1, 2]),
           fake("CTP2", "moead", "reverse", [0.1, 0.2], [1, 2])]
    with pytest.raises(IncompleteMatrixError) as err:
        make_tables(res)
    assert err.value.missing == [("moead", "reverse", "CTP3")]
    assert "CTP3" in str(err.value)


def test_write_tables(tmp_path):
    res = [fake("CTP2", "moead", r, [0.1, 0.2], [1.0, 2.0]) for r in ("clip", "reverse")]
    paths = write_tables(make_tables(res), tmp_path)
    assert len(paths) == 8
    text = (tmp_path / "igd_moead.txt").read_text()
    assert "1.50E-01" in text
    csv_text = (tmp_path / "igd_moead.csv").read_text()
    assert csv_text.startswith("# generator: repairmoea")


def test_best_hv_selection():
    assert best_hv_run(fake("CTP2", "moead", "clip", [1, 1, 1], [0.1, 0.3, 0.2])) == 1


def test_export_counts_and_content(smoke, tmp_path):
    _, results, _ = smoke
    paths = export_plot_data(results, tmp_path)
    assert len(paths) == 4
    fronts = [p for p in paths if "front_" in os.path.basename(p)]
    assert len(fronts) == 3
    for path in fronts:
        F, header = read_front(path)
        assert F.shape == (40, 2)
        assert {"problem", "seed", "config_hash", "generator"} <= set(header)
    lines = read_polylines(tmp_path / "boundary_MCOP1.txt")
    assert len(lines) == 9
    for k, P in enumerate(lines):
        assert np.array_equal(P[0], P[-1])
        vals = ellipse_constraints(P[:, 0], P[:, 1])[:, k]
        assert np.abs(vals).max() < 1e-10


def test_ctp_boundary_on_constraint(tmp_path):
    res = [fake("CTP2", "moead", "clip", [0.1], [0.2])]
    res[0].records[0].F = [[0.5, 0.5]]
    export_plot_data(res, tmp_path)
    lines = read_polylines(tmp_path / "boundary_CTP2.txt")
    assert lines
    P = np.vstack(lines)
    # contour vertices are interpolated on a grid; they sit close to the zero set
    assert np.abs(ctp_constraint(P[:, 0], P[:, 1], CTP_PARAMS["CTP2"][0])).max() < 0.05
