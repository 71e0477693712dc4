"""Experiment runner: the (algorithm, repair, problem, run) matrix, its result
files, the summary/t-test tables and the plot-data export.

Every run is persisted as one JSON record under ``<out_dir>/runs`` as soon as
it finishes, so an interrupted matrix picks up where it stopped. Seeds derive
from the master seed and the cell identity, never from execution order.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .config import ALGORITHMS, RunConfig
from .metrics import (build_reference_point, format_front, hv, igd, load_reference_front,
                      nondominated_filter)
from .moead import moead_cdp_run
from .nsga2 import nsga2_cdp_run
from .problems import ELLIPSES, PROBLEM_NAMES, ctp_constraint, get_problem
from .repair import RepairKind
from .stats import summarize, t_test
from .variation import make_rng

CSV_COLUMNS = ("problem", "algorithm", "repair", "seed", "igd", "hv", "feasible_fraction", "evals", "wall_ms")
FAILED = "failed"
REPAIR_ORDER = (RepairKind.CLIP, RepairKind.REFLECT, RepairKind.REVERSE)


class IncompleteMatrixError(RuntimeError):
    def __init__(self, missing):
        self.missing = list(missing)
        lines = "\n".join(f"  {a} / {r} / {p}" for a, r, p in self.missing)
        super().__init__(f"{len(self.missing)} result cell(s) missing:\n{lines}")


def derive_seed(master_seed: int, problem: str, algorithm: str, repair, run_index: int) -> int:
    key = f"{master_seed}|{problem.upper()}|{algorithm}|{RepairKind.parse(repair).value}|{run_index}"
    return int.from_bytes(hashlib.sha256(key.encode()).digest()[:8], "little") >> 1


def cell_digest(config: RunConfig) -> str:
    # the run count is not part of a cell's identity: raising it reuses old runs
    return config.with_(runs=1).digest()


@dataclass
class RunRecord:
    problem: str
    algorithm: str
    repair: str
    run_index: int
    seed: int
    igd: float | None
    hv: float
    feasible_fraction: float
    evals: int
    wall_ms: int
    X: list = field(default_factory=list, repr=False)
    F: list = field(default_factory=list, repr=False)
    config_digest: str = ""
    config: dict = field(default_factory=dict, repr=False)
    version: str = __version__

    @property
    def failed(self) -> bool:
        return self.igd is None

    def csv_row(self, timing: bool = True) -> list[str]:
        return [self.problem, self.algorithm, self.repair, str(self.seed),
                FAILED if self.igd is None else repr(self.igd), repr(self.hv),
                repr(self.feasible_fraction), str(self.evals), str(self.wall_ms) if timing else ""]


@dataclass
class RunResult:
    config: RunConfig
    records: list[RunRecord]

    def igd_values(self) -> list[float]:
        return [r.igd for r in self.records if r.igd is not None]

    def hv_values(self) -> list[float]:
        return [r.hv for r in self.records]

    @property
    def failed_count(self) -> int:
        return sum(r.failed for r in self.records)


def final_metrics(F: np.ndarray, CV: np.ndarray, reference: np.ndarray, ref_point: np.ndarray):
    """IGD/HV of the feasible non-dominated part of a final population.

    IGD is ``None`` (a failed run) when nothing is feasible; HV is then 0.
    """
    feas = F[CV == 0.0]
    if len(feas) == 0:
        return None, 0.0
    front = nondominated_filter(feas)
    return igd(reference, front), hv(front, ref_point)


def run_cell(config: RunConfig, run_index: int, fronts_dir=None) -> RunRecord:
    problem = get_problem(config.problem)
    reference = load_reference_front(problem.name, fronts_dir)
    ref_point = build_reference_point(reference)
    seed = derive_seed(config.seed, problem.name, config.algorithm, config.repair, run_index)
    run = moead_cdp_run if config.algorithm == "moead" else nsga2_cdp_run
    start = time.perf_counter()
    out = run(problem, config.repair, config, make_rng(seed))
    wall_ms = int(round((time.perf_counter() - start) * 1000))
    pop = out.population
    igd_value, hv_value = final_metrics(pop.F, pop.CV, reference, ref_point)
    return RunRecord(
        problem=problem.name,
        algorithm=config.algorithm,
        repair=config.repair.value,
        run_index=run_index,
        seed=seed,
        igd=igd_value,
        hv=hv_value,
        feasible_fraction=float(pop.feasible.mean()),
        evals=out.evals,
        wall_ms=wall_ms,
        X=pop.X.tolist(),
        F=pop.F.tolist(),
        config_digest=cell_digest(config),
        config=config.to_dict(),
    )


def _record_path(out_dir, config: RunConfig, run_index: int) -> str:
    name = f"{config.problem}_{config.algorithm}_{config.repair.value}_{run_index:03d}.json"
    return os.path.join(out_dir, "runs", name)


def save_record(path, record: RunRecord) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(record.__dict__, fh)
    os.replace(tmp, path)


def load_record(path) -> RunRecord:
    with open(path) as fh:
        return RunRecord(**json.load(fh))


def _cell_job(args):
    config, run_index, fronts_dir = args
    return run_cell(config, run_index, fronts_dir)


def run_matrix(configs, out_dir=None, threads: int = 1, fronts_dir=None, progress=None) -> list[RunResult]:
    """Run every ``(config, run_index)`` cell, reusing records already on disk.

    Args:
        configs: iterable of :class:`RunConfig`, one per (problem, algorithm, repair).
        out_dir: where run records and ``results.csv`` go; ``None`` keeps
            everything in memory.
        threads: worker processes; results are written by this process only.
        fronts_dir: directory of reference-front files. ``None`` uses the
            packaged fronts.
        progress: optional callable receiving each finished :class:`RunRecord`.
    """
    configs = [c.validate() for c in configs]
    # fail before any run if a reference front is missing
    for name in sorted({c.problem for c in configs}):
        load_reference_front(name, fronts_dir)
    if out_dir is not None:
        os.makedirs(os.path.join(out_dir, "runs"), exist_ok=True)

    records: dict[tuple[int, int], RunRecord] = {}
    todo = []
    for ci, cfg in enumerate(configs):
        for run_index in range(cfg.runs):
            path = _record_path(out_dir, cfg, run_index) if out_dir is not None else None
            if path is not None and os.path.exists(path):
                rec = load_record(path)
                if rec.config_digest == cell_digest(cfg):
                    records[ci, run_index] = rec
                    continue
            todo.append((ci, run_index))

    def finish(key, rec):
        records[key] = rec
        if out_dir is not None:
            save_record(_record_path(out_dir, configs[key[0]], key[1]), rec)
        if progress is not None:
            progress(rec)

    jobs = [(configs[ci], ri, fronts_dir) for ci, ri in todo]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for key, rec in zip(todo, pool.map(_cell_job, jobs)):
                finish(key, rec)
    else:
        for key, job in zip(todo, jobs):
            finish(key, _cell_job(job))

    results = [RunResult(cfg, [records[ci, ri] for ri in range(cfg.runs)]) for ci, cfg in enumerate(configs)]
    if out_dir is not None:
        write_results_csv(os.path.join(out_dir, "results.csv"), results)
    return results


def _provenance(results) -> dict:
    digests = sorted({r.config.digest() for r in results})
    seeds = sorted({r.config.seed for r in results})
    return {
        "generator": f"repairmoea {__version__}",
        "master_seed": ",".join(map(str, seeds)),
        "config_hash": hashlib.sha256("|".join(digests).encode()).hexdigest()[:16],
    }


def results_csv_text(results, timing: bool = True) -> str:
    """The ``results.csv`` document. ``timing=False`` blanks ``wall_ms``, the one
    column that legitimately differs between identical reruns."""
    buf = io.StringIO()
    for key, value in _provenance(results).items():
        buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for res in results:
        for rec in res.records:
            writer.writerow(rec.csv_row(timing))
    return buf.getvalue()


def write_results_csv(path, results) -> None:
    with open(path, "w") as fh:
        fh.write(results_csv_text(results))


def load_results(out_dir) -> list[RunResult]:
    """Rebuild :class:`RunResult` groups from the run records in ``out_dir``."""
    run_dir = os.path.join(out_dir, "runs")
    groups: dict[tuple[str, str, str], list[RunRecord]] = {}
    for name in sorted(os.listdir(run_dir)):
        if name.endswith(".json"):
            rec = load_record(os.path.join(run_dir, name))
            groups.setdefault((rec.problem, rec.algorithm, rec.repair), []).append(rec)
    results = []
    for recs in groups.values():
        recs.sort(key=lambda r: r.run_index)
        results.append(RunResult(RunConfig.from_dict(recs[0].config), recs))
    return results


# ---------------------------------------------------------------- tables

@dataclass
class Table:
    name: str
    header: list[str]
    rows: list[list]
    meta: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key, value in self.meta.items():
            buf.write(f"# {key}: {value}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([_csv_cell(v) for v in row])
        return buf.getvalue()

    def to_text(self) -> str:
        cells = [self.header] + [[_text_cell(v) for v in row] for row in self.rows]
        widths = [max(len(r[k]) for r in cells) for k in range(len(self.header))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
        return "\n".join(lines) + "\n"


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return "nan" if math.isnan(v) else repr(v)
    return str(v)


def _text_cell(v) -> str:
    if isinstance(v, float):
        return "-" if math.isnan(v) else f"{v:.2E}"
    return str(v)


def _mean_std(values) -> tuple[float, float]:
    if len(values) >= 2:
        s = summarize(values)
        return s.mean, s.std
    if len(values) == 1:
        return float(values[0]), math.nan
    return math.nan, math.nan


def _index(results):
    cells = {}
    for res in results:
        c = res.config
        cells[c.algorithm, c.repair, c.problem] = res
    return cells


def _ordered(values, order):
    return [v for v in order if v in values]


def make_tables(results, alpha: float = 0.05) -> dict[str, Table]:
    """Mean/std tables of IGD and HV per (algorithm, repair), plus t-test tables
    for Reverse against each other repair present.

    Raises:
        IncompleteMatrixError: some (algorithm, repair, problem) combination is
            missing while its algorithm, repair and problem all appear elsewhere.
    """
    cells = _index(results)
    algorithms = _ordered({k[0] for k in cells}, ALGORITHMS)
    repairs = _ordered({k[1] for k in cells}, REPAIR_ORDER)
    problems = _ordered({k[2] for k in cells}, PROBLEM_NAMES)
    missing = [(a, r.value, p) for a in algorithms for r in repairs for p in problems
               if (a, r, p) not in cells]
    if missing:
        raise IncompleteMatrixError(missing)

    meta = _provenance(results)
    tables: dict[str, Table] = {}
    for alg in algorithms:
        for metric in ("igd", "hv"):
            header = ["problem"]
            for rep in repairs:
                header += [f"{rep.value}_mean", f"{rep.value}_std"]
                if metric == "igd":
                    header.append(f"{rep.value}_failed")
            rows = []
            for prob in problems:
                row = [prob]
                for rep in repairs:
                    res = cells[alg, rep, prob]
                    vals = res.igd_values() if metric == "igd" else res.hv_values()
                    row += list(_mean_std(vals))
                    if metric == "igd":
                        row.append(res.failed_count)
                rows.append(row)
            tables[f"{metric}_{alg}"] = Table(f"{metric}_{alg}", header, rows, meta)

        if RepairKind.REVERSE not in repairs:
            continue
        rivals = [r for r in repairs if r is not RepairKind.REVERSE]
        if not rivals:
            continue
        for metric in ("igd", "hv"):
            header = ["problem"]
            for rival in rivals:
                tag = f"C_vs_{rival.letter}"
                header += [f"{tag}_h", f"{tag}_p"]
            rows = []
            for prob in problems:
                row = [prob]
                c_res = cells[alg, RepairKind.REVERSE, prob]
                for rival in rivals:
                    o_res = cells[alg, rival, prob]
                    a = c_res.igd_values() if metric == "igd" else c_res.hv_values()
                    b = o_res.igd_values() if metric == "igd" else o_res.hv_values()
                    if len(a) >= 2 and len(b) >= 2:
                        res = t_test(a, b, alpha)
                        row += [res.h, res.p]
                    else:
                        row += ["", math.nan]
                rows.append(row)
            name = f"ttest_{metric}_{alg}"
            tables[name] = Table(name, header, rows, meta)
    return tables


def write_tables(tables: dict[str, Table], out_dir) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for name, table in tables.items():
        for ext, text in (("csv", table.to_csv()), ("txt", table.to_text())):
            path = os.path.join(out_dir, f"{name}.{ext}")
            with open(path, "w") as fh:
                fh.write(text)
            paths.append(path)
    return paths


# ---------------------------------------------------------------- plot data

def ellipse_polylines(points_per_ellipse: int = 181) -> list[np.ndarray]:
    """The nine constraint ellipses as closed polylines in objective space."""
    t = np.linspace(0.0, 2.0 * np.pi, points_per_ellipse)
    a, b = math.sqrt(ELLIPSES.a_sq), math.sqrt(ELLIPSES.b_sq)
    c, s = math.cos(ELLIPSES.theta), math.sin(ELLIPSES.theta)
    u, v = a * np.cos(t), b * np.sin(t)
    lines = []
    for cx, cy in zip(ELLIPSES.cx, ELLIPSES.cy):
        P = np.column_stack((cx + c * u + s * v, cy - s * u + c * v))
        P[-1] = P[0]
        lines.append(P)
    return lines


def ctp_boundary_polylines(name: str, f1_max: float = 1.0, f2_max: float | None = None,
                           grid: int = 400) -> list[np.ndarray]:
    """Zero-level contours of each CTP constraint over an objective-space window."""
    import contourpy

    problem = get_problem(name)
    if f2_max is None:
        f2_max = float(load_reference_front(name)[:, 1].max()) + 1.0
    f1 = np.linspace(0.0, f1_max, grid)
    f2 = np.linspace(0.0, f2_max, grid)
    A, B = np.meshgrid(f1, f2)
    lines = []
    from .problems import CTP_PARAMS

    for p in CTP_PARAMS[problem.name]:
        Z = ctp_constraint(A, B, p)
        gen = contourpy.contour_generator(A, B, Z)
        lines.extend(np.asarray(seg) for seg in gen.lines(0.0))
    return lines


def boundary_polylines(name: str) -> list[np.ndarray]:
    if name.upper().startswith("MCOP"):
        return ellipse_polylines()
    return ctp_boundary_polylines(name)


def format_polylines(lines, header: dict | None = None) -> str:
    buf = io.StringIO()
    for key, value in (header or {}).items():
        buf.write(f"# {key}: {value}\n")
    for k, P in enumerate(lines):
        buf.write(f"# polyline {k}\n")
        buf.write(format_front(P))
    return buf.getvalue()


def read_polylines(path) -> list[np.ndarray]:
    lines, current = [], None
    with open(path) as fh:
        for raw in fh:
            if raw.startswith("# polyline"):
                current = []
                lines.append(current)
            elif raw.startswith("#") or not raw.strip():
                continue
            elif current is not None:
                current.append([float(tok) for tok in raw.split(" ")])
    return [np.array(P) for P in lines]


def best_hv_run(result: RunResult) -> int:
    return int(np.argmax([r.hv for r in result.records]))


def export_plot_data(results, out_dir) -> list[str]:
    """Best-HV final population per (algorithm, repair, problem) plus one
    constraint-boundary file per problem."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    problems = []
    for res in results:
        c = res.config
        rec = res.records[best_hv_run(res)]
        header = {
            "problem": c.problem, "algorithm": c.algorithm, "repair": c.repair.value,
            "run_index": rec.run_index, "seed": rec.seed, "hv": repr(rec.hv),
            "config_hash": rec.config_digest, "generator": f"repairmoea {__version__}",
        }
        path = os.path.join(out_dir, f"front_{c.algorithm}_{c.repair.value}_{c.problem}.txt")
        with open(path, "w") as fh:
            fh.write(format_front(np.asarray(rec.F), header))
        paths.append(path)
        if c.problem not in problems:
            problems.append(c.problem)
    for name in problems:
        path = os.path.join(out_dir, f"boundary_{name}.txt")
        with open(path, "w") as fh:
            fh.write(format_polylines(boundary_polylines(name),
                                      {"problem": name, "generator": f"repairmoea {__version__}"}))
        paths.append(path)
    return paths


def matrix_configs(problems=PROBLEM_NAMES, algorithms=ALGORITHMS, repairs=REPAIR_ORDER,
                   **overrides) -> list[RunConfig]:
    """One :class:`RunConfig` per (algorithm, repair, problem) cell."""
    return [RunConfig(problem=p, algorithm=a, repair=r, **overrides)
            for a in algorithms for r in repairs for p in problems]
