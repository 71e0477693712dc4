"""Front-quality indicators and reference fronts.

Reference fronts are built from the problem definitions alone: feasible samples
of the ``g = 1`` curve (uniform in ``f1``) are pooled with points on the CTP
constraint boundaries, and a non-dominated filter keeps the optimal ones.
"""

from __future__ import annotations

import io
import math
import os
from importlib import resources

import numpy as np
from scipy.spatial.distance import cdist

from .core import CatalogError, Problem
from .problems import CTP_PARAMS, PROBLEM_NAMES, CtpParams, _power, get_problem

FRONT_FORMAT_VERSION = "1"
DEFAULT_RESOLUTION = 10_000


def _as_points(points) -> np.ndarray:
    P = np.asarray(points, dtype=float)
    if P.ndim == 1:
        P = P.reshape(-1, 2) if P.size else P.reshape(0, 2)
    return P


def igd(reference, approx) -> float:
    """Mean distance from each reference point to its nearest approximation point."""
    R = _as_points(reference)
    A = _as_points(approx)
    if len(R) == 0:
        raise ValueError("IGD needs a non-empty reference front")
    if len(A) == 0:
        raise ValueError("IGD is undefined for an empty approximation set")
    total = 0.0
    for start in range(0, len(R), 4096):
        total += cdist(R[start:start + 4096], A).min(axis=1).sum()
    return float(total / len(R))


def nondominated_filter(points) -> np.ndarray:
    """Maximal mutually non-dominated subset (minimisation), duplicates collapsed.

    Output is sorted by the first objective.
    """
    P = _as_points(points)
    if len(P) == 0:
        return P.copy()
    if P.shape[1] == 2:
        order = np.lexsort((P[:, 1], P[:, 0]))
        S = P[order]
        # a point survives iff its f2 beats everything with smaller-or-equal f1
        prev_best = np.minimum.accumulate(np.concatenate(([np.inf], S[:-1, 1])))
        return S[S[:, 1] < prev_best]
    U = np.unique(P, axis=0)
    keep = np.ones(len(U), dtype=bool)
    for i in range(len(U)):
        dominated_by = np.all(U <= U[i], axis=1) & np.any(U < U[i], axis=1)
        keep[i] = not dominated_by.any()
    K = U[keep]
    return K[np.argsort(K[:, 0], kind="stable")]


def hv(approx, ref_point) -> float:
    """Area dominated by ``approx`` and bounded by ``ref_point`` (two objectives).

    Points not strictly better than the reference point in every objective
    contribute nothing.
    """
    A = _as_points(approx)
    r = np.asarray(ref_point, dtype=float)
    if r.shape != (2,):
        raise ValueError("hypervolume is implemented for two objectives only")
    if not np.all(np.isfinite(A)) or not np.all(np.isfinite(r)):
        raise ValueError("non-finite value in hypervolume input")
    if len(A) == 0:
        return 0.0
    A = A[np.all(A < r, axis=1)]
    if len(A) == 0:
        return 0.0
    S = nondominated_filter(A)  # sorted by f1 ascending, hence f2 descending
    heights = np.concatenate(([r[1]], S[:-1, 1])) - S[:, 1]
    return float(np.sum((r[0] - S[:, 0]) * heights))


def build_reference_point(reference) -> np.ndarray:
    R = _as_points(reference)
    if len(R) == 0:
        raise ValueError("reference point needs a non-empty front")
    return R.max(axis=0)


# largest f2 considered when tracing CTP constraint boundaries
_CTP_F2_CEILING = 4.0


def _min_feasible_f2(problem: Problem, f1: np.ndarray, f2_start: np.ndarray,
                     step: float = 1e-3, span: float = 3.0, tol: float = 1e-10) -> np.ndarray:
    """Smallest feasible ``f2 >= f2_start`` on each vertical line ``f1 = const``.

    Coarse upward scan for the first feasible grid point, then bisection on the
    bracketing interval. Columns with no feasible point within ``span`` get NaN.
    Feasible pockets thinner than ``step`` can be missed; boundary tracing covers those.
    """
    offsets = np.arange(1, int(round(span / step)) + 1) * step
    out = np.full(len(f1), np.nan)
    for start in range(0, len(f1), 512):
        sl = slice(start, start + 512)
        c1 = f1[sl]
        c2 = f2_start[sl]
        grid2 = c2[:, None] + offsets[None, :]
        grid1 = np.broadcast_to(c1[:, None], grid2.shape)
        F = np.column_stack((grid1.ravel(), grid2.ravel()))
        ok = (problem.constraint_fn(F, None) >= 0.0).all(axis=1).reshape(grid2.shape)
        has = ok.any(axis=1)
        first = np.argmax(ok, axis=1)
        hi = np.where(has, c2 + offsets[first], np.nan)
        lo = np.where(first > 0, c2 + offsets[np.maximum(first - 1, 0)], c2)
        idx = np.flatnonzero(has)
        lo, hi, x1 = lo[idx], hi[idx], c1[idx]
        while np.any(hi - lo > tol):
            mid = 0.5 * (lo + hi)
            feas = (problem.constraint_fn(np.column_stack((x1, mid)), None) >= 0.0).all(axis=1)
            hi = np.where(feas, mid, hi)
            lo = np.where(feas, lo, mid)
        seg = out[sl]
        seg[idx] = hi
    return out


def _nudge_feasible(problem: Problem, F: np.ndarray, direction, max_lift: float = 1e-6) -> np.ndarray:
    """Move near-boundary points along ``direction`` by the smallest power-of-two step that makes them feasible.

    Traced boundary points sit on the constraint up to rounding, which the
    square-root cusps of some CTPs amplify to about 1e-8. Inside a cusp only the
    boundary's own normal direction stays feasible. Points still infeasible
    after ``max_lift`` are dropped.
    """
    direction = np.asarray(direction, dtype=float)
    F = F.copy()
    bad = ~(problem.constraint_fn(F, None) >= 0.0).all(axis=1)
    lift = 1e-15
    while bad.any() and lift <= max_lift:
        trial = F[bad].copy()
        trial += lift * direction
        ok = (problem.constraint_fn(trial, None) >= 0.0).all(axis=1)
        idx = np.flatnonzero(bad)[ok]
        F[idx] = trial[ok]
        bad[idx] = False
        lift *= 2.0
    return F[~bad]


def _ctp_boundary(problem: Problem, params: CtpParams, resolution: int) -> np.ndarray:
    """Points on one CTP constraint boundary that could lie on the front.

    In the rotated frame ``u = sin(t)(f2 - e) + cos(t) f1``,
    ``v = cos(t)(f2 - e) - sin(t) f1`` the boundary is the graph
    ``v = a |sin(b pi u^c)|^d``. It is sampled uniformly in ``u``, plus the exact
    cusp tips where ``b u^c`` is an integer, then rotated back.
    """
    st, ct = math.sin(params.theta), math.cos(params.theta)
    lo, hi = problem.front_f1_range
    corners = np.array([[lo, 0.0], [lo, _CTP_F2_CEILING], [hi, 0.0], [hi, _CTP_F2_CEILING]])
    us = st * (corners[:, 1] - params.e) + ct * corners[:, 0]
    u_lo, u_hi = us.min(), us.max()
    k_max = int(math.ceil(params.b * max(abs(u_lo), abs(u_hi)) ** params.c))
    tips = (np.arange(k_max + 1) / params.b) ** (1.0 / params.c)
    u = np.concatenate((np.linspace(u_lo, u_hi, resolution), tips, -tips))
    u = u[(u >= u_lo) & (u <= u_hi)]
    v = params.a * np.abs(np.sin(params.b * np.pi * _power(u, params.c))) ** params.d
    f1 = ct * u - st * v
    f2 = st * u + ct * v + params.e
    keep = (f1 >= lo) & (f1 <= hi)
    f1, f2 = f1[keep], f2[keep]
    # only the attainable region f2 >= curve(f1) can hold front points
    keep = f2 >= problem.front_curve(f1)
    return np.column_stack((f1[keep], f2[keep]))


def build_reference_front(problem: Problem | str, resolution: int = DEFAULT_RESOLUTION) -> np.ndarray:
    """Dense feasible Pareto front for a cataloged problem.

    Feasible samples of the ``g = 1`` curve are pooled with, for CTPs, infeasible
    samples lifted to the constraint boundary and points traced along each
    boundary including its cusp tips. The non-dominated subset is returned.
    MCOP constraints are ellipses in objective space, so a lifted MCOP sample is
    always dominated by a feasible curve point and is simply discarded.
    """
    if isinstance(problem, str):
        problem = get_problem(problem)
    if problem.front_curve is None:
        raise CatalogError(f"{problem.name} has no analytic front")
    lo, hi = problem.front_f1_range
    f1 = np.linspace(lo, hi, resolution)
    F = np.column_stack((f1, problem.front_curve(f1)))
    feasible = (problem.constraint_fn(F, None) >= 0.0).all(axis=1)
    parts = [F[feasible]]
    ctp = CTP_PARAMS.get(problem.name, ())
    if ctp and not feasible.all():
        lifted = np.column_stack((f1[~feasible], _min_feasible_f2(problem, f1[~feasible], F[~feasible, 1])))
        parts.append(lifted[np.isfinite(lifted[:, 1])])
        for params in ctp:
            normal = (-math.sin(params.theta), math.cos(params.theta))
            parts.append(_nudge_feasible(problem, _ctp_boundary(problem, params, resolution), normal))
    return nondominated_filter(np.vstack(parts))


# ---------------------------------------------------------------- front files

def format_front(points, header: dict | None = None) -> str:
    """Plain-text front: ``#`` metadata lines, then one point per line.

    ``repr`` of a float round-trips exactly, so write/read is bit-exact.
    """
    P = _as_points(points)
    buf = io.StringIO()
    for key, value in (header or {}).items():
        buf.write(f"# {key}: {value}\n")
    for row in P:
        buf.write(" ".join(repr(float(v)) for v in row))
        buf.write("\n")
    return buf.getvalue()


def write_front(path, points, header: dict | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(format_front(points, header))


def parse_front(text: str) -> tuple[np.ndarray, dict]:
    header = {}
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            header[key.strip()] = value.strip()
            continue
        rows.append([float(tok) for tok in line.split(" ")])
    P = np.array(rows, dtype=float) if rows else np.zeros((0, 2))
    return P, header


def read_front(path) -> tuple[np.ndarray, dict]:
    with open(path) as fh:
        return parse_front(fh.read())


def front_header(problem_name: str, resolution: int) -> dict:
    from . import __version__

    return {
        "problem": problem_name,
        "resolution": resolution,
        "generator": f"repairmoea {__version__} reference-front v{FRONT_FORMAT_VERSION}",
    }


def generate_reference_fronts(out_dir, names=PROBLEM_NAMES, resolution: int = DEFAULT_RESOLUTION) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for name in names:
        front = build_reference_front(name, resolution)
        path = os.path.join(out_dir, f"{name}.txt")
        write_front(path, front, front_header(name, resolution))
        paths.append(path)
    return paths


_FRONT_CACHE: dict[str, np.ndarray] = {}


def load_reference_front(name: str, directory=None) -> np.ndarray:
    """Reference front from ``directory``, else the packaged data, else built on the fly."""
    key = name.upper()
    if directory is not None:
        path = os.path.join(directory, f"{key}.txt")
        if os.path.exists(path):
            return read_front(path)[0]
        raise FileNotFoundError(path)
    if key not in _FRONT_CACHE:
        packaged = resources.files("repairmoea").joinpath("data", "fronts", f"{key}.txt")
        if packaged.is_file():
            _FRONT_CACHE[key] = parse_front(packaged.read_text())[0]
        else:
            _FRONT_CACHE[key] = build_reference_front(key)
    return _FRONT_CACHE[key]
