"""CTP2-CTP8 and MCOP1-MCOP7 constrained bi-objective benchmarks.

The CTP instances use ten decision variables in ``[0, 1]`` and a Rastrigin-type
``g`` with a leading factor of 9. Their constraint is the six-parameter
``(theta, a, b, c, d, e)`` generator; CTP8 carries two of them.

The MCOP instances are ZDT-style objectives sharing one constraint system: nine
rotated ellipses placed in objective space. A solution is feasible when its
objective vector lies on or outside every ellipse.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from .core import CatalogError, Problem

CTP_DIM = 10


@dataclass(frozen=True)
class CtpParams:
    theta: float
    a: float
    b: float
    c: float
    d: float
    e: float


@dataclass(frozen=True)
class EllipseParams:
    cx: tuple[float, ...]
    cy: tuple[float, ...]
    a_sq: float
    b_sq: float
    theta: float

    def __post_init__(self):
        if len(self.cx) != 9 or len(self.cy) != 9:
            raise ValueError("exactly nine ellipse centres are required")
        if self.a_sq <= 0 or self.b_sq <= 0:
            raise ValueError("squared semi-axes must be positive")


# Constraint parameter sets of Deb, "Multi-Objective Optimization using
# Evolutionary Algorithms" (Wiley, 2001), CTP2-CTP8.
CTP_PARAMS: dict[str, tuple[CtpParams, ...]] = {
    "CTP2": (CtpParams(-0.2 * math.pi, 0.2, 10.0, 1.0, 6.0, 1.0),),
    "CTP3": (CtpParams(-0.2 * math.pi, 0.1, 10.0, 1.0, 0.5, 1.0),),
    "CTP4": (CtpParams(-0.2 * math.pi, 0.75, 10.0, 1.0, 0.5, 1.0),),
    "CTP5": (CtpParams(-0.2 * math.pi, 0.1, 10.0, 2.0, 0.5, 1.0),),
    "CTP6": (CtpParams(0.1 * math.pi, 40.0, 0.5, 1.0, 2.0, -2.0),),
    "CTP7": (CtpParams(-0.05 * math.pi, 40.0, 5.0, 1.0, 6.0, 0.0),),
    "CTP8": (
        CtpParams(0.1 * math.pi, 40.0, 0.5, 1.0, 2.0, -2.0),
        CtpParams(-0.05 * math.pi, 40.0, 2.0, 1.0, 6.0, 0.0),
    ),
}

ELLIPSES = EllipseParams(
    cx=(0.0, 1.0, 0.0, 1.0, 2.0, 0.0, 1.0, 2.0, 3.0),
    cy=(1.5, 0.5, 2.5, 1.5, 0.5, 3.5, 2.5, 1.5, 0.5),
    a_sq=0.1,
    b_sq=0.2,
    theta=-0.25 * math.pi,
)

CTP_NAMES = tuple(CTP_PARAMS)
MCOP_NAMES = tuple(f"MCOP{k}" for k in range(1, 8))
PROBLEM_NAMES = CTP_NAMES + MCOP_NAMES

# front-shape labels as printed in the MCOP objective table; metadata only
MCOP_LABELS = {
    "MCOP1": "PF convex",
    "MCOP2": "PF discrete",
    "MCOP3": "PF discrete",
    "MCOP4": "PF convex",
    "MCOP5": "PF discrete",
    "MCOP6": "PF discrete",
    "MCOP7": "PF convex",
}


def ctp_g(x_tail) -> np.ndarray | float:
    """``1 + 9 * sum(x^2 - 10 cos(2 pi x) + 10)`` over the trailing variables.

    Accepts a single tail vector or a ``(k, n-1)`` batch.
    """
    t = np.asarray(x_tail, dtype=float)
    g = 1.0 + 9.0 * np.sum(t * t - 10.0 * np.cos(2.0 * np.pi * t) + 10.0, axis=-1)
    return float(g) if np.ndim(g) == 0 else g


def _power(u, c: float):
    if float(c).is_integer():
        return u ** int(c)
    # odd extension keeps the constraint real for negative bases
    return np.sign(u) * np.abs(u) ** c


def ctp_constraint(f1, f2, p: CtpParams):
    """CTP constraint value in ``>= 0 feasible`` form (left side minus right side)."""
    f1 = np.asarray(f1, dtype=float)
    f2 = np.asarray(f2, dtype=float)
    st, ct = math.sin(p.theta), math.cos(p.theta)
    lhs = ct * (f2 - p.e) - st * f1
    u = st * (f2 - p.e) + ct * f1
    rhs = p.a * np.abs(np.sin(p.b * np.pi * _power(u, p.c))) ** p.d
    out = lhs - rhs
    return float(out) if out.ndim == 0 else out


def ellipse_constraints(f1, f2, p: EllipseParams = ELLIPSES) -> np.ndarray:
    """Quadratic form minus one for each of the nine ellipses.

    Returns shape ``(9,)`` for scalar inputs, ``(k, 9)`` for ``(k,)`` inputs.
    Values below zero lie strictly inside an ellipse.
    """
    f1 = np.asarray(f1, dtype=float)[..., None]
    f2 = np.asarray(f2, dtype=float)[..., None]
    dx = f1 - np.asarray(p.cx)
    dy = f2 - np.asarray(p.cy)
    st, ct = math.sin(p.theta), math.cos(p.theta)
    u = dx * ct - dy * st
    v = dx * st + dy * ct
    return u * u / p.a_sq + v * v / p.b_sq - 1.0


def _sqrt_front(f1, g):
    return g * (1.0 - np.sqrt(f1 / g))


def _square_front(f1, g):
    return g * (1.0 - (f1 / g) ** 2)


def _ctp_objectives(X: np.ndarray) -> np.ndarray:
    f1 = X[:, 0]
    g = ctp_g(X[:, 1:])
    return np.column_stack((f1, _sqrt_front(f1, g)))


def _ctp_constraints(params: tuple[CtpParams, ...]):
    def constraints(F: np.ndarray, X: np.ndarray) -> np.ndarray:
        return np.column_stack([ctp_constraint(F[:, 0], F[:, 1], p) for p in params])

    return constraints


def _mcop_constraints(F: np.ndarray, X: np.ndarray) -> np.ndarray:
    return ellipse_constraints(F[:, 0], F[:, 1], ELLIPSES)


def _g_linear(X):
    # ZDT1/ZDT2 g
    return 1.0 + 9.0 * X[:, 1:].sum(axis=1) / (X.shape[1] - 1)


def _g_quartic_root(X):
    return 1.0 + 9.0 * (X[:, 1:].sum(axis=1) / (X.shape[1] - 1)) ** 0.25


def _g_rastrigin(X):
    t = X[:, 1:]
    return 1.0 + 10.0 * (X.shape[1] - 1) + np.sum(t * t - 10.0 * np.cos(4.0 * np.pi * t), axis=1)


def _f1_zdt6(x1):
    return 1.0 - np.exp(-4.0 * x1) * np.sin(6.0 * np.pi * x1) ** 6


def _mcop1(X):
    g = _g_linear(X)
    f1 = g * X[:, 0]
    return np.column_stack((f1, _sqrt_front(f1, g)))


def _mcop2(X):
    g = _g_linear(X)
    f1 = g * X[:, 0]
    return np.column_stack((f1, _square_front(f1, g)))


def _mcop3(X):
    # f1 is x1 unscaled, as printed for this instance
    g = _g_quartic_root(X)
    f1 = X[:, 0]
    return np.column_stack((f1, _sqrt_front(f1, g) - f1 * np.sin(10.0 * np.pi * f1)))


def _mcop4(X):
    g = _g_rastrigin(X)
    f1 = g * X[:, 0]
    return np.column_stack((f1, _sqrt_front(f1, g)))


def _mcop5(X):
    g = _g_rastrigin(X)
    f1 = g * X[:, 0]
    return np.column_stack((f1, _square_front(f1, g)))


def _mcop6(X):
    g = _g_rastrigin(X)
    f1 = _f1_zdt6(X[:, 0])
    return np.column_stack((f1, _square_front(f1, g)))


def _mcop7(X):
    g = _g_rastrigin(X)
    f1 = _f1_zdt6(X[:, 0])
    return np.column_stack((f1, _sqrt_front(f1, g)))


@lru_cache(maxsize=None)
def _zdt6_f1_min() -> float:
    # first arch of sin^6(6 pi x) holds the global maximum of exp(-4x) sin^6(6 pi x)
    res = minimize_scalar(lambda x: _f1_zdt6(x), bounds=(0.0, 1.0 / 6.0), method="bounded",
                          options={"xatol": 1e-14})
    return float(res.fun)


def _sqrt_curve(f1):
    return 1.0 - np.sqrt(f1)


def _square_curve(f1):
    return 1.0 - f1 * f1


def _mcop3_curve(f1):
    return 1.0 - np.sqrt(f1) - f1 * np.sin(10.0 * np.pi * f1)


_MCOP_TABLE = {
    "MCOP1": (_mcop1, 30, _sqrt_curve, False),
    "MCOP2": (_mcop2, 30, _square_curve, False),
    "MCOP3": (_mcop3, 10, _mcop3_curve, False),
    "MCOP4": (_mcop4, 10, _sqrt_curve, False),
    "MCOP5": (_mcop5, 10, _square_curve, False),
    "MCOP6": (_mcop6, 10, _square_curve, True),
    "MCOP7": (_mcop7, 10, _sqrt_curve, True),
}


@lru_cache(maxsize=None)
def make_ctp(name: str) -> Problem:
    key = name.upper()
    if key not in CTP_PARAMS:
        raise CatalogError(f"unknown CTP instance {name!r}; expected one of {CTP_NAMES}")
    params = CTP_PARAMS[key]
    return Problem(
        name=key,
        n=CTP_DIM,
        lower=np.zeros(CTP_DIM),
        upper=np.ones(CTP_DIM),
        objective_fn=_ctp_objectives,
        constraint_fn=_ctp_constraints(params),
        n_constraints=len(params),
        front_curve=_sqrt_curve,
        front_f1_range=(0.0, 1.0),
        params={"constraints": [asdict(p) for p in params]},
    )


@lru_cache(maxsize=None)
def make_mcop(name: str) -> Problem:
    key = name.upper()
    if key not in _MCOP_TABLE:
        raise CatalogError(f"unknown MCOP instance {name!r}; expected one of {MCOP_NAMES}")
    objectives, n, curve, zdt6_f1 = _MCOP_TABLE[key]
    f1_range = (_zdt6_f1_min(), 1.0) if zdt6_f1 else (0.0, 1.0)
    return Problem(
        name=key,
        n=n,
        lower=np.zeros(n),
        upper=np.ones(n),
        objective_fn=objectives,
        constraint_fn=_mcop_constraints,
        n_constraints=9,
        front_curve=curve,
        front_f1_range=f1_range,
        params={"ellipses": asdict(ELLIPSES)},
        label=MCOP_LABELS[key],
    )


def get_problem(name: str) -> Problem:
    key = name.upper()
    if key.startswith("CTP"):
        return make_ctp(key)
    if key.startswith("MCOP"):
        return make_mcop(key)
    raise CatalogError(f"unknown problem {name!r}; expected one of {PROBLEM_NAMES}")


def manifest(names=PROBLEM_NAMES) -> list[dict]:
    """Machine-readable description of the catalog."""
    out = []
    for name in names:
        p = get_problem(name)
        entry = {
            "name": p.name,
            "n": p.n,
            "m": p.m,
            "bounds": p.bounds,
            "constraint_count": p.n_constraints,
            "params": p.params,
        }
        if p.label:
            entry["label"] = p.label
        out.append(entry)
    return out


def write_manifest(path, names=PROBLEM_NAMES) -> None:
    with open(path, "w") as fh:
        json.dump(manifest(names), fh, indent=2)
        fh.write("\n")
