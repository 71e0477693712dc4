"""Box-constraint repair operators.

Three ways of pulling a component that left ``[L, U]`` back into the box:

* ``CLIP`` (Repair-A): move it onto the violated bound.
* ``REFLECT`` (Repair-B): mirror it across the violated bound, capped at the
  opposite bound.
* ``REVERSE`` (Repair-C): send it to the *opposite* bound.

Components already inside the box, boundaries included, are never touched.
"""

from __future__ import annotations

import enum

import numpy as np

from .core import ContractError


class RepairKind(enum.Enum):
    CLIP = "clip"
    REFLECT = "reflect"
    REVERSE = "reverse"

    @property
    def letter(self) -> str:
        return {"clip": "A", "reflect": "B", "reverse": "C"}[self.value]

    @classmethod
    def parse(cls, value) -> "RepairKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"a": "clip", "b": "reflect", "c": "reverse",
                   "repair-a": "clip", "repair-b": "reflect", "repair-c": "reverse"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ValueError(f"unknown repair {value!r}; use clip | reflect | reverse") from None


def repair_component(v: float, lower: float, upper: float, kind: RepairKind) -> float:
    if not lower < upper:
        raise ContractError(f"need lower < upper, got [{lower}, {upper}]")
    kind = RepairKind.parse(kind)
    if v < lower:
        if kind is RepairKind.CLIP:
            return lower
        if kind is RepairKind.REFLECT:
            return min(upper, 2.0 * lower - v)
        return upper
    if v > upper:
        if kind is RepairKind.CLIP:
            return upper
        if kind is RepairKind.REFLECT:
            return max(lower, 2.0 * upper - v)
        return lower
    return v


def repair_vector(x, lower, upper, kind: RepairKind) -> np.ndarray:
    """Apply :func:`repair_component` to every coordinate.

    ``x`` may be a single vector or a ``(k, n)`` batch; ``lower``/``upper``
    broadcast against its last axis.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[-1] if x.ndim else 1
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    for b in (lower, upper):
        if b.ndim > 1 or (b.ndim == 1 and len(b) != n):
            raise ContractError(f"length mismatch: x has {n} components, bounds {b.shape}")
    lower = np.broadcast_to(lower, (n,))
    upper = np.broadcast_to(upper, (n,))
    if not np.all(lower < upper):
        raise ContractError("every lower bound must be below its upper bound")
    return repair_unchecked(x, lower, upper, RepairKind.parse(kind))


def repair_unchecked(x: np.ndarray, lower: np.ndarray, upper: np.ndarray, kind: RepairKind) -> np.ndarray:
    """:func:`repair_vector` without argument validation, for inner loops."""
    below = x < lower
    above = x > upper
    if not (below.any() or above.any()):
        return x
    if kind is RepairKind.CLIP:
        lo_fix, hi_fix = lower, upper
    elif kind is RepairKind.REFLECT:
        lo_fix = np.minimum(upper, 2.0 * lower - x)
        hi_fix = np.maximum(lower, 2.0 * upper - x)
    else:
        lo_fix, hi_fix = upper, lower
    return np.where(below, lo_fix, np.where(above, hi_fix, x))
