"""Run configuration shared by both algorithms and the experiment harness."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, fields, replace

from .repair import RepairKind
from .variation import VariationParams

ALGORITHMS = ("moead", "nsga2")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """One (problem, algorithm, repair) cell plus every tunable.

    Defaults follow the published experimental settings: N = 200, 500 000
    evaluations, 30 runs, T = 20, delta = 0.9, n_r = 2, F = 0.5, CR = 1.0,
    eta_m = 20 and pm = 1/n (``pm=None``).
    """

    problem: str = "MCOP1"
    algorithm: str = "moead"
    repair: RepairKind = RepairKind.REVERSE
    pop_size: int = 200
    budget: int = 500_000
    T: int = 20
    delta: float = 0.9
    n_r: int = 2
    F: float = 0.5
    CR: float = 1.0
    pm: float | None = None
    eta_m: float = 20.0
    seed: int = 0
    runs: int = 30

    def __post_init__(self):
        object.__setattr__(self, "repair", RepairKind.parse(self.repair))
        object.__setattr__(self, "problem", self.problem.upper())
        object.__setattr__(self, "algorithm", self.algorithm.lower())

    @property
    def variation(self) -> VariationParams:
        return VariationParams(F=self.F, CR=self.CR, pm=self.pm, eta_m=self.eta_m)

    def validate(self) -> "RunConfig":
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.pop_size < 3:
            raise ConfigError("population size must be at least 3")
        if self.budget < self.pop_size:
            raise ConfigError(f"budget {self.budget} is smaller than the population size {self.pop_size}")
        if self.runs < 1:
            raise ConfigError("runs must be positive")
        if not 0.0 <= self.delta <= 1.0 or not 0.0 <= self.CR <= 1.0:
            raise ConfigError("delta and CR must lie in [0, 1]")
        if self.algorithm == "moead":
            if not 2 <= self.T <= self.pop_size:
                raise ConfigError(f"need 2 <= T <= N, got T={self.T}, N={self.pop_size}")
            if self.T < 3 and self.delta > 0:
                raise ConfigError("a neighbourhood of fewer than 3 cannot supply two mating partners")
            if self.n_r < 1:
                raise ConfigError("n_r must be positive")
        if self.algorithm == "nsga2" and self.pop_size % 2:
            raise ConfigError("NSGA-II needs an even population size")
        return self

    def to_dict(self) -> dict:
        d = asdict(self)
        d["repair"] = self.repair.value
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def with_(self, **changes) -> "RunConfig":
        return replace(self, **changes)

    def digest(self) -> str:
        """Short stable hash of the configuration (provenance metadata)."""
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]
