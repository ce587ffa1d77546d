"""Run configuration shared by the estimators and the command line."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, replace
from typing import Optional

from .localalg import Budget, GenericSampler

SEED_ENV = "CONTACT_TYPE_SEED"


@dataclass(frozen=True)
class RunConfig:
    seed: int = 1
    sample_count: int = 8
    E: int = 4
    D: int = 3
    precision: Optional[int] = None  # None: 4 * (max generator degree) * E
    max_extension: int = 24
    budget_steps: int = 200_000
    height: int = 7

    def __post_init__(self):
        for name in ("sample_count", "E", "D", "max_extension", "budget_steps", "height"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.precision is not None and self.precision < 1:
            raise ValueError("precision must be positive")

    @property
    def sampler(self) -> GenericSampler:
        return GenericSampler(self.seed, self.sample_count, self.height)

    @property
    def budget(self) -> Budget:
        return Budget(max_steps=self.budget_steps)

    def jet_precision(self, max_degree: int) -> int:
        if self.precision is not None:
            return self.precision
        return 4 * max(max_degree, 1) * self.E

    def with_env(self) -> "RunConfig":
        """Apply the seed override from the environment, if set."""
        raw = os.environ.get(SEED_ENV)
        if raw is None or not raw.strip():
            return self
        return replace(self, seed=int(raw))

    def to_json(self):
        return asdict(self)


DEFAULT_CONFIG = RunConfig()
