"""Uniform time grids shared by the quadrature, resolvent and simulation code."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid 0 = t_0 < t_1 < ... < t_steps = t_end with t_k = k*dt."""

    t_end: float
    steps: int

    def __post_init__(self):
        if not (self.t_end > 0.0 and np.isfinite(self.t_end)):
            raise ValueError(f"t_end must be positive and finite, got {self.t_end}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError(f"steps must be an integer >= 1, got {self.steps}")

    @property
    def dt(self) -> float:
        return self.t_end / self.steps

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end, self.steps + 1)

    @property
    def n_nodes(self) -> int:
        return self.steps + 1

    def refined(self, factor: int = 2) -> "TimeGrid":
        """Same interval with `factor` times as many steps."""
        return TimeGrid(self.t_end, self.steps * factor)

    def index_of(self, t: float, rtol: float = 1e-9) -> int:
        """Index of the node equal to t (raises if t is not a node)."""
        k = int(round(t / self.dt))
        if k < 0 or k > self.steps or abs(k * self.dt - t) > rtol * max(1.0, self.t_end):
            raise ValueError(f"t={t} is not a node of {self}")
        return k
