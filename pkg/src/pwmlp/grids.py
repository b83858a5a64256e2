"""Uniform knot grids on [0, 1] and target samples taken at the knots."""

from dataclasses import dataclass

import numpy as np

from .errors import UsageError


@dataclass(frozen=True)
class KnotGrid:
    """Partition of [0, 1] into n equal subintervals: x_j = j*h, h = 1/n."""

    n: int
    h: float
    knots: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise UsageError("knot grid needs n >= 1")
        k = self.knots
        if k.shape != (self.n + 1,):
            raise UsageError("knot array must have n + 1 entries")
        if not np.all(np.diff(k) > 0.0):
            raise UsageError("knots must be strictly increasing")
        if k[0] != 0.0 or abs(k[-1] - 1.0) > 1e-15:
            raise UsageError("knots must span [0, 1]")

    @staticmethod
    def uniform(n):
        n = int(n)
        if n < 1:
            raise UsageError("knot grid needs n >= 1")
        h = 1.0 / n
        knots = np.arange(n + 1, dtype=np.float64) * h
        knots.flags.writeable = False
        return KnotGrid(n, h, knots)


@dataclass(frozen=True)
class TargetSamples:
    """Target values at the knots: values[j, k] = f_k(x_j), shape (n+1, q)."""

    grid: KnotGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim == 1:
            v = v.reshape(-1, 1)
        if v.ndim != 2 or v.shape[0] != self.grid.n + 1 or v.shape[1] < 1:
            raise UsageError(
                "values must have one row per knot (expected %d, got %r)"
                % (self.grid.n + 1, np.asarray(self.values).shape)
            )
        if not np.all(np.isfinite(v)):
            raise UsageError("target samples must be finite")
        object.__setattr__(self, "values", v)

    @property
    def q(self):
        return self.values.shape[1]

    @staticmethod
    def from_function(grid, fn):
        """Sample a (vectorized) scalar function at the knots."""
        return TargetSamples(grid, np.asarray(fn(grid.knots), dtype=np.float64))
