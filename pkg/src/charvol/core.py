"""Path containers and block bookkeeping for increment-based estimators.

Everything downstream works on equally spaced log-price observations. A
path with n+1 observations carries n increments; estimators consume the
increments in non-overlapping blocks of kappa*k_n, where kappa is 1 for
plain blocks and 2 for blocks built from pairs of consecutive increments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SampledPath",
    "EstimatorConfig",
    "BlockIndex",
    "grid_count",
    "increments",
    "block_partition",
]


def grid_count(t: float, delta: float) -> int:
    """Number of whole observation intervals of length delta inside [0, t].

    floor(t/delta) with a small tolerance so that t = m*delta stored in
    floating point does not round down to m-1.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    if t < 0:
        raise ValueError("t must be nonnegative")
    return int(np.floor(t / delta + 1e-9))


@dataclass(frozen=True)
class SampledPath:
    """Equally spaced observations of a (log) price.

    values holds the grid observations X_0, X_delta, ..., X_{n*delta};
    delta is the spacing in days, t0 the calendar time of values[0].
    Horizon arguments elsewhere are measured from the start of the path.
    """

    values: np.ndarray
    delta: float
    t0: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise ValueError("path needs at least two observations")
        if not np.all(np.isfinite(v)):
            raise ValueError("path contains non-finite values")
        if not (np.isfinite(self.delta) and self.delta > 0):
            raise ValueError("delta must be positive and finite")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def n_increments(self) -> int:
        return self.values.size - 1

    @property
    def duration(self) -> float:
        return self.n_increments * self.delta


@dataclass(frozen=True)
class EstimatorConfig:
    """Tuning bundle: block length k_n, CF argument u, debias ratio zeta, kappa."""

    k_n: int
    u: float
    zeta: float = 1.5
    kappa: int = 1

    def __post_init__(self):
        if self.k_n < 2:
            raise ValueError("k_n must be at least 2")
        if not (np.isfinite(self.u) and self.u > 0):
            raise ValueError("u must be positive and finite")
        if not self.zeta > 1:
            raise ValueError("zeta must exceed 1")
        if self.kappa not in (1, 2):
            raise ValueError("kappa must be 1 or 2")


@dataclass(frozen=True)
class BlockIndex:
    """Block j covers increments [first_increment, first_increment + count)."""

    j: int
    first_increment: int
    count: int


def increments(path: SampledPath) -> np.ndarray:
    """First differences of the observed values (length n_increments)."""
    return np.diff(path.values)


def block_partition(
    n_increments: int, k_n: int, kappa: int, horizon_increments: int
) -> tuple[BlockIndex, ...]:
    """Non-overlapping blocks of kappa*k_n increments inside the horizon.

    Block j starts at increment kappa*j*k_n. A trailing partial block is
    dropped. The horizon may be shorter than one block, in which case the
    partition is empty.
    """
    if k_n < 2:
        raise ValueError("k_n must be at least 2")
    if kappa not in (1, 2):
        raise ValueError("kappa must be 1 or 2")
    if not 0 <= horizon_increments <= n_increments:
        raise ValueError("horizon_increments must lie in [0, n_increments]")
    size = kappa * k_n
    n_blocks = horizon_increments // size
    return tuple(BlockIndex(j, j * size, size) for j in range(n_blocks))
