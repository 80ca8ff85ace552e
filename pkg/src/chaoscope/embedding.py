"""Time-delay embedding: reconstruct an m-dimensional phase space from a
scalar series. Shared substrate for the determinism, Lyapunov and
correlation-integral estimators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .series import TimeSeries

__all__ = ["EmbeddingParams", "Embedding", "EmbeddingError", "delay_embed"]


class EmbeddingError(ValueError):
    """Series too short for the requested (m, tau)."""


@dataclass(frozen=True)
class EmbeddingParams:
    m: int
    tau: int

    def __post_init__(self):
        if self.m < 1:
            raise EmbeddingError(f"embedding dimension must be >= 1, got {self.m}")
        if self.tau < 1:
            raise EmbeddingError(f"delay must be >= 1, got {self.tau}")


@dataclass(frozen=True)
class Embedding:
    """Ordered delay vectors; points[i][j] = series[i + j*tau]."""

    points: np.ndarray  # shape (n_points, m), read-only
    params: EmbeddingParams
    source_length: int
    sample_interval: float = 1.0

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=np.float64)
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return int(self.points.shape[0])


def delay_embed(s: TimeSeries, p: EmbeddingParams) -> Embedding:
    """Build the delay-coordinate vectors (x_t, x_{t+tau}, ..., x_{t+(m-1)tau})."""
    n = len(s)
    span = (p.m - 1) * p.tau
    if span >= n:
        raise EmbeddingError(
            f"series of length {n} too short for m={p.m}, tau={p.tau} "
            f"(needs > {span} samples)"
        )
    count = n - span
    cols = [s.values[j * p.tau : j * p.tau + count] for j in range(p.m)]
    pts = np.stack(cols, axis=1)
    return Embedding(
        points=pts,
        params=p,
        source_length=n,
        sample_interval=s.sample_interval,
    )
