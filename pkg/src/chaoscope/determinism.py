"""Kaplan-Glass determinism coefficient.

Coarse-grain the unit hypercube into q^m boxes and approximate the
reconstructed flow field box by box: every trajectory segment contributes
its unit direction to the box containing the segment midpoint, and kappa
is the pass-weighted mean resultant length of the per-box direction
averages. kappa = 1 for a deterministic flow, ~0 for a random walk.

Anchoring segments at their midpoints (rather than at the starting point)
matters: in overlapping delay coordinates the displacement conditioned on
the starting box has a spurious mean-reversion drift even for iid noise,
which inflates kappa for purely stochastic data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedding import Embedding

__all__ = ["DeterminismParams", "DeterminismResult", "DeterminismError",
           "determinism_coefficient"]


class DeterminismError(ValueError):
    pass


@dataclass(frozen=True)
class DeterminismParams:
    grid_subdivisions: int = 10  # boxes per axis
    min_passes: int = 2          # boxes with fewer passes are excluded

    def __post_init__(self):
        if self.grid_subdivisions < 2:
            raise DeterminismError(
                f"grid_subdivisions must be >= 2, got {self.grid_subdivisions}"
            )
        if self.min_passes < 1:
            raise DeterminismError(f"min_passes must be >= 1, got {self.min_passes}")


@dataclass(frozen=True)
class DeterminismResult:
    kappa: float
    occupied_boxes: int   # boxes crossed by at least one directed segment
    total_passes: int     # segments in boxes that met min_passes
    excluded_boxes: int   # occupied boxes dropped for having too few passes


def determinism_coefficient(e: Embedding, p: DeterminismParams | None = None) -> DeterminismResult:
    """kappa of an embedded trajectory normalized to the unit hypercube.

    Degenerate zero-length segments are skipped; boxes with fewer than
    min_passes segments are excluded (a lone segment trivially has resultant
    length 1 and would inflate kappa).
    """
    if p is None:
        p = DeterminismParams()
    pts = e.points
    if len(e) < 2:
        raise DeterminismError("need at least 2 embedded points")
    if pts.min() < 0.0 or pts.max() > 1.0:
        raise DeterminismError(
            "embedding not normalized to [0,1]^m; min-max normalize the series first"
        )

    q = p.grid_subdivisions
    m = pts.shape[1]
    mids = 0.5 * (pts[:-1] + pts[1:])
    idx = np.minimum((mids * q).astype(np.int64), q - 1)
    strides = q ** np.arange(m, dtype=np.int64)
    box_ids = idx @ strides

    disp = pts[1:] - pts[:-1]
    norms = np.linalg.norm(disp, axis=1)
    moving = norms > 0
    if not moving.any():
        raise DeterminismError("trajectory never moves (all segments have zero length)")
    boxes = box_ids[moving]
    dirs = disp[moving] / norms[moving, None]

    uniq, inv, counts = np.unique(boxes, return_inverse=True, return_counts=True)
    sums = np.zeros((uniq.size, m))
    np.add.at(sums, inv, dirs)

    included = counts >= p.min_passes
    if not included.any():
        raise DeterminismError(
            f"no box reached min_passes={p.min_passes}; coarsen the grid or use more data"
        )
    n_k = counts[included]
    # resultant length of n_k unit vectors is <= 1 up to rounding; clamp so
    # kappa respects its [0,1] invariant bitwise
    resultant = np.minimum(np.linalg.norm(sums[included], axis=1) / n_k, 1.0)
    kappa = float(np.sum(n_k * resultant) / np.sum(n_k))

    return DeterminismResult(
        kappa=kappa,
        occupied_boxes=int(uniq.size),
        total_passes=int(n_k.sum()),
        excluded_boxes=int(np.sum(~included)),
    )
