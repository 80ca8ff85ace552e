"""Grassberger-Procaccia machinery: correlation integral C(eps),
correlation dimension D2 from the scaling-region slope, deterministic vs
stochastic saturation verdict, and K2 entropy from successive embedding
dimensions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit, prange

from .embedding import Embedding, EmbeddingParams, delay_embed
from .series import TimeSeries

__all__ = [
    "Saturation",
    "D2Fit",
    "K2Record",
    "CorrelationProfile",
    "CorrdimError",
    "default_eps_grid",
    "correlation_integral",
    "correlation_counts",
    "estimate_d2",
    "saturation_verdict",
    "saturation_from_c_matrix",
    "k2_entropy",
    "correlation_profile",
]

DEFAULT_SLOPE_TOL = 0.15
_MIN_FIT_SEGMENTS = 4    # scaling region needs >= 5 grid points
_MIN_PAIRS_IN_BIN = 10   # C values resting on fewer pairs are too noisy to fit


class CorrdimError(ValueError):
    pass


class Saturation(enum.Enum):
    DETERMINISTIC = "Deterministic"
    STOCHASTIC = "Stochastic"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class D2Fit:
    m: int
    slope: float | None          # None when no scaling region was found
    fit_eps_range: tuple | None  # (eps_lo, eps_hi)
    fit_indices: tuple | None    # (start, stop) into the eps grid, stop exclusive
    max_residual: float | None


@dataclass(frozen=True)
class K2Record:
    k2: float | None             # nats per sample, mean over the scaling region
    values: tuple                # K2(eps) on the grid, nan where undefined
    diverges: bool               # grows without plateau as eps shrinks


@dataclass(frozen=True)
class CorrelationProfile:
    epsilons: tuple
    c_by_m: dict
    theiler_window: int
    d2_by_m: dict
    k2_by_m: dict
    saturation: Saturation


def default_eps_grid(eps_min: float = 1e-3, eps_max: float = 1.0, count: int = 24) -> np.ndarray:
    if not (0 < eps_min < eps_max) or count < 6:
        raise CorrdimError(
            f"need 0 < eps_min < eps_max and count >= 6, got {eps_min}, {eps_max}, {count}"
        )
    return np.geomspace(eps_min, eps_max, count)


@njit(cache=True, parallel=True)
def _pair_bin_counts(pts, eps, w):  # pragma: no cover - exercised via wrappers
    """Per-row histogram of pair max-norm distances over the sorted eps grid.

    Bin b holds pairs with eps[b-1] <= d < eps[b]; bin len(eps) holds the rest.
    """
    n, m = pts.shape
    k = eps.shape[0]
    hist = np.zeros((n, k + 1), dtype=np.int64)
    for i in prange(n - w - 1):
        for j in range(i + w + 1, n):
            d = 0.0
            for c in range(m):
                t = abs(pts[i, c] - pts[j, c])
                if t > d:
                    d = t
            lo = 0
            hi = k
            while lo < hi:
                mid = (lo + hi) // 2
                if eps[mid] > d:
                    hi = mid
                else:
                    lo = mid + 1
            hist[i, lo] += 1
    return hist.sum(axis=0)


def _admissible_pairs(n: int, w: int) -> int:
    span = n - w - 1
    if span <= 0:
        return 0
    return span * (span + 1) // 2


def correlation_counts(e: Embedding, eps_grid, w: int):
    """(pair counts below each eps, total admissible pairs) for |i-j| > w."""
    eps = np.asarray(eps_grid, dtype=np.float64)
    if eps.ndim != 1 or eps.size == 0 or np.any(eps <= 0):
        raise CorrdimError("eps grid must be positive")
    if np.any(np.diff(eps) <= 0):
        raise CorrdimError("eps grid must be strictly increasing")
    if w < 0:
        raise CorrdimError(f"Theiler window must be >= 0, got {w}")
    total = _admissible_pairs(len(e), w)
    if total == 0:
        raise CorrdimError(
            f"no admissible pairs: {len(e)} points with Theiler window {w}"
        )
    hist = _pair_bin_counts(e.points, eps, w)
    counts = np.cumsum(hist[:-1])
    return counts, total


def correlation_integral(e: Embedding, eps: float, w: int = 0) -> float:
    """Fraction of pairs (|i-j| > w) with max-norm distance < eps."""
    counts, total = correlation_counts(e, np.array([float(eps)]), w)
    return float(counts[0]) / total


def _scaling_region(log_eps, log_c, valid, slope_tol):
    """Longest contiguous run of local log-log slopes varying by < slope_tol.

    Returns (start, stop) grid indices (stop exclusive) or None.
    """
    idx = np.flatnonzero(valid)
    if idx.size < _MIN_FIT_SEGMENTS + 1:
        return None
    # split into contiguous valid stretches
    best = None
    breaks = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks, [idx.size - 1]))
    for s, t in zip(starts, ends):
        seg = idx[s : t + 1]
        if seg.size < _MIN_FIT_SEGMENTS + 1:
            continue
        slopes = np.diff(log_c[seg]) / np.diff(log_eps[seg])
        k = slopes.size
        lo = 0
        for hi in range(k):
            while slopes[lo : hi + 1].max() - slopes[lo : hi + 1].min() >= slope_tol:
                lo += 1
            length = hi - lo + 1
            if length >= _MIN_FIT_SEGMENTS and (best is None or length > best[0]):
                best = (length, int(seg[lo]), int(seg[hi + 1]) + 1)
    if best is None:
        return None
    return best[1], best[2]


def _fit_d2(m, eps, c_vals, counts, total, slope_tol):
    log_eps = np.log(eps)
    with np.errstate(divide="ignore"):
        log_c = np.log(c_vals)
    valid = (counts >= _MIN_PAIRS_IN_BIN) & (c_vals < 1.0)
    region = _scaling_region(log_eps, log_c, valid, slope_tol)
    if region is None:
        return D2Fit(m=m, slope=None, fit_eps_range=None, fit_indices=None, max_residual=None)
    a, b = region
    x, y = log_eps[a:b], log_c[a:b]
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.abs(y - (slope * x + intercept)).max())
    return D2Fit(
        m=m,
        slope=float(slope),
        fit_eps_range=(float(eps[a]), float(eps[b - 1])),
        fit_indices=(a, b),
        max_residual=resid,
    )


def estimate_d2(
    s: TimeSeries,
    m_list,
    eps_grid=None,
    w: int | None = None,
    tau: int = 1,
    slope_tol: float = DEFAULT_SLOPE_TOL,
):
    """Fit log C vs log eps over an auto-selected scaling region, per m.

    Returns (d2_by_m, c_by_m, eps_grid). A missing scaling region yields a
    D2Fit with slope None (flagged Inconclusive downstream) instead of an error.
    """
    eps = default_eps_grid() if eps_grid is None else np.asarray(eps_grid, dtype=np.float64)
    if eps.size < 6:
        raise CorrdimError("eps grid needs at least 6 points")
    d2_by_m, c_by_m = {}, {}
    for m in sorted(m_list):
        win = tau * m if w is None else w
        emb = delay_embed(s, EmbeddingParams(m=m, tau=tau))
        counts, total = correlation_counts(emb, eps, win)
        c_vals = counts / total
        c_by_m[m] = c_vals
        d2_by_m[m] = _fit_d2(m, eps, c_vals, counts, total, slope_tol)
    return d2_by_m, c_by_m, eps


def saturation_verdict(d2_by_m: dict, tol: float = 0.1) -> Saturation:
    """Deterministic when D2 stops growing with m; Stochastic when it keeps
    tracking m; Inconclusive otherwise (including missing fits).
    """
    ms = sorted(d2_by_m)
    if len(ms) < 3:
        raise CorrdimError("saturation verdict needs >= 3 consecutive m entries")
    d2 = []
    for m in ms:
        fit = d2_by_m[m]
        slope = fit.slope if isinstance(fit, D2Fit) else fit
        if slope is None:
            return Saturation.INCONCLUSIVE
        d2.append(float(slope))
    increments = np.diff(d2)
    if abs(increments[-1]) < tol and abs(increments[-2]) < tol:
        return Saturation.DETERMINISTIC
    half = len(ms) // 2
    dm = ms[-1] - ms[half]
    if dm > 0 and (d2[-1] - d2[half]) > 0.5 * dm:
        return Saturation.STOCHASTIC
    return Saturation.INCONCLUSIVE


def saturation_from_c_matrix(log10_c_rows, m_values, tol: float = 0.01) -> Saturation:
    """Verdict from a matrix of log10 C at fixed eps: rows are delays, columns
    follow m_values ascending. Saturation (flattening) in m signals
    determinism; steady decrease with no flattening signals stochasticity.
    """
    rows = np.asarray(log10_c_rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[1] != len(m_values) or rows.shape[1] < 3:
        raise CorrdimError("need a rows x m matrix with >= 3 m columns")
    steps = np.diff(rows, axis=1)
    if np.all(np.abs(steps[:, -1]) < tol):
        return Saturation.DETERMINISTIC
    if np.all(steps < 0) and np.all(np.abs(steps[:, -1]) >= tol):
        return Saturation.STOCHASTIC
    return Saturation.INCONCLUSIVE


def k2_entropy(c_m, c_m1, eps_grid, tau: int, fit_indices=None,
               total_pairs: int | None = None) -> K2Record:
    """K2(eps) = ln(C_m / C_{m+1}) / tau, summarized over the scaling region.

    The divergence flag marks profiles where K2 keeps growing as eps shrinks
    with no plateau - the random-system signature. When total_pairs (the
    admissible pair count behind c_m1) is given, bins resting on fewer than
    _MIN_PAIRS_IN_BIN pairs are treated as unreliable and excluded.
    """
    c_m = np.asarray(c_m, dtype=np.float64)
    c_m1 = np.asarray(c_m1, dtype=np.float64)
    eps = np.asarray(eps_grid, dtype=np.float64)
    if c_m.shape != c_m1.shape or c_m.shape != eps.shape:
        raise CorrdimError("C lists and eps grid must share one shape")
    if tau < 1:
        raise CorrdimError(f"tau must be >= 1, got {tau}")
    pos = (c_m > 0) & (c_m1 > 0)
    if not pos.any():
        raise CorrdimError("zero C values over the whole grid")

    vals = np.full(eps.shape, np.nan)
    vals[pos] = np.log(c_m[pos] / c_m1[pos]) / tau

    reliable = pos.copy()
    if total_pairs is not None:
        reliable &= c_m1 * total_pairs >= _MIN_PAIRS_IN_BIN

    region_mask = np.zeros(eps.shape, dtype=bool)
    if fit_indices is not None:
        a, b = fit_indices
        region_mask[a:b] = True
    else:
        log_eps, log_c = np.log(eps), np.where(pos, np.log(np.where(pos, c_m, 1.0)), -np.inf)
        found = _scaling_region(log_eps, log_c, pos & (c_m < 1.0), DEFAULT_SLOPE_TOL)
        if found is not None:
            region_mask[found[0] : found[1]] = True
        else:
            region_mask |= pos
    region = vals[region_mask & reliable & np.isfinite(vals)]
    k2 = float(region.mean()) if region.size else None

    # plateau hunt inside the reliable part of the scaling region; the
    # few-pair small-eps bins are too noisy to trust and the near-saturation
    # bins (C -> 1, K2 -> 0) are trivially flat, so neither says anything
    # about a genuine plateau
    k = region if region.size >= 4 else vals[reliable & (c_m1 < 0.5)]
    diverges = False
    if k.size >= 4:
        has_plateau = False
        for a in range(k.size - 3):
            win = k[a : a + 4]
            scale = max(abs(win.mean()), 1e-12)
            if win.max() - win.min() <= 0.1 * scale:
                has_plateau = True
                break
        diverges = (not has_plateau) and k[0] > k[-1]
    return K2Record(k2=k2, values=tuple(vals), diverges=bool(diverges))


def correlation_profile(
    s: TimeSeries,
    m_list,
    tau: int = 1,
    eps_grid=None,
    w: int | None = None,
    slope_tol: float = DEFAULT_SLOPE_TOL,
    verdict_tol: float = 0.1,
) -> CorrelationProfile:
    """Full C(eps)/D2/K2 analysis over a list of embedding dimensions."""
    d2_by_m, c_by_m, eps = estimate_d2(s, m_list, eps_grid, w, tau, slope_tol)
    ms = sorted(c_by_m)
    k2_by_m = {}
    for m in ms:
        if m + 1 in c_by_m:
            fit = d2_by_m[m]
            win = tau * (m + 1) if w is None else w
            total = _admissible_pairs(len(s) - m * tau, win)
            k2_by_m[m] = k2_entropy(c_by_m[m], c_by_m[m + 1], eps, tau,
                                    fit.fit_indices, total_pairs=total)
    try:
        verdict = saturation_verdict(d2_by_m, verdict_tol)
    except CorrdimError:
        verdict = Saturation.INCONCLUSIVE
    win = {m: (tau * m if w is None else w) for m in ms}
    return CorrelationProfile(
        epsilons=tuple(float(x) for x in eps),
        c_by_m={m: tuple(float(x) for x in c_by_m[m]) for m in ms},
        theiler_window=win[ms[-1]],
        d2_by_m=d2_by_m,
        k2_by_m=k2_by_m,
        saturation=verdict,
    )
