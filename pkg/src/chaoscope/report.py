"""Sweep orchestration and table rendering: kappa over a (m, tau) grid,
Lyapunov exponents for the most deterministic cells, and a
reliability-weighted verdict on sensitive dependence.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

from .determinism import DeterminismParams, determinism_coefficient
from .embedding import EmbeddingParams, delay_embed
from .lyapunov import WolfParams, max_lyapunov
from .series import TimeSeries

__all__ = [
    "SweepCell",
    "Verdict",
    "MleSign",
    "Classification",
    "ReportError",
    "run_sweep",
    "top_k_by_kappa",
    "make_verdict",
    "render_table",
    "parse_json_cells",
    "REPORT_VERSION",
]

REPORT_VERSION = "1"
STRONG_THRESHOLD = 90.0
WEAK_THRESHOLD = 70.0
DEFAULT_TOP_K = 5


class ReportError(ValueError):
    pass


class MleSign(enum.Enum):
    POSITIVE = "Positive"
    NON_POSITIVE = "NonPositive"


class Classification(enum.Enum):
    STRONG = "StrongEvidence"
    WEAK = "WeakEvidence"
    NONE = "NoEvidence"


@dataclass(frozen=True)
class SweepCell:
    m: int
    tau: int
    kappa: float | None
    mle: float | None = None
    mle_units: str = ""
    status: str = "ok"


@dataclass(frozen=True)
class Verdict:
    mle_sign: MleSign
    reliability_percent: float
    classification: Classification
    narrative: str


def run_sweep(
    s: TimeSeries,
    m_set,
    tau_range,
    dp: DeterminismParams | None = None,
    wp: WolfParams | None = None,
    top_k: int = DEFAULT_TOP_K,
    mle_all: bool = False,
    log_base: float = math.e,
    wolf_overrides: dict | None = None,
) -> list[SweepCell]:
    """Compute kappa for every (m, tau) cell and the Lyapunov exponent for the
    top_k cells by kappa within each m. Per-cell estimator failures are
    recorded in the cell's status instead of aborting the sweep.
    """
    dp = dp or DeterminismParams()
    taus = list(tau_range)
    units = "log2/sample" if log_base == 2 else "nats/sample"

    kappa_cells = {}
    for m in sorted(set(m_set)):
        for tau in taus:
            try:
                emb = delay_embed(s, EmbeddingParams(m=m, tau=tau))
                res = determinism_coefficient(emb, dp)
                kappa_cells[(m, tau)] = (res.kappa, "ok")
            except Exception as exc:
                kappa_cells[(m, tau)] = (None, f"error: {exc}")

    selected = set()
    for m in sorted(set(m_set)):
        ok = [SweepCell(m=m, tau=t, kappa=k) for (mm, t), (k, st) in kappa_cells.items()
              if mm == m and st == "ok"]
        if mle_all:
            selected.update((m, c.tau) for c in ok)
        elif top_k > 0 and ok:
            for row in top_k_by_kappa(ok, top_k, m):
                selected.add((m, row.tau))

    cells = []
    for (m, tau) in sorted(kappa_cells):
        kappa, status = kappa_cells[(m, tau)]
        mle = None
        if (m, tau) in selected:
            params = wp or WolfParams.defaults_for(
                m, tau, log_base=log_base, **(wolf_overrides or {})
            )
            try:
                emb = delay_embed(s, EmbeddingParams(m=m, tau=tau))
                mle = max_lyapunov(emb, params).lambda_max
            except Exception as exc:
                status = f"error: {exc}"
        cells.append(SweepCell(m=m, tau=tau, kappa=kappa, mle=mle,
                               mle_units=units if mle is not None else "",
                               status=status))
    return cells


def top_k_by_kappa(cells, k: int, m: int) -> list[SweepCell]:
    """Rows for dimension m sorted by kappa descending, ties to smaller tau."""
    if k < 1:
        raise ReportError(f"k must be >= 1, got {k}")
    rows = [c for c in cells if c.m == m and c.kappa is not None]
    if not rows:
        raise ReportError(f"no cells for m={m}")
    rows.sort(key=lambda c: (-c.kappa, c.tau))
    return rows[:k]


def make_verdict(
    cell: SweepCell,
    strong_threshold: float = STRONG_THRESHOLD,
    weak_threshold: float = WEAK_THRESHOLD,
) -> Verdict:
    """Read a cell's MLE sign at kappa-percent reliability."""
    if cell.mle is None:
        raise ReportError(f"cell (m={cell.m}, tau={cell.tau}) has no MLE")
    if not (0 < weak_threshold < strong_threshold <= 100):
        raise ReportError(
            f"need 0 < weak < strong <= 100, got {weak_threshold}, {strong_threshold}"
        )
    sign = MleSign.POSITIVE if cell.mle > 0 else MleSign.NON_POSITIVE
    rel = 100.0 * cell.kappa
    if sign is MleSign.POSITIVE and rel >= strong_threshold:
        cls = Classification.STRONG
    elif sign is MleSign.POSITIVE and rel >= weak_threshold:
        cls = Classification.WEAK
    else:
        cls = Classification.NONE
    # whole-percent figure in the narrative truncates (56.5059 -> 56); the
    # field keeps full precision
    pct = math.floor(rel)
    sign_txt = "positive" if sign is MleSign.POSITIVE else "non-positive"
    if cls is Classification.STRONG:
        concl = "strong evidence of sensitive dependence on initial conditions"
    elif cls is Classification.WEAK:
        concl = "weak evidence of sensitive dependence on initial conditions"
    else:
        concl = ("too low to conclude that there is strong evidence of "
                 "sensitive dependence on initial conditions")
    narrative = (
        f"m={cell.m}, tau={cell.tau}: {sign_txt} maximal Lyapunov exponent "
        f"({cell.mle:.4f}) at reliability level ≃{pct}%: {concl}"
    )
    return Verdict(mle_sign=sign, reliability_percent=rel,
                   classification=cls, narrative=narrative)


def _cell_dict(c: SweepCell) -> dict:
    return {"m": c.m, "tau": c.tau, "kappa": c.kappa, "mle": c.mle,
            "mle_units": c.mle_units, "status": c.status}


def render_table(items, fmt: str = "text") -> str:
    """Render sweep cells or verdicts; text aligns columns with kappa at 6
    decimals and MLE at 4, csv/json carry full precision. Output is
    deterministic byte-for-byte for identical input.
    """
    items = list(items)
    if not items:
        raise ReportError("nothing to render")
    if fmt not in ("text", "csv", "json"):
        raise ReportError(f"unknown format {fmt!r}")

    if isinstance(items[0], Verdict):
        if fmt == "text":
            return "\n".join(v.narrative for v in items) + "\n"
        dicts = [{"mle_sign": v.mle_sign.value,
                  "reliability_percent": v.reliability_percent,
                  "classification": v.classification.value,
                  "narrative": v.narrative} for v in items]
        if fmt == "json":
            return json.dumps(dicts, indent=2) + "\n"
        lines = ["mle_sign,reliability_percent,classification"]
        lines += [f"{d['mle_sign']},{d['reliability_percent']!r},{d['classification']}"
                  for d in dicts]
        return "\n".join(lines) + "\n"

    if fmt == "json":
        return json.dumps([_cell_dict(c) for c in items], indent=2) + "\n"
    if fmt == "csv":
        lines = ["m,tau,kappa,mle,mle_units,status"]
        for c in items:
            kappa = "" if c.kappa is None else repr(c.kappa)
            mle = "" if c.mle is None else repr(c.mle)
            lines.append(f"{c.m},{c.tau},{kappa},{mle},{c.mle_units},{c.status}")
        return "\n".join(lines) + "\n"

    rows = [("m", "tau", "kappa", "MLE")]
    for c in items:
        rows.append((
            str(c.m),
            str(c.tau),
            "" if c.kappa is None else f"{c.kappa:.6f}",
            "" if c.mle is None else f"{c.mle:.4f}",
        ))
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    out = []
    for r in rows:
        out.append("  ".join(r[i].ljust(widths[i]) for i in range(4)).rstrip())
    return "\n".join(out) + "\n"


def parse_json_cells(text: str) -> list[SweepCell]:
    """Inverse of render_table(cells, 'json')."""
    return [SweepCell(**d) for d in json.loads(text)]
