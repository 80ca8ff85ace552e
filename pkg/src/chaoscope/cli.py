"""Command-line interface.

    chaoscope analyze <csv>   kappa sweep + Lyapunov exponents + verdicts
    chaoscope corrdim <csv>   correlation-integral matrix (log10 C per eps x m)
    chaoscope synth <kind>    synthetic benchmark series to CSV

Exit codes: 0 success, 1 input error, 2 estimator failure across all cells.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .corrdim import CorrdimError, correlation_counts, default_eps_grid
from .determinism import DeterminismParams
from .embedding import EmbeddingParams, delay_embed
from .report import (
    DEFAULT_TOP_K,
    STRONG_THRESHOLD,
    WEAK_THRESHOLD,
    REPORT_VERSION,
    make_verdict,
    render_table,
    run_sweep,
    top_k_by_kappa,
)
from .series import SeriesError, load_csv, min_max_normalize, to_log_returns
from . import synth


class CliError(Exception):
    def __init__(self, msg, code=1):
        super().__init__(msg)
        self.code = code


def _parse_int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _parse_range(text: str) -> list[int]:
    """'2..43' inclusive range, or a comma list."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise CliError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return _parse_int_list(text)


def _load_series(args):
    col = args.value_column
    if col is not None and col.lstrip("-").isdigit():
        col = int(col)
    try:
        s = load_csv(args.csv, value_column=col if col is not None else 0,
                     delimiter=args.delimiter, skip_header=args.skip_header)
        if args.returns:
            s = to_log_returns(s)
        return min_max_normalize(s)
    except SeriesError as exc:
        raise CliError(str(exc)) from exc


def _write(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_input_flags(p):
    p.add_argument("csv", help="input CSV, one observation per row")
    p.add_argument("--value-column", default=None,
                   help="column index or header name holding the values (default 0)")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--skip-header", action="store_true")
    p.add_argument("--returns", action="store_true",
                   help="analyze log returns instead of raw values")
    p.add_argument("--out", default=None, help="write output here instead of stdout")


def _cmd_analyze(args) -> int:
    s = _load_series(args)
    m_set = _parse_int_list(args.m)
    if any(m < 1 or m > 10 for m in m_set):
        raise CliError("--m values must be in 1..10")
    taus = _parse_range(args.tau)
    log_base = 2 if args.log_base == "2" else math.e
    overrides = {}
    if args.evolve is not None:
        overrides["evolve_steps"] = args.evolve
    if args.scale_min is not None:
        overrides["scale_min"] = args.scale_min
    if args.scale_max is not None:
        overrides["scale_max"] = args.scale_max
    if args.min_sep is not None:
        overrides["min_time_separation"] = args.min_sep

    cells = run_sweep(
        s,
        m_set=m_set,
        tau_range=taus,
        dp=DeterminismParams(grid_subdivisions=args.grid, min_passes=args.min_passes),
        top_k=args.top_k,
        mle_all=args.mle_all,
        log_base=log_base,
        wolf_overrides=overrides,
    )
    if all(c.status != "ok" for c in cells):
        raise CliError("all sweep cells failed", code=2)

    verdicts = [make_verdict(c, args.strong_threshold, args.weak_threshold)
                for c in cells if c.mle is not None and c.status == "ok"]

    if args.format == "json":
        report = {
            "series": {"label": s.label, "n": len(s), "transforms": list(s.transform_history)},
            "params": {
                "m_set": m_set, "tau_range": taus, "top_k": args.top_k,
                "grid": args.grid, "min_passes": args.min_passes,
                "log_base": args.log_base, "mle_all": args.mle_all,
                "strong_threshold": args.strong_threshold,
                "weak_threshold": args.weak_threshold,
                "wolf_overrides": overrides,
            },
            "cells": [{"m": c.m, "tau": c.tau, "kappa": c.kappa, "mle": c.mle,
                       "mle_units": c.mle_units, "status": c.status} for c in cells],
            "verdicts": [{"mle_sign": v.mle_sign.value,
                          "reliability_percent": v.reliability_percent,
                          "classification": v.classification.value,
                          "narrative": v.narrative} for v in verdicts],
            "version": REPORT_VERSION,
        }
        _write(json.dumps(report, indent=2) + "\n", args.out)
    elif args.format == "csv":
        _write(render_table(cells, "csv"), args.out)
    else:
        parts = [render_table(cells, "text")]
        for m in sorted(set(m_set)):
            ok = [c for c in cells if c.m == m and c.kappa is not None]
            if ok and args.top_k > 0:
                parts.append(f"\ntop {args.top_k} by kappa, m={m}:\n")
                parts.append(render_table(top_k_by_kappa(ok, args.top_k, m), "text"))
        if verdicts:
            parts.append("\n")
            parts.append(render_table(verdicts, "text"))
        _write("".join(parts), args.out)
    return 0


def _cmd_corrdim(args) -> int:
    s = _load_series(args)
    m_list = sorted(_parse_int_list(args.m_list))
    try:
        eps = default_eps_grid(args.eps_min, args.eps_max, args.eps_count)
    except CorrdimError as exc:
        raise CliError(str(exc)) from exc

    log10c = {}
    for m in m_list:
        w = args.theiler if args.theiler is not None else args.tau * m
        try:
            emb = delay_embed(s, EmbeddingParams(m=m, tau=args.tau))
            counts, total = correlation_counts(emb, eps, w)
        except (CorrdimError, ValueError) as exc:
            raise CliError(f"m={m}: {exc}", code=2) from exc
        with np.errstate(divide="ignore"):
            log10c[m] = np.log10(counts / total)

    lines = ["eps," + ",".join(f"m={m}" for m in m_list)]
    for i, e in enumerate(eps):
        row = [repr(float(e))]
        for m in m_list:
            v = log10c[m][i]
            row.append("" if not np.isfinite(v) else repr(float(v)))
        lines.append(",".join(row))
    _write("\n".join(lines) + "\n", args.out)

    if args.fig:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(6, 4.5))
        for m in m_list:
            ok = np.isfinite(log10c[m])
            ax.plot(np.log10(eps[ok]), log10c[m][ok], marker="o", ms=3, label=f"m={m}")
        ax.set_xlabel("log10 eps")
        ax.set_ylabel("log10 C(eps)")
        ax.set_title(s.label)
        ax.legend()
        fig.tight_layout()
        fig.savefig(args.fig, dpi=150)
        plt.close(fig)
    return 0


def _cmd_synth(args) -> int:
    try:
        if args.kind == "logistic":
            s = synth.gen_logistic(r=args.r, x0=args.x0, n=args.n, transient=args.transient)
        elif args.kind == "lorenz":
            s = synth.gen_lorenz(sigma=args.sigma, rho=args.rho, beta=args.beta,
                                 dt=args.dt, n=args.n, transient=args.transient)
        elif args.kind == "noise":
            s = synth.gen_gaussian_noise(n=args.n, seed=args.seed)
        elif args.kind == "walk":
            s = synth.gen_random_walk(n=args.n, seed=args.seed)
        elif args.kind == "ar1":
            s = synth.gen_ar1(phi=args.phi, n=args.n, seed=args.seed)
        else:
            raise CliError(f"unknown kind {args.kind!r}")
    except synth.GeneratorError as exc:
        raise CliError(str(exc)) from exc
    text = "\n".join(repr(float(v)) for v in s.values) + "\n"
    _write(text, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chaoscope",
                                 description="Determinism and butterfly-effect diagnostics "
                                             "for scalar time series")
    ap.add_argument("--version", action="version", version=f"chaoscope {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="kappa sweep, Lyapunov exponents, verdicts")
    _add_input_flags(a)
    a.add_argument("--m", default="2,3", help="comma list of embedding dimensions (1..10)")
    a.add_argument("--tau", default="2..43", help="delay range, e.g. 2..43 or 2,5,10")
    a.add_argument("--top-k", type=int, default=DEFAULT_TOP_K,
                   help="compute MLE for this many highest-kappa cells per m (0 = kappa only)")
    a.add_argument("--mle-all", action="store_true", help="compute MLE for every cell")
    a.add_argument("--grid", type=int, default=10, help="kappa grid subdivisions per axis")
    a.add_argument("--min-passes", type=int, default=2)
    a.add_argument("--evolve", type=int, default=None, help="samples between renormalizations")
    a.add_argument("--scale-min", type=float, default=None)
    a.add_argument("--scale-max", type=float, default=None)
    a.add_argument("--min-sep", type=int, default=None,
                   help="minimum index gap to a neighbor (default m*tau)")
    a.add_argument("--log-base", choices=["2", "e"], default="e")
    a.add_argument("--strong-threshold", type=float, default=STRONG_THRESHOLD)
    a.add_argument("--weak-threshold", type=float, default=WEAK_THRESHOLD)
    a.add_argument("--format", choices=["text", "csv", "json"], default="text")
    a.set_defaults(func=_cmd_analyze)

    c = sub.add_parser("corrdim", help="correlation-integral matrix over eps x m")
    _add_input_flags(c)
    c.add_argument("--m-list", default="5,10,15,20")
    c.add_argument("--tau", type=int, default=1)
    c.add_argument("--eps-min", type=float, default=1e-3)
    c.add_argument("--eps-max", type=float, default=1.0)
    c.add_argument("--eps-count", type=int, default=24)
    c.add_argument("--theiler", type=int, default=None,
                   help="Theiler window (default m*tau per column)")
    c.add_argument("--fig", default=None, help="also save a log-log C(eps) figure here")
    c.set_defaults(func=_cmd_corrdim)

    g = sub.add_parser("synth", help="generate a benchmark series")
    g.add_argument("kind", choices=["logistic", "lorenz", "noise", "walk", "ar1"])
    g.add_argument("--n", type=int, default=10000)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--transient", type=int, default=None)
    g.add_argument("--r", type=float, default=4.0)
    g.add_argument("--x0", type=float, default=0.2)
    g.add_argument("--sigma", type=float, default=10.0)
    g.add_argument("--rho", type=float, default=28.0)
    g.add_argument("--beta", type=float, default=8.0 / 3.0)
    g.add_argument("--dt", type=float, default=0.01)
    g.add_argument("--phi", type=float, default=0.5)
    g.add_argument("--out", default=None)
    g.set_defaults(func=_cmd_synth)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "transient", None) is None and args.command == "synth":
        args.transient = 1000 if args.kind == "lorenz" else 0
    try:
        return args.func(args)
    except CliError as exc:
        print(f"chaoscope: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
