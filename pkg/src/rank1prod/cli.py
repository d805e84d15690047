"""Command-line front end: reproducible experiments emitting CSV/JSON/PNG.

Every run writes <out>.json embedding the fully-resolved config and seed;
that file can be re-fed through --config to reproduce the outputs byte for
byte. Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, reports
from .densities import concentration_scan, product_density
from .errors import ConfigurationError, NumericalError, Rank1Error
from .haar import delta_radial_cdf, radial_density_check
from .montecarlo import (compare_modes, haar_re_trace, mixing_experiment,
                         product_radials, wasserstein_sorted)
from .pairs import PAIR_NAMES, Family, Mode, PairDescriptor
from .plancherel import asymptotic_envelope_check, cn, l_star, logn_fit, phi
from .rng import RngStream


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="rank1prod",
        description="Products of spherical classes in rank-one symmetric pairs")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="subcommand", required=True)

    def common(p, seeded=True):
        p.add_argument("--out", help="output path prefix")
        p.add_argument("--config", help="re-run from an emitted config JSON")
        p.add_argument("--threads", type=int,
                       help="worker threads (default: RANK1_THREADS or 1)")
        p.add_argument("--plot", action=argparse.BooleanOptionalAction,
                       default=None, help="render the PNG figure")
        if seeded:
            p.add_argument("--seed", type=int)

    p = sub.add_parser("density", help="analytic (u, pdf) grid of a product density")
    p.add_argument("--pair", choices=PAIR_NAMES)
    p.add_argument("--mode", choices=("paper", "standard"))
    p.add_argument("--n", type=int)
    p.add_argument("--t1", type=float)
    p.add_argument("--t2", type=float)
    p.add_argument("--grid", type=int)
    p.add_argument("--kernel-exponent-override", type=float)
    common(p, seeded=False)

    p = sub.add_parser("sample", help="Monte Carlo radial sample of a class product")
    p.add_argument("--pair", choices=PAIR_NAMES)
    p.add_argument("--mode", choices=("paper", "standard"))
    p.add_argument("--n", type=int)
    p.add_argument("--t1", type=float)
    p.add_argument("--t2", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--full", action=argparse.BooleanOptionalAction, default=None,
                   help="assemble full matrix products instead of the reduced form")
    common(p)

    p = sub.add_parser("compare", help="KS adjudication of paper vs standard mode")
    p.add_argument("--pair", choices=PAIR_NAMES)
    p.add_argument("--n", type=int)
    p.add_argument("--t1", type=float)
    p.add_argument("--t2", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--threshold", type=float)
    common(p)

    p = sub.add_parser("haar-check", help="Haar radial coordinate vs the Jacobian delta")
    p.add_argument("--pair", choices=PAIR_NAMES)
    p.add_argument("--n", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--m-alpha-override", type=int)
    common(p)

    p = sub.add_parser("mixing", help="distance to Haar of alternating class products")
    p.add_argument("--n", type=int)
    p.add_argument("--t1", type=float)
    p.add_argument("--t2", type=float)
    p.add_argument("--max-factors", type=int)
    p.add_argument("--samples-per-point", type=int)
    common(p)

    p = sub.add_parser("plancherel", help="c_n tables, minimal mixing lengths, log-n fit")
    p.add_argument("--n-list", type=_int_list)
    p.add_argument("--t1", type=float)
    p.add_argument("--t2", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--cn-l-list", type=_int_list)
    p.add_argument("--phi-m-list", type=_int_list,
                   help="also emit a CSV grid of these phi_m")
    p.add_argument("--phi-points", type=int)
    p.add_argument("--envelope-m-list", type=_int_list,
                   help="also tabulate |phi_m| against the large-m envelope")
    p.add_argument("--envelope-t", type=float)
    common(p, seeded=False)

    p = sub.add_parser("limit-scan", help="mass near the candidate weak-limit points")
    p.add_argument("--pair", choices=PAIR_NAMES)
    p.add_argument("--mode", choices=("paper", "standard"))
    p.add_argument("--t1", type=float)
    p.add_argument("--t2", type=float)
    p.add_argument("--n-list", type=_int_list)
    p.add_argument("--eps", type=float)
    common(p, seeded=False)

    return top


_DEFAULTS = {
    "density": {"pair": "su-compact", "mode": "standard", "n": 4,
                "t1": math.pi / 4, "t2": math.pi / 4, "grid": 512,
                "kernel_exponent_override": None, "plot": True},
    "sample": {"pair": "su-compact", "mode": "standard", "n": 4,
               "t1": math.pi / 4, "t2": math.pi / 4, "samples": 100_000,
               "full": False, "seed": 0, "plot": False},
    "compare": {"pair": "so-compact", "n": 5, "t1": math.pi / 4,
                "t2": math.pi / 4, "samples": 200_000, "threshold": 0.01,
                "seed": 0, "plot": True},
    "haar-check": {"pair": "su-compact", "n": 2, "samples": 200_000,
                   "m_alpha_override": None, "seed": 0, "plot": True},
    "mixing": {"n": 4, "t1": math.pi / 4, "t2": math.pi / 4,
               "max_factors": 20, "samples_per_point": 4000, "seed": 0,
               "plot": True},
    "plancherel": {"n_list": [4, 6, 8, 12, 16, 24, 32], "t1": 0.05,
                   "t2": 0.05, "eps": 1e-4, "cn_l_list": [1, 2, 3, 4, 5, 6],
                   "phi_m_list": None, "phi_points": 128,
                   "envelope_m_list": None, "envelope_t": 0.8, "plot": True},
    "limit-scan": {"pair": "su-compact", "mode": "paper", "t1": 0.5,
                   "t2": 0.5, "n_list": [4, 6, 8, 12, 16, 24, 32, 48, 64],
                   "eps": 0.05, "plot": True},
}


def _resolve_config(args: argparse.Namespace) -> dict:
    """cli flags > config file > built-in defaults."""
    sub = args.subcommand
    resolved = dict(_DEFAULTS[sub])
    if args.config:
        loaded = json.loads(Path(args.config).read_text())
        if loaded.get("subcommand") != sub:
            raise ConfigurationError(
                f"config file is for {loaded.get('subcommand')!r}, not {sub!r}")
        for key, value in loaded.get("config", {}).items():
            if key in resolved:
                resolved[key] = value
    for key in resolved:
        cli_val = getattr(args, key, None)
        if cli_val is not None:
            resolved[key] = cli_val
    resolved["threads"] = (args.threads if args.threads is not None
                           else int(os.environ.get("RANK1_THREADS", "1")))
    resolved["out"] = args.out or f"rank1_{sub.replace('-', '_')}"
    return resolved


def _emit(out: str, subcommand: str, cfg: dict, results: dict) -> Path:
    payload = {
        "tool": "rank1prod",
        "version": __version__,
        "subcommand": subcommand,
        "config": {k: v for k, v in cfg.items() if k not in ("out", "threads")},
        "results": results,
    }
    return reports.write_json(f"{out}.json", payload)


# ---------------------------------------------------------------------------
# subcommand runners
# ---------------------------------------------------------------------------

def _run_density(cfg: dict) -> list[Path]:
    pair = PairDescriptor.from_name(cfg["pair"], cfg["n"], cfg["mode"])
    dens = product_density(pair, cfg["t1"], cfg["t2"],
                           kernel_exponent_override=cfg["kernel_exponent_override"])
    if dens.degenerate:
        raise NumericalError("degenerate configuration: point mass has no grid")
    grid = int(cfg["grid"])
    step = (dens.hi - dens.lo) / grid
    us = dens.lo + (np.arange(grid) + 0.5) * step
    pdf_vals = dens.pdf(us)
    paths = [reports.write_csv(f"{cfg['out']}.csv", ["u", "pdf"],
                               zip(us.tolist(), pdf_vals.tolist()))]
    paths.append(_emit(cfg["out"], "density", cfg, {"density": dens.to_dict()}))
    if cfg["plot"]:
        paths.append(reports.density_figure(
            f"{cfg['out']}.png", us, pdf_vals,
            f"{pair.name} n={pair.n} {pair.mode.value} t1={cfg['t1']:g} t2={cfg['t2']:g}"))
    return paths


def _run_sample(cfg: dict) -> list[Path]:
    pair = PairDescriptor.from_name(cfg["pair"], cfg["n"], cfg["mode"])
    sample = product_radials(pair, cfg["t1"], cfg["t2"], int(cfg["samples"]),
                             RngStream(int(cfg["seed"])),
                             reduced=not cfg["full"], threads=cfg["threads"])
    paths = [reports.write_csv(f"{cfg['out']}.csv", ["u"],
                               ((v,) for v in sample.values.tolist()))]
    summary = {
        "count": sample.count,
        "mean": float(sample.values.mean()),
        "min": float(sample.values.min()),
        "max": float(sample.values.max()),
        "reduced": sample.reduced,
    }
    paths.append(_emit(cfg["out"], "sample", cfg, {"summary": summary}))
    return paths


def _run_compare(cfg: dict) -> list[Path]:
    pair = PairDescriptor.from_name(cfg["pair"], cfg["n"], "standard")
    report = compare_modes(pair, cfg["t1"], cfg["t2"], int(cfg["samples"]),
                           RngStream(int(cfg["seed"])),
                           threshold=cfg["threshold"], threads=cfg["threads"])
    paths = [_emit(cfg["out"], "compare", cfg, {"comparison": report.to_dict()})]
    if cfg["plot"]:
        from dataclasses import replace
        values = product_radials(pair, cfg["t1"], cfg["t2"],
                                 min(int(cfg["samples"]), 20000),
                                 RngStream(int(cfg["seed"])),
                                 threads=cfg["threads"]).values
        curves = {}
        for mode in (Mode.PAPER, Mode.STANDARD):
            dens = product_density(replace(pair, mode=mode), cfg["t1"], cfg["t2"])
            grid = np.linspace(min(values.min(), dens.lo),
                               max(values.max(), dens.hi), 400)
            curves[mode.value] = (grid, dens.cdf_folded(grid))
        paths.append(reports.compare_figure(
            f"{cfg['out']}.png", values, curves,
            f"{pair.name} n={pair.n}: verdict {report.verdict}"))
    return paths


def _run_haar_check(cfg: dict) -> list[Path]:
    results = {}
    for mode in ("standard", "paper"):
        pair = PairDescriptor.from_name(cfg["pair"], cfg["n"], mode,
                                        m_alpha_override=cfg["m_alpha_override"])
        ks = radial_density_check(pair.group_tag.kind, pair.group_dim, pair,
                                  int(cfg["samples"]),
                                  RngStream(int(cfg["seed"])),
                                  threads=cfg["threads"])
        results[f"ks_{mode}"] = ks
    results["samples"] = int(cfg["samples"])
    paths = [_emit(cfg["out"], "haar-check", cfg, results)]
    if cfg["plot"]:
        from .haar import haar_group_batch, radial_batch
        pair = PairDescriptor.from_name(cfg["pair"], cfg["n"], "standard",
                                        m_alpha_override=cfg["m_alpha_override"])
        gen = RngStream(int(cfg["seed"])).generator()
        mats = haar_group_batch(gen, pair.group_tag.kind, pair.group_dim, 20000)
        u = radial_batch(pair, mats)
        t_sample = np.arccos(np.clip(u, -1.0, 1.0)) \
            if pair.family is Family.ORTHOGONAL else np.arccos(np.clip(u, 0.0, 1.0))
        grid = np.linspace(1e-4, pair.radial_range - 1e-4, 300)
        curves = {}
        for mode in ("standard", "paper"):
            pd = PairDescriptor.from_name(cfg["pair"], cfg["n"], mode,
                                          m_alpha_override=cfg["m_alpha_override"])
            cdf_vals = delta_radial_cdf(pd, grid)
            dens = np.gradient(cdf_vals, grid)
            curves[f"delta ({mode})"] = dens
        paths.append(reports.haar_check_figure(
            f"{cfg['out']}.png", t_sample, grid, curves,
            f"Haar {pair.group_tag} radial coordinate"))
    return paths


def _run_mixing(cfg: dict) -> list[Path]:
    stream = RngStream(int(cfg["seed"]))
    rows = mixing_experiment(int(cfg["n"]), cfg["t1"], cfg["t2"],
                             int(cfg["max_factors"]),
                             int(cfg["samples_per_point"]), stream,
                             threads=cfg["threads"])
    base_a = haar_re_trace(int(cfg["n"]), int(cfg["samples_per_point"]),
                           stream.child(2), threads=cfg["threads"])
    base_b = haar_re_trace(int(cfg["n"]), int(cfg["samples_per_point"]),
                           stream.child(3), threads=cfg["threads"])
    baseline = wasserstein_sorted(base_a, base_b)
    paths = [reports.write_csv(f"{cfg['out']}.csv", ["factors", "distance"],
                               [(r.factors, r.distance) for r in rows])]
    table = [{"factors": r.factors, "distance": r.distance} for r in rows]
    paths.append(_emit(cfg["out"], "mixing", cfg,
                       {"table": table, "haar_baseline": baseline}))
    if cfg["plot"]:
        paths.append(reports.mixing_figure(
            f"{cfg['out']}.png", [r.factors for r in rows],
            [r.distance for r in rows], baseline,
            f"SU({cfg['n']}) mixing, t1={cfg['t1']:g} t2={cfg['t2']:g}"))
    return paths


def _run_plancherel(cfg: dict) -> list[Path]:
    n_list = list(cfg["n_list"])
    rows = []
    for n in n_list:
        entry = {"n": n, "l_star": l_star(n, cfg["t1"], cfg["t2"], cfg["eps"])}
        entry["cn"] = {str(l): cn(n, cfg["t1"], cfg["t2"], l).value
                       for l in cfg["cn_l_list"]}
        rows.append(entry)
    results = {"rows": rows, "eps": cfg["eps"]}
    if len(n_list) >= 5:
        fit = logn_fit(n_list, cfg["t1"], cfg["t2"], cfg["eps"])
        results["fit"] = {"slope": fit.slope, "intercept": fit.intercept,
                          "spearman": fit.spearman}
    if cfg["envelope_m_list"]:
        rep = asymptotic_envelope_check(cfg["envelope_m_list"], n_list[0],
                                        cfg["envelope_t"])
        results["envelope"] = {
            "rows": [{"m": r.m, "abs_phi": r.abs_phi, "envelope": r.envelope}
                     for r in rep.rows],
            "fitted_constant": rep.fitted_constant,
            "ratio_min": rep.ratio_min,
            "ratio_max": rep.ratio_max,
        }
    paths = [_emit(cfg["out"], "plancherel", cfg, results)]
    if cfg["phi_m_list"]:
        ts = np.linspace(0.0, math.pi / 2, int(cfg["phi_points"]))
        header = ["t"] + [f"phi_{m}" for m in cfg["phi_m_list"]]
        cols = [phi(m, n_list[0], ts) for m in cfg["phi_m_list"]]
        paths.append(reports.write_csv(
            f"{cfg['out']}_phi.csv", header,
            zip(ts.tolist(), *[c.tolist() for c in cols])))
    if cfg["plot"] and "fit" in results:
        paths.append(reports.plancherel_figure(
            f"{cfg['out']}.png", n_list, [r["l_star"] for r in rows],
            results["fit"]["slope"], results["fit"]["intercept"],
            f"minimal mixing length, t1={cfg['t1']:g} t2={cfg['t2']:g} eps={cfg['eps']:g}"))
    return paths


def _run_limit_scan(cfg: dict) -> list[Path]:
    pair = PairDescriptor.from_name(cfg["pair"], max(cfg["n_list"]), cfg["mode"])
    rows = concentration_scan(pair.family, pair.curvature, pair.mode,
                              cfg["t1"], cfg["t2"], cfg["n_list"], cfg["eps"])
    paths = [reports.write_csv(
        f"{cfg['out']}.csv", ["n", "mass_limit_point", "mass_a1"],
        [(r.n, r.mass_limit_point, r.mass_a1) for r in rows])]
    table = [{"n": r.n, "mass_limit_point": r.mass_limit_point,
              "mass_a1": r.mass_a1} for r in rows]
    paths.append(_emit(cfg["out"], "limit-scan", cfg, {"table": table}))
    if cfg["plot"]:
        paths.append(reports.scan_figure(
            f"{cfg['out']}.png", [r.n for r in rows],
            [r.mass_limit_point for r in rows], [r.mass_a1 for r in rows],
            f"{cfg['pair']} {cfg['mode']} eps={cfg['eps']:g}"))
    return paths


_RUNNERS = {
    "density": _run_density,
    "sample": _run_sample,
    "compare": _run_compare,
    "haar-check": _run_haar_check,
    "mixing": _run_mixing,
    "plancherel": _run_plancherel,
    "limit-scan": _run_limit_scan,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        paths = _RUNNERS[args.subcommand](cfg)
    except ConfigurationError as exc:
        json.dump({"error": {"type": type(exc).__name__, "message": str(exc)}},
                  sys.stderr)
        sys.stderr.write("\n")
        return 2
    except (NumericalError, Rank1Error) as exc:
        json.dump({"error": {"type": type(exc).__name__, "message": str(exc)}},
                  sys.stderr)
        sys.stderr.write("\n")
        return 3
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
