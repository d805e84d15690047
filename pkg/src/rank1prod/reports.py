"""Delimited/JSON emission and the figure renderers for the report path.

CSV uses '.' decimals and 17-significant-digit floats (lossless double
round-trip); JSON is emitted with sorted keys and no timestamps so a fixed
config and seed reproduce identical bytes.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence


def fmt_float(x) -> str:
    return format(float(x), ".17g")


def write_csv(path: str | Path, header: Sequence[str],
              rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt_float(v) if isinstance(v, float) else v
                             for v in row])
    return path


def write_json(path: str | Path, obj: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return path


def _savefig(fig, path: str | Path) -> Path:
    path = Path(path)
    fig.savefig(path, dpi=120, metadata={"Software": "rank1prod"})
    import matplotlib.pyplot as plt
    plt.close(fig)
    return path


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def density_figure(path, us, pdf_vals, title: str) -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(us, pdf_vals, lw=1.5)
    ax.set_xlabel("u")
    ax.set_ylabel("density")
    ax.set_title(title)
    fig.tight_layout()
    return _savefig(fig, path)


def compare_figure(path, values, grids_and_cdfs: dict[str, tuple], title: str) -> Path:
    import numpy as np
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    v = np.sort(values)
    ax.step(v, np.arange(1, v.size + 1) / v.size, where="post",
            label="empirical", lw=1.0)
    for name, (grid, cdf_vals) in grids_and_cdfs.items():
        ax.plot(grid, cdf_vals, label=name, lw=1.2)
    ax.set_xlabel("u")
    ax.set_ylabel("cdf")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    return _savefig(fig, path)


def haar_check_figure(path, t_values, grid, curves: dict[str, Sequence],
                      title: str) -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(t_values, bins=80, density=True, alpha=0.4, label="Haar sample")
    for name, ys in curves.items():
        ax.plot(grid, ys, label=name, lw=1.4)
    ax.set_xlabel("radial coordinate t")
    ax.set_ylabel("density")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    return _savefig(fig, path)


def mixing_figure(path, factors, distances, baseline: float, title: str) -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(factors, distances, "o-", label="product vs Haar")
    ax.axhline(baseline, color="gray", ls="--", label="Haar vs Haar baseline")
    ax.set_xlabel("alternating factor pairs N")
    ax.set_ylabel("W1 distance of Re Tr")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    return _savefig(fig, path)


def plancherel_figure(path, n_values, l_values, slope: float,
                      intercept: float, title: str) -> Path:
    import numpy as np
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogx(n_values, l_values, "o", label="l*")
    grid = np.linspace(min(n_values), max(n_values), 200)
    ax.semilogx(grid, intercept + slope * np.log(grid), "-",
                label=f"fit: {intercept:.1f} + {slope:.1f} log n")
    ax.set_xlabel("n")
    ax.set_ylabel("minimal mixing length l*")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    return _savefig(fig, path)


def scan_figure(path, n_values, mass_limit, mass_a1, title: str) -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(n_values, mass_limit, "o-", label="mass near cos(t1+t2)")
    ax.plot(n_values, mass_a1, "s-", label="mass near a1")
    ax.set_xlabel("n")
    ax.set_ylabel("mass within eps")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    return _savefig(fig, path)
