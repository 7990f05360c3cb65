"""Rendered artifacts for the report path: delimited files plus figures.

Every figure has a CSV twin so the numbers behind each plot ship alongside
it; rendering uses the Agg backend and never requires a display.
"""

from __future__ import annotations

import csv
import io
import os
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from . import golden, sieve, surface

REGION_COLORS = {
    "boxed": 0, "diagonal": 1, "horizontal_y": 2, "horizontal_x": 3,
    "excluded": 4,
}


def region_grid(lo: float = -6.0, hi: float = 6.0, step: Fraction = Fraction(1, 8)):
    """Sampled (x, y, region, sign m, sign F1, sign F2) grid rows."""
    lo_f, hi_f = Fraction(lo).limit_denominator(16), Fraction(hi).limit_denominator(16)
    n = int((hi_f - lo_f) / step) + 1
    rows = []
    for i in range(n):
        x = lo_f + i * step
        for j in range(n):
            y = lo_f + j * step
            region = sieve.positivity_region(x, y)
            def sgn(f):
                try:
                    v = f()
                    return "+" if v > 0 else ("-" if v < 0 else "0")
                except ZeroDivisionError:
                    return "pole"
            rows.append((x, y, region,
                         sgn(lambda: surface.m_of(x, y)),
                         sgn(lambda: sieve.F1(x, y)),
                         sgn(lambda: sieve.F2(x, y))))
    return rows


def region_grid_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["x", "y", "region", "sign_m", "sign_F1", "sign_F2"])
    for x, y, region, sm, s1, s2 in rows:
        w.writerow([f"{x.numerator}/{x.denominator}", f"{y.numerator}/{y.denominator}",
                    region, sm, s1, s2])
    return buf.getvalue()


def render_region_figure(rows, path: str) -> None:
    """Heat map of the region classification with the all-positive locus."""
    xs = sorted({float(r[0]) for r in rows})
    ys = sorted({float(r[1]) for r in rows})
    xi = {v: i for i, v in enumerate(xs)}
    yi = {v: i for i, v in enumerate(ys)}
    grid = np.full((len(ys), len(xs)), REGION_COLORS["excluded"], dtype=float)
    positive = np.zeros_like(grid, dtype=bool)
    for x, y, region, sm, s1, s2 in rows:
        grid[yi[float(y)], xi[float(x)]] = REGION_COLORS[region]
        positive[yi[float(y)], xi[float(x)]] = (sm == "+" and s1 == "+" and s2 == "+")
    fig, ax = plt.subplots(figsize=(7, 6))
    im = ax.imshow(grid, origin="lower", extent=(xs[0], xs[-1], ys[0], ys[-1]),
                   cmap="Pastel1", vmin=0, vmax=5, interpolation="nearest")
    py, px = np.nonzero(positive)
    ax.scatter(np.array(xs)[px], np.array(ys)[py], s=1.5, c="black",
               label="m, F1, F2 all positive")
    ax.plot([xs[0], xs[-1]], [xs[0], xs[-1]], lw=0.6, color="gray")
    ax.set_xlabel("x = h1 - 1")
    ax.set_ylabel("y = h2 - 1")
    ax.set_title("Positivity regions and sign-locus of the first coefficients")
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def fiber_counts(m_range: Sequence[int], N: int) -> List[Tuple[int, int]]:
    return [(m, surface.am_count(Fraction(m), N).count) for m in m_range]


def fiber_counts_csv(counts, N: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["m", f"a_m({N})"])
    w.writerows(counts)
    return buf.getvalue()


def render_fiber_figure(counts, N: int, path: str) -> None:
    ms = [m for m, _c in counts]
    cs = [c for _m, c in counts]
    fig, ax = plt.subplots(figsize=(8, 3.2))
    ax.scatter(ms, cs, s=4)
    ax.set_xlabel("m")
    ax.set_ylabel(f"a_m({N})")
    ax.set_title(f"Rational points with coordinate denominators dividing {N}")
    ax.set_ylim(bottom=0)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_coefficient_figure(path: str) -> None:
    """Log-scale growth of the exceptional rows' published coordinates."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for row in golden.fourier_rows():
        ys = [float(v) for v in row["f0"] if v > 0]
        ax.semilogy(range(len(row["f0"]) - len(ys), len(row["f0"])), ys,
                    marker=".", lw=0.8, label=f"h2 = {row['h2']}")
    ax.set_xlabel("coefficient index")
    ax.set_ylabel("f0 coefficient")
    ax.set_title("Vacuum-character growth across the eleven exceptional rows")
    ax.legend(fontsize=6, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report(outdir: str, class_results: Optional[Dict] = None,
                 figures: bool = True,
                 fiber_N: int = 16, fiber_range: Sequence[int] = range(0, 501)) -> List[str]:
    """Write delimited outputs (and figures beside them) into outdir."""
    os.makedirs(outdir, exist_ok=True)
    written = []

    def put(name: str, text: str):
        p = os.path.join(outdir, name)
        with open(p, "w") as fh:
            fh.write(text)
        written.append(p)

    rows = region_grid()
    put("region_grid.csv", region_grid_csv(rows))
    counts = fiber_counts(fiber_range, fiber_N)
    put(f"fiber_counts_N{fiber_N}.csv", fiber_counts_csv(counts, fiber_N))
    if class_results:
        for cls, res in class_results.items():
            put(f"survivors_{cls}.csv",
                sieve.table_to_csv(sieve.survivors_table(res)))
            put(f"verdicts_{cls}.json", sieve.verdicts_to_json(res))
    if figures:
        p = os.path.join(outdir, "region_figure.png")
        render_region_figure(rows, p)
        written.append(p)
        p = os.path.join(outdir, f"fiber_counts_N{fiber_N}.png")
        render_fiber_figure(counts, fiber_N, p)
        written.append(p)
        p = os.path.join(outdir, "useries_coefficients.png")
        render_coefficient_figure(p)
        written.append(p)
    return written
