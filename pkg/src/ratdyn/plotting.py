"""Matplotlib rendering of the analysis artifacts.

Figures are written to files next to the delimited outputs; nothing here is
required by the numerical pipeline, and the module is imported lazily by
the CLI so headless data-only runs never touch matplotlib.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .coremap import Orbit
from .io import raster_legend
from .lyapunov import LyapunovEstimate
from .refdata import TwoCycleRow
from .scan import BasinRaster

_DPI = 150


def save_orbit_figure(orbit: Orbit, path: str, max_points: int = 5000) -> None:
    """Time series of re/im/|z| plus the complex-plane scatter of the orbit."""
    pts = orbit.points[-max_points:]
    offset = orbit.initial.n + (len(orbit.points) - len(pts)) + 1
    ns = range(offset, offset + len(pts))
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5))
    ax1.plot(ns, [z.real for z in pts], lw=0.7, label="Re z")
    ax1.plot(ns, [z.imag for z in pts], lw=0.7, label="Im z")
    ax1.plot(ns, [abs(z) for z in pts], lw=0.7, label="|z|")
    ax1.set_xlabel("n")
    ax1.set_title(f"trajectory ({orbit.outcome.kind})")
    ax1.legend(loc="best", fontsize=8)
    ax2.plot([z.real for z in pts], [z.imag for z in pts], ".", ms=1.5, alpha=0.6)
    ax2.set_xlabel("Re z")
    ax2.set_ylabel("Im z")
    ax2.set_title("complex plane")
    ax2.set_aspect("equal", adjustable="datalim")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_lyapunov_figure(estimate: LyapunovEstimate, path: str) -> None:
    """Running partial averages of the exponent estimate."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(range(len(estimate.running_series)), estimate.running_series, lw=1.0)
    ax.axhline(estimate.lambda_max, color="k", ls="--", lw=0.8)
    ax.set_xlabel("decimation block")
    ax.set_ylabel("partial average")
    ax.set_title(
        f"largest exponent = {estimate.lambda_max:.6g}"
        f" ({'converged' if estimate.converged else 'drifting'})"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_basin_figure(raster: BasinRaster, path: str) -> None:
    """Gray-level image of the basin raster with a label legend."""
    legend = raster_legend(raster)
    img = [[legend[lbl] for lbl in row] for row in raster.labels]
    hw = raster.grid.half_width
    c = raster.grid.center
    extent = (c.real - hw, c.real + hw, c.imag - hw, c.imag + hw)
    fig, ax = plt.subplots(figsize=(6.5, 5.5))
    im = ax.imshow(img, cmap="viridis", vmin=0, vmax=255, extent=extent, origin="upper")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(f"orbit fate over initial conditions ({raster.slice_policy})")
    cbar = fig.colorbar(im, ax=ax, fraction=0.046)
    cbar.set_ticks(sorted(legend.values()))
    cbar.set_ticklabels([lbl for lbl, _ in sorted(legend.items(), key=lambda kv: kv[1])])
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_two_cycle_figure(rows: list[tuple[TwoCycleRow, complex, complex]], path: str) -> None:
    """Reference vs computed cycle points in the complex plane."""
    fig, ax = plt.subplots(figsize=(6.5, 5.5))
    for row, phi, psi in rows:
        ax.plot(
            [row.phi.real, row.psi.real], [row.phi.imag, row.psi.imag],
            "o", ms=6, mfc="none", color="tab:gray",
        )
        ax.plot([phi.real, psi.real], [phi.imag, psi.imag], "x", ms=5, color="tab:red")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title("period-two pairs: reference (o) vs computed (x)")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
