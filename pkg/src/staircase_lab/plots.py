"""SVG plot emission for sweep results.

Three plot kinds: (a) the scaled minimum m/omega^2 against eps with the
predicted limit line, (b) the smallest-eps minimizer overlaid on the forcing,
and (c) a blow-up profile with its fitted staircase translate.
"""

from __future__ import annotations

import json
import math
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .blowup_analysis import extract_blowup, fit_staircase  # noqa: E402
from .energy_core import SampledFunction  # noqa: E402
from .pure_jump import StaircaseSpec, staircase_params  # noqa: E402

__all__ = ["emit_plots", "plots_from_directory"]


def _save(fig, outdir: str, name: str) -> str:
    path = os.path.join(outdir, name)
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path


def _plot_scaling(records, outdir: str) -> str:
    eps = [r.eps for r in records]
    ratio = [r.m_over_omega2 for r in records]
    limit = records[0].predicted_limit
    fig, ax = plt.subplots(figsize=(5, 3.4))
    ax.plot(eps, ratio, "o-", label=r"$m_\varepsilon/\omega(\varepsilon)^2$")
    ax.axhline(limit, color="k", ls="--", lw=1, label="predicted limit")
    ax.set_xlabel(r"$\varepsilon$")
    ax.invert_xaxis()
    ax.legend(frameon=False)
    fig.tight_layout()
    return _save(fig, outdir, "scaling.svg")


def _plot_minimizer(records, minimizers, config, outdir: str) -> str:
    eps = min(minimizers)
    u = minimizers[eps]
    forcing = config.forcing()
    fig, ax = plt.subplots(figsize=(5, 3.4))
    ax.plot(u.x, forcing(u.x), lw=1, color="0.6", label="forcing")
    ax.plot(u.x, u.values, lw=0.8, label=fr"minimizer, $\varepsilon={eps:g}$")
    ax.set_xlabel("x")
    ax.legend(frameon=False)
    fig.tight_layout()
    return _save(fig, outdir, "minimizer.svg")


def _plot_blowup(records, minimizers, config, outdir: str) -> str | None:
    eps = min(minimizers)
    u = minimizers[eps]
    forcing = config.forcing()
    f_s = SampledFunction(u.left, u.spacing, forcing(u.x))
    for center in config.centers:
        fpx = forcing.derivative(np.array([center]))
        if fpx is None:
            continue
        slope = float(fpx[0])
        H, V = staircase_params(config.beta, slope)
        from .energy_core import omega
        feasible = min(center - u.left, u.right - center) / omega(eps)
        W = min(0.95 * feasible, 6.0 * H)
        if W < 1.55 * H:
            continue
        b = extract_blowup(u, f_s, center, eps, W, "fake")
        try:
            fit = fit_staircase(b, config.beta, slope, kinds=("oblique",))
        except ValueError:
            continue
        prof = b.profile
        spec = StaircaseSpec(H, V, "oblique", fit.tau0_star)
        fig, ax = plt.subplots(figsize=(5, 3.4))
        ax.plot(prof.x, prof.values, lw=0.9, label="fake blow-up")
        ax.step(prof.x, spec.value(prof.x), where="post", lw=0.9,
                label=fr"staircase fit, $\tau_0={fit.tau0_star:.2f}$")
        ax.plot(prof.x, V / H * prof.x, color="0.7", lw=0.7, ls=":")
        ax.set_xlabel("y")
        ax.set_title(fr"center {center:g}, $\varepsilon={eps:g}$", fontsize=9)
        ax.legend(frameon=False, fontsize=8)
        fig.tight_layout()
        return _save(fig, outdir, "blowup.svg")
    return None


def emit_plots(records, minimizers, config) -> list[str]:
    """Render the sweep plots as SVG files into the config's output directory."""
    if not records:
        raise ValueError("no records to plot")
    outdir = config.output_dir
    os.makedirs(outdir, exist_ok=True)
    paths = [_plot_scaling(records, outdir)]
    if minimizers:
        paths.append(_plot_minimizer(records, minimizers, config, outdir))
        p = _plot_blowup(records, minimizers, config, outdir)
        if p:
            paths.append(p)
    return paths


def plots_from_directory(records_dir: str) -> list[str]:
    """Re-render the scaling plot from a saved records.json."""
    with open(os.path.join(records_dir, "records.json")) as fh:
        rows = json.load(fh)
    eps = [r["eps"] for r in rows]
    ratio = [r["m_over_omega2"] for r in rows]
    limit = rows[0]["predicted_limit"]
    fig, ax = plt.subplots(figsize=(5, 3.4))
    ax.plot(eps, ratio, "o-", label=r"$m_\varepsilon/\omega(\varepsilon)^2$")
    ax.axhline(limit, color="k", ls="--", lw=1, label="predicted limit")
    ax.set_xlabel(r"$\varepsilon$")
    ax.invert_xaxis()
    ax.legend(frameon=False)
    fig.tight_layout()
    return [_save(fig, records_dir, "scaling.svg")]
