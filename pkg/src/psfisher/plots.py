"""Matplotlib rendering of sweep, audit and Monte Carlo reports.

Figures are written to files next to the delimited output; no interactive
backend is required.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_sweep_figure(result, path) -> None:
    """Three panels: postselected-QFI envelope vs the unconditioned QFI and
    the classical curves; Pr(f) envelope; Pr(f)-normalized QFI envelope."""
    thetas = result.thetas / result.config.sigma
    qfi = result.qfi_ps
    prf = result.pr_f
    prf_qfi = result.prf_qfi_ps
    qfi_int = result.qfi_int

    fig, axes = plt.subplots(1, 3, figsize=(13.5, 4.0))

    ax = axes[0]
    lo = np.nanmin(qfi, axis=0)
    hi = np.nanmax(qfi, axis=0)
    ax.fill_between(thetas, lo, np.minimum(hi, 5.0 * qfi_int),
                    color="tab:blue", alpha=0.35, label="postselected QFI range")
    ax.axhline(qfi_int, color="goldenrod", ls="--", label="whole-state QFI")
    ax.plot(thetas, result.ic_plus, "r-.", label="classical, c = +1")
    ax.plot(thetas, result.ic_minus, "g:", label="classical, c = -1")
    ax.set_ylim(0.0, 5.0 * qfi_int)
    ax.set_xlabel(r"$\theta/\sigma$")
    ax.set_ylabel("Fisher information")
    ax.legend(fontsize=8)

    ax = axes[1]
    ax.fill_between(thetas, prf.min(axis=0), prf.max(axis=0),
                    color="tab:purple", alpha=0.35)
    ax.set_xlabel(r"$\theta/\sigma$")
    ax.set_ylabel("success probability")
    ax.set_ylim(0.0, 1.05)

    ax = axes[2]
    ax.fill_between(thetas, np.nanmin(prf_qfi, axis=0), np.nanmax(prf_qfi, axis=0),
                    color="tab:green", alpha=0.35, label="Pr(f) x postselected QFI")
    ax.axhline(qfi_int, color="goldenrod", ls="--", label="whole-state QFI")
    ax.set_xlabel(r"$\theta/\sigma$")
    ax.set_ylabel("normalized Fisher information")
    ax.set_ylim(0.0, 1.3 * qfi_int)
    ax.legend(fontsize=8)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_margin_histogram(margins, path) -> None:
    """Histogram of no-go margins rhs - lhs from the randomized audit."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.hist(np.asarray(margins, dtype=float), bins=60, color="tab:blue", alpha=0.8)
    ax.axvline(0.0, color="k", lw=1)
    ax.set_xlabel("margin (whole-state QFI - Pr(f) x postselected QFI)")
    ax.set_ylabel("instances")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_mc_figure(summary, path) -> None:
    """Per-strategy MSE against the asymptotic bounds."""
    names = sorted(summary["strategies"])
    mse = [summary["strategies"][n]["mse"] for n in names]
    bound = [summary["strategies"][n]["bound"] for n in names]
    bound_q = [summary["strategies"][n]["bound_quantum"] for n in names]
    pos = np.arange(len(names))
    width = 0.27

    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.bar(pos - width, mse, width, label="empirical MSE", color="tab:blue")
    ax.bar(pos, bound, width, label="measurement CR bound", color="tab:orange")
    ax.bar(pos + width, bound_q, width, label="quantum CR bound", color="tab:green")
    ax.set_xticks(pos)
    ax.set_xticklabels(names, fontsize=8)
    ax.set_yscale("log")
    ax.set_ylabel("squared error")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
