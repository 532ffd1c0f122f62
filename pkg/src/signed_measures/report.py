"""Figure rendering for the CLI report path.

Each renderer takes already-computed tabular results and writes a PNG next to
the delimited output; nothing here feeds back into the computations.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_eval_histogram(values_by_set: dict, path):
    """Histogram of the evaluated set masses across replicates."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for set_id, values in values_by_set.items():
        vals = np.asarray(values, dtype=float)
        if len(vals) == 0:
            continue
        ax.hist(vals, bins=min(60, max(5, int(math.sqrt(len(vals))))),
                alpha=0.6, label=f"set {set_id}", density=True)
    ax.set_xlabel("measure of set")
    ax.set_ylabel("density")
    if ax.get_legend_handles_labels()[1]:
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Date": None})
    plt.close(fig)


def render_scan(table, slope: float, path):
    """Log-log plot of mean edges vs mean nodes with the fitted slope."""
    nodes = np.array([row["mean_nodes"] for row in table])
    edges = np.array([row["mean_edges"] for row in table])
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.loglog(nodes, edges, "o-", label="scan")
    x = np.linspace(math.log(nodes.min()), math.log(nodes.max()), 50)
    c = math.log(edges[0]) - slope * math.log(nodes[0])
    ax.loglog(np.exp(x), np.exp(slope * x + c), "--", label=f"slope {slope:.2f}")
    ax.set_xlabel("mean observed nodes")
    ax.set_ylabel("mean edges")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Date": None})
    plt.close(fig)


def render_posterior_densities(curves, path):
    """Tabulated (theta, density) curves for the posterior atom weights."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, thetas, dens in curves:
        ax.plot(thetas, dens, label=label)
    ax.set_xlabel("theta")
    ax.set_ylabel("normalized density")
    if curves:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Date": None})
    plt.close(fig)
