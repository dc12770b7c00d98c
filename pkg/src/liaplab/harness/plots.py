"""Optional SVG plots (needs matplotlib)."""
from __future__ import annotations

import os

import numpy as np


def _pyplot():
    try:
        import matplotlib
    except ImportError as exc:
        raise ImportError("plots need matplotlib: pip install 'artifact[plots]'") from exc
    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "liaplab"
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path):
    # no date metadata, so reruns give identical files
    fig.savefig(path, format="svg", metadata={"Date": None})
    return path


def plot_bundle(bundle, outdir):
    plt = _pyplot()
    traj = bundle.trajectory
    paths = {}

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(traj.times, np.maximum(traj.d, 1e-300), label="d(t)")
    bound = bundle.info.get("_envelope")
    if bound is not None:
        ax.semilogy(traj.times, bound, "--", label="envelope")
    ax.set_xlabel("t")
    ax.set_ylabel("d")
    ax.legend()
    paths["plot_d"] = _save(fig, os.path.join(outdir, "d.svg"))
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(traj.times, traj.W, label="W")
    ax.plot(traj.times, traj.W_dot, label="dW/dt")
    ax.set_xlabel("t")
    ax.legend()
    paths["plot_W"] = _save(fig, os.path.join(outdir, "W.svg"))
    plt.close(fig)
    return paths
