"""Figure rendering for CLI reports.

All plotting lives here so the numeric modules stay free of any
matplotlib dependency. Figures are rendered with the Agg backend
straight to PNG files next to the delimited outputs.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_META = {"Software": "ripath"}


def _save(fig, out_path: str) -> str:
    fig.savefig(out_path, dpi=110, metadata=_META)
    plt.close(fig)
    return out_path


def render_ri_figure(reports, out_path: str) -> str:
    """Pointwise index along each labeled path."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, report in reports:
        ax.plot(range(len(report.ri_values)), report.ri_values, marker=".", label=label)
    ax.set_xlabel("path point index")
    ax.set_ylabel("realisticity index")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return _save(fig, out_path)


def render_l2_figure(reports, out_path: str) -> str:
    """Per-segment decoded distances for each labeled path."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, report in reports:
        ax.plot(range(len(report.decoded_l2)), report.decoded_l2, marker=".", label=label)
    ax.set_xlabel("segment index")
    ax.set_ylabel("decoded L2 distance")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return _save(fig, out_path)


def render_projection_figure(reports, out_path: str):
    """Paths in endpoint-plane coordinates; skipped when any projection
    is absent (returns None in that case)."""
    if any(report.projection is None for _, report in reports):
        return None
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    for label, report in reports:
        ax.plot(report.projection[:, 0], report.projection[:, 1], marker=".", label=label)
    ax.scatter([1.0, 0.0], [0.0, 1.0], color="black", zorder=3)
    ax.annotate("start", (1.0, 0.0))
    ax.annotate("end", (0.0, 1.0))
    ax.set_xlabel("coefficient of start endpoint")
    ax.set_ylabel("coefficient of end endpoint")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return _save(fig, out_path)


def render_trace_figure(trace, out_path: str) -> str:
    """Energy per iteration of an optimization run."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(range(1, trace.iterations_run + 1), trace.energies, label="energy")
    ax.axhline(trace.initial_energy, linestyle="--", alpha=0.5, label="initial")
    ax.set_xlabel("iteration")
    ax.set_ylabel("energy")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return _save(fig, out_path)


def render_run_figures(out_dir: str, reports, trace=None) -> list:
    """Render the standard figure set into out_dir/figures.

    ``reports`` is a list of (label, PathReport) pairs. Returns the
    list of files written.
    """
    fig_dir = os.path.join(out_dir, "figures")
    os.makedirs(fig_dir, exist_ok=True)
    written = [
        render_ri_figure(reports, os.path.join(fig_dir, "path_ri.png")),
        render_l2_figure(reports, os.path.join(fig_dir, "path_l2.png")),
    ]
    proj = render_projection_figure(reports, os.path.join(fig_dir, "path_projection.png"))
    if proj is not None:
        written.append(proj)
    if trace is not None:
        written.append(render_trace_figure(trace, os.path.join(fig_dir, "trace_energy.png")))
    return written
