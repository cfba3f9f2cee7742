"""Batch figure rendering from exported files.

Three figure kinds: the two-sheeted Re/Im energy surfaces near the
degeneracy (from the model JSON), a section trajectory as a 3-d curve plus
its three planar projections (from a trajectory CSV), and the monodromy
loop in the complex energy plane (from a loop trajectory CSV).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import FigureError, Style, load_model_json, load_trajectory  # noqa: E402

KINDS = ("surfaces", "section3d", "loop")


@dataclass
class FigureRequest:
    """One figure to render: input artifact, kind, destination, labels."""

    kind: str
    input_path: str
    output_path: str
    style: Style = field(default_factory=Style)
    xi1_label: str = "xi1"
    energy_label: str = "Re E"
    width_label: str = "Im E"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FigureError(f"unknown figure kind {self.kind!r}; choose from {KINDS}")


def render(req: FigureRequest) -> Path:
    """Render the requested figure; returns the written path.

    Nothing is written when the input is unusable.
    """
    out = Path(req.output_path)
    fig = _build(req)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out, dpi=req.style.dpi, format=req.style.fmt)
    finally:
        plt.close(fig)
    return out


def _build(req: FigureRequest):
    if req.kind == "surfaces":
        return _surfaces(req)
    if req.kind == "section3d":
        return _section3d(req)
    return _loop(req)


def _sheet_energies(model, xi1, xi2):
    """The two model energy sheets over a (xi1, xi2) grid."""
    rx = model.r_vec[0] * xi1 + model.r_vec[1] * xi2
    ix = model.i_vec[0] * xi1 + model.i_vec[1] * xi2
    hyp = np.hypot(rx, ix)
    coef = 1.0 / (2.0 * np.sqrt(2.0))
    re_eps = coef * np.sqrt(np.maximum(hyp + rx, 0.0))
    im_eps = coef * np.sqrt(np.maximum(hyp - rx, 0.0)) * np.where(ix >= 0.0, 1.0, -1.0)
    base = model.e_d + model.e_shift[0] * xi1 + model.e_shift[1] * xi2
    eps = re_eps + 1j * im_eps
    return base + eps, base - eps


def _surfaces(req: FigureRequest):
    model = load_model_json(req.input_path)
    rho = model.validity_radius or 1e-2
    rho = min(rho, 1e-2)
    lin = np.linspace(-rho, rho, 81)
    xi1, xi2 = np.meshgrid(lin, lin)
    upper, lower = _sheet_energies(model, xi1, xi2)
    mask = np.hypot(xi1, xi2) > rho
    for sheet in (upper, lower):
        sheet[mask] = np.nan

    s = req.style
    fig = plt.figure(figsize=(2.0 * s.width, s.height))
    for pos, (part, label) in enumerate(
        ((np.real, req.energy_label), (np.imag, req.width_label)), start=1
    ):
        ax = fig.add_subplot(1, 2, pos, projection="3d")
        ax.plot_surface(xi1, xi2, part(upper), color=s.color_n, alpha=0.75, linewidth=0)
        ax.plot_surface(xi1, xi2, part(lower), color=s.color_m, alpha=0.75, linewidth=0)
        ax.set_xlabel(req.xi1_label)
        ax.set_ylabel("xi2")
        ax.set_zlabel(label)
        ax.set_title(f"{label} sheets")
    fig.suptitle("Two-sheeted energy surfaces near the degeneracy")
    return fig


def _section3d(req: FigureRequest):
    traj = load_trajectory(req.input_path)
    s = req.style
    fig = plt.figure(figsize=(1.6 * s.width, 1.2 * s.height))

    ax3 = fig.add_subplot(2, 2, 1, projection="3d")
    for e, color, name in (
        (traj.energy_n, s.color_n, "branch n"),
        (traj.energy_m, s.color_m, "branch n+1"),
    ):
        ax3.plot(e.real, e.imag, traj.xi1, color=color, label=name)
    ax3.set_xlabel(req.energy_label)
    ax3.set_ylabel(req.width_label)
    ax3.set_zlabel(req.xi1_label)
    ax3.legend(loc="upper left", fontsize="small")

    panels = [
        (fig.add_subplot(2, 2, 2), lambda e: (traj.xi1, e.real),
         req.xi1_label, req.energy_label),
        (fig.add_subplot(2, 2, 3), lambda e: (traj.xi1, e.imag),
         req.xi1_label, req.width_label),
        (fig.add_subplot(2, 2, 4), lambda e: (e.real, e.imag),
         req.energy_label, req.width_label),
    ]
    valid = traj.model_valid
    for ax, proj, xl, yl in panels:
        for e, me, color in (
            (traj.energy_n, traj.model_n, s.color_n),
            (traj.energy_m, traj.model_m, s.color_m),
        ):
            ax.plot(*proj(e), color=color)
            if valid.any():
                # invalid rows are dropped, never drawn as zeros
                ax.plot(*(c[valid] for c in proj(me)), color=s.color_model,
                        linestyle="--", linewidth=1.0)
        ax.set_xlabel(xl)
        ax.set_ylabel(yl)
    fig.suptitle("Section trajectories and projections")
    fig.tight_layout()
    return fig


def _loop(req: FigureRequest):
    traj = load_trajectory(req.input_path)
    s = req.style
    fig, ax = plt.subplots(figsize=(s.width, s.height))
    for e, color, name in (
        (traj.energy_n, s.color_n, "branch n"),
        (traj.energy_m, s.color_m, "branch n+1"),
    ):
        ax.plot(e.real, e.imag, color=color, label=name)
        ax.plot(e.real[0], e.imag[0], marker="o", color=color)
        ax.plot(e.real[-1], e.imag[-1], marker="x", color=color, markersize=9)
    ax.set_xlabel(req.energy_label)
    ax.set_ylabel(req.width_label)
    ax.set_title("Pole transport around the parameter loop (o start, x end)")
    ax.legend(fontsize="small")
    fig.tight_layout()
    return fig
