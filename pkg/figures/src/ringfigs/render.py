"""Panel renderers: 3D pattern surfaces, heatmaps, rate stems, decay traces.

Strictly a downstream consumer of the simulator's CSV/JSON files; no
physics is computed here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import schema  # noqa: E402

PANEL_TYPES = ("surface3d", "heatmap", "stems", "traces")


@dataclass
class FigureSpec:
    """One output image assembled from a list of input panels."""

    title: str
    output: Path
    panels: list
    base_dir: Path
    rows_consumed: int = 0  # filled in by render()

    @staticmethod
    def load(path) -> "FigureSpec":
        path = Path(path)
        d = json.loads(path.read_text())
        for key in ("title", "output", "panels"):
            if key not in d:
                raise schema.SchemaError(f"{path}: missing key {key!r}")
        for panel in d["panels"]:
            if panel.get("type") not in PANEL_TYPES:
                raise schema.SchemaError(
                    f"{path}: unknown panel type {panel.get('type')!r}")
        base = path.parent.parent  # specs/ lives one level below the root
        spec = FigureSpec(d["title"], base / d["output"], d["panels"], base)
        for panel in spec.panels:
            for key in ("input", "inputs"):
                if key in panel:
                    paths = panel[key] if key == "inputs" else [panel[key]]
                    for p in paths:
                        if not (base / p).exists():
                            raise schema.SchemaError(
                                f"{path}: referenced input {p} does not exist")
        return spec


def _load_grid(path: Path) -> schema.GridData:
    if path.suffix == ".json":
        return schema.parse_grid_json(path)
    return schema.parse_grid_csv(path)


def _draw_surface3d(ax, grid: schema.GridData, label: str):
    th, ph = np.meshgrid(grid.thetas, grid.phis, indexing="ij")
    r = grid.values
    x = r * np.sin(th) * np.cos(ph)
    y = r * np.sin(th) * np.sin(ph)
    z = r * np.cos(th)
    norm = max(r.max(), 1e-300)
    ax.plot_surface(x, y, z, rstride=1, cstride=1, linewidth=0,
                    antialiased=False,
                    facecolors=plt.cm.viridis(r / norm))
    ax.set_title(label)
    ax.set_axis_off()
    lim = norm
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.set_zlim(-lim, lim)


def _draw_heatmap(ax, grid: schema.GridData, label: str):
    # theta vertical in [0, pi], phi horizontal in [0, 2 pi)
    mesh = ax.pcolormesh(grid.phis, grid.thetas, grid.values,
                         shading="nearest", cmap="viridis")
    ax.set_xlabel(r"$\phi$ (rad)")
    ax.set_ylabel(r"$\theta$ (rad)")
    ax.set_ylim(np.pi, 0)
    ax.set_title(label)
    plt.colorbar(mesh, ax=ax, label=r"$\Omega_f$ (arb. units)")


def _draw_stems(ax, spec_data: schema.SpectrumData, label: str):
    idx = np.arange(1, spec_data.rates.size + 1)
    ax.stem(idx, spec_data.rates, basefmt=" ")
    ax.axhline(1.0, color="gray", linestyle="--", linewidth=0.8)
    ax.set_xlabel("eigenmode (ascending)")
    ax.set_ylabel(r"rate ($\Gamma/2$ units)")
    ax.set_title(label)


def _draw_traces(ax, traces: list, labels: list, label: str):
    styles = ["--", "-", "-.", ":", "-"]
    ref_drawn = False
    for tr, lab, sty in zip(traces, labels, styles):
        ax.semilogy(tr.times, tr.intensity, sty, label=lab)
        if tr.reference is not None and not ref_drawn:
            ax.semilogy(tr.times, tr.reference, linestyle="dotted",
                        color="black", label="reference")
            ref_drawn = True
    ax.set_xlabel(r"$\Gamma t$")
    ax.set_ylabel(r"$I_0(t)$")
    ax.legend(fontsize=7)
    ax.set_title(label)


def render(spec: FigureSpec) -> Path:
    """Render one figure; returns the written image path."""
    n = len(spec.panels)
    ncols = min(n, 4)
    nrows = (n + ncols - 1) // ncols
    fig = plt.figure(figsize=(3.2 * ncols, 2.8 * nrows))
    consumed = 0
    for i, panel in enumerate(spec.panels):
        kind = panel["type"]
        label = panel.get("label", "")
        if kind == "surface3d":
            ax = fig.add_subplot(nrows, ncols, i + 1, projection="3d")
            grid = _load_grid(spec.base_dir / panel["input"])
            consumed += grid.rows_consumed
            _draw_surface3d(ax, grid, label)
        elif kind == "heatmap":
            ax = fig.add_subplot(nrows, ncols, i + 1)
            grid = _load_grid(spec.base_dir / panel["input"])
            consumed += grid.rows_consumed
            _draw_heatmap(ax, grid, label)
        elif kind == "stems":
            ax = fig.add_subplot(nrows, ncols, i + 1)
            data = schema.parse_spectrum_csv(spec.base_dir / panel["input"])
            consumed += data.rows_consumed
            _draw_stems(ax, data, label)
        else:
            ax = fig.add_subplot(nrows, ncols, i + 1)
            traces = [schema.parse_trace_csv(spec.base_dir / p)
                      for p in panel["inputs"]]
            consumed += sum(t.rows_consumed for t in traces)
            _draw_traces(ax, traces, panel.get("labels",
                                               [""] * len(traces)), label)
    spec.rows_consumed = consumed
    fig.suptitle(spec.title)
    fig.tight_layout()
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.output, dpi=110)
    plt.close(fig)
    return spec.output
