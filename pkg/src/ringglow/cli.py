"""Command-line front end: reproducible pattern/spectrum/fluorescence runs.

Every output file gets a `<name>.config.json` sidecar holding the fully
resolved configuration, sufficient to regenerate it byte-for-byte.
All angles are radians, lengths are in wavelength units, times in
Gamma*t, and rates in Gamma/2 units.
"""

from __future__ import annotations

import itertools
import json
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__, checks, dynamics, farfield
from .dynamics import build_effective_coupling, decay_spectrum, eigen_overlaps
from .farfield import Polarization, sample_grid
from .geometry import (AtomArray, build_concentric_rings, build_single_ring,
                       build_stacked_rings)
from .manifold import build_generalized_state, build_hpi_state


def _build_geometry(kind, n_phi, n_rings, r, d_z, d_r, scale) -> AtomArray:
    if kind == "single":
        arr = build_single_ring(n_phi, r)
    elif kind == "stacked":
        arr = build_stacked_rings(n_phi, n_rings, r, d_z)
    else:
        d_r = r if d_r is None else d_r
        arr = build_concentric_rings(n_phi, n_rings, r, d_r)
    return arr.scaled(scale) if scale != 1.0 else arr


def _build_state(arr, m, l, n_index):
    if n_index is not None:
        return build_generalized_state(arr, m, n_index)
    return build_hpi_state(arr, m, l)


def _write_sidecar(path: Path, config: dict) -> None:
    sidecar = path.with_name(path.name + ".config.json")
    config = dict(config, version=__version__)
    sidecar.write_text(json.dumps(config, sort_keys=True, indent=2) + "\n")


_geometry_options = [
    click.option("--kind", type=click.Choice(["single", "stacked", "concentric"]),
                 required=True),
    click.option("--n-phi", type=int, required=True, help="Atoms per ring."),
    click.option("--n-rings", type=int, default=1, show_default=True),
    click.option("--r", type=float, required=True, help="First-ring radius (lambda)."),
    click.option("--d-z", type=float, default=0.35, show_default=True,
                 help="Axial spacing for stacked rings (lambda)."),
    click.option("--d-r", type=float, default=None,
                 help="Radial spacing for concentric rings (defaults to r)."),
    click.option("--scale", type=float, default=1.0, show_default=True,
                 help="Uniform coordinate scale factor."),
]


def geometry_options(fn):
    for opt in reversed(_geometry_options):
        fn = opt(fn)
    return fn


@click.group()
@click.version_option(__version__)
def main():
    """Phase-imprinted multiphoton states on atomic rings: patterns,
    decay spectra, and fluorescence traces."""


@main.command()
@geometry_options
@click.option("--m", type=int, default=1, show_default=True)
@click.option("--l", type=int, default=0, show_default=True)
@click.option("--n-index", type=int, default=None,
              help="Generalized mode index (overrides --l).")
@click.option("--pol", type=click.Choice(["x", "y"]), default="x",
              show_default=True)
@click.option("--n-theta", type=int, default=181, show_default=True)
@click.option("--n-phi-grid", type=int, default=361, show_default=True)
@click.option("--output", type=click.Path(path_type=Path), required=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
@click.option("--seed", type=int, default=None,
              help="Recorded in the sidecar; computations are deterministic.")
def pattern(kind, n_phi, n_rings, r, d_z, d_r, scale, m, l, n_index, pol,
            n_theta, n_phi_grid, output, fmt, seed):
    """Sample the far-field pattern on a regular angular grid."""
    arr = _build_geometry(kind, n_phi, n_rings, r, d_z, d_r, scale)
    state = _build_state(arr, m, l, n_index)
    grid = sample_grid(state, arr, getattr(Polarization, pol)(),
                       n_theta, n_phi_grid)
    text = farfield.grid_to_csv(grid) if fmt == "csv" \
        else farfield.grid_to_json(grid)
    output.write_text(text)
    _write_sidecar(output, {
        "command": "pattern", "kind": kind, "n_phi": n_phi,
        "n_rings": n_rings, "r": r, "d_z": d_z, "d_r": d_r, "scale": scale,
        "m": m, "l": l, "n_index": n_index, "pol": pol,
        "n_theta": n_theta, "n_phi_grid": n_phi_grid, "format": fmt,
        "seed": seed,
    })
    click.echo(f"wrote {output}")


@main.command()
@geometry_options
@click.option("--m", type=int, default=1, show_default=True)
@click.option("--l", type=int, default=0, show_default=True,
              help="OAM mode used for the weight column.")
@click.option("--pol", type=click.Choice(["x", "y"]), default="x",
              show_default=True)
@click.option("--output", type=click.Path(path_type=Path), required=True)
@click.option("--seed", type=int, default=None)
def spectrum(kind, n_phi, n_rings, r, d_z, d_r, scale, m, l, pol, output, seed):
    """Eigen decay rates/shifts plus the initial state's eigen weights."""
    arr = _build_geometry(kind, n_phi, n_rings, r, d_z, d_r, scale)
    coup = build_effective_coupling(arr, m, getattr(Polarization, pol)())
    spec = decay_spectrum(coup)
    state = build_hpi_state(arr, m, l)
    weights = eigen_overlaps(state, coup, spec)
    output.write_text(dynamics.spectrum_to_csv(spec, weights))
    _write_sidecar(output, {
        "command": "spectrum", "kind": kind, "n_phi": n_phi,
        "n_rings": n_rings, "r": r, "d_z": d_z, "d_r": d_r, "scale": scale,
        "m": m, "l": l, "pol": pol, "seed": seed,
    })
    click.echo(f"wrote {output}")


@main.command()
@geometry_options
@click.option("--m", type=int, default=1, show_default=True)
@click.option("--l", "ls", type=int, multiple=True, default=(0,),
              show_default=True, help="Repeatable: one trace file per l.")
@click.option("--pol", type=click.Choice(["x", "y"]), default="x",
              show_default=True)
@click.option("--t-max", type=float, default=4.0, show_default=True)
@click.option("--n-t", type=int, default=401, show_default=True)
@click.option("--output-dir", type=click.Path(path_type=Path), required=True)
@click.option("--seed", type=int, default=None)
def fluorescence(kind, n_phi, n_rings, r, d_z, d_r, scale, m, ls, pol,
                 t_max, n_t, output_dir, seed):
    """Fluorescence traces I0(t) with an exp(-M Gamma t) reference column."""
    arr = _build_geometry(kind, n_phi, n_rings, r, d_z, d_r, scale)
    coup = build_effective_coupling(arr, m, getattr(Polarization, pol)())
    times = np.linspace(0.0, t_max, max(1, n_t))
    output_dir.mkdir(parents=True, exist_ok=True)
    for l in ls:
        state = build_hpi_state(arr, m, l)
        tr = dynamics.fluorescence_trace(state, coup, times)
        path = output_dir / f"trace_l{l}.csv"
        path.write_text(dynamics.trace_to_csv(tr, reference_m=m))
        _write_sidecar(path, {
            "command": "fluorescence", "kind": kind, "n_phi": n_phi,
            "n_rings": n_rings, "r": r, "d_z": d_z, "d_r": d_r,
            "scale": scale, "m": m, "l": l, "pol": pol, "t_max": t_max,
            "n_t": n_t, "seed": seed,
        })
        click.echo(f"wrote {path}")


@main.command()
@click.option("--max-dim", type=int, default=4000, show_default=True,
              help="Skip checks whose manifold exceeds this dimension.")
def verify(max_dim):
    """Run the identity/symmetry self-checks; exit 0 iff all pass."""
    results = checks.run_all(max_dim=max_dim)
    failed = False
    for name, status, detail in results:
        click.echo(f"{status.upper():4s} {name}: {detail}")
        failed = failed or status == "fail"
    sys.exit(1 if failed else 0)


@main.command()
@geometry_options
@click.option("--m", type=int, default=1, show_default=True)
@click.option("--l", "ls", type=int, multiple=True, default=(0,),
              show_default=True)
@click.option("--n-rings-list", "n_rings_list", type=int, multiple=True,
              default=(), help="Overrides --n-rings with a sweep list.")
@click.option("--pol", type=click.Choice(["x", "y"]), default="x",
              show_default=True)
@click.option("--n-theta", type=int, default=91, show_default=True)
@click.option("--n-phi-grid", type=int, default=181, show_default=True)
@click.option("--output-dir", type=click.Path(path_type=Path), required=True)
@click.option("--seed", type=int, default=None)
def sweep(kind, n_phi, n_rings, r, d_z, d_r, scale, m, ls, n_rings_list, pol,
          n_theta, n_phi_grid, output_dir, seed):
    """Cartesian product of l values and ring counts; one grid per combo."""
    rings = n_rings_list or (n_rings,)
    output_dir.mkdir(parents=True, exist_ok=True)
    for nr, l in itertools.product(rings, ls):
        arr = _build_geometry(kind, n_phi, nr, r, d_z, d_r, scale)
        state = build_hpi_state(arr, m, l)
        grid = sample_grid(state, arr, getattr(Polarization, pol)(),
                           n_theta, n_phi_grid)
        path = output_dir / f"pattern_{kind}_nr{nr}_l{l}.csv"
        path.write_text(farfield.grid_to_csv(grid))
        _write_sidecar(path, {
            "command": "sweep", "kind": kind, "n_phi": n_phi, "n_rings": nr,
            "r": r, "d_z": d_z, "d_r": d_r, "scale": scale, "m": m, "l": l,
            "pol": pol, "n_theta": n_theta, "n_phi_grid": n_phi_grid,
            "seed": seed,
        })
        click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
