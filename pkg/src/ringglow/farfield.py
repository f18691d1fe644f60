"""Far-field scattering patterns of phase-imprinted multiphoton states.

The pattern is a dipole prefactor [1 - (R_hat . p_hat)^2] times the
modulus-squared coherent sum of configuration amplitudes with retardation
phases exp(-i k_R . R_M).  The double configuration sum factorizes as a
modulus squared, so the fast path costs O(C) per direction; the literal
double sum is kept as a testing oracle.

Normalization matches the three-atom closed form (no 1/C division); the
patterns are in arbitrary units throughout.
"""

from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (DimensionError, ResolutionError, ResourceLimitError)
from .geometry import AtomArray
from .manifold import MultiphotonState, _config_position_sums

K_MAG = 2.0 * np.pi  # |k_R| in wavelength units

BRUTEFORCE_CAP = 10 ** 3
GRID_WORK_CAP = 2 * 10 ** 8  # grid points x configurations


@dataclass(frozen=True)
class Direction:
    """Observation direction (theta from +z, azimuth phi), radians."""

    theta: float
    phi: float

    @property
    def unit(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array([st * np.cos(self.phi),
                         st * np.sin(self.phi),
                         np.cos(self.theta)])


@dataclass(frozen=True)
class Polarization:
    """Dipole orientation set by the excitation-field polarization."""

    p_hat: np.ndarray = field(repr=False)
    name: str = ""

    def __post_init__(self):
        p = np.asarray(self.p_hat, dtype=float)
        norm = np.linalg.norm(p)
        if not np.isfinite(norm) or abs(norm - 1.0) > 1e-9:
            raise ValueError(f"polarization vector must be unit length, |p|={norm}")

    @staticmethod
    def x() -> "Polarization":
        return Polarization(np.array([1.0, 0.0, 0.0]), "x")

    @staticmethod
    def y() -> "Polarization":
        return Polarization(np.array([0.0, 1.0, 0.0]), "y")


@dataclass(frozen=True)
class FarFieldGrid:
    """Sampled pattern on a regular (theta, phi) grid, row-major in theta."""

    thetas: np.ndarray = field(repr=False)
    phis: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    metadata: dict = field(default_factory=dict)

    def forward_value(self) -> float:
        """Pattern value at theta = 0 (first row is constant in phi)."""
        return float(self.values[0].mean())

    def sphere_mean(self) -> float:
        """Solid-angle average over the sampled sphere (trapezoid in theta)."""
        w = np.sin(self.thetas)
        row_mean = self.values.mean(axis=1)
        return float(np.trapezoid(row_mean * w, self.thetas)
                     / np.trapezoid(w, self.thetas))


def prefactor(direction: Direction, pol: Polarization) -> float:
    """Dipole factor 1 - (R_hat . p_hat)^2."""
    c = float(direction.unit @ pol.p_hat)
    return 1.0 - c * c


def _check_match(state: MultiphotonState, array: AtomArray) -> None:
    if state.manifold.n != array.n_atoms:
        raise DimensionError(f"state over {state.manifold.n} atoms does not "
                             f"match geometry with {array.n_atoms}")


def _structure_sum(state: MultiphotonState, array: AtomArray,
                   k_r: np.ndarray) -> complex:
    r_m = _config_position_sums(state.manifold, array)
    return complex(state.amplitudes @ np.exp(-1j * (r_m @ k_r)))


def omega_f(state: MultiphotonState, array: AtomArray,
            direction: Direction, pol: Polarization) -> float:
    """Far-field pattern at one direction, factorized O(C) evaluation."""
    _check_match(state, array)
    k_r = K_MAG * direction.unit
    s = _structure_sum(state, array, k_r)
    return prefactor(direction, pol) * state.manifold.size * abs(s) ** 2


def omega_f_bruteforce(state: MultiphotonState, array: AtomArray,
                       direction: Direction, pol: Polarization) -> float:
    """Literal double configuration sum; oracle for omega_f.

    Phases are recomputed from the state label and geometry rather than
    reused from the amplitude vector, so the two paths are independent.
    """
    _check_match(state, array)
    man = state.manifold
    if man.size > BRUTEFORCE_CAP:
        raise ResourceLimitError(
            f"brute-force sum needs {man.size}^2 terms, cap is "
            f"{BRUTEFORCE_CAP}^2")
    if "oam" in state.label:
        f = ((man.configs - 1) % array.n_phi + 1).sum(axis=1)
        mode_phase = 2.0 * np.pi * state.label["oam"] * f / array.n_phi
    else:
        f = man.configs.sum(axis=1)
        mode_phase = 2.0 * np.pi * state.label["general"] * f / man.size
    r_m = _config_position_sums(man, array)
    k_r = K_MAG * direction.unit
    dk = k_r - state.k_l
    travel = r_m @ dk
    total = 0.0
    for a in range(man.size):  # literal double sum, row at a time
        ph = (travel[a] - travel) + (mode_phase - mode_phase[a])
        total += float(np.cos(ph).sum())
    return prefactor(direction, pol) * total


def three_atom_closed_form(direction: Direction, l: int, r_bar: float) -> float:
    """Closed-form two-photon pattern for three atoms on a ring.

    r_bar = |k_R| * r.  Equals the general path for N=3, M=2 exactly.
    """
    st = np.sin(direction.theta)
    sp, cp = np.sin(direction.phi), np.cos(direction.phi)
    pref = 1.0 - st * st * cp * cp
    a = np.exp(1j * (np.sqrt(3.0) * r_bar * st * sp + 2.0 * np.pi * l / 3.0))
    b = np.exp(1j * (1.5 * r_bar * st * cp + 0.5 * np.sqrt(3.0) * r_bar * st * sp
                     + 4.0 * np.pi * l / 3.0))
    c = np.exp(1j * (1.5 * r_bar * st * cp - 0.5 * np.sqrt(3.0) * r_bar * st * sp
                     + 2.0 * np.pi * l / 3.0))
    return float(pref * (3.0 + 2.0 * (a + b + c).real))


def sample_grid(state: MultiphotonState, array: AtomArray, pol: Polarization,
                n_theta: int, n_phi_grid: int,
                threads: Optional[int] = None) -> FarFieldGrid:
    """Uniform grid: theta in [0, pi] inclusive, phi in [0, 2*pi) exclusive."""
    _check_match(state, array)
    if n_theta < 2 or n_phi_grid < 2:
        raise ResolutionError(f"grid must be at least 2x2, got "
                              f"{n_theta}x{n_phi_grid}")
    work = n_theta * n_phi_grid * state.manifold.size
    if work > GRID_WORK_CAP:
        raise ResourceLimitError(f"grid sweep needs {work} kernel evaluations, "
                                 f"cap is {GRID_WORK_CAP}")
    thetas = np.linspace(0.0, np.pi, n_theta)
    phis = np.linspace(0.0, 2.0 * np.pi, n_phi_grid, endpoint=False)
    r_m = _config_position_sums(state.manifold, array)

    st = np.sin(thetas)[:, None]
    ct = np.cos(thetas)[:, None]
    kx = K_MAG * st * np.cos(phis)[None, :]
    ky = K_MAG * st * np.sin(phis)[None, :]
    kz = K_MAG * ct * np.ones_like(phis)[None, :]
    pdots = (kx * pol.p_hat[0] + ky * pol.p_hat[1] + kz * pol.p_hat[2]) / K_MAG
    pref = 1.0 - pdots ** 2

    if threads is None:
        threads = max(1, int(os.environ.get("RINGGLOW_THREADS", "1")))

    def rows(sl: slice) -> np.ndarray:
        phase = (kx[sl, :, None] * r_m[:, 0] + ky[sl, :, None] * r_m[:, 1]
                 + kz[sl, :, None] * r_m[:, 2])
        s = np.exp(-1j * phase) @ state.amplitudes
        return state.manifold.size * np.abs(s) ** 2

    if threads > 1 and n_theta >= 2 * threads:
        from concurrent.futures import ThreadPoolExecutor
        bounds = np.linspace(0, n_theta, threads + 1, dtype=int)
        slices = [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:])]
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(rows, slices))
        struct = np.vstack(parts)
    else:
        struct = rows(slice(0, n_theta))

    values = pref * struct
    meta = {
        "state": state.label,
        "geometry": {"kind": array.kind, "n_phi": array.n_phi,
                     "n_rings": array.n_rings, "r": array.r,
                     "d_z": array.d_z, "d_r": array.d_r},
        "polarization": pol.name,
        "m": state.manifold.m,
    }
    return FarFieldGrid(thetas, phis, values, meta)


def count_azimuthal_peaks(grid: FarFieldGrid, theta: float,
                          rtol: float = 1e-9) -> int:
    """Strict local maxima of phi -> value at the grid row nearest theta.

    Neighboring samples within relative tolerance rtol are merged into
    plateaus before counting, and the phi axis is treated as periodic.
    """
    if not grid.thetas[0] <= theta <= grid.thetas[-1]:
        raise ResolutionError(f"theta={theta} outside grid range")
    if grid.phis.size < 8:
        raise ResolutionError(f"need >= 8 azimuthal samples, got {grid.phis.size}")
    row = grid.values[int(np.argmin(np.abs(grid.thetas - theta)))]
    p = row.size
    scale = max(1.0, float(np.abs(row).max()))
    tol = rtol * scale

    # merge cyclically adjacent samples that agree within tol into plateaus
    labels = np.zeros(p, dtype=int)
    for i in range(1, p):
        labels[i] = labels[i - 1] if abs(row[i] - row[i - 1]) <= tol \
            else labels[i - 1] + 1
    if labels[-1] != labels[0] and abs(row[-1] - row[0]) <= tol:
        labels[labels == labels[-1]] = labels[0]
    plateau_ids = []
    seen = set()
    for lb in labels:  # keep cyclic order of first appearance
        if lb not in seen:
            seen.add(lb)
            plateau_ids.append(lb)
    k = len(plateau_ids)
    if k < 2:
        return 0
    vals = [row[labels == lb].mean() for lb in plateau_ids]
    peaks = 0
    for i in range(k):
        if vals[i] > vals[i - 1] + tol and vals[i] > vals[(i + 1) % k] + tol:
            peaks += 1
    return peaks


def grid_to_csv(grid: FarFieldGrid) -> str:
    """CSV dump: header theta,phi,omega_f; 17 significant digits."""
    out = io.StringIO()
    out.write("theta,phi,omega_f\n")
    for i, th in enumerate(grid.thetas):
        for j, ph in enumerate(grid.phis):
            out.write(f"{th:.17g},{ph:.17g},{grid.values[i, j]:.17g}\n")
    return out.getvalue()


def grid_to_json(grid: FarFieldGrid) -> str:
    return json.dumps({
        "metadata": grid.metadata,
        "thetas": grid.thetas.tolist(),
        "phis": grid.phis.tolist(),
        "values": grid.values.tolist(),
    })
