"""Ring-array geometries: single, stacked, and concentric rings.

All lengths are stored in units of the transition wavelength, so the
resonant wavenumber is exactly 2*pi.  Atoms are labelled with 1-based
global indices mu = (ring_index - 1) * n_phi + mu_phi, where mu_phi is
the azimuthal index within a ring.  The first atom of every ring sits at
azimuth 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError

MIN_PAIR_SEPARATION = 1e-9


@dataclass(frozen=True)
class AtomArray:
    """Atom positions (wavelength units) plus ring metadata.

    positions has shape (n_phi * n_rings, 3); row mu-1 is atom mu.
    """

    kind: str  # "single" | "stacked" | "concentric"
    n_phi: int
    n_rings: int
    r: float
    d_z: float
    d_r: float
    positions: np.ndarray = field(repr=False)

    @property
    def n_atoms(self) -> int:
        return self.n_phi * self.n_rings

    def scaled(self, s: float) -> "AtomArray":
        """Uniformly scale all coordinates by s (keeps metadata in step)."""
        if s <= 0:
            raise GeometryError(f"scale factor must be positive, got {s}")
        return AtomArray(self.kind, self.n_phi, self.n_rings, self.r * s,
                         self.d_z * s, self.d_r * s, self.positions * s)

    def to_json(self) -> str:
        return json.dumps({
            "kind": self.kind,
            "n_phi": self.n_phi,
            "n_rings": self.n_rings,
            "r": self.r,
            "d_z": self.d_z,
            "d_r": self.d_r,
            "positions": self.positions.tolist(),
        })

    @staticmethod
    def from_json(text: str) -> "AtomArray":
        d = json.loads(text)
        positions = np.asarray(d["positions"], dtype=float)
        arr = AtomArray(d["kind"], int(d["n_phi"]), int(d["n_rings"]),
                        float(d["r"]), float(d["d_z"]), float(d["d_r"]),
                        positions)
        _validate(arr)
        return arr


def _ring(n_phi: int, radius: float, z: float) -> np.ndarray:
    ang = 2.0 * np.pi * np.arange(n_phi) / n_phi
    return np.column_stack([radius * np.cos(ang),
                            radius * np.sin(ang),
                            np.full(n_phi, z)])


def _validate(array: AtomArray) -> None:
    pos = array.positions
    if pos.shape != (array.n_phi * array.n_rings, 3):
        raise GeometryError(
            f"expected {array.n_phi * array.n_rings} atoms, got {pos.shape}")
    if not np.all(np.isfinite(pos)):
        raise GeometryError("non-finite atom position")
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=-1))
    np.fill_diagonal(dist, np.inf)
    if dist.min() <= MIN_PAIR_SEPARATION:
        i, j = np.unravel_index(np.argmin(dist), dist.shape)
        raise GeometryError(f"atoms {i + 1} and {j + 1} coincide "
                            f"(separation {dist[i, j]:.3e})")


def build_single_ring(n_phi: int, r: float) -> AtomArray:
    """n_phi equidistant atoms on a ring of radius r in the z=0 plane."""
    if n_phi < 2:
        raise GeometryError(f"n_phi must be >= 2, got {n_phi}")
    if r <= 0:
        raise GeometryError(f"ring radius must be positive, got {r}")
    arr = AtomArray("single", n_phi, 1, float(r), 0.0, 0.0, _ring(n_phi, r, 0.0))
    _validate(arr)
    return arr


def build_stacked_rings(n_phi: int, n_z: int, r: float, d_z: float) -> AtomArray:
    """n_z copies of the single ring stacked along z with spacing d_z."""
    if n_phi < 2:
        raise GeometryError(f"n_phi must be >= 2, got {n_phi}")
    if n_z < 1:
        raise GeometryError(f"n_z must be >= 1, got {n_z}")
    if r <= 0:
        raise GeometryError(f"ring radius must be positive, got {r}")
    if n_z > 1 and d_z <= 0:
        raise GeometryError(f"axial spacing must be positive, got {d_z}")
    pos = np.vstack([_ring(n_phi, r, (k - 1) * d_z) for k in range(1, n_z + 1)])
    arr = AtomArray("stacked", n_phi, n_z, float(r), float(d_z), 0.0, pos)
    _validate(arr)
    return arr


def build_concentric_rings(n_phi: int, n_r: int, r: float, d_r: float) -> AtomArray:
    """n_r coplanar rings with radii r, r+d_r, ... and shared azimuths."""
    if n_phi < 2:
        raise GeometryError(f"n_phi must be >= 2, got {n_phi}")
    if n_r < 1:
        raise GeometryError(f"n_r must be >= 1, got {n_r}")
    if r <= 0:
        raise GeometryError(f"ring radius must be positive, got {r}")
    if n_r > 1 and d_r <= 0:
        raise GeometryError(f"radial spacing must be positive, got {d_r}")
    pos = np.vstack([_ring(n_phi, r + (k - 1) * d_r, 0.0)
                     for k in range(1, n_r + 1)])
    arr = AtomArray("concentric", n_phi, n_r, float(r), 0.0, float(d_r), pos)
    _validate(arr)
    return arr


def azimuthal_index(array: AtomArray, mu: int) -> int:
    """Azimuthal index mu_phi in [1, n_phi] of atom with global index mu."""
    if not 1 <= mu <= array.n_atoms:
        raise IndexError(f"atom index {mu} out of range [1, {array.n_atoms}]")
    return (mu - 1) % array.n_phi + 1
