"""Multi-excitation configuration space and phase-imprinted states.

A configuration is a strictly increasing M-tuple of 1-based atom indices
(mu_1 < mu_2 < ... < mu_M).  Configurations are stored in lexicographic
order; ranks use the combinatorial number system so that the same index
convention is shared by the far-field and dynamics code.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Optional

import json

import numpy as np

from .errors import ManifoldError, ResourceLimitError
from .geometry import AtomArray, azimuthal_index

DEFAULT_CONFIG_CAP = 10 ** 6

#: Excitation wave vector along +z with |k_L| = 2*pi (wavelength units).
K_L_DEFAULT = np.array([0.0, 0.0, 2.0 * np.pi])


@dataclass(frozen=True)
class ExcitationManifold:
    """All M-subsets of {1..n}, lexicographically ordered, with rank maps."""

    n: int
    m: int
    configs: np.ndarray = field(repr=False)  # (C, m) int array, 1-based

    @property
    def size(self) -> int:
        return self.configs.shape[0]

    def rank(self, config) -> int:
        """Lexicographic rank of a strictly increasing M-tuple."""
        config = tuple(int(c) for c in config)
        if len(config) != self.m or any(b <= a for a, b in zip(config, config[1:])):
            raise ManifoldError(f"not a strictly increasing {self.m}-tuple: {config}")
        if config[0] < 1 or config[-1] > self.n:
            raise ManifoldError(f"config {config} out of range [1, {self.n}]")
        # rank = number of m-subsets lexicographically before config
        r = 0
        prev = 0
        for j, c in enumerate(config):
            for v in range(prev + 1, c):
                r += comb(self.n - v, self.m - j - 1)
            prev = c
        return r

    def unrank(self, i: int) -> tuple:
        if not 0 <= i < self.size:
            raise ManifoldError(f"rank {i} out of range [0, {self.size})")
        return tuple(int(v) for v in self.configs[i])


def enumerate_manifold(n: int, m: int,
                       cap: int = DEFAULT_CONFIG_CAP) -> ExcitationManifold:
    """Enumerate all M-subsets of n atoms in lexicographic order."""
    if m < 1 or n < 1:
        raise ManifoldError(f"need n, m >= 1, got n={n}, m={m}")
    if m > n:
        raise ManifoldError(f"excitation number m={m} exceeds atom number n={n}")
    size = comb(n, m)
    if size > cap:
        raise ResourceLimitError(
            f"manifold needs {size} configurations, cap is {cap}")
    configs = np.array(list(combinations(range(1, n + 1), m)), dtype=np.int64)
    return ExcitationManifold(n, m, configs)


@dataclass(frozen=True)
class MultiphotonState:
    """Complex amplitude per configuration, in manifold order.

    label is {"oam": l} for helical-phase states or {"general": n_index}
    for the generalized linear-phase states.
    """

    manifold: ExcitationManifold
    amplitudes: np.ndarray = field(repr=False)
    label: dict
    k_l: np.ndarray = field(repr=False)

    def to_json(self) -> str:
        return json.dumps({
            "n": self.manifold.n,
            "m": self.manifold.m,
            "label": self.label,
            "amplitudes": [[float(a.real), float(a.imag)]
                           for a in self.amplitudes],
        })


def helical_phase_sum(config, array: AtomArray) -> int:
    """Sum of azimuthal indices mu_phi over the excited atoms."""
    return sum(azimuthal_index(array, int(mu)) for mu in config)


def _config_position_sums(manifold: ExcitationManifold,
                          array: AtomArray) -> np.ndarray:
    """Per-configuration sum of excited-atom positions, shape (C, 3)."""
    if manifold.n != array.n_atoms:
        raise ManifoldError(f"manifold over {manifold.n} atoms does not match "
                            f"array of {array.n_atoms}")
    return array.positions[manifold.configs - 1].sum(axis=1)


def build_hpi_state(array: AtomArray, m: int, l: int,
                    k_l: Optional[np.ndarray] = None,
                    cap: int = DEFAULT_CONFIG_CAP) -> MultiphotonState:
    """Helical-phase-imprinted M-photon state for OAM number l.

    Amplitude of each configuration is
    C^{-1/2} * exp(i k_L . R_M) * exp(i 2*pi*l*(f - 1)/n_phi)
    with R_M the summed excited positions and f the azimuthal index sum.
    """
    k_l = K_L_DEFAULT if k_l is None else np.asarray(k_l, dtype=float)
    man = enumerate_manifold(array.n_atoms, m, cap=cap)
    r_m = _config_position_sums(man, array)
    f = ((man.configs - 1) % array.n_phi + 1).sum(axis=1)
    phases = r_m @ k_l + 2.0 * np.pi * l * (f - 1) / array.n_phi
    amps = np.exp(1j * phases) / np.sqrt(man.size)
    return MultiphotonState(man, amps, {"oam": int(l)}, k_l)


def build_generalized_state(array: AtomArray, m: int, n_index: int,
                            k_l: Optional[np.ndarray] = None,
                            cap: int = DEFAULT_CONFIG_CAP) -> MultiphotonState:
    """Generalized linear-phase M-photon state, mode n_index in [1, C]."""
    k_l = K_L_DEFAULT if k_l is None else np.asarray(k_l, dtype=float)
    man = enumerate_manifold(array.n_atoms, m, cap=cap)
    if not 1 <= n_index <= man.size:
        raise ManifoldError(f"mode index {n_index} out of range [1, {man.size}]")
    r_m = _config_position_sums(man, array)
    f = man.configs.sum(axis=1)  # global indices, not azimuthal
    phases = r_m @ k_l + 2.0 * np.pi * n_index * (f - 1) / man.size
    amps = np.exp(1j * phases) / np.sqrt(man.size)
    return MultiphotonState(man, amps, {"general": int(n_index)}, k_l)
