"""Self-verification suite: algebraic identities and symmetry properties.

Shared by the `verify` CLI command and the test suite.  Each check
returns (name, status, detail) with status "pass", "fail", or "skip".
"""

from __future__ import annotations

from math import comb
from typing import Callable, Optional

import numpy as np

from . import dynamics, farfield
from .farfield import Direction, Polarization
from .geometry import build_single_ring
from .manifold import build_hpi_state

RTOL = 1e-11

StateBuilder = Callable[..., object]


def _random_directions(rng: np.random.Generator, count: int):
    thetas = rng.uniform(0.0, np.pi, count)
    phis = rng.uniform(0.0, 2.0 * np.pi, count)
    return [Direction(t, p) for t, p in zip(thetas, phis)]


def check_oracle_equivalence(cases=((4, 2), (6, 2)), n_dirs: int = 20,
                             max_dim: int = 4000, seed: int = 7):
    """Factorized pattern equals the literal double sum."""
    rng = np.random.default_rng(seed)
    pol = Polarization.x()
    worst = 0.0
    for n, m in cases:
        if comb(n, m) > max_dim:
            return ("oracle_equivalence", "skip",
                    f"C({n},{m}) exceeds max dim {max_dim}")
        arr = build_single_ring(n, 0.2)
        for l in range(n):
            st = build_hpi_state(arr, m, l)
            for d in _random_directions(rng, n_dirs):
                a = farfield.omega_f(st, arr, d, pol)
                b = farfield.omega_f_bruteforce(st, arr, d, pol)
                worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    status = "pass" if worst <= RTOL else "fail"
    return ("oracle_equivalence", status, f"max rel err {worst:.2e}")


def check_three_atom_closed_form(n_dirs: int = 100, seed: int = 11):
    """General path matches the three-atom two-photon closed form."""
    rng = np.random.default_rng(seed)
    pol = Polarization.x()
    worst = 0.0
    for r_bar in (0.1, 0.4 * np.pi, 2.0):
        r = r_bar / (2.0 * np.pi)
        arr = build_single_ring(3, r)
        for l in (0, 1, 2):
            st = build_hpi_state(arr, 2, l)
            for d in _random_directions(rng, n_dirs):
                a = farfield.omega_f(st, arr, d, pol)
                b = farfield.three_atom_closed_form(d, l, r_bar)
                worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    status = "pass" if worst <= RTOL else "fail"
    return ("three_atom_closed_form", status, f"max rel err {worst:.2e}")


def check_m_equals_n_minus_1(ns=(3, 4, 5), n_dirs: int = 50, seed: int = 13,
                             state_builder: StateBuilder = build_hpi_state):
    """Pattern of the (N-1)-photon state equals the single-photon one."""
    rng = np.random.default_rng(seed)
    pol = Polarization.x()
    worst = 0.0
    for n in ns:
        arr = build_single_ring(n, 0.2)
        for l in range(n):
            hi = state_builder(arr, n - 1, l)
            lo = state_builder(arr, 1, l)
            for d in _random_directions(rng, n_dirs):
                a = farfield.omega_f(hi, arr, d, pol)
                b = farfield.omega_f(lo, arr, d, pol)
                worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    status = "pass" if worst <= RTOL else "fail"
    return ("m_equals_n_minus_1", status, f"max rel err {worst:.2e}")


def check_mode_symmetry(ns=(4, 12), n_dirs: int = 50, seed: int = 17,
                        state_builder: StateBuilder = build_hpi_state):
    """Omega_f(l) = Omega_f(N - l) for even N on a single ring."""
    rng = np.random.default_rng(seed)
    pol = Polarization.x()
    worst = 0.0
    for n in ns:
        arr = build_single_ring(n, 0.2)
        for l in range(1, n // 2 + 1):
            sa = state_builder(arr, 2, l)
            sb = state_builder(arr, 2, n - l)
            for d in _random_directions(rng, n_dirs):
                a = farfield.omega_f(sa, arr, d, pol)
                b = farfield.omega_f(sb, arr, d, pol)
                worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    status = "pass" if worst <= RTOL else "fail"
    return ("mode_symmetry_l_to_n_minus_l", status, f"max rel err {worst:.2e}")


def check_c4_rotation(n: int = 4, n_dirs: int = 50, seed: int = 19):
    """x-pol pattern at (theta, phi + pi/2) equals y-pol at (theta, phi)."""
    rng = np.random.default_rng(seed)
    arr = build_single_ring(n, 0.2)
    worst = 0.0
    for l in range(n):
        st = build_hpi_state(arr, 2, l)
        for d in _random_directions(rng, n_dirs):
            a = farfield.omega_f(st, arr, Direction(d.theta, d.phi + np.pi / 2),
                                 Polarization.x())
            b = farfield.omega_f(st, arr, d, Polarization.y())
            worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    status = "pass" if worst <= RTOL else "fail"
    return ("c4_rotation", status, f"max rel err {worst:.2e}")


def check_small_ring_l_symmetry(n: int = 5, n_dirs: int = 50, seed: int = 23):
    """Omega_f(l) = Omega_f(-l) once the ring is shrunk by 1e-6."""
    rng = np.random.default_rng(seed)
    pol = Polarization.x()
    arr = build_single_ring(n, 0.2).scaled(1e-6)
    worst = 0.0
    for l in range(1, n):
        sa = build_hpi_state(arr, 2, l)
        sb = build_hpi_state(arr, 2, -l)
        for d in _random_directions(rng, n_dirs):
            a = farfield.omega_f(sa, arr, d, pol)
            b = farfield.omega_f(sb, arr, d, pol)
            worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    status = "pass" if worst <= RTOL else "fail"
    return ("small_ring_l_sign_symmetry", status, f"max rel err {worst:.2e}")


def check_trace_identity(n: int = 4, m: int = 2, max_dim: int = 4000):
    """Sum of eigen decay rates equals C(n,m) * m (Gamma/2 units)."""
    if comb(n, m) > max_dim:
        return ("trace_identity", "skip", f"C({n},{m}) exceeds {max_dim}")
    arr = build_single_ring(n, 0.2)
    coup = dynamics.build_effective_coupling(arr, m, Polarization.x())
    spec = dynamics.decay_spectrum(coup)
    total = spec.rates.sum()
    expected = comb(n, m) * m
    err = abs(total - expected) / expected
    status = "pass" if err <= 1e-8 else "fail"
    return ("trace_identity", status, f"rel err {err:.2e}")


def check_single_excitation_psd(n: int = 12):
    """Pairwise decay matrix Gamma * F is positive semidefinite."""
    arr = build_single_ring(n, 0.2)
    f, _ = dynamics.pairwise_kernels(arr, Polarization.x())
    lam_min = float(np.linalg.eigvalsh(f).min())
    status = "pass" if lam_min >= -1e-9 else "fail"
    return ("single_excitation_psd", status, f"min eigenvalue {lam_min:.2e}")


def check_noninteracting_fluorescence(n: int = 4, m: int = 2,
                                      scale: float = 1e3):
    """Far-separated atoms decay as exp(-M Gamma t)."""
    arr = build_single_ring(n, 0.2).scaled(scale)
    coup = dynamics.build_effective_coupling(arr, m, Polarization.x())
    st = build_hpi_state(arr, m, 1)
    times = np.linspace(0.0, 5.0, 101)
    tr = dynamics.fluorescence_trace(st, coup, times)
    err = float(np.abs(tr.intensity - np.exp(-m * times)).max())
    status = "pass" if err < 1e-3 else "fail"
    return ("noninteracting_fluorescence", status, f"max abs err {err:.2e}")


ALL_CHECKS = (
    check_oracle_equivalence,
    check_three_atom_closed_form,
    check_m_equals_n_minus_1,
    check_mode_symmetry,
    check_c4_rotation,
    check_small_ring_l_symmetry,
    check_trace_identity,
    check_single_excitation_psd,
    check_noninteracting_fluorescence,
)


def run_all(max_dim: int = 4000):
    """Run every check, honoring the size cap where applicable."""
    results = []
    for fn in ALL_CHECKS:
        if fn in (check_oracle_equivalence,):
            results.append(fn(max_dim=max_dim))
        elif fn is check_trace_identity:
            results.append(fn(max_dim=max_dim))
        else:
            results.append(fn())
    return results
