"""Collective decay dynamics within the M-excitation sector.

Pairwise resonant dipole-dipole coupling (dissipative part F, dispersive
part G) generates a non-Hermitian matrix on the configuration manifold,
d a/dt = Lambda a, in units of the single-atom linewidth Gamma = 1.
Eigenvalues give collective decay rates (in Gamma/2 units) and shifts;
fluorescence is the total excited population of the evolved amplitudes.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import NumericalError, ResourceLimitError, SingularityError
from .farfield import Polarization
from .geometry import AtomArray
from .manifold import ExcitationManifold, MultiphotonState, enumerate_manifold

MIN_SEPARATION = 1e-6
SERIES_XI = 1e-2
CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class PairKernel:
    """Dimensionless collective decay (F) and shift (G) of one atom pair."""

    f_val: float
    g_val: float


def rddi_pair(separation: np.ndarray, pol: Polarization) -> PairKernel:
    """Evaluate the uniform-polarization pair kernel at one separation.

    With xi = 2*pi*|r| and c2 = (p_hat . r_hat)^2:
      F = (3/2) [(1-c2) sin(xi)/xi + (1-3c2)(cos(xi)/xi^2 - sin(xi)/xi^3)]
      G = (3/2) [-(1-c2) cos(xi)/xi + (1-3c2)(sin(xi)/xi^2 + cos(xi)/xi^3)]
    F -> 1 as xi -> 0; G diverges as 1/xi^3 near contact.
    """
    r = np.asarray(separation, dtype=float)
    d = float(np.linalg.norm(r))
    if d <= MIN_SEPARATION:
        raise SingularityError(f"pair separation {d:.3e} below "
                               f"{MIN_SEPARATION} (shift kernel diverges)")
    xi = 2.0 * np.pi * d
    c2 = float((pol.p_hat @ (r / d)) ** 2)
    if xi < SERIES_XI:
        # cos/xi^2 - sin/xi^3 cancels catastrophically; use its series
        trig2 = -1.0 / 3.0 + xi ** 2 / 30.0 - xi ** 4 / 840.0
        sinc = 1.0 - xi ** 2 / 6.0 + xi ** 4 / 120.0
    else:
        trig2 = np.cos(xi) / xi ** 2 - np.sin(xi) / xi ** 3
        sinc = np.sin(xi) / xi
    f = 1.5 * ((1.0 - c2) * sinc + (1.0 - 3.0 * c2) * trig2)
    g = 1.5 * (-(1.0 - c2) * np.cos(xi) / xi
               + (1.0 - 3.0 * c2) * (np.sin(xi) / xi ** 2
                                     + np.cos(xi) / xi ** 3))
    return PairKernel(float(f), float(g))


def pairwise_kernels(array: AtomArray, pol: Polarization):
    """(F, G) matrices over all atom pairs; diagonal F=1, G=0."""
    n = array.n_atoms
    f = np.eye(n)
    g = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            k = rddi_pair(array.positions[a] - array.positions[b], pol)
            f[a, b] = f[b, a] = k.f_val
            g[a, b] = g[b, a] = k.g_val
    return f, g


@dataclass(frozen=True)
class EffectiveCoupling:
    """Non-Hermitian generator Lambda on the M-excitation manifold."""

    manifold: ExcitationManifold
    matrix: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.manifold.size


def build_effective_coupling(array: AtomArray, m: int, pol: Polarization,
                             cap: int = 10 ** 4) -> EffectiveCoupling:
    """Assemble Lambda: diagonal -m/2; configurations V, W sharing m-1
    excited atoms couple through the single differing pair (alpha, beta)
    with (1/2)(-F + iG)."""
    man = enumerate_manifold(array.n_atoms, m)
    if man.size > cap:
        raise ResourceLimitError(f"coupling matrix needs dim {man.size}, "
                                 f"cap is {cap}")
    f, g = pairwise_kernels(array, pol)
    pair = 0.5 * (-f + 1j * g)
    dim = man.size
    mat = np.zeros((dim, dim), dtype=complex)
    np.fill_diagonal(mat, -0.5 * m)
    config_sets = [frozenset(c) for c in map(tuple, man.configs)]
    rank_of = {s: i for i, s in enumerate(config_sets)}
    all_atoms = set(range(1, array.n_atoms + 1))
    for iv, v in enumerate(config_sets):
        for beta in v:
            rest = v - {beta}
            for alpha in all_atoms - v:
                iw = rank_of[frozenset(rest | {alpha})]
                mat[iw, iv] = pair[alpha - 1, beta - 1]
    return EffectiveCoupling(man, mat)


@dataclass(frozen=True)
class DecaySpectrum:
    """Eigen decay rates (Gamma/2 units, ascending) and frequency shifts."""

    eigenvalues: np.ndarray = field(repr=False)  # sorted by ascending rate
    right_vectors: np.ndarray = field(repr=False)  # columns match eigenvalues

    @property
    def rates(self) -> np.ndarray:
        return -2.0 * self.eigenvalues.real

    @property
    def shifts(self) -> np.ndarray:
        return 2.0 * self.eigenvalues.imag


def decay_spectrum(coupling: EffectiveCoupling) -> DecaySpectrum:
    """Full non-Hermitian eigendecomposition, sorted by ascending rate."""
    try:
        w, v = scipy.linalg.eig(coupling.matrix)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    order = np.argsort(-2.0 * w.real, kind="stable")
    return DecaySpectrum(w[order], v[:, order])


def eigen_overlaps(state: MultiphotonState, coupling: EffectiveCoupling,
                   spectrum: Optional[DecaySpectrum] = None):
    """Expansion weights |c_n|^2 of the state in the right-eigenvector basis.

    The basis is non-orthogonal, so weights need not sum to 1.
    """
    if spectrum is None:
        spectrum = decay_spectrum(coupling)
    v = spectrum.right_vectors
    cond = np.linalg.cond(v)
    if cond > CONDITION_LIMIT:
        raise NumericalError(f"eigenvector matrix condition {cond:.3e} "
                             f"exceeds {CONDITION_LIMIT:.0e}")
    c = np.linalg.solve(v, state.amplitudes)
    return [(complex(lam), float(abs(ci) ** 2))
            for lam, ci in zip(spectrum.eigenvalues, c)]


@dataclass(frozen=True)
class FluorescenceTrace:
    """Normalized excited population I0(t) sampled at the given Gamma*t."""

    times: np.ndarray = field(repr=False)
    intensity: np.ndarray = field(repr=False)
    used_integrator_fallback: bool = False


def _evolve_rk4(mat: np.ndarray, a0: np.ndarray, times: np.ndarray,
                dt: float = 1e-3) -> np.ndarray:
    """Fixed-step RK4 for d a/dt = Lambda a, sampled at `times`."""
    out = np.empty((times.size, a0.size), dtype=complex)
    t = 0.0
    a = a0.astype(complex).copy()
    for i, target in enumerate(times):
        while t < target - 1e-15:
            h = min(dt, target - t)
            k1 = mat @ a
            k2 = mat @ (a + 0.5 * h * k1)
            k3 = mat @ (a + 0.5 * h * k2)
            k4 = mat @ (a + h * k3)
            a = a + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            t += h
        out[i] = a
    return out


def fluorescence_trace(state: MultiphotonState, coupling: EffectiveCoupling,
                       times, method: str = "auto") -> FluorescenceTrace:
    """Evolve the amplitudes and return I0(t) = sum |a(t)|^2, I0(0) = 1.

    method: "auto" uses the eigen-expansion and falls back to a fixed-step
    integrator if the eigenbasis is ill-conditioned; "eig" and "rk4" force
    one path.
    """
    if state.manifold.size != coupling.dim:
        raise NumericalError(f"state dim {state.manifold.size} does not match "
                             f"coupling dim {coupling.dim}")
    times = np.asarray(times, dtype=float)
    if times.size == 0 or np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be nonnegative and nondecreasing")
    fallback = False
    if method == "rk4":
        amps = _evolve_rk4(coupling.matrix, state.amplitudes, times)
    else:
        spec = decay_spectrum(coupling)
        v = spec.right_vectors
        cond = np.linalg.cond(v)
        if cond > CONDITION_LIMIT:
            if method == "eig":
                raise NumericalError(f"eigenvector matrix condition "
                                     f"{cond:.3e} exceeds {CONDITION_LIMIT:.0e}")
            fallback = True
            amps = _evolve_rk4(coupling.matrix, state.amplitudes, times)
        else:
            c = np.linalg.solve(v, state.amplitudes)
            decay = np.exp(np.outer(times, spec.eigenvalues)) * c
            amps = np.einsum("dk,tk->td", v, decay)
    intensity = np.abs(amps) ** 2
    intensity = intensity.sum(axis=1)
    i0 = float(np.abs(state.amplitudes @ state.amplitudes.conj()).real)
    return FluorescenceTrace(times, intensity / i0, fallback)


def spectrum_to_csv(spectrum: DecaySpectrum,
                    weights: Optional[list] = None) -> str:
    """CSV dump: index,rate_over_half_gamma,shift_over_half_gamma,weight."""
    out = io.StringIO()
    out.write("index,rate_over_half_gamma,shift_over_half_gamma,weight\n")
    rates, shifts = spectrum.rates, spectrum.shifts
    for i in range(rates.size):
        w = weights[i][1] if weights is not None else 0.0
        out.write(f"{i},{rates[i]:.17g},{shifts[i]:.17g},{w:.17g}\n")
    return out.getvalue()


def trace_to_csv(trace: FluorescenceTrace,
                 reference_m: Optional[int] = None) -> str:
    """CSV dump: gamma_t,intensity[,reference] with e^{-M Gamma t} column."""
    out = io.StringIO()
    if reference_m is None:
        out.write("gamma_t,intensity\n")
        for t, v in zip(trace.times, trace.intensity):
            out.write(f"{t:.17g},{v:.17g}\n")
    else:
        out.write("gamma_t,intensity,reference\n")
        for t, v in zip(trace.times, trace.intensity):
            out.write(f"{t:.17g},{v:.17g},{np.exp(-reference_m * t):.17g}\n")
    return out.getvalue()
