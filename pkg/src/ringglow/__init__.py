"""Collective emission from phase-imprinted multiphoton states on ring arrays."""

__version__ = "0.1.0"

from .errors import (DimensionError, GeometryError, ManifoldError,
                     NumericalError, ResolutionError, ResourceLimitError,
                     RingglowError, SingularityError)
from .geometry import (AtomArray, azimuthal_index, build_concentric_rings,
                       build_single_ring, build_stacked_rings)
from .manifold import (ExcitationManifold, MultiphotonState,
                       build_generalized_state, build_hpi_state,
                       enumerate_manifold, helical_phase_sum)
from .farfield import (Direction, FarFieldGrid, Polarization,
                       count_azimuthal_peaks, omega_f, omega_f_bruteforce,
                       prefactor, sample_grid, three_atom_closed_form)
from .dynamics import (DecaySpectrum, EffectiveCoupling, FluorescenceTrace,
                       PairKernel, build_effective_coupling, decay_spectrum,
                       eigen_overlaps, fluorescence_trace, rddi_pair)

__all__ = [
    "AtomArray", "azimuthal_index", "build_concentric_rings",
    "build_single_ring", "build_stacked_rings",
    "ExcitationManifold", "MultiphotonState", "build_generalized_state",
    "build_hpi_state", "enumerate_manifold", "helical_phase_sum",
    "Direction", "FarFieldGrid", "Polarization", "count_azimuthal_peaks",
    "omega_f", "omega_f_bruteforce", "prefactor", "sample_grid",
    "three_atom_closed_form",
    "DecaySpectrum", "EffectiveCoupling", "FluorescenceTrace", "PairKernel",
    "build_effective_coupling", "decay_spectrum", "eigen_overlaps",
    "fluorescence_trace", "rddi_pair",
    "RingglowError", "GeometryError", "ManifoldError", "DimensionError",
    "ResourceLimitError", "SingularityError", "ResolutionError",
    "NumericalError",
]
