"""Exception types shared across the package."""


class RingglowError(Exception):
    """Base class for all package-specific errors."""


class GeometryError(RingglowError, ValueError):
    """Invalid ring geometry parameters."""


class ManifoldError(RingglowError, ValueError):
    """Invalid excitation-manifold parameters (e.g. m > n, bad mode index)."""


class DimensionError(RingglowError, ValueError):
    """State and geometry (or grid) dimensions do not match."""


class ResourceLimitError(RingglowError, RuntimeError):
    """A configured size cap was exceeded; message carries the required size."""


class SingularityError(RingglowError, ValueError):
    """Atom pair too close: the dispersive kernel diverges as 1/xi^3."""


class ResolutionError(RingglowError, ValueError):
    """Angular grid too coarse for the requested analysis."""


class NumericalError(RingglowError, RuntimeError):
    """Eigensolver or linear-system failure, with condition diagnostics."""
