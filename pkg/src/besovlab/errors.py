"""Exception hierarchy for besovlab."""


class BesovLabError(Exception):
    """Base class for all besovlab errors."""


class DomainError(BesovLabError):
    """Rasterization produced no interior points or the domain spec is invalid."""


class PotentialError(BesovLabError):
    """A potential sampler returned a non-finite value."""


class GridError(BesovLabError):
    """Operands live on different grids."""


class SolverError(BesovLabError):
    """Eigendecomposition failed or did not meet the residual tolerance."""


class MultiplierError(BesovLabError):
    """A scalar multiplier is non-finite on part of the spectrum."""


class ParameterError(BesovLabError):
    """A scan or operation parameter is out of its admissible range."""


class SpectrumError(BesovLabError):
    """The spectrum does not allow the requested construction (e.g. lowest eigenvalue <= 0)."""


class ProfileError(BesovLabError):
    """A block profile is missing data required by the requested norm."""


class EnsembleError(BesovLabError):
    """Every ensemble pair was degenerate for the requested scan."""


class UnsupportedNormError(BesovLabError):
    """Exact operator norms are only available for p in {1, 2, inf}."""


class KernelSizeError(BesovLabError):
    """Dense kernel assembly would exceed the configured entry cap."""


class ConfigError(BesovLabError):
    """A run configuration is malformed; the message names the offending key."""


class HardAssertionError(BesovLabError):
    """A hard assertion failed; runners map this to exit code 2.

    Carries the offending report on the ``report`` attribute when available.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ChainViolationError(HardAssertionError):
    """The gradient-square chain inequality failed on a probed row."""
