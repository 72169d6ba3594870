"""Exception types shared across the library."""


class SpectralError(Exception):
    """Base class for domain errors raised by this package."""


class DegenerateOperatorError(SpectralError):
    """The perturbation carries no secular content (zero coupling or zero
    potential); the spectrum equals the unperturbed one."""


class MalformedSpectrumError(SpectralError):
    """Spectral data violates the alternation structure required of
    rank-one-perturbed spectra."""


class InconsistentSpectraError(SpectralError):
    """Three-spectra input whose recovered per-level data contradict each
    other (e.g. recovered cos/sin parts do not reproduce the level norm)."""


class PoleError(SpectralError):
    """The secular function was evaluated exactly at one of its poles."""


class ConvergenceError(SpectralError):
    """An iterative numerical routine failed to reach its tolerance."""
