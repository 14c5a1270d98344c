"""Exception hierarchy for the toolkit.

``ConfigurationError`` marks bad user input (config files, tables, invalid
argument combinations); everything else derives from ``PhysicsError`` and
marks a physically impossible or numerically failed computation.  The CLI
maps the two branches to distinct exit codes.
"""


class ToolkitError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(ToolkitError):
    """Invalid configuration: missing blocks/fields, malformed tables, bad units."""


class PhysicsError(ToolkitError):
    """A computation failed for physical or numerical reasons."""


class WavelengthRangeError(PhysicsError):
    """Wavelength outside the validity range of a dispersion model."""


class DownConversionError(PhysicsError):
    """Requested signal/pump combination does not describe down-conversion."""


class PhaseMatchingError(PhysicsError):
    """No first-order grating can phase match the requested process."""


class QuadratureConvergenceError(PhysicsError):
    """Nested quadrature refinement did not converge within the order limit."""


class NoGuidedModeError(PhysicsError):
    """The variational search found no confined mode (n_eff <= bulk index)."""


class BoundaryOptimumError(PhysicsError):
    """Trial-parameter optimum landed on the search-box boundary."""


class ConsistencyError(PhysicsError):
    """Operands belong to different geometries or photon roles."""


class AmplitudeUndefinedError(PhysicsError):
    """Both coupling amplitudes vanish; the amplitude ratio is undefined."""


class SpanTooNarrowError(PhysicsError):
    """Spectrum span does not contain both half-maximum crossings."""

    def __init__(self, message, suggested_span_nm=None):
        super().__init__(message)
        self.suggested_span_nm = suggested_span_nm


class DegeneratePatternError(PhysicsError):
    """The two poling periods coincide; no beat pattern exists."""


class NoFeasibleDesignError(PhysicsError):
    """Every candidate geometry in a search failed to produce a design."""
