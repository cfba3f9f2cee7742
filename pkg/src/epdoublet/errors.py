"""Exception hierarchy for the epdoublet package."""


class EpdoubletError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(EpdoubletError):
    """A parameter point instantiates an invalid layer (e.g. width <= 0)."""


class ConfigError(EpdoubletError):
    """A potential config file is malformed or contains unknown keys."""


class EvaluationDomainError(EpdoubletError):
    """The Jost function was requested at an invalid wave number (k = 0)."""


class EvaluationRangeError(EpdoubletError):
    """The Jost evaluation would overflow (|Im k| * R too large)."""


class BoundaryZeroError(EpdoubletError):
    """A zero of the Jost function lies on (or too close to) a contour."""


class WindingError(EpdoubletError):
    """The argument-principle integral did not converge to an integer."""


class RefinementError(EpdoubletError):
    """Newton refinement of a zero failed to converge."""


class NoConvergenceError(EpdoubletError):
    """The exceptional-point Newton iteration diverged or hit its cap."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace or []


class HigherOrderDegeneracyError(EpdoubletError):
    """|d2f/dk2| below the certificate floor: rank >= 2 degeneracy."""


class DegenerateUnfoldingError(EpdoubletError):
    """The extracted unfolding is degenerate (R and I vanish or parallel)."""


class ValidityRangeError(EpdoubletError):
    """Requested offsets fall outside the model's validity radius."""

    def __init__(self, message, indices=None):
        super().__init__(message)
        self.indices = indices or []


class IsolationLostError(EpdoubletError):
    """The doublet stopped being isolated (winding != 2) during tracing."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class ContinuationError(EpdoubletError):
    """Step-to-step matching of pole trajectories became ambiguous."""
