"""Exception hierarchy shared by all geomphase modules."""


class GeomPhaseError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(GeomPhaseError, ValueError):
    """Operands have incompatible or unsupported dimensions."""


class DomainError(GeomPhaseError, ValueError):
    """Input lies outside the mathematical domain of the operation."""


class ValidationError(GeomPhaseError, ValueError):
    """A constructed object violates one of its invariants."""


class OrthogonalLinkError(GeomPhaseError):
    """Consecutive states are (numerically) orthogonal; the phase through
    the link is undefined."""


class OpenPathError(GeomPhaseError):
    """Operation requires a closed loop but got an open path."""


class DegenerateArcError(GeomPhaseError):
    """Consecutive sphere points are antipodal; the great-circle arc
    between them is not unique."""


class AdiabaticityError(GeomPhaseError):
    """Band population dropped below the adiabaticity threshold.

    Attributes
    ----------
    worst_time : float
        Time at which the population was smallest.
    population : float
        The smallest band population encountered.
    """

    def __init__(self, message, worst_time=None, population=None):
        super().__init__(message)
        self.worst_time = worst_time
        self.population = population


class DegeneracyError(GeomPhaseError):
    """A band crossing (or near-crossing) makes a single-band quantity
    ill-defined; degenerate subspaces are handled by the holonomy module."""


class GaugeError(GeomPhaseError):
    """Frame samples are not continuous enough to define a connection."""


class SingularityError(GeomPhaseError):
    """A control path hit the singular locus of the quantity being
    evaluated."""


class StepTooLargeError(GeomPhaseError):
    """A plaquette holonomy has an eigenvalue at (or too close to) -1, so
    its matrix logarithm branch is ambiguous; reduce the step."""


class VisibilityError(GeomPhaseError):
    """Fringe visibility is (numerically) zero, so the fitted phase is
    meaningless."""


class SynthesisError(GeomPhaseError):
    """Gate synthesis verification failed beyond tolerance.

    Attributes
    ----------
    measured : float or None
        The measured phase or angle that failed verification.
    """

    def __init__(self, message, measured=None):
        super().__init__(message)
        self.measured = measured


class ResolutionError(GeomPhaseError, ValueError):
    """Requested step count is too coarse for the requested dynamics."""


class SchemaError(GeomPhaseError, ValueError):
    """An experiment configuration violates its schema."""
