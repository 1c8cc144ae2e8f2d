"""Exception hierarchy for the GLS calculus."""


class GLSError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(GLSError):
    """A constructor or operation parameter violates its constraint."""


class EmptyDomainError(GLSError):
    """A requested exponent interval is empty after intersection."""


class EmptyIntersectionError(GLSError):
    """No exponent lies in both a moment table hull and a psi domain."""


class InsufficientGridError(GLSError):
    """A check needs more grid points than were supplied."""


class BelowValidityError(GLSError):
    """A tail bound was requested below its validity threshold y >= norm."""


class InsufficientPointsError(GLSError):
    """A fit needs more usable data points than were supplied."""


class DegenerateFitError(GLSError):
    """The regression design has no variance; the fit is undetermined."""


class ConstraintViolationError(GLSError):
    """Exponents violate an admissibility constraint."""


class ArityMismatchError(GLSError):
    """Descriptor arity and the number of supplied psi functions differ."""


class IncompatibleGridsError(GLSError):
    """Grid functions do not share the layout an operation requires."""


class MissingPeriodicityError(GLSError):
    """A torus operation was applied to a non-periodic grid."""


class ResourceLimitError(GLSError):
    """An exhaustive scan would exceed the configured operation cap."""


class UnrepresentableScaleError(GLSError):
    """A dilation produces a grid that cannot be represented."""


class DomainMismatchError(GLSError):
    """An evaluation grid leaves the domain of the bound being verified."""


class FormatError(GLSError):
    """A text-format payload is malformed."""


class ConfigError(GLSError):
    """A run configuration fails to parse or validate."""
