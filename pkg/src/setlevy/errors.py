"""Exception types shared across the package."""


class SetLevyError(Exception):
    """Base class for all package-specific errors."""


class AlignmentError(SetLevyError):
    """A corner coordinate does not sit on the requested dyadic grid."""


class DegenerateSetError(SetLevyError):
    """An operation requires a set of positive measure."""


class GridCompatibilityError(SetLevyError):
    """Two grid laws do not share the same step."""


class InversionError(SetLevyError):
    """Characteristic-function inversion produced an invalid distribution."""


class NumericsError(SetLevyError):
    """A quadrature or root-finding routine failed to reach its tolerance."""


class ConsistencyError(SetLevyError):
    """A semilattice ordering or closure requirement is violated."""


class UnsupportedSetError(SetLevyError):
    """A jump-size set is not bounded away from zero."""


class UnsupportedRefinementError(SetLevyError):
    """A truncation level finer than the sampled spec was requested."""


class ConfigError(SetLevyError):
    """A configuration document failed schema validation."""
