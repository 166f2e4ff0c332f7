"""Exception types shared across the package."""


class PhaseLabError(Exception):
    """Base class for all phaselab errors."""


class DimensionError(PhaseLabError, ValueError):
    """Shapes, labels or grids do not match."""


class NumericError(PhaseLabError, ValueError):
    """Non-finite values where finite numbers are required."""


class ContractError(PhaseLabError, ValueError):
    """An input violates a structural invariant (Hermiticity, unitarity, norm)."""


class DegeneracyError(ContractError):
    """Instantaneous spectrum too close to degenerate for a single-level treatment."""


class UndefinedPhaseError(PhaseLabError, ValueError):
    """The phase of a (near-)zero complex number was requested."""


class OrthogonalityCrossingError(UndefinedPhaseError):
    """An amplitude became orthogonal to its initial state, so its phase is undefined."""


class CapacityError(PhaseLabError, ValueError):
    """The ancilla space is too small to purify the given state."""
