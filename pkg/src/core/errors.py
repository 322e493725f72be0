"""
Error types raised by the wave lab.

All domain failures derive from WaveLabError so that the CLI can map them to
exit status 1 with a readable message, while programming errors keep raising
the usual ValueError / FileNotFoundError.
"""

from typing import List, Optional


class WaveLabError(Exception):
    """Base class for every domain error of the package."""


class MissingPotential(WaveLabError):
    """Raised when an operation needs the potential F but the nonlinearity has none."""


class UnknownName(WaveLabError):
    """Raised when a builtin nonlinearity name is not registered."""


class ContractionFailure(WaveLabError):
    """Raised when the exterior fixed-point iteration leaves its ball or fails to converge."""


class StiffnessFailure(WaveLabError):
    """Raised when inward continuation stalls without reaching the blow-up classifier."""


class DomainError(WaveLabError):
    """Raised when a profile is evaluated or transformed outside its domain."""


class EmptyZ(WaveLabError):
    """Raised when the potential is non-positive on the sphere, so no bubble exists."""


class DegenerateProfile(WaveLabError):
    """Raised when a profile carries no gradient energy."""


class DomainTooSmall(WaveLabError):
    """Raised when the radial grid cannot contain the light cone of the data."""


class NonFiniteState(WaveLabError):
    """Raised when NaN or Inf appears in an evolved state."""


class CFLViolation(WaveLabError):
    """Raised when the time step exceeds cfl * dr."""


class InsufficientWindow(WaveLabError):
    """Raised when radiation extraction gets fewer than two sample times."""


class InsufficientSnapshots(WaveLabError):
    """Raised when a time-series diagnostic gets fewer than three snapshots."""


class NonpositiveEnergy(WaveLabError):
    """Raised when the 3E bound is requested for data with E <= 0."""


class EnergyBudgetExceeded(WaveLabError):
    """
    Raised when the available gradient energy cannot reach the threshold of scale j.

    Attributes:
        scales: Scales found before the failing index
        j: 1-based index of the scale that could not be placed
    """

    def __init__(self, message: str, scales: List[float], j: int):
        super().__init__(message)
        self.scales = list(scales)
        self.j = j


class ConfigValidationError(WaveLabError):
    """
    Raised when a scenario file fails schema or semantic validation.

    Attributes:
        field: Dotted path of the offending field, if known
        line: 1-based line number in the source file, if known
    """

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        location = []
        if field:
            location.append(f"field '{field}'")
        if line is not None:
            location.append(f"line {line}")
        full_message = f"{message} ({', '.join(location)})" if location else message
        super().__init__(full_message)
        self.field = field
        self.line = line
