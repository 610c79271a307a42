"""
Exception hierarchy for the two-qubit XY toolkit
"""
from typing import Optional


class XYQubitError(Exception):
    """Base class for every error raised by this package"""


class InvalidParameterError(XYQubitError, ValueError):
    """Input violates a precondition (non-finite value, wrong chart, malformed path)"""


class OriginUndefinedError(XYQubitError, ValueError):
    """Polar angle requested at λ = γ = 0 where the chart is degenerate"""


class NoConvergenceError(XYQubitError, RuntimeError):
    """Jacobi sweeps exhausted before the off-diagonal norm fell below tolerance"""

    def __init__(self, sweeps: int, off_norm: float, target: float):
        self.sweeps = sweeps
        self.off_norm = off_norm
        self.target = target
        super().__init__(
            f"no convergence after {sweeps} sweeps "
            f"(off-diagonal norm {off_norm:.3e} > {target:.3e})"
        )


class DomainError(XYQubitError):
    """Parameter-space errors reported by the CLI with exit code 3"""


class OnDegeneracySphereError(DomainError, ValueError):
    """Point lies within the exclusion zone around the degeneracy sphere r = 1"""


class DiracStringError(DomainError, ValueError):
    """Connection evaluated on the θ = π ray, or state orthogonal to the chart reference"""


class InsufficientResolutionError(DomainError):
    """A path segment carries a phase too large to unwrap safely"""

    def __init__(self, segment_index: int, segment_phase: float):
        self.segment_index = segment_index
        self.segment_phase = segment_phase
        super().__init__(
            f"segment {segment_index} phase {segment_phase:.6f} rad exceeds pi/2; "
            f"refine the path"
        )


class SphereCrossingError(DomainError, ValueError):
    """Closed path has points on both sides of the degeneracy sphere"""


class InsideSphereError(DomainError, ValueError):
    """Operation is only defined outside the degeneracy sphere"""


class EmptyResultError(XYQubitError, LookupError):
    """No grid node satisfied the crossing threshold"""


class CsvExportError(XYQubitError, OSError):
    """Writing or reading a CSV file failed; keeps the OS error context"""

    def __init__(self, message: str, path: Optional[str] = None,
                 cause: Optional[OSError] = None):
        errno_value = cause.errno if cause is not None else None
        super().__init__(errno_value, message, path)
        self.cause = cause

    def __str__(self) -> str:
        detail = f"{self.strerror}"
        if self.filename:
            detail += f": '{self.filename}'"
        if self.cause is not None:
            detail += f" ({self.cause.strerror or self.cause})"
        return detail
