from typing import Any, Optional


class GerstenLabError(Exception):
    """Base class for every error raised by gersten_lab."""


class InputError(GerstenLabError, ValueError):
    """Malformed or degenerate input data."""


class TruncationError(InputError):
    """An operation would produce a class above the table's degree bound."""

    def __init__(self, degree: int, bound: int):
        self.degree = degree
        self.bound = bound
        super().__init__(f"result degree {degree} exceeds the truncation bound {bound}")


class NotACocycleError(InputError):
    """A cochain handed to a class-level operation is not closed.

    Attributes:
        coboundary: the nonzero value of the differential on the input.
    """

    def __init__(self, degree: int, coboundary: Any):
        self.degree = degree
        self.coboundary = coboundary
        super().__init__(f"cochain of degree {degree} is not a cocycle")


class BudgetExceededError(GerstenLabError, MemoryError):
    """A requested matrix would not fit into the configured memory budget."""

    def __init__(self, degree: int, required: int, allowed: int, what: str = "differential"):
        self.degree = degree
        self.required = required
        self.allowed = allowed
        self.what = what
        super().__init__(
            f"{what} in degree {degree} needs ~{required / 2**20:.1f} MiB, budget is {allowed / 2**20:.1f} MiB"
        )


class HypothesisError(GerstenLabError):
    """A theorem's hypothesis failed at the bound, so the map is not produced.

    Attributes:
        report: the HypothesisReport holding the failing verdicts and witnesses.
    """

    def __init__(self, message: str, report: Optional[Any] = None):
        self.report = report
        super().__init__(message)


class LiftError(GerstenLabError, RuntimeError):
    """A comparison lift between resolutions could not be solved."""


class ChainMapError(GerstenLabError, RuntimeError):
    """A cochain-level transfer does not commute with the differentials."""
