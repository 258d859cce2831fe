"""Exception types shared across the package."""


class MomentForgeError(Exception):
    """Base class for all package-specific errors."""


class SizeGuardError(MomentForgeError):
    """An exhaustive enumeration was requested beyond its size guard."""


class SingularSeriesError(MomentForgeError):
    """Series division or inversion with a non-invertible constant term."""


class FitVerificationError(MomentForgeError):
    """A fitted polynomial failed to reproduce a held-out verification point."""

    def __init__(self, residue: int, point: int, expected, actual):
        self.residue = residue
        self.point = point
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"verification mismatch in residue class {residue} at n={point}: "
            f"data {expected} != fit {actual}"
        )


class UnderdeterminedFitError(MomentForgeError):
    """Not enough sample points to pin down the requested degree."""
