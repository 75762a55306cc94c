"""Exception types shared across the package."""


class InvalidTruncation(ValueError):
    """Truncation order below the minimum of 2."""


class WindowTooSmall(ValueError):
    """Lattice too small to host the requested constraint window."""


class NegativeRate(RuntimeError):
    """A jump rate came out negative outside diagnostic mode."""


class InvalidProfile(ValueError):
    """Density profile leaves [0, 1] or violates a regime floor."""


class CflViolation(ValueError):
    """Requested time step exceeds the stability limit."""


class FloorBreach(RuntimeError):
    """Fast-diffusion run dropped below the density floor."""


class MissingInput(FileNotFoundError):
    """Expected input file or directory is absent."""
