class GapTileError(Exception):
    """Base class for every error raised by the gaptile package."""


# --- circle_space ---

class NyquistViolation(GapTileError, ValueError):
    pass


class SymmetryViolation(GapTileError, ValueError):
    pass


# --- kargaev ---

class AmplitudeTooLarge(GapTileError, ValueError):
    pass


class ParamsInvalid(GapTileError, ValueError):
    pass


class NoConvergence(GapTileError, RuntimeError):
    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class BallEscape(GapTileError, RuntimeError):
    """An iterate left the ball ||f - g|| <= eps. Impossible analytically, so a discretization bug."""


class AllZeroAlpha(GapTileError, ValueError):
    pass


class AlphaOutOfBounds(GapTileError, ValueError):
    pass


# --- tiling_line ---

class PerturbationTooLarge(GapTileError, ValueError):
    pass


class BandwidthExceedsGap(GapTileError, ValueError):
    pass


# --- ztile ---

class SearchSpaceTooLarge(GapTileError, RuntimeError):
    pass


class InstanceParseError(GapTileError, ValueError):
    pass


# --- cli_io ---

class ArtifactError(GapTileError, OSError):
    """Missing or unparsable run artifact (alpha.csv, report.json)."""
