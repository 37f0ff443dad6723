"""Exception hierarchy shared across the toolkit."""


class MuralInpaintError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(MuralInpaintError, ValueError):
    """An argument violates an operation's precondition."""


class ShapeError(MuralInpaintError, ValueError):
    """Array shapes are incompatible with an operation."""


class ResourceError(MuralInpaintError):
    """A required file, directory, or library entry is missing or empty."""


class ConfigError(MuralInpaintError, ValueError):
    """A configuration value is invalid or inconsistent."""


class ExtractionError(MuralInpaintError):
    """A pluggable edge extractor failed; wraps the underlying cause."""


class TrainingError(MuralInpaintError):
    """Training diverged or produced a non-finite loss term."""


class CheckpointError(MuralInpaintError):
    """A checkpoint is corrupt or does not match the current configuration."""
