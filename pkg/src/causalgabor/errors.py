"""Exception types raised by the package."""


class CausalGaborError(Exception):
    """Base class for all package errors."""


class ConfigurationError(CausalGaborError, ValueError):
    """Invalid kernel, grid or transform parameters."""


class InputError(CausalGaborError, ValueError):
    """Invalid input data, e.g. an empty signal."""


class AnalysisError(CausalGaborError, RuntimeError):
    """A numerical analysis could not be completed (no bracket, no peak)."""


class IllConditionedInverseError(CausalGaborError, ValueError):
    """The truncation horizon of the inverse transform is too short."""


class AudioFormatError(CausalGaborError, ValueError):
    """Unsupported or malformed audio file."""


class AudioIOError(CausalGaborError, OSError):
    """Audio data could not be read (missing, truncated or empty)."""
