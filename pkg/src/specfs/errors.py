"""Exception hierarchy shared by every module."""


class SpecfsError(Exception):
    pass


class ArgumentError(SpecfsError, ValueError):
    """Invalid argument or precondition violation."""


class RangeError(ArgumentError):
    """A requested grid or index lies outside the available range."""


class DegenerateInputError(ArgumentError):
    """Input has no usable signal (e.g. an all-zero spectrum)."""


class ConfigError(SpecfsError, ValueError):
    """A configuration object violates its invariants."""


class DataFormatError(SpecfsError):
    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}" if where else message)
        self.path = path
        self.line = line


class TrainingDivergenceError(SpecfsError, RuntimeError):
    def __init__(self, epoch, message="non-finite loss"):
        super().__init__(f"training diverged at epoch {epoch}: {message}")
        self.epoch = epoch


class StageError(SpecfsError):
    """A pipeline stage failed; ``stage`` names it."""

    def __init__(self, stage, cause):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
