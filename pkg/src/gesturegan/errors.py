"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration value or combination."""


class DataFormatError(ValueError):
    """Malformed input file or on-disk dataset."""


class PhaseOrderError(RuntimeError):
    """A model operation was requested out of training-phase order."""


class CheckpointError(RuntimeError):
    """Checkpoint version or config validation failed on load."""


class MetricUndefinedError(RuntimeError):
    """A metric could not be computed on the given inputs (degenerate data)."""


class StageError(RuntimeError):
    """A workflow stage failed; the message is prefixed with the stage name."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
