"""Exception types shared across the package."""


class WindHealthError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(WindHealthError):
    """Invalid parameter values or inconsistent run configuration."""


class DataError(WindHealthError):
    """Input data unusable: missing files/columns, empty series, bad shapes."""


class NumericalError(WindHealthError):
    """Numerical failure inside an algorithm (non-finite inputs, divergence)."""


class SubBinSkipped(WindHealthError):
    """A sub-bin cannot be analyzed; carries a human-readable reason.

    Raised by the concept-extraction stage when a sub-bin has too little
    data; the pipeline catches it and records the sub-bin as skipped
    instead of aborting the run.
    """

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason
