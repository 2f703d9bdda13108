"""Exception types shared across the package."""


class SdcapError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(SdcapError, ValueError):
    """A physical parameter is missing, non-finite, or out of range."""


class InvalidDeviationError(SdcapError, ValueError):
    """A deviation ratio violates the selected regime."""


class InvalidInputError(SdcapError, ValueError):
    """Structural input problem (empty sets, mismatched horizons, ...)."""


class FormulaError(SdcapError, ValueError):
    """A temporal-logic formula failed to parse or is malformed."""


class EvaluationError(SdcapError, ValueError):
    """A formula references an unknown atom or cannot be evaluated."""


class OracleError(SdcapError, RuntimeError):
    """The numerical oracle could not bracket a solution; indicates a
    mismatch between the closed form and the simulated trajectories."""


class ConfigError(SdcapError, ValueError):
    """A scenario configuration file failed validation; carries a line hint."""
