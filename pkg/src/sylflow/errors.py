"""Exception types shared across the package."""


class SylflowError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(SylflowError, ValueError):
    """Shapes, lengths, or index ranges do not line up."""


class ContractViolationError(SylflowError, ValueError):
    """An input violates a documented precondition (e.g. asymmetry)."""


class ConnectivityError(SylflowError, ValueError):
    """A communication graph is not connected."""


class PartitionError(SylflowError, ValueError):
    """A data partition request is malformed (empty group, uncovered column, ...)."""


class DegenerateProblemError(SylflowError, ValueError):
    """A rate or limit is requested for an all-zero operator where it is undefined."""


class UnsolvableError(SylflowError, ValueError):
    """The equation has no solution and the requested quantity needs one."""


class FlowDivergenceError(SylflowError, RuntimeError):
    """The integrated state left the stability region (norm guard exceeded)."""


class ConfigError(SylflowError, ValueError):
    """A run configuration is malformed or inconsistent."""
