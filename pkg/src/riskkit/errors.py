"""Exception types shared across the package."""


class RiskKitError(Exception):
    """Base class for package errors."""


class ParameterError(RiskKitError, ValueError):
    """A distribution/copula parameter is outside its admissible domain."""


class MomentError(RiskKitError, ValueError):
    """A requested moment does not exist for the given parameter set."""


class UnsupportedFamilyError(RiskKitError, ValueError):
    """The requested operation is not available for this family."""


class StructureError(RiskKitError, ValueError):
    """A policy structure is internally inconsistent."""


class DataError(RiskKitError, ValueError):
    """Input data (triangles, configs) violate a structural requirement."""


class NotComputedError(RiskKitError, RuntimeError):
    """A result was requested before the computation that produces it."""


class ConfigError(RiskKitError, ValueError):
    """A run configuration failed schema validation."""
