"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument violates a documented precondition."""


class CapacityError(RuntimeError):
    """The request exceeds the desk-scale limits this package supports."""


class ConstructionError(RuntimeError):
    """A built object failed its post-construction validation."""


class ContractViolation(RuntimeError):
    """An internal consistency check failed; indicates a bug upstream."""


class NotArcTransitive(RuntimeError):
    """Arc-transitive generator extraction is unavailable for this group."""


class VerificationFailure(RuntimeError):
    """A verification check did not pass."""
