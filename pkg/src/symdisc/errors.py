"""Exception hierarchy shared by all symdisc modules."""


class SymdiscError(Exception):
    """Base class for every error raised by this package."""


class InputError(SymdiscError, ValueError):
    """Malformed, out-of-range or non-finite input."""


class ReductionUndefinedError(SymdiscError):
    """The beta reduction was requested with |p| too close to 1."""


class OracleFailure(SymdiscError):
    """The root finder did not certify its roots."""


class HypothesisViolation(SymdiscError):
    """Preconditions of the kernel-product criterion do not hold.

    ``bound`` names the failing check (``"binomial"`` or ``"pairwise"``).
    """

    def __init__(self, message: str, bound: str):
        super().__init__(message)
        self.bound = bound
