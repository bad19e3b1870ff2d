"""Exception types raised by the pricing library."""


class PricingError(Exception):
    """Base class for every error raised by divbarrier."""


class ValidationError(PricingError, ValueError):
    """Input failed a domain check before any computation."""


class SingularityError(PricingError, ArithmeticError):
    """An adjustment formula hit a singular or meaningless region."""


class UnsupportedError(PricingError, ValueError):
    """The requested method/contract combination has no formula."""


class KnockedOutError(PricingError):
    """Spot is already at or above the up-and-out barrier."""


class NeedsAssumptionError(PricingError, ValueError):
    """A computation requires inputs the source tables do not provide."""

    def __init__(self, message, missing=()):
        super().__init__(message)
        self.missing = tuple(missing)
