"""Exception types shared across the package."""


class AsymvalsError(Exception):
    """Base class for all package errors."""


class ParseError(AsymvalsError):
    """Raised on malformed polynomial text; carries the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class FractionalPowerOfSum(AsymvalsError):
    """Raised when a sum would have to be raised to a fractional or negative power."""


class NonRealPower(AsymvalsError):
    """Raised when an exact or real power of a base cannot be taken."""


class UnboundVariable(AsymvalsError):
    """Raised when evaluation meets a variable without a binding."""


class NotUnivariate(AsymvalsError):
    """Raised when a univariate operation receives a multivariate input."""


class NotBivariate(AsymvalsError):
    """Raised when a bivariate operation receives an unsuitable input."""


class VariableClash(AsymvalsError):
    """Raised when a substitution would collide with a reserved symbol."""


class AllTrivial(AsymvalsError):
    """Raised when every assertion constant vanishes and no level is active."""


class NoBalance(AsymvalsError):
    """Raised when no Newton-polygon edge yields a usable limit polynomial."""


class NotLinearInC(AsymvalsError):
    """Raised when a limit polynomial is not linear in the limit symbol."""


class Unclassifiable(AsymvalsError):
    """Raised when a simplified residual fits no known classification pattern."""


class UnknownFixture(AsymvalsError):
    """Raised for unknown fixture keys; message lists the available ones."""


class ExponentDenominatorMismatch(AsymvalsError):
    """Raised when expansion exponents cannot share the identity's denominator."""
