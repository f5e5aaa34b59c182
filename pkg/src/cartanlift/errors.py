"""Error taxonomy shared by the whole package.

The CLI maps CertificationFailure to exit code 1 and everything else
here to exit code 2 (invalid input).
"""


class CartanLiftError(Exception):
    pass


class InvalidRank(CartanLiftError):
    pass


class UnknownLetter(CartanLiftError):
    pass


class OrderMismatch(CartanLiftError):
    pass


class DomainViolation(CartanLiftError):
    pass


class NotCentral(CartanLiftError):
    pass


class TooLarge(CartanLiftError):
    pass


class InvalidDegree(CartanLiftError):
    pass


class DegenerateDegree(CartanLiftError):
    pass


class InvarianceViolation(CartanLiftError):
    pass


class CertificationFailure(CartanLiftError):
    def __init__(self, flag, message=""):
        self.flag = flag
        super().__init__(f"certificate failed: {flag}" + (f" ({message})" if message else ""))
