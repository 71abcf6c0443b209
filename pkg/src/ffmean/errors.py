"""Exception types raised by ffmean."""


class FFMeanError(Exception):
    """Base class for every error raised by this package."""


class NotPrime(FFMeanError, ValueError):
    pass


class Unsupported(FFMeanError, NotImplementedError):
    pass


class OddCharacteristicRequired(FFMeanError, ValueError):
    pass


class EvenCharacteristic(OddCharacteristicRequired):
    pass


class FieldMismatch(FFMeanError, ValueError):
    pass


class DivisionByZero(FFMeanError, ZeroDivisionError):
    pass


class BothZero(FFMeanError, ValueError):
    pass


class ZeroPolynomial(FFMeanError, ValueError):
    pass


class ConstantInput(FFMeanError, ValueError):
    pass


class NonPositiveDegree(FFMeanError, ValueError):
    pass


class BadFieldForEnsemble(FFMeanError, ValueError):
    pass


class NotIrreducible(FFMeanError, ValueError):
    pass


class ZeroDenominator(FFMeanError, ValueError):
    pass


class DegreeTooLarge(FFMeanError, ValueError):
    pass


class DegreeTooSmall(FFMeanError, ValueError):
    pass


class NotSquareFree(FFMeanError, ValueError):
    pass


class EvenDegree(FFMeanError, ValueError):
    pass


class UnsupportedGenus(Unsupported):
    pass


class NonIntegralClassNumber(FFMeanError, ArithmeticError):
    """h_D came out non-integral; some upstream arithmetic is wrong."""


class NonPositive(FFMeanError, ArithmeticError):
    """h_D came out <= 0; some upstream arithmetic is wrong."""


class PoleAtOne(FFMeanError, ValueError):
    pass


class ZeroModulus(FFMeanError, ValueError):
    pass


class BudgetExceeded(FFMeanError, RuntimeError):
    pass


class BadConfig(FFMeanError, ValueError):
    pass


class ParseError(FFMeanError, ValueError):
    pass
