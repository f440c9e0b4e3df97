class WignerError(Exception):
    """Base class for every error raised by the recoupling library."""


# Value-domain errors: the caller handed in something outside the formula's domain.

class NonIntegerOffset(WignerError, ValueError):
    pass


class PoleError(WignerError, ValueError):
    pass


class ParseError(WignerError, ValueError):
    def __init__(self, token, reason='not an integer or half-integer'):
        super().__init__(f"Cannot parse '{token}': {reason}")
        self.token = token


class InvalidTriad(WignerError, ValueError):
    pass


class NonTerminating(WignerError, ValueError):
    pass


class DenominatorPole(WignerError, ValueError):
    pass


class ArityMismatch(WignerError, ValueError):
    pass


class InapplicableMethod(WignerError, ValueError):
    pass


# Internal-consistency errors: reaching one of these means a bug, not bad input.

class MixedRadicands(WignerError, AssertionError):
    pass


class ParityViolation(WignerError, AssertionError):
    pass


class FormulaMismatch(WignerError, AssertionError):
    pass


class VerificationMismatch(WignerError, AssertionError):
    def __init__(self, symbol, method, fast_value, oracle_value):
        super().__init__(f"{method} gave {fast_value} for {symbol}, oracle gave {oracle_value}")
        self.symbol = symbol
        self.method = method
        self.fast_value = fast_value
        self.oracle_value = oracle_value
