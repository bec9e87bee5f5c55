class BeattyError(Exception):
    pass


class ParseError(BeattyError, ValueError):
    pass


class DomainError(BeattyError, ValueError):
    pass


class PrecisionExhausted(BeattyError, ArithmeticError):
    """A comparison fell inside the certified error bound of a FixedReal."""


class CapacityError(BeattyError, MemoryError):
    pass
