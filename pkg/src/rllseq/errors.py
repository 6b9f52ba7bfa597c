"""Exception types raised across the package."""


class RLLError(Exception):
    """Base class for all errors raised by rllseq."""


class RunSetError(RLLError, ValueError):
    pass


class EmptySet(RunSetError):
    pass


class SingletonSet(RunSetError):
    pass


class NonCoprime(RunSetError):
    pass


class NonPositiveElement(RunSetError):
    pass


class DomainError(RLLError, ValueError):
    """Argument outside the domain where a power series converges."""


class OutOfRange(RLLError, ValueError):
    """Parameter outside the admissible region of a capacity function."""


class CapacityOutOfRange(OutOfRange):
    pass


class ConvergenceFailure(RLLError, ArithmeticError):
    pass


class TooLarge(RLLError, ValueError):
    pass


class NotBlockAligned(RLLError, ValueError):
    pass


class BadParameters(RLLError, ValueError):
    pass


class EmptySeries(RLLError, ValueError):
    pass


class SamplerStuck(RLLError, RuntimeError):
    pass
