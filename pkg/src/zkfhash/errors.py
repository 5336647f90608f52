"""Exception types shared across the package."""


class ZkfHashError(Exception):
    """Base class for every error raised by zkfhash."""


class ZeroInverse(ZkfHashError, ZeroDivisionError):
    pass


class NonCanonicalEncoding(ZkfHashError, ValueError):
    pass


class DivisorTooSmall(ZkfHashError, ValueError):
    pass


class ScaleTooSmall(ZkfHashError, ValueError):
    pass


class DividendTooLarge(ZkfHashError, ValueError):
    pass


class ParseError(ZkfHashError, ValueError):
    pass


class ValidationError(ZkfHashError, ValueError):
    """Parameter set violates an invariant; ``invariant`` names the first one."""

    def __init__(self, invariant, violations=None):
        self.invariant = invariant
        self.violations = list(violations or [invariant])
        super().__init__(f"parameter validation failed: {', '.join(self.violations)}")


class KindMismatch(ZkfHashError, ValueError):
    pass


class StateSizeUnsupported(ZkfHashError, ValueError):
    pass


class ConfigMismatch(ZkfHashError, ValueError):
    pass


class PhaseError(ZkfHashError, RuntimeError):
    pass


class EmptyLeaves(ZkfHashError, ValueError):
    pass


class IndexOutOfRange(ZkfHashError, IndexError):
    pass


class MismatchedTargets(ZkfHashError, ValueError):
    pass
