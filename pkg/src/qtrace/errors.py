class QTraceError(Exception):
    """Base class for errors raised by qtrace."""


class InvalidInput(QTraceError, ValueError):
    """Malformed arguments: wrong sizes, out-of-range indices, bad labels."""


class CapExceeded(QTraceError):
    """A computation would exceed a configured size cap."""


class SingularGram(QTraceError, ArithmeticError):
    """The Gram matrix is singular for this (family, n, N)."""

    def __init__(self, family: str, n: int, N: int):
        super().__init__(f"Gram matrix is singular for family={family}, n={n}, N={N}")
        self.family = family
        self.n = n
        self.N = N


class MissingValue(QTraceError, KeyError):
    """A custom central functional was evaluated on a label it does not define."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "missing value"


class VerificationFailure(QTraceError):
    """A claim that should hold exactly was found to fail."""
