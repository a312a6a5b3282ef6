"""Exception types raised across the package."""


class UsageError(ValueError):
    """Bad arguments: width mismatch, index out of range, size over a cap."""


class SingularMatrix(ArithmeticError):
    pass


class EnumerationTooLarge(RuntimeError):
    """An exhaustive enumeration would exceed the configured budget."""


class InconsistentOracle(RuntimeError):
    """No key is consistent with the supplied plaintext/ciphertext pairs."""


class SpecFormatError(ValueError):
    """A cipher-spec document could not be parsed.

    ``location`` is a human-readable pointer: ``line 3, column 7`` for JSON
    syntax errors, or a field path such as ``sboxes[2]``.
    """

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
