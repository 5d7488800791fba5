"""Exception types shared across the package."""


class ContabError(Exception):
    """Base class for all errors raised by contab."""


class InputError(ContabError):
    """A problem file or directly supplied input could not be used."""


class TptpSyntaxError(InputError):
    """Syntax error in a TPTP source, with position information."""

    def __init__(self, message: str, line: int, column: int, path: str = ""):
        self.message = message
        self.line = line
        self.column = column
        self.path = path
        super().__init__(str(self))

    def __str__(self) -> str:
        where = self.path if self.path else "<input>"
        return "%s:%d:%d: %s" % (where, self.line, self.column, self.message)


class UnsupportedInputError(InputError):
    """Input is well-formed but uses a construct outside the supported subset."""


class ProverInternalError(ContabError):
    """An internal consistency check failed; indicates a bug, not bad input."""
