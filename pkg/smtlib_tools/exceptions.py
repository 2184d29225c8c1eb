"""Errors raised while reading SMT-LIB scripts."""

from core.exceptions import CdsatError


class ParseError(CdsatError):
    """A script error with the position it was found at."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class ScriptSyntaxError(ParseError):
    pass


class SortError(ParseError):
    pass


class UndeclaredSymbol(ParseError):
    pass


class UnsupportedCommand(ParseError):
    """A command outside the supported subset."""
