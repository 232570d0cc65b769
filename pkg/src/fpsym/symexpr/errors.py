class SymexprError(Exception):
    pass


class NonNormalizable(SymexprError):
    """Raised when an expression leaves the class with a decidable zero test."""


class ParseError(SymexprError):
    def __init__(self, message, column=None):
        self.column = column
        if column is not None:
            message = f"syntax error at column {column}: {message}"
        super().__init__(message)


class UnknownIdentifier(ParseError):
    pass


class SubstitutionError(SymexprError):
    pass


class DomainError(SymexprError, ValueError):
    pass


class UnboundSymbol(SymexprError, KeyError):
    def __str__(self):
        return f"unbound symbol {self.args[0]!r}"
