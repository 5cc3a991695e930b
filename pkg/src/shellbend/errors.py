"""Exception hierarchy shared by every layer of the package."""


class ShellbendError(Exception):
    """Base class for all package errors."""


class GeometryError(ShellbendError):
    """A pointwise computation failed; ``xi`` names the point when known."""

    def __init__(self, message, xi=None):
        super().__init__(message)
        self.xi = xi

    def __str__(self):
        base = super().__str__()
        if self.xi is not None:
            return f"{base} at xi=({self.xi[0]!r}, {self.xi[1]!r})"
        return base


class DivisionByZero(GeometryError, ZeroDivisionError):
    pass


class DomainError(GeometryError, ValueError):
    """Argument outside the real domain of a function.

    ``span`` is the (start, end) source offset of the offending
    sub-expression, attached by the expression evaluator.
    """

    def __init__(self, message, xi=None, span=None):
        super().__init__(message, xi)
        self.span = span

    def __str__(self):
        base = super().__str__()
        if self.span is not None:
            return f"{base} (source span {self.span[0]}-{self.span[1]})"
        return base


class OutsideParamDomain(GeometryError):
    pass


class DegenerateImmersion(GeometryError):
    pass


class SingularDeformation(GeometryError):
    pass


class MismatchedPoint(ShellbendError, ValueError):
    pass


class ParseError(ShellbendError):
    def __init__(self, message, position, expected=()):
        self.position = position
        self.expected = frozenset(expected)
        detail = f"{message} at offset {position}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class UnknownIdentifier(ShellbendError):
    def __init__(self, name, span):
        self.name = name
        self.span = span
        super().__init__(f"unknown identifier {name!r} at {span[0]}-{span[1]}")


class NonpositiveScale(ShellbendError, ValueError):
    pass


class InvalidRotation(ShellbendError, ValueError):
    pass


class FamilyExhausted(ShellbendError):
    pass


class ConfigError(ShellbendError):
    def __init__(self, field, reason):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")
