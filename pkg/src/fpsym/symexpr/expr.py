"""Expression trees as produced by the parser.

Trees are a front-end representation only; every computation goes through
:func:`fpsym.symexpr.normalize`, whose result (:class:`NormalForm`) is itself
an :class:`Expr` and the type the rest of the package works with.
"""

from dataclasses import dataclass
from fractions import Fraction


class Expr:
    __slots__ = ()

    def __add__(self, other):
        return Add((self, as_expr(other)))

    def __radd__(self, other):
        return Add((as_expr(other), self))

    def __sub__(self, other):
        return Add((self, Mul((Num(Fraction(-1)), as_expr(other)))))

    def __rsub__(self, other):
        return Add((as_expr(other), Mul((Num(Fraction(-1)), self))))

    def __mul__(self, other):
        return Mul((self, as_expr(other)))

    def __rmul__(self, other):
        return Mul((as_expr(other), self))

    def __truediv__(self, other):
        return Mul((self, Pow(as_expr(other), Fraction(-1))))

    def __rtruediv__(self, other):
        return Mul((as_expr(other), Pow(self, Fraction(-1))))

    def __neg__(self):
        return Mul((Num(Fraction(-1)), self))

    def __pow__(self, exponent):
        return Pow(self, Fraction(exponent))

    def __str__(self):
        from .printing import format_expr

        return format_expr(self)


@dataclass(frozen=True, slots=True)
class Num(Expr):
    value: Fraction


@dataclass(frozen=True, slots=True)
class AtomNode(Expr):
    atom: object


@dataclass(frozen=True, slots=True)
class Add(Expr):
    items: tuple


@dataclass(frozen=True, slots=True)
class Mul(Expr):
    items: tuple


@dataclass(frozen=True, slots=True)
class Pow(Expr):
    base: Expr
    exponent: Fraction


@dataclass(frozen=True, slots=True)
class Exp(Expr):
    arg: Expr


@dataclass(frozen=True, slots=True)
class Ln(Expr):
    arg: Expr


def as_expr(value):
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)):
        return Num(Fraction(value))
    from .atoms import Atom

    if isinstance(value, Atom):
        return AtomNode(value)
    if isinstance(value, float):
        raise TypeError("floating-point values are not allowed inside expressions")
    raise TypeError(f"cannot convert {type(value).__name__} to an expression")
