"""Atoms of the normal form: the indivisible factors a term is built from."""

from dataclasses import dataclass, field
from functools import cached_property

INDEPENDENT = "independent"
DEPENDENT = "dependent"
PARAMETER = "parameter"
CONSTANT = "constant"

KINDS = (INDEPENDENT, DEPENDENT, PARAMETER, CONSTANT)

# Printing order of atoms inside a term, also the first component of every sort key.
_RANK = {
    "surd": 0,
    CONSTANT: 1,
    PARAMETER: 2,
    "exp": 3,
    INDEPENDENT: 4,
    "ln": 5,
    DEPENDENT: 6,
    "jet": 7,
    "func": 8,
}


class Atom:
    __slots__ = ()

    positive = False

    def __lt__(self, other):
        return self.sort_key < other.sort_key


@dataclass(frozen=True, eq=True)
class Symbol(Atom):
    name: str
    kind: str = PARAMETER
    positive: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown symbol kind {self.kind!r}")

    @cached_property
    def sort_key(self):
        return (_RANK[self.kind], self.name, ())

    @property
    def is_positive(self):
        return self.positive or self.kind == CONSTANT

    def __repr__(self):
        return f"Symbol({self.name!r}, {self.kind!r})"


@dataclass(frozen=True)
class Surd(Atom):
    """A prime ``p`` raised to a fractional exponent in (0, 1)."""

    prime: int

    is_positive = True

    @cached_property
    def sort_key(self):
        return (_RANK["surd"], "", (self.prime,))


@dataclass(frozen=True)
class Jet(Atom):
    """Derivative coordinate of a dependent variable, e.g. ``u_tx``.

    ``index`` is a nonempty tuple of ``(Symbol, count)`` pairs sorted by
    variable name, so mixed partials reached in any order coincide.
    """

    dep: Symbol
    index: tuple

    @staticmethod
    def make(dep, counts):
        """Jet of ``dep`` for a mapping ``{Symbol: count}``; order 0 gives ``dep``."""
        pairs = tuple(sorted(((v, c) for v, c in counts.items() if c), key=lambda p: p[0].name))
        if not pairs:
            return dep
        return Jet(dep, pairs)

    @property
    def counts(self):
        return dict(self.index)

    @property
    def order(self):
        return sum(c for _, c in self.index)

    def count(self, var):
        for v, c in self.index:
            if v == var:
                return c
        return 0

    def bump(self, var, by=1):
        counts = self.counts
        counts[var] = counts.get(var, 0) + by
        return Jet.make(self.dep, counts)

    @cached_property
    def sort_key(self):
        return (_RANK["jet"], self.dep.name, tuple((v.name, c) for v, c in self.index))


@dataclass(frozen=True)
class Func(Atom):
    """Undetermined function of its argument symbols with a derivative multi-index."""

    name: str
    args: tuple
    index: tuple = field(default=None)

    def __post_init__(self):
        if self.index is None:
            object.__setattr__(self, "index", (0,) * len(self.args))
        if len(self.index) != len(self.args):
            raise ValueError("derivative index must match the argument list")

    @property
    def base(self):
        return Func(self.name, self.args)

    @property
    def order(self):
        return sum(self.index)

    def bump(self, var, by=1):
        idx = list(self.index)
        idx[self.args.index(var)] += by
        return Func(self.name, self.args, tuple(idx))

    def count(self, var):
        return self.index[self.args.index(var)] if var in self.args else 0

    @cached_property
    def sort_key(self):
        return (_RANK["func"], self.name, (tuple(a.name for a in self.args), self.index))


@dataclass(frozen=True)
class ExpAtom(Atom):
    arg: "object"  # NormalForm, never zero

    is_positive = True

    @cached_property
    def sort_key(self):
        return (_RANK["exp"], "", self.arg.sort_key)


@dataclass(frozen=True)
class LnAtom(Atom):
    """Logarithm of a prime (``arg`` an int) or of another non-exp atom."""

    arg: "object"

    @cached_property
    def sort_key(self):
        if isinstance(self.arg, int):
            return (_RANK["ln"], "", (0, (self.arg,)))
        return (_RANK["ln"], "", (1, self.arg.sort_key))


def is_positive(atom):
    return bool(getattr(atom, "is_positive", False))
