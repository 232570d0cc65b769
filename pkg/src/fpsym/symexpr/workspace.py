from dataclasses import dataclass, field

from .atoms import CONSTANT, INDEPENDENT, PARAMETER, Func, Symbol


@dataclass
class Workspace:
    """Symbol table used to resolve identifiers while parsing.

    Names are unique; re-declaring a name with a different kind is an error.
    ``functions`` maps a function-symbol name to its default argument tuple.
    """

    symbols: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)
    aliases: dict = field(default_factory=dict)
    strict: bool = False

    def __post_init__(self):
        self.symbols.setdefault("pi", Symbol("pi", CONSTANT, positive=True))
        self.aliases.setdefault("π", "pi")

    def declare(self, *symbols):
        for s in symbols:
            old = self.symbols.get(s.name)
            if old is not None and old != s:
                raise ValueError(f"symbol {s.name!r} already declared as {old.kind}")
            if s.name in self.functions:
                raise ValueError(f"{s.name!r} already declared as a function symbol")
            self.symbols[s.name] = s
        return self

    def declare_function(self, name, args):
        if name in self.symbols:
            raise ValueError(f"{name!r} already declared as a symbol")
        self.functions[name] = tuple(args)
        return self

    def copy(self, strict=None):
        return Workspace(
            dict(self.symbols),
            dict(self.functions),
            dict(self.aliases),
            self.strict if strict is None else strict,
        )

    def resolve(self, name):
        name = self.aliases.get(name, name)
        if name in self.symbols:
            return self.symbols[name]
        if name in self.functions:
            return Func(name, self.functions[name])
        return None

    def parameter(self, name):
        """Symbol for an undeclared name (non-strict parsing); the table is not modified."""
        return Symbol(name, PARAMETER)

    @property
    def independents(self):
        return [s for s in self.symbols.values() if s.kind == INDEPENDENT]
