"""Exact symbolic expression kernel.

Parsing, canonical normal form, differentiation, substitution, numeric
evaluation and a decidable zero test for rational-coefficient expressions
in symbols, jets, function symbols, rational powers and exponentials.
"""

from fractions import Fraction

from .atoms import (
    CONSTANT,
    DEPENDENT,
    INDEPENDENT,
    PARAMETER,
    Atom,
    ExpAtom,
    Func,
    Jet,
    LnAtom,
    Surd,
    Symbol,
)
from .errors import (
    DomainError,
    NonNormalizable,
    ParseError,
    SubstitutionError,
    SymexprError,
    UnboundSymbol,
    UnknownIdentifier,
)
from .expr import Expr
from .normal import ONE, ZERO, NormalForm, eval_nf, eval_tree, lookup_from_point, nf_exp, nf_ln, normalize, to_nf
from .parser import parse
from .printing import format_atom, format_expr
from .workspace import Workspace

__all__ = [
    "Atom", "CONSTANT", "DEPENDENT", "DomainError", "ExpAtom", "Expr", "Func", "INDEPENDENT",
    "Jet", "LnAtom", "NonNormalizable", "NormalForm", "ONE", "PARAMETER", "ParseError",
    "SubstitutionError", "Surd", "Symbol", "SymexprError", "UnboundSymbol", "UnknownIdentifier",
    "Workspace", "ZERO", "diff", "eval_numeric", "exp", "format", "format_atom", "is_zero", "ln",
    "nf", "normalize", "parse", "sqrt", "substitute", "to_nf",
]


def nf(value):
    """Coerce ints, Fractions, atoms, trees or strings to a :class:`NormalForm`."""
    return to_nf(value)


def exp(arg):
    return nf_exp(to_nf(arg))


def ln(arg):
    return nf_ln(to_nf(arg))


def sqrt(arg):
    return to_nf(arg) ** Fraction(1, 2)


def is_zero(e):
    return to_nf(e).is_zero()


def diff(e, var, times=1):
    """Partial derivative with respect to a symbol, jet or function-symbol atom."""
    out = to_nf(e)
    for _ in range(times):
        out = out.diff(var)
    return out


def substitute(e, bindings):
    """Simultaneous substitution.

    Keys are symbols or function symbols (a :class:`Func` with zero index, or
    its name).  Jets of a bound dependent variable become total derivatives of
    the replacement; derivatives of a bound function symbol become partial
    derivatives of the replacement.
    """
    out = to_nf(e)
    sym_map = {}
    fn_map = {}
    for key, value in bindings.items():
        value = to_nf(value)
        if isinstance(key, Jet) or (isinstance(key, Func) and any(key.index)):
            raise SubstitutionError(f"cannot bind the derivative {format_atom(key)} without its base")
        if isinstance(key, str):
            fn_map[key] = value
        elif isinstance(key, Func):
            fn_map[key.name] = value
        elif isinstance(key, Symbol):
            sym_map[key] = value
        else:
            raise SubstitutionError(f"unsupported binding key {key!r}")

    def image(a):
        if isinstance(a, Symbol):
            return sym_map.get(a)
        if isinstance(a, Jet):
            if a.dep not in sym_map:
                return None
            r = sym_map[a.dep]
            for v, c in a.index:
                for _ in range(c):
                    r = r.total_diff(v)
            return r
        if isinstance(a, Func):
            if a.name in fn_map:
                r = fn_map[a.name]
                for v, c in zip(a.args, a.index):
                    for _ in range(c):
                        r = r.diff(v)
                return r
            if any(s in sym_map for s in a.args):
                raise NonNormalizable(f"cannot substitute into the arguments of {format_atom(a)}")
        return None

    return out.map_atoms(image)


def eval_numeric(e, point):
    """Float value at ``point`` (``{Symbol or printed name: float}``); diagnostics only."""
    lookup = lookup_from_point(point)
    if isinstance(e, NormalForm):
        return eval_nf(e, lookup)
    if isinstance(e, Expr):
        return eval_tree(e, lookup)
    return eval_nf(to_nf(e), lookup)


def format(e, style="plain"):  # noqa: A001 - mirrors the public operation name
    """Canonical text; trees outside the normalizable class print structurally."""
    if not isinstance(e, NormalForm):
        try:
            e = to_nf(e)
        except NonNormalizable:
            pass
    return format_expr(e, style)
