"""Deterministic text rendering.  ``plain`` output reparses with :func:`parse`."""

from fractions import Fraction

from .atoms import ExpAtom, Func, Jet, LnAtom, Surd, Symbol
from .expr import Add, AtomNode, Exp, Ln, Mul, Num, Pow

_UNICODE_NAMES = {
    "tau": "τ",
    "alpha": "α",
    "alphat": "α̃",
    "vhat": "v̂",
    "vcheck": "v̌",
    "what": "ŵ",
    "pi": "π",
    "eps": "ε",
}
_SUPERSCRIPT = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


def _name(name, style):
    if style == "unicode":
        return _UNICODE_NAMES.get(name, name)
    return name


def format_atom(a, style="plain"):
    if isinstance(a, Symbol):
        return _name(a.name, style)
    if isinstance(a, Jet):
        suffix = "".join(_name(v.name, style) * c for v, c in a.index)
        return f"{_name(a.dep.name, style)}_{suffix}"
    if isinstance(a, Func):
        if not any(a.index):
            return _name(a.name, style)
        suffix = "".join(_name(v.name, style) * c for v, c in zip(a.args, a.index))
        return f"{_name(a.name, style)}_{suffix}"
    if isinstance(a, ExpAtom):
        if style == "unicode":
            return f"e^({format_nf(a.arg, style)})"
        return f"exp({format_nf(a.arg, style)})"
    if isinstance(a, LnAtom):
        inner = str(a.arg) if isinstance(a.arg, int) else format_atom(a.arg, style)
        return f"ln({inner})"
    if isinstance(a, Surd):
        return str(a.prime)
    raise TypeError(f"unknown atom {a!r}")


def _exponent(e, style):
    e = Fraction(e)
    if style == "unicode" and e.denominator == 1:
        return str(e.numerator).translate(_SUPERSCRIPT)
    if e.denominator == 1 and e > 0:
        return f"^{e.numerator}"
    return f"^({e})"


def _factor(a, e, style):
    base = format_atom(a, style)
    if e == 1:
        return base
    return base + _exponent(e, style)


def _term(mono, coeff, style):
    """Render ``|coeff| * mono``; the caller handles the sign."""
    mul = "·" if style == "unicode" else "*"
    factors = [_factor(a, e, style) for a, e in mono]
    c = abs(coeff)
    if not factors:
        return str(c)
    if c == 1:
        return mul.join(factors)
    cs = str(c) if c.denominator == 1 else f"({c})"
    return mul.join([cs] + factors)


def format_nf(nf, style="plain"):
    if not nf.terms:
        return "0"
    out = []
    for i, (mono, c) in enumerate(nf.terms):
        body = _term(mono, c, style)
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


# -- trees --------------------------------------------------------------------

_PREC = {Add: 1, Mul: 2, Pow: 4}


def _tree(e, style, parent):
    from .normal import NormalForm

    if isinstance(e, NormalForm):
        s = format_nf(e, style)
        return f"({s})" if parent > 1 and (len(e.terms) > 1 or s.startswith("-")) else s
    if isinstance(e, Num):
        s = str(e.value)
        return f"({s})" if (e.value < 0 or e.value.denominator != 1) and parent > 1 else s
    if isinstance(e, AtomNode):
        if isinstance(e.atom, Surd):
            return f"{e.atom.prime}"
        return format_atom(e.atom, style)
    if isinstance(e, Add):
        parts = [_tree(i, style, 1) for i in e.items]
        s = " + ".join(parts) if parts else "0"
        return f"({s})" if parent > 1 else s
    if isinstance(e, Mul):
        parts = [_tree(i, style, 2) for i in e.items]
        s = ("·" if style == "unicode" else "*").join(parts) if parts else "1"
        return f"({s})" if parent > 2 else s
    if isinstance(e, Pow):
        return f"{_tree(e.base, style, 4)}^({e.exponent})"
    if isinstance(e, Exp):
        return f"exp({_tree(e.arg, style, 0)})"
    if isinstance(e, Ln):
        return f"ln({_tree(e.arg, style, 0)})"
    raise TypeError(f"cannot format {type(e).__name__}")


def format_expr(e, style="plain"):
    """Text for a tree or a normal form (``style`` is ``plain`` or ``unicode``)."""
    if style not in ("plain", "unicode"):
        raise ValueError(f"unknown style {style!r}")
    return _tree(e, style, 0)
