"""Recursive-descent parser for the expression grammar.

::

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := ('-'|'+') unary | power
    power  := base (('^'|'**') unary)?        exponent must be a rational constant
    base   := integer | ident | ident '(' args ')' | '(' expr ')'
              | 'exp' '(' expr ')' | 'ln' '(' expr ')' | 'sqrt' '(' expr ')'

Derivatives are suffixed identifiers: ``u_tx`` is the jet of ``u`` with one
``t`` and one ``x`` derivative, ``alpha_x`` the x-derivative of the function
symbol ``alpha``.  Columns in error messages are 1-based.
"""

from fractions import Fraction

from .atoms import DEPENDENT, INDEPENDENT, Func, Jet, Symbol
from .errors import NonNormalizable, ParseError, UnknownIdentifier
from .expr import AtomNode, Exp, Ln, Mul, Num, Pow, Add

_OPS = "+-*/^(),"
_CALLS = {"exp", "ln", "sqrt"}


def tokenize(text):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        col = i + 1
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and (text[j] == "." or text[j].isalpha() or text[j] == "_"):
                raise ParseError(f"malformed number {text[i:j + 1]!r}", col)
            tokens.append(("num", int(text[i:j]), col))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_" or _is_mark(text[j])):
                j += 1
            tokens.append(("ident", text[i:j], col))
            i = j
            continue
        if text.startswith("**", i):
            tokens.append(("op", "^", col))
            i += 2
            continue
        if ch in _OPS:
            tokens.append(("op", ch, col))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", col)
    tokens.append(("end", None, n + 1))
    return tokens


def _is_mark(ch):
    import unicodedata

    return unicodedata.category(ch).startswith("M")


class _Parser:
    def __init__(self, text, workspace):
        self.tokens = tokenize(text)
        self.pos = 0
        self.ws = workspace

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value):
        tok = self.advance()
        if tok[0] != "op" or tok[1] != value:
            raise ParseError(f"expected {value!r}, found {_show(tok)}", tok[2])
        return tok

    def at(self, value):
        tok = self.peek()
        return tok[0] == "op" and tok[1] == value

    def parse(self):
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {_show(tok)}", tok[2])
        return e

    def expr(self):
        items = [self.term()]
        while self.at("+") or self.at("-"):
            op = self.advance()[1]
            t = self.term()
            items.append(t if op == "+" else Mul((Num(Fraction(-1)), t)))
        return items[0] if len(items) == 1 else Add(tuple(items))

    def term(self):
        items = [self.unary()]
        while self.at("*") or self.at("/"):
            op = self.advance()[1]
            f = self.unary()
            items.append(f if op == "*" else Pow(f, Fraction(-1)))
        return items[0] if len(items) == 1 else Mul(tuple(items))

    def unary(self):
        if self.at("-"):
            self.advance()
            return Mul((Num(Fraction(-1)), self.unary()))
        if self.at("+"):
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        base = self.base()
        if self.at("^"):
            self.advance()
            col = self.peek()[2]
            exponent = self.unary()
            return Pow(base, _rational_exponent(exponent, col))
        return base

    def base(self):
        tok = self.advance()
        kind, value, col = tok
        if kind == "num":
            return Num(Fraction(value))
        if kind == "op" and value == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "ident":
            if self.at("("):
                return self.call(value, col)
            return AtomNode(self.identifier(value, col))
        raise ParseError(f"unexpected {_show(tok)}", col)

    def call(self, name, col):
        self.expect("(")
        if name in _CALLS:
            arg = self.expr()
            self.expect(")")
            if name == "exp":
                return Exp(arg)
            if name == "ln":
                return Ln(arg)
            return Pow(arg, Fraction(1, 2))
        args = []
        if not self.at(")"):
            while True:
                tok = self.advance()
                if tok[0] != "ident":
                    raise ParseError(f"function arguments must be variables, found {_show(tok)}", tok[2])
                sym = self.ws.resolve(tok[1])
                if not isinstance(sym, Symbol):
                    sym = self._unknown(tok[1], tok[2])
                args.append(sym)
                if self.at(","):
                    self.advance()
                    continue
                break
        self.expect(")")
        base, _, suffix = name.partition("_")
        f = Func(base, tuple(args))
        if suffix:
            f = _apply_suffix(f, suffix, list(f.args), col, name)
        return AtomNode(f)

    def identifier(self, name, col):
        found = self.ws.resolve(name)
        if found is not None:
            return found
        if "_" in name[1:]:
            head, _, suffix = name.partition("_")
            base = self.ws.resolve(head)
            if isinstance(base, Symbol) and base.kind == DEPENDENT:
                return _apply_suffix(base, suffix, self.ws.independents, col, name, self.ws)
            if isinstance(base, Func):
                return _apply_suffix(base, suffix, list(base.args), col, name, self.ws)
        return self._unknown(name, col)

    def _unknown(self, name, col):
        if self.ws.strict:
            raise UnknownIdentifier(f"unknown identifier {name!r}", col)
        return self.ws.parameter(name)


def _split_suffix(suffix, variables, aliases):
    names = {}
    for v in variables:
        names[v.name] = v
    for alias, target in (aliases or {}).items():
        if target in names:
            names[alias] = names[target]
    out = []
    i = 0
    ordered = sorted(names, key=len, reverse=True)
    while i < len(suffix):
        for nm in ordered:
            if suffix.startswith(nm, i):
                out.append(names[nm])
                i += len(nm)
                break
        else:
            return None
    return out


def _apply_suffix(base, suffix, variables, col, name, ws=None):
    parts = _split_suffix(suffix, variables, ws.aliases if ws is not None else None)
    if not parts:
        raise UnknownIdentifier(f"cannot read derivative suffix of {name!r}", col)
    if isinstance(base, Func):
        for v in parts:
            base = base.bump(v)
        return base
    counts = {}
    for v in parts:
        if v.kind != INDEPENDENT:
            raise UnknownIdentifier(f"{v.name!r} in {name!r} is not an independent variable", col)
        counts[v] = counts.get(v, 0) + 1
    return Jet.make(base, counts)


def _rational_exponent(e, col):
    from .normal import normalize

    try:
        nf = normalize(e)
    except NonNormalizable as exc:
        raise ParseError(f"exponent is not a rational constant ({exc})", col) from None
    if not nf.is_constant():
        raise ParseError("exponent must be a rational constant", col)
    return nf.constant_value()


def _show(tok):
    if tok[0] == "end":
        return "end of input"
    return repr(str(tok[1]))


def parse(text, workspace=None, strict=None):
    """Parse ``text`` into an expression tree.

    Identifiers resolve through ``workspace`` (the package default when
    omitted).  Unknown names become parameters unless parsing is strict.
    """
    if workspace is None:
        from ..charts import DEFAULT_WORKSPACE

        workspace = DEFAULT_WORKSPACE
    if strict is not None and strict != workspace.strict:
        workspace = workspace.copy(strict=strict)
    return _Parser(text, workspace).parse()
