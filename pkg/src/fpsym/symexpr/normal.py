"""Canonical sum-of-terms normal form with exact rational coefficients.

A term is ``coefficient * prod(atom ** exponent)``.  Canonical rules:

* at most one :class:`ExpAtom` per term (``exp(A)*exp(B) -> exp(A+B)``),
  never ``exp(0)``, and ``exp(q*ln(a) + R) -> a**q * exp(R)``;
* surd exponents lie in (0, 1), integer parts move into the coefficient;
* zero coefficients and zero exponents are dropped.

Distinct monomials are linearly independent over the rationals for every
expression the constructors below accept, which is what makes
:meth:`NormalForm.is_zero` a decision procedure.  Constructions that would
leave that class raise :class:`NonNormalizable`.
"""

from fractions import Fraction
from functools import lru_cache
import math

from .atoms import (
    DEPENDENT,
    INDEPENDENT,
    Atom,
    ExpAtom,
    Func,
    Jet,
    LnAtom,
    Surd,
    Symbol,
    is_positive,
)
from .errors import DomainError, NonNormalizable, UnboundSymbol
from .expr import Add, AtomNode, Exp, Expr, Ln, Mul, Num, Pow

_MAX_FACTOR = 10**14


def _factorint(n):
    if n > _MAX_FACTOR:
        raise NonNormalizable(f"integer {n} too large to factor for a radical")
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _mono_key(mono):
    return tuple((a.sort_key, e) for a, e in mono)


def _degree(mono):
    return sum((e for a, e in mono if not isinstance(a, Surd)), Fraction(0))


def _term_order(item):
    mono, _ = item
    return (-_degree(mono), _mono_key(mono))


class NormalForm(Expr):
    """Immutable canonical expression; compare with ``==``, test with :meth:`is_zero`."""

    __slots__ = ("terms", "_hash", "_key")

    def __init__(self, terms=()):
        object.__setattr__(self, "terms", tuple(terms))
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_key", None)

    def __setattr__(self, name, value):
        raise AttributeError("NormalForm is immutable")

    @classmethod
    def _from_dict(cls, d):
        items = [(m, c) for m, c in d.items() if c != 0]
        items.sort(key=_term_order)
        return cls(items)

    @classmethod
    def const(cls, value):
        value = Fraction(value)
        return cls(((((), value),) if value else ()))

    @classmethod
    def atom(cls, atom):
        if isinstance(atom, ExpAtom):
            return nf_exp(atom.arg)
        if isinstance(atom, Surd):
            return cls._single(Fraction(1), ((atom, Fraction(1)),))
        return cls((((((atom, Fraction(1)),)), Fraction(1)),))

    @classmethod
    def _single(cls, coeff, factors):
        c, mono = _build(tuple(factors))
        return cls._from_dict({mono: coeff * c})

    # -- queries -----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not self.terms[0][0])

    def constant_value(self):
        if not self.terms:
            return Fraction(0)
        if self.is_constant():
            return self.terms[0][1]
        raise ValueError(f"{self} is not a rational constant")

    def is_monomial(self):
        return len(self.terms) == 1

    def coefficient_map(self):
        return dict(self.terms)

    @property
    def sort_key(self):
        if self._key is None:
            object.__setattr__(self, "_key", tuple((_mono_key(m), c) for m, c in self.terms))
        return self._key

    def atoms(self, deep=True):
        """Set of atoms; with ``deep`` also those inside exp and ln arguments."""
        out = set()
        for mono, _ in self.terms:
            for a, _ in mono:
                out.add(a)
                if deep:
                    out |= _inner_atoms(a)
        return out

    def free_symbols(self):
        out = set()
        for a in self.atoms():
            if isinstance(a, Symbol):
                out.add(a)
            elif isinstance(a, Jet):
                out.add(a.dep)
                out.update(v for v, _ in a.index)
            elif isinstance(a, Func):
                out.update(a.args)
        return out

    # -- equality ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = NormalForm.const(other)
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                h = hash(self.constant_value())
            else:
                h = hash(self.terms)
            object.__setattr__(self, "_hash", h)
        return self._hash

    def __repr__(self):
        return f"NormalForm({self!s})"

    def __str__(self):
        from .printing import format_nf

        return format_nf(self)

    def __bool__(self):
        return bool(self.terms)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        d = dict(self.terms)
        for m, c in other.terms:
            d[m] = d.get(m, 0) + c
        return NormalForm._from_dict(d)

    __radd__ = __add__

    def __neg__(self):
        return NormalForm(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not self.terms or not other.terms:
            return ZERO
        d = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                c, m = _mul_mono(m1, m2)
                d[m] = d.get(m, 0) + c1 * c2 * c
        return NormalForm._from_dict(d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other ** -1

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self ** -1

    def __pow__(self, exponent):
        r = Fraction(exponent)
        if not self.terms:
            if r > 0:
                return ZERO
            if r == 0:
                return ONE
            raise NonNormalizable("negative power of zero")
        if r == 0:
            return ONE
        if r == 1:
            return self
        if len(self.terms) == 1:
            mono, c = self.terms[0]
            coeff, factors = _rational_power(c, r)
            for a, e in mono:
                if r.denominator != 1 and not is_positive(a) and e.numerator % 2 == 0:
                    raise NonNormalizable(f"fractional power of an even power of {a}")
                factors.append((a, e * r))
            return NormalForm._single(coeff, factors)
        if r.denominator == 1 and r > 0:
            n = int(r)
            result, base = ONE, self
            while n:
                if n & 1:
                    result = result * base
                n >>= 1
                if n:
                    base = base * base
            return result
        raise NonNormalizable(f"power {r} of a sum ({self})")

    # -- calculus ----------------------------------------------------------

    def diff(self, var):
        """Partial derivative with respect to a coordinate atom."""
        return _derive(self, _partial_rule(var), {})

    def total_diff(self, var):
        """Total derivative along an independent variable (jets are promoted)."""
        return _derive(self, _total_rule(var), {})

    def map_atoms(self, fn):
        return map_atoms(self, fn)

    def coefficient_of(self, atom, power=1):
        """Coefficient of ``atom**power`` (other atoms kept), as a NormalForm."""
        power = Fraction(power)
        d = {}
        for mono, c in self.terms:
            hit = [e for a, e in mono if a == atom]
            if (hit[0] if hit else 0) == power:
                rest = tuple((a, e) for a, e in mono if a != atom)
                d[rest] = d.get(rest, 0) + c
        return NormalForm._from_dict(d)


def _coerce(value):
    if isinstance(value, NormalForm):
        return value
    if isinstance(value, (int, Fraction)):
        return NormalForm.const(value)
    if isinstance(value, Atom):
        return NormalForm.atom(value)
    if isinstance(value, Expr):
        return normalize(value)
    return None


def _inner_atoms(a):
    if isinstance(a, ExpAtom):
        return a.arg.atoms()
    if isinstance(a, LnAtom) and not isinstance(a.arg, int):
        return {a.arg} | _inner_atoms(a.arg)
    return set()


ZERO = NormalForm()
ONE = NormalForm.const(1)


def _rational_power(c, r):
    """Split ``c**r`` into a rational coefficient and surd factors."""
    if r.denominator == 1:
        return c ** int(r), []
    if c < 0:
        raise NonNormalizable(f"fractional power {r} of negative constant {c}")
    factors = []
    for p, k in _factorint(c.numerator).items():
        factors.append((Surd(p), k * r))
    for p, k in _factorint(c.denominator).items():
        factors.append((Surd(p), -k * r))
    return Fraction(1), factors


@lru_cache(maxsize=65536)
def _build(factors):
    """Canonical ``(coefficient, monomial)`` for a tuple of ``(atom, exponent)``."""
    powers = {}
    exp_arg = None
    for a, e in factors:
        if isinstance(a, ExpAtom):
            arg = a.arg if e == 1 else a.arg * NormalForm.const(e)
            exp_arg = arg if exp_arg is None else exp_arg + arg
        else:
            powers[a] = powers.get(a, 0) + Fraction(e)
    if exp_arg is not None and exp_arg.terms:
        rest = {}
        for m, c in exp_arg.terms:
            if len(m) == 1 and m[0][1] == 1 and isinstance(m[0][0], LnAtom):
                base = m[0][0].arg
                if isinstance(base, int):
                    base = Surd(base)
                powers[base] = powers.get(base, 0) + c
            else:
                rest[m] = c
        if rest:
            powers[ExpAtom(NormalForm._from_dict(rest))] = Fraction(1)
    coeff = Fraction(1)
    for a in list(powers):
        if isinstance(a, Surd):
            e = powers[a]
            k = math.floor(e)
            if k:
                coeff *= Fraction(a.prime) ** k
                powers[a] = e - k
    mono = tuple(sorted(((a, e) for a, e in powers.items() if e != 0), key=lambda ae: ae[0].sort_key))
    return coeff, mono


@lru_cache(maxsize=65536)
def _mul_mono(m1, m2):
    if not m1:
        return Fraction(1), m2
    if not m2:
        return Fraction(1), m1
    return _build(m1 + m2)


def nf_exp(arg):
    arg = _coerce(arg)
    if not arg.terms:
        return ONE
    return NormalForm._single(Fraction(1), ((ExpAtom(arg), Fraction(1)),))


def nf_ln(arg):
    arg = _coerce(arg)
    if len(arg.terms) != 1:
        if not arg.terms:
            raise DomainError("ln(0)")
        raise NonNormalizable(f"ln of a sum ({arg}) is outside the normal-form class")
    mono, c = arg.terms[0]
    if c <= 0:
        raise NonNormalizable(f"ln of a non-positive coefficient ({arg})")
    out = ZERO
    for p, k in _factorint(c.numerator).items():
        out = out + NormalForm.atom(LnAtom(p)) * k
    for p, k in _factorint(c.denominator).items():
        out = out - NormalForm.atom(LnAtom(p)) * k
    for a, e in mono:
        if isinstance(a, ExpAtom):
            out = out + a.arg * e
        elif isinstance(a, Surd):
            out = out + NormalForm.atom(LnAtom(a.prime)) * e
        else:
            if not is_positive(a) and e.numerator % 2 == 0:
                raise NonNormalizable(f"ln of an even power of {a}")
            out = out + NormalForm.atom(LnAtom(a)) * e
    return out


# -- differentiation --------------------------------------------------------


def _partial_rule(var):
    def rule(a):
        if a == var:
            return ONE
        if isinstance(a, Func) and isinstance(var, Symbol) and var in a.args:
            return NormalForm.atom(a.bump(var))
        return ZERO

    return rule


def _total_rule(var):
    if not (isinstance(var, Symbol) and var.kind == INDEPENDENT):
        raise ValueError(f"total derivative direction must be an independent variable, got {var}")

    def rule(a):
        if isinstance(a, Symbol):
            if a == var:
                return ONE
            if a.kind == DEPENDENT:
                return NormalForm.atom(Jet.make(a, {var: 1}))
            return ZERO
        if isinstance(a, (Jet, Func)):
            if isinstance(a, Func) and var not in a.args:
                return ZERO
            return NormalForm.atom(a.bump(var))
        return ZERO

    return rule


def _atom_derivative(a, rule, cache):
    if a in cache:
        return cache[a]
    if isinstance(a, ExpAtom):
        d = _derive(a.arg, rule, cache)
        r = NormalForm.atom(a) * d if d.terms else ZERO
    elif isinstance(a, LnAtom):
        if isinstance(a.arg, int):
            r = ZERO
        else:
            d = _atom_derivative(a.arg, rule, cache)
            r = d * NormalForm.atom(a.arg) ** -1 if d.terms else ZERO
    elif isinstance(a, Surd):
        r = ZERO
    else:
        r = rule(a)
    cache[a] = r
    return r


def _derive(nf, rule, cache):
    out = ZERO
    for mono, c in nf.terms:
        for i, (a, e) in enumerate(mono):
            if isinstance(a, ExpAtom):
                # canonical exp atoms carry exponent 1: (exp P)' = exp(P) P'
                dp = _derive(a.arg, rule, cache)
                if dp.terms:
                    out = out + NormalForm(((mono, c),)) * dp
                continue
            da = _atom_derivative(a, rule, cache)
            if not da.terms:
                continue
            rest = mono[:i] + ((a, e - 1),) + mono[i + 1 :]
            coeff, m = _build(rest)
            out = out + NormalForm._from_dict({m: coeff * c * e}) * da
    return out


# -- atom mapping / substitution --------------------------------------------


def map_atoms(nf, fn):
    """Rebuild ``nf`` with every atom ``a`` replaced by ``fn(a)`` (``None`` keeps it).

    Exp and ln atoms that ``fn`` keeps are rebuilt from their mapped arguments.
    """
    cache = {}

    def image(a):
        if a in cache:
            return cache[a]
        r = fn(a)
        if r is None:
            if isinstance(a, ExpAtom):
                inner = map_atoms(a.arg, fn)
                r = None if inner is a.arg else nf_exp(inner)
            elif isinstance(a, LnAtom) and not isinstance(a.arg, int):
                inner = image(a.arg)
                r = None if inner is None else nf_ln(inner)
        else:
            r = _coerce(r)
        cache[a] = r
        return r

    changed = False
    d = {}
    out = ZERO
    for mono, c in nf.terms:
        kept = []
        prod = None
        for a, e in mono:
            r = image(a)
            if r is None:
                kept.append((a, e))
            else:
                changed = True
                p = r ** e
                prod = p if prod is None else prod * p
        if prod is None:
            d[mono] = d.get(mono, 0) + c
        else:
            coeff, m = _build(tuple(kept))
            out = out + NormalForm._from_dict({m: coeff * c}) * prod
    if not changed:
        return nf
    return out + NormalForm._from_dict(d)


# -- numeric evaluation -----------------------------------------------------


def eval_nf(nf, lookup):
    """Evaluate with ``lookup(atom) -> float`` for symbols, jets and functions."""
    total = 0.0
    for mono, c in nf.terms:
        v = float(c)
        for a, e in mono:
            v *= _pow_float(_eval_atom(a, lookup), e, a)
        total += v
    return total


def _eval_atom(a, lookup):
    if isinstance(a, Surd):
        return float(a.prime)
    if isinstance(a, ExpAtom):
        return math.exp(eval_nf(a.arg, lookup))
    if isinstance(a, LnAtom):
        x = float(a.arg) if isinstance(a.arg, int) else _eval_atom(a.arg, lookup)
        if x <= 0:
            raise DomainError(f"ln of non-positive value {x}")
        return math.log(x)
    if isinstance(a, Symbol) and a.name == "pi" and a.kind == "constant":
        return math.pi
    return lookup(a)


def _pow_float(x, e, atom):
    if e.denominator == 1:
        if x == 0 and e < 0:
            raise DomainError(f"division by zero evaluating {atom}")
        return x ** int(e)
    if x < 0:
        raise DomainError(f"fractional power of negative value at {atom}")
    if x == 0 and e < 0:
        raise DomainError(f"division by zero evaluating {atom}")
    return x ** float(e)


# -- tree -> normal form ----------------------------------------------------


def normalize(e):
    """Canonical :class:`NormalForm` of an expression tree (idempotent)."""
    if isinstance(e, NormalForm):
        return e
    if isinstance(e, (int, Fraction)):
        return NormalForm.const(e)
    if isinstance(e, Atom):
        return NormalForm.atom(e)
    if isinstance(e, Num):
        return NormalForm.const(e.value)
    if isinstance(e, AtomNode):
        return NormalForm.atom(e.atom)
    if isinstance(e, Add):
        out = ZERO
        for item in e.items:
            out = out + normalize(item)
        return out
    if isinstance(e, Mul):
        out = ONE
        for item in e.items:
            out = out * normalize(item)
        return out
    if isinstance(e, Pow):
        return normalize(e.base) ** e.exponent
    if isinstance(e, Exp):
        return nf_exp(normalize(e.arg))
    if isinstance(e, Ln):
        return nf_ln(normalize(e.arg))
    raise TypeError(f"cannot normalize {type(e).__name__}")


def to_nf(value):
    nf = _coerce(value)
    if nf is None:
        if isinstance(value, str):
            from .parser import parse

            return normalize(parse(value))
        raise TypeError(f"cannot convert {type(value).__name__} to a normal form")
    return nf


def eval_tree(e, lookup):
    """Evaluate an expression tree directly, without normalizing it."""
    if isinstance(e, NormalForm):
        return eval_nf(e, lookup)
    if isinstance(e, Num):
        return float(e.value)
    if isinstance(e, AtomNode):
        return _eval_atom(e.atom, lookup)
    if isinstance(e, Add):
        return sum(eval_tree(i, lookup) for i in e.items)
    if isinstance(e, Mul):
        v = 1.0
        for i in e.items:
            v *= eval_tree(i, lookup)
        return v
    if isinstance(e, Pow):
        return _pow_float(eval_tree(e.base, lookup), e.exponent, "power")
    if isinstance(e, Exp):
        return math.exp(eval_tree(e.arg, lookup))
    if isinstance(e, Ln):
        x = eval_tree(e.arg, lookup)
        if x <= 0:
            raise DomainError(f"ln of non-positive value {x}")
        return math.log(x)
    raise TypeError(f"cannot evaluate {type(e).__name__}")


def lookup_from_point(point):
    """Turn a ``{Symbol|name: float}`` mapping into an atom lookup."""
    from .printing import format_atom

    by_name = {}
    for k, v in point.items():
        by_name[k if isinstance(k, str) else format_atom(k)] = float(v)

    def lookup(a):
        name = format_atom(a)
        if name in by_name:
            return by_name[name]
        raise UnboundSymbol(name)

    return lookup
