"""Jet-space calculus: total derivatives, differential consequences and
reduction of expressions modulo evolution equations and triangular systems."""

from dataclasses import dataclass, field
from functools import lru_cache

from .symexpr import DEPENDENT, Func, Jet, NormalForm, Symbol, ZERO, format_atom, to_nf
from .symexpr.errors import SymexprError

DEFAULT_MAX_ORDER = 6
HARD_MAX_ORDER = 12


class JetOrderError(SymexprError):
    pass


class EquationError(SymexprError, ValueError):
    pass


def total_derivative(e, direction, times=1):
    out = to_nf(e)
    for _ in range(times):
        out = out.total_diff(direction)
    return out


def jet_parts(atom):
    """``(base, {variable: count})`` for a dependent variable, jet or function symbol."""
    if isinstance(atom, Symbol) and atom.kind == DEPENDENT:
        return atom, {}
    if isinstance(atom, Jet):
        return atom.dep, atom.counts
    if isinstance(atom, Func):
        return atom.base, {v: c for v, c in zip(atom.args, atom.index) if c}
    return None


def make_jet(base, counts):
    if isinstance(base, Func):
        return Func(base.name, base.args, tuple(counts.get(v, 0) for v in base.args))
    return Jet.make(base, counts)


def jet_order(atom):
    parts = jet_parts(atom)
    return sum(parts[1].values()) if parts else 0


@dataclass(frozen=True)
class SolvedEquation:
    """An equation ``lead = rhs`` solved for one jet (or function-symbol derivative)."""

    lead: object
    rhs: NormalForm
    label: str = ""

    @property
    def residual(self):
        return NormalForm.atom(self.lead) - self.rhs

    @property
    def base(self):
        return jet_parts(self.lead)[0]

    @property
    def lead_counts(self):
        return jet_parts(self.lead)[1]

    def __str__(self):
        return f"{format_atom(self.lead)} = {self.rhs}"


class Reducer:
    """Eliminates leading jets by the first matching rule, recursively.

    A jet matches a rule when it is a total derivative of the rule's lead;
    it is replaced by the same total derivative of the rule's right-hand side,
    reducing after every differentiation step.
    """

    def __init__(self, equations, max_order=DEFAULT_MAX_ORDER):
        if max_order > HARD_MAX_ORDER:
            raise JetOrderError(f"maximum jet order {max_order} exceeds the hard limit {HARD_MAX_ORDER}")
        self.equations = tuple(equations)
        self.max_order = max_order
        self._cache = {}

    def reduce(self, e):
        return to_nf(e).map_atoms(self._image)

    def _image(self, a):
        if a in self._cache:
            return self._cache[a]
        parts = jet_parts(a)
        if parts is None:
            return None
        base, counts = parts
        result = None
        for eq in self.equations:
            if eq.base != base:
                continue
            lead = eq.lead_counts
            if not all(counts.get(v, 0) >= c for v, c in lead.items()):
                continue
            order = sum(counts.values())
            if order > self.max_order:
                raise JetOrderError(
                    f"eliminating {format_atom(a)} needs jet order {order} > {self.max_order}"
                )
            remainder = {v: c - lead.get(v, 0) for v, c in counts.items()}
            r = self.reduce(eq.rhs)
            for v in sorted(remainder, key=lambda s: s.name):
                for _ in range(remainder[v]):
                    r = self.reduce(r.total_diff(v))
            result = r
            break
        self._cache[a] = result
        return result


@dataclass(frozen=True)
class EvolutionEquation:
    """``u_t = rhs`` with ``rhs`` free of t-derivatives of ``u``.

    ``u`` is a dependent-variable symbol or, for constraints on arbitrary
    functions (``f_t = f_xx + x f_x``), a zero-index function symbol.
    ``coefficients`` holds ``(a, b, c)`` when ``rhs = a u_xx + b u_x + c u``.
    """

    t: Symbol
    x: Symbol
    u: object
    rhs: NormalForm
    coefficients: tuple = None
    domain: tuple = field(default=(), compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rhs", to_nf(self.rhs))
        for a in self.rhs.atoms():
            idx = self.index_of(a)
            if idx is not None and idx[0] > 0:
                raise EquationError(f"right-hand side contains the t-derivative {format_atom(a)}")
        if self.coefficients is not None:
            a, b, c = (to_nf(k) for k in self.coefficients)
            object.__setattr__(self, "coefficients", (a, b, c))
            if a.is_zero():
                raise EquationError("leading coefficient a must not vanish")
            if self.rhs != self.linear_rhs(a, b, c):
                raise EquationError("right-hand side does not match the linear coefficients")

    def jet(self, n_t=0, n_x=0):
        counts = {}
        if n_t:
            counts[self.t] = n_t
        if n_x:
            counts[self.x] = n_x
        return make_jet(self.u, counts)

    def jet_nf(self, n_t=0, n_x=0):
        return NormalForm.atom(self.jet(n_t, n_x))

    def linear_rhs(self, a, b, c):
        return a * self.jet_nf(0, 2) + b * self.jet_nf(0, 1) + c * self.jet_nf()

    def index_of(self, atom):
        parts = jet_parts(atom)
        if parts is None or parts[0] != self.u:
            return None
        counts = parts[1]
        if any(v not in (self.t, self.x) for v in counts):
            return None
        return counts.get(self.t, 0), counts.get(self.x, 0)

    @property
    def solved(self):
        return SolvedEquation(self.jet(1, 0), self.rhs, self.name)

    @property
    def residual(self):
        """``u_t - rhs``."""
        return self.jet_nf(1, 0) - self.rhs

    @property
    def independents(self):
        return (self.t, self.x)

    @property
    def is_linear(self):
        return self.coefficients is not None

    @classmethod
    def from_rhs(cls, t, x, u, rhs, name="", domain=()):
        """Build an equation, detecting linear coefficients when present."""
        rhs = to_nf(rhs)
        probe = cls(t, x, u, rhs, None, domain, name)
        coeffs = probe.extract_linear()
        if coeffs is not None:
            return cls(t, x, u, rhs, coeffs, domain, name)
        return probe

    def extract_linear(self):
        u0, u1, u2 = (self.jet(0, k) for k in range(3))
        a = self.rhs.coefficient_of(u2)
        b = self.rhs.coefficient_of(u1)
        c = self.rhs.coefficient_of(u0)
        for k in (a, b, c):
            if any(self.index_of(atom) is not None for atom in k.atoms()):
                return None
        if a.is_zero() or self.linear_rhs(a, b, c) != self.rhs:
            return None
        return a, b, c

    def with_name(self, name):
        return EvolutionEquation(self.t, self.x, self.u, self.rhs, self.coefficients, self.domain, name)

    def __str__(self):
        return f"{format_atom(self.jet(1, 0))} = {self.rhs}"


@lru_cache(maxsize=256)
def _reducer(equations, max_order):
    return Reducer(equations, max_order)


def reducer_for(eq, max_order=DEFAULT_MAX_ORDER):
    if isinstance(eq, EvolutionEquation):
        eqs = (eq.solved,)
    else:
        eqs = tuple(e.solved if isinstance(e, EvolutionEquation) else e for e in eq)
    return _reducer(eqs, max_order)


def consequence(eq, index, max_order=DEFAULT_MAX_ORDER):
    """Rule ``(jet, replacement)`` for the jet ``index = (n_t, n_x)`` of ``eq``'s solutions."""
    n_t, n_x = index
    if n_t < 1:
        raise ValueError("a differential consequence needs n_t >= 1")
    jet = eq.jet(n_t, n_x)
    order = n_t + n_x
    if order > max_order:
        raise JetOrderError(f"jet order {order} exceeds the configured maximum {max_order}")
    return jet, reducer_for(eq, max_order).reduce(NormalForm.atom(jet))


def reduce_mod(e, eq, max_order=DEFAULT_MAX_ORDER):
    """Eliminate every t-derivative of ``eq``'s dependent variable.

    ``eq`` may also be a sequence of equations (evolution equations or
    :class:`SolvedEquation`), applied in priority order.
    """
    return reducer_for(eq, max_order).reduce(e)
