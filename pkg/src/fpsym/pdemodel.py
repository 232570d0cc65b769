"""Linear evolution equations, adjoints, point transformations with domains,
and change of variables for equations and solved systems."""

from dataclasses import dataclass, field
from fractions import Fraction

from .charts import ALPHA, ALPHAT, EPS, T, TAU, U, W, X, Y
from .jetcalc import EquationError, EvolutionEquation, SolvedEquation, jet_parts, make_jet
from .symexpr import (
    DEPENDENT,
    INDEPENDENT,
    Func,
    Jet,
    NonNormalizable,
    NormalForm,
    Symbol,
    diff,
    exp,
    format_atom,
    ln,
    substitute,
    to_nf,
)

_ADJOINT_VARIABLE = {U: ALPHA, W: ALPHAT, ALPHA: U, ALPHAT: W}


def make_linear(a, b, c, t=T, x=X, u=U, name=""):
    """``u_t = a u_xx + b u_x + c u``."""
    a, b, c = to_nf(a), to_nf(b), to_nf(c)
    if a.is_zero():
        raise EquationError("the coefficient of u_xx must not vanish")
    rhs = (
        a * NormalForm.atom(make_jet(u, {x: 2}))
        + b * NormalForm.atom(make_jet(u, {x: 1}))
        + c * NormalForm.atom(u)
    )
    return EvolutionEquation(t, x, u, rhs, (a, b, c), name=name)


FOKKER_PLANCK = make_linear(1, X, 0, name="fokker-planck")
HEAT = make_linear(1, 0, 0, TAU, Y, W, name="heat")


def adjoint_residual(eq, alpha):
    """``alpha_t + (a alpha)_xx - (b alpha)_x + c alpha`` for any expression ``alpha``."""
    if eq.coefficients is None:
        raise EquationError("the adjoint needs the linear coefficients a, b, c")
    a, b, c = eq.coefficients
    alpha = to_nf(alpha)
    t, x = eq.t, eq.x
    return (
        alpha.total_diff(t)
        + (a * alpha).total_diff(x).total_diff(x)
        - (b * alpha).total_diff(x)
        + c * alpha
    )


def adjoint(eq, var=None):
    """Adjoint equation in solved form ``alpha_t = -a alpha_xx + ...``.

    Its residual ``alpha_t - rhs`` equals :func:`adjoint_residual` applied
    to the dependent variable, and the adjoint of the adjoint is ``eq``.
    """
    if var is None:
        var = _ADJOINT_VARIABLE.get(eq.u, ALPHA)
    residual = adjoint_residual(eq, NormalForm.atom(var))
    lead = NormalForm.atom(make_jet(var, {eq.t: 1}))
    rhs = lead - residual
    name = f"adjoint of {eq.name}" if eq.name else "adjoint"
    return EvolutionEquation.from_rhs(eq.t, eq.x, var, rhs, name=name)


@dataclass(frozen=True)
class JointSystem:
    primary: EvolutionEquation
    adjoint: EvolutionEquation

    @classmethod
    def of(cls, eq, var=None):
        return cls(eq, adjoint(eq, var))

    @property
    def equations(self):
        return (self.primary, self.adjoint)


# -- point transformations ----------------------------------------------------


@dataclass(frozen=True)
class PointTransformation:
    """Forward map ``target = F(source)`` and inverse ``source = G(target)``.

    ``domain`` lists ``(expr, relation)`` constraints read as ``expr rel 0``
    with ``rel`` one of ``>``, ``<``, ``!=``.
    """

    source: tuple
    target: tuple
    forward: tuple
    inverse: tuple
    domain: tuple = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "forward", tuple((s, to_nf(e)) for s, e in _pairs(self.forward)))
        object.__setattr__(self, "inverse", tuple((s, to_nf(e)) for s, e in _pairs(self.inverse)))
        object.__setattr__(self, "domain", tuple((to_nf(e), rel) for e, rel in self.domain))
        if {s for s, _ in self.forward} != set(self.target):
            raise ValueError("forward map must give every target coordinate")
        if {s for s, _ in self.inverse} != set(self.source):
            raise ValueError("inverse map must give every source coordinate")
        for s in self.source:
            if s.kind == DEPENDENT:
                continue
            if any(isinstance(a, Symbol) and a.kind == DEPENDENT for a in self.inv[s].free_symbols()):
                raise ValueError("only fibre-preserving transformations are supported")

    @property
    def fwd(self):
        return dict(self.forward)

    @property
    def inv(self):
        return dict(self.inverse)

    @property
    def source_independents(self):
        return [s for s in self.source if s.kind == INDEPENDENT]

    @property
    def target_independents(self):
        return [s for s in self.target if s.kind == INDEPENDENT]

    def inverted(self, name=""):
        return PointTransformation(self.target, self.source, self.inverse, self.forward, self.domain, name)

    def round_trip_residuals(self):
        """``{coordinate: G(F(s)) - s}`` on both sides; all zero for a valid pair."""
        out = {}
        for s, e in self.inverse:
            out[s] = substitute(e, self.fwd) - NormalForm.atom(s)
        for z, e in self.forward:
            out[z] = substitute(e, self.inv) - NormalForm.atom(z)
        return out

    def is_valid(self):
        return all(r.is_zero() for r in self.round_trip_residuals().values())

    def target_dependent_of(self, u):
        """Target dependent variable whose forward expression involves ``u``."""
        for z, e in self.forward:
            if z.kind == DEPENDENT and not diff(e, u).is_zero():
                return z
        raise EquationError(f"{u.name} is not a coordinate of the transformation")

    def __str__(self):
        lines = [f"{format_atom(z)} = {e}" for z, e in self.forward]
        lines += [f"inverse: {format_atom(s)} = {e}" for s, e in self.inverse]
        lines += [f"domain: {e} {rel} 0" for e, rel in self.domain]
        return "\n".join(lines)


def _pairs(m):
    return m.items() if isinstance(m, dict) else m


def fp_to_heat():
    """``tau = exp(2t)/2, y = exp(t) x, w = u``; the inverse needs ``tau > 0``."""
    return PointTransformation(
        (T, X, U),
        (TAU, Y, W),
        {TAU: Fraction(1, 2) * exp(2 * NormalForm.atom(T)), Y: exp(T) * X, W: NormalForm.atom(U)},
        {
            T: Fraction(1, 2) * ln(2 * NormalForm.atom(TAU)),
            X: NormalForm.atom(Y) * (2 * NormalForm.atom(TAU)) ** Fraction(-1, 2),
            U: NormalForm.atom(W),
        },
        ((TAU, ">"),),
        name="fp-to-heat",
    )


def heat_to_fp():
    return fp_to_heat().inverted(name="heat-to-fp")


def identity(chart, name="identity"):
    m = {s: NormalForm.atom(s) for s in chart}
    return PointTransformation(tuple(chart), tuple(chart), m, m, name=name)


def t_shift(eps=EPS, chart=(T, X, U)):
    """``t -> t + eps`` on ``chart`` (time is the first coordinate)."""
    t = chart[0]
    fwd = {s: NormalForm.atom(s) for s in chart}
    inv = dict(fwd)
    fwd[t] = NormalForm.atom(t) + to_nf(eps)
    inv[t] = NormalForm.atom(t) - to_nf(eps)
    return PointTransformation(tuple(chart), tuple(chart), fwd, inv, name="t-shift")


def compose(first, second):
    """Apply ``first``, then ``second``."""
    if tuple(first.target) != tuple(second.source):
        raise ValueError("chart mismatch: the first target must be the second source")
    fwd = {z: substitute(e, first.fwd) for z, e in second.forward}
    inv = {s: substitute(e, second.inv) for s, e in first.inverse}
    domain = list(first.domain)
    for c in second.domain:
        if c not in domain:
            domain.append(c)
    return PointTransformation(first.source, second.target, fwd, inv, tuple(domain),
                               name=f"{first.name} then {second.name}")


def prolong_to_characteristic(T_, factor, source_var=ALPHA, target_var=ALPHAT):
    """Append ``target_var = factor * source_var`` (factor in source coordinates)."""
    factor = to_nf(factor)
    if factor.is_zero():
        raise EquationError("the prolongation factor vanishes")
    if not factor.is_monomial():
        raise NonNormalizable(f"cannot certify that {factor} is nonvanishing")
    back = substitute(factor ** -1, T_.inv)
    fwd = dict(T_.forward)
    fwd[target_var] = factor * NormalForm.atom(source_var)
    inv = dict(T_.inverse)
    inv[source_var] = back * NormalForm.atom(target_var)
    return PointTransformation(
        T_.source + (source_var,), T_.target + (target_var,), fwd, inv, T_.domain, T_.name
    )


def extend_trivially(T_, pairs):
    """Append identity components ``target = source`` (e.g. for potentials)."""
    fwd = dict(T_.forward)
    inv = dict(T_.inverse)
    src, tgt = list(T_.source), list(T_.target)
    for s, z in pairs:
        fwd[z] = NormalForm.atom(s)
        inv[s] = NormalForm.atom(z)
        src.append(s)
        tgt.append(z)
    return PointTransformation(tuple(src), tuple(tgt), fwd, inv, T_.domain, T_.name)


# -- change of variables ------------------------------------------------------


def _inverse_matrix(m):
    n = len(m)
    if n == 1:
        det = m[0][0]
        if det.is_zero():
            raise EquationError("transformation is degenerate (vanishing Jacobian)")
        return [[det ** -1]]
    if n == 2:
        (p, q), (r, s) = m
        det = p * s - q * r
        if det.is_zero():
            raise EquationError("transformation is degenerate (vanishing Jacobian)")
        inv_det = det ** -1
        return [[s * inv_det, -q * inv_det], [-r * inv_det, p * inv_det]]
    raise NotImplementedError("change of variables is implemented for one or two independents")


class _ChainRule:
    """Expresses source jets through target jets for a fibre-preserving map."""

    def __init__(self, T_):
        self.T = T_
        self.src = T_.source_independents
        self.tgt = T_.target_independents
        inv = T_.inv
        # jac[a][b] = D_{target_a} (source_b)
        jac = [[inv[b].total_diff(a) for b in self.src] for a in self.tgt]
        self.jinv = _inverse_matrix(jac)  # jinv[b][a]
        self.cache = {}

    def jet(self, dep, counts):
        key = (dep, tuple(sorted(((v.name, c) for v, c in counts.items() if c))))
        if key in self.cache:
            return self.cache[key]
        if not any(counts.values()):
            r = self.T.inv[dep]
        else:
            b = min((v for v, c in counts.items() if c), key=lambda s: s.name)
            lower = dict(counts)
            lower[b] -= 1
            prev = self.jet(dep, lower)
            bi = self.src.index(b)
            r = NormalForm()
            for ai, a in enumerate(self.tgt):
                r = r + self.jinv[bi][ai] * prev.total_diff(a)
        self.cache[key] = r
        return r

    def __call__(self, e):
        inv = self.T.inv
        src_set = set(self.T.source)

        def image(a):
            if isinstance(a, Symbol):
                return inv.get(a) if a in src_set else None
            if isinstance(a, Jet):
                if a.dep not in src_set:
                    return None
                if any(v not in self.src for v, _ in a.index):
                    raise NonNormalizable(f"jet {format_atom(a)} is not on the source chart")
                return self.jet(a.dep, a.counts)
            if isinstance(a, Func) and any(s in src_set for s in a.args):
                raise NonNormalizable(f"cannot change variables inside {format_atom(a)}")
            return None

        return to_nf(e).map_atoms(image)


def transform_expression(e, T_):
    """Rewrite a source-chart jet expression in target coordinates and jets."""
    return _ChainRule(T_)(e)


def solve_for(residual, lead):
    """Solve a residual linear in ``lead`` with an invertible (monomial) coefficient."""
    lead_nf = NormalForm.atom(lead)
    a = diff(residual, lead)
    if a.is_zero():
        raise EquationError(f"transformed equation does not contain {format_atom(lead)}")
    if not diff(a, lead).is_zero():
        raise EquationError(f"transformed equation is not linear in {format_atom(lead)}")
    rest = residual - a * lead_nf
    return -rest * a ** -1


def apply_to_equation(eq, T_):
    """The evolution equation obeyed on the target chart by solutions of ``eq``."""
    tgt = T_.target_independents
    if len(tgt) != 2:
        raise EquationError("target chart must have two independent variables")
    v = T_.target_dependent_of(eq.u)
    new_t, new_x = tgt
    residual = transform_expression(eq.residual, T_)
    rhs = solve_for(residual, make_jet(v, {new_t: 1}))
    name = f"{eq.name} under {T_.name}" if T_.name else eq.name
    return EvolutionEquation.from_rhs(new_t, new_x, v, rhs, name=name, domain=T_.domain)


def apply_to_system(equations, T_, leads):
    """Transform solved equations and re-solve them for ``leads`` in order."""
    solved = []
    for eq, lead in zip(equations, leads):
        residual = transform_expression(eq.residual, T_)
        for prev in solved:
            residual = _replace_atom(residual, prev.lead, prev.rhs)
        solved.append(SolvedEquation(lead, solve_for(residual, lead), eq.label))
    return solved


def _replace_atom(e, atom, value):
    return e.map_atoms(lambda a: value if a == atom else None)
