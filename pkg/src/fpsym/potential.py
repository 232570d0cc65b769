"""Potential systems induced by characteristics, their potential equations,
symmetry verification on the extended chart and multi-potential systems."""

from dataclasses import dataclass, field

from . import linsolve
from .charts import TAU, T, VCHECK, VHAT, V, WHAT, potential_symbol
from .conslaw import CharacteristicError, as_characteristic, canonical_cv, is_characteristic
from .jetcalc import EvolutionEquation, SolvedEquation, make_jet, reduce_mod
from .symexpr import (
    INDEPENDENT,
    ExpAtom,
    NonNormalizable,
    NormalForm,
    Symbol,
    exp,
    format_atom,
    substitute,
    to_nf,
)
from .vfield import (
    ChartError,
    VectorField,
    is_symmetry,
    is_symmetry_of_system,
    minimal_repair,
    scaling_pool,
)


@dataclass(frozen=True)
class PotentialSystem:
    """``v_x = density``, ``v_t = -flux`` together with the source equation."""

    source: EvolutionEquation
    characteristic: object
    potential: Symbol
    eq_x: SolvedEquation
    eq_t: SolvedEquation
    name: str = field(default="", compare=False)

    @property
    def independents(self):
        return self.source.independents

    @property
    def equations(self):
        # reduction priority: v_t, then v_x, then the source equation
        return (self.eq_t, self.eq_x, self.source.solved)

    @property
    def chart(self):
        return self.independents + (self.source.u, self.potential)

    def __str__(self):
        return f"{self.eq_x}; {self.eq_t}"


def _default_potential(alpha, eq):
    e = alpha.expr
    if eq.t == T:
        if e == exp(T):
            return VHAT
        if e == exp(2 * NormalForm.atom(T)) * eq.x:
            return VCHECK
    if eq.t == TAU and e == 1:
        return WHAT
    return V


def potential_pair(alpha, eq, v):
    cv = canonical_cv(alpha, eq)
    jx = make_jet(v, {eq.x: 1})
    jt = make_jet(v, {eq.t: 1})
    return SolvedEquation(jx, cv.density, f"{v.name}_x"), SolvedEquation(jt, -cv.flux, f"{v.name}_t")


def build(alpha, eq, potential=None, name=""):
    alpha = as_characteristic(alpha)
    report = is_characteristic(alpha, eq)
    if not report.passed:
        raise CharacteristicError(f"{alpha.expr} does not solve the adjoint equation; residual {report.residual}")
    v = potential or _default_potential(alpha, eq)
    ex, et = potential_pair(alpha, eq, v)
    return PotentialSystem(eq, alpha, v, ex, et, name)


@dataclass(frozen=True)
class CompatibilityReport:
    residual: NormalForm
    passed: bool


def check_compatibility(ps):
    """Cross-derivative condition ``D_t(v_x rhs) - D_x(v_t rhs)`` on solutions of the source."""
    eq = ps.source
    r = ps.eq_x.rhs.total_diff(eq.t) - ps.eq_t.rhs.total_diff(eq.x)
    red = reduce_mod(r, eq)
    return CompatibilityReport(red, red.is_zero())


def singular_locus(alpha):
    """Domain constraints under which a monomial ``alpha`` is invertible."""
    e = to_nf(alpha)
    if e.is_zero():
        raise ValueError("characteristic vanishes identically")
    if not e.is_monomial():
        raise NonNormalizable(f"cannot solve for u: characteristic {e} is not a monomial")
    domain = []
    for a in sorted(e.atoms(deep=False)):
        if isinstance(a, ExpAtom):
            continue
        if isinstance(a, Symbol) and a.kind == INDEPENDENT and not a.is_positive:
            domain.append((NormalForm.atom(a), "!="))
    return tuple(domain)


def potential_equation(ps):
    """Eliminate ``u = v_x / alpha`` from ``v_t = -flux``."""
    eq = ps.source
    alpha = ps.characteristic.expr
    domain = singular_locus(alpha)
    vx = NormalForm.atom(make_jet(ps.potential, {eq.x: 1}))
    rhs = substitute(ps.eq_t.rhs, {eq.u: vx * alpha ** -1})
    return EvolutionEquation.from_rhs(eq.t, eq.x, ps.potential, rhs, name=f"potential equation for {ps.potential.name}",
                                      domain=domain)


def family_constraint(ps, function):
    """The potential equation written for an arbitrary function symbol."""
    peq = potential_equation(ps)
    rhs = substitute(peq.rhs, {ps.potential: NormalForm.atom(function)})
    return EvolutionEquation.from_rhs(peq.t, peq.x, function, rhs, name=f"{function.name} solves the potential equation")


@dataclass(frozen=True)
class GeneratorCheck:
    field: VectorField
    reports: tuple
    repair: object = None

    @property
    def passed(self):
        return all(r.passed for r in self.reports)

    @property
    def residuals(self):
        return tuple(r.residual for r in self.reports)


def repair_pool(ps, ks=(-2, -1, 0, 1, 2)):
    return scaling_pool(ps.chart, ks, ps.source.t)


def verify_potential_algebra(generators, ps, constraints=(), max_terms=2, repair=True):
    """Check each generator on the potential system; failing ones get a minimal repair attempt."""
    out = []
    pool = repair_pool(ps) if repair else ()
    for X in generators:
        reports = tuple(is_symmetry_of_system(X, ps, constraints))
        fix = None
        if repair and not all(r.passed for r in reports):
            fix = minimal_repair(X, pool, ps, max_terms, constraints)
        out.append(GeneratorCheck(X, reports, fix))
    return out


def is_nontrivial_potential_symmetry(X, ps):
    """True when some non-potential coefficient depends on the potential."""
    v = ps.potential
    return any(not c.diff(v).is_zero() for z, c in X.coeffs if z != v)


def project(X, keep):
    keep = tuple(keep)
    dropped = [z for z in X.chart if z not in keep]
    for z in keep:
        c = X[z]
        for d in dropped:
            if not c.diff(d).is_zero():
                raise ChartError(f"coefficient of d/d{format_atom(z)} depends on the dropped {format_atom(d)}")
    return VectorField(keep, {z: X[z] for z in keep}, X.name)


def projected_symmetry(X, ps):
    """Project to (independents, potential) and check against the potential equation."""
    Y = project(X, ps.independents + (ps.potential,))
    return Y, is_symmetry(Y, potential_equation(ps))


@dataclass(frozen=True)
class MultiPotentialSystem:
    source: EvolutionEquation
    characteristics: tuple
    potentials: tuple
    systems: tuple

    @property
    def independents(self):
        return self.source.independents

    @property
    def equations(self):
        return tuple(s.eq_t for s in self.systems) + tuple(s.eq_x for s in self.systems) + (self.source.solved,)

    def pairs(self):
        return [(s.eq_x, s.eq_t) for s in self.systems]


def build_multi(alphas, eq, potentials=None):
    alphas = [as_characteristic(a) for a in alphas]
    if not alphas:
        raise ValueError("at least one characteristic is required")
    if not linsolve.linearly_independent([a.expr for a in alphas]):
        raise CharacteristicError("characteristics are linearly dependent over the rationals")
    potentials = tuple(potentials or (potential_symbol(i + 1) for i in range(len(alphas))))
    if len(potentials) != len(alphas):
        raise ValueError("one potential per characteristic is required")
    systems = tuple(build(a, eq, v) for a, v in zip(alphas, potentials))
    return MultiPotentialSystem(eq, tuple(alphas), potentials, systems)
