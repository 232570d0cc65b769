"""Exact heat solutions, their transport to the Fokker-Planck chart and
symbolic/numeric residual checks."""

import math
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .charts import C1, TAU, T, U, W, X, Y
from .jetcalc import jet_parts, reduce_mod
from .pdemodel import FOKKER_PLANCK, HEAT, fp_to_heat
from .symexpr import (
    CONSTANT,
    DEPENDENT,
    PARAMETER,
    DomainError,
    Func,
    NormalForm,
    Symbol,
    eval_numeric,
    exp,
    substitute,
    to_nf,
)

SEED = 0x5EED
SAMPLES = 100
MAX_HEAT_DEGREE = 8

BOXES = {
    T: (-1.0, 1.0),
    X: (-3.0, 3.0),
    TAU: (0.1, 2.0),
    Y: (-3.0, 3.0),
}
PARAMETER_BOX = (-2.0, 2.0)


def seed():
    raw = os.environ.get("FPSYM_SEED")
    return int(raw, 0) if raw else SEED


@dataclass(frozen=True)
class SolutionFamily:
    expr: NormalForm
    chart: tuple
    domain: tuple = ()
    description: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "expr", to_nf(self.expr))

    @property
    def parameters(self):
        return sorted(a for a in self.expr.free_symbols() if isinstance(a, Symbol) and a.kind == PARAMETER)

    def __str__(self):
        return str(self.expr)


HEAT_CHART = (TAU, Y, W)
FP_CHART = (T, X, U)


def heat_coefficients(n):
    """``c_k`` of ``sum_k c_k tau^k y^(n-2k)`` solving ``w_tau = w_yy``, with ``c_0 = 1``."""
    cs = [Fraction(1)]
    for k in range(1, n // 2 + 1):
        m = n - 2 * k
        cs.append(Fraction((m + 2) * (m + 1), k) * cs[-1])
    return cs


def heat_polynomial(n):
    if not 0 <= n <= MAX_HEAT_DEGREE:
        raise ValueError(f"heat polynomial degree must lie in 0..{MAX_HEAT_DEGREE}")
    e = NormalForm()
    for k, c in enumerate(heat_coefficients(n)):
        e = e + c * NormalForm.atom(TAU) ** k * NormalForm.atom(Y) ** (n - 2 * k)
    return SolutionFamily(e, HEAT_CHART, (), f"heat polynomial of degree {n}")


def gaussian_kernel():
    pi = NormalForm.atom(Symbol("pi", CONSTANT, positive=True))
    tau, y = NormalForm.atom(TAU), NormalForm.atom(Y)
    e = (4 * pi * tau) ** Fraction(-1, 2) * exp(-(y ** 2) * (4 * tau) ** -1)
    return SolutionFamily(e, HEAT_CHART, ((tau, ">"),), "fundamental solution")


def linear_family():
    return SolutionFamily(C1 * NormalForm.atom(Y), HEAT_CHART, (), "linear solution c1*y")


def family(spec):
    """``heatpoly:<n>``, ``gaussian`` or ``linear``."""
    if spec == "gaussian":
        return gaussian_kernel()
    if spec == "linear":
        return linear_family()
    if spec.startswith("heatpoly:"):
        try:
            n = int(spec.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad heat polynomial degree in {spec!r}") from None
        return heat_polynomial(n)
    raise ValueError(f"unknown solution family {spec!r}")


def map_solution(s, T_=None):
    """Pull a target-chart solution back along the forward map."""
    T_ = T_ or fp_to_heat()
    if tuple(s.chart) != tuple(T_.target):
        raise ValueError("solution does not live on the transformation's target chart")
    dep = next(z for z in s.chart if z.kind == DEPENDENT)
    src_dep = next(z for z in T_.source if z.kind == DEPENDENT)
    w_of_u = T_.fwd[dep]
    if w_of_u != NormalForm.atom(src_dep):
        raise NotImplementedError("only transformations with w = u are supported for solutions")
    expr = substitute(s.expr, {z: e for z, e in T_.forward if z.kind != DEPENDENT})
    # the target domain holds automatically for images of the forward map
    return SolutionFamily(expr, tuple(T_.source), (), f"image of {s.description}" if s.description else "")


def substituted_residual(s, eq):
    """Residual ``u_t - rhs`` with ``u`` replaced by the solution, reduced."""
    return reduce_mod(substitute(eq.residual, {eq.u: s.expr}), eq)


@dataclass(frozen=True)
class ResidualReport:
    symbolic: NormalForm
    numeric_max: float
    samples: int


def _sample_points(s, eq, rng, n):
    syms = [eq.t, eq.x] + s.parameters
    excl_x = any(c == NormalForm.atom(eq.x) and rel == "!=" for c, rel in tuple(s.domain) + tuple(eq.domain))
    points = []
    while len(points) < n:
        p = {}
        for z in syms:
            lo, hi = BOXES.get(z, PARAMETER_BOX)
            p[z] = rng.uniform(lo, hi)
        if excl_x and abs(p[eq.x]) < 0.1:
            continue
        points.append(p)
    return points


def _numeric_residual(s, eq, point):
    """Residual assembled in floating point from separately evaluated jets."""
    u = s.expr
    jets = {}
    for a in eq.residual.atoms():
        parts = jet_parts(a)
        if parts and parts[0] == eq.u and not isinstance(a, Func):
            d = u
            for v, c in parts[1].items():
                for _ in range(c):
                    d = d.diff(v)
            jets[a] = eval_numeric(d, point)
    total = 0.0
    for mono, c in eq.residual.terms:
        term = float(c)
        for atom, power in mono:
            if atom in jets:
                term *= jets[atom] ** power
            else:
                term *= eval_numeric(NormalForm.atom(atom), point) ** power
        total += term
    return total


def residual_report(s, eq, samples=SAMPLES, rng_seed=None):
    if eq.u not in s.chart or eq.t not in s.chart:
        raise ValueError("solution and equation live on different charts")
    sym = substituted_residual(s, eq)
    rng = random.Random(seed() if rng_seed is None else rng_seed)
    worst = 0.0
    for p in _sample_points(s, eq, rng, samples):
        try:
            r = abs(_numeric_residual(s, eq, p))
        except (DomainError, OverflowError, ZeroDivisionError) as err:
            raise DomainError(f"numeric check left the domain: {err}") from err
        worst = max(worst, r) if not math.isnan(r) else math.inf
    return ResidualReport(sym, worst, samples)


def fp_solution(expr):
    return SolutionFamily(expr, FP_CHART)


EQUATIONS = {"fp": FOKKER_PLANCK, "heat": HEAT}
