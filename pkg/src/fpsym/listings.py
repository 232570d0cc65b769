"""Published generator lists, stored verbatim in the vector-field line format.

Nothing here is trusted: every entry is a claim to be verified.
"""

from .charts import TAU, T, U, VCHECK, VHAT, W, X, Y, fp_function, heat_function
from .vfield import FamilyGenerator, parse_field

HEAT_CHART = (TAU, Y, W)
FP_CHART = (T, X, U)
P1_CHART = (T, X, U, VHAT)
P2_CHART = (T, X, U, VCHECK)

HEAT_ALGEBRA = (
    "tau: 1",
    "y: 1",
    "tau: 2*tau, y: y",
    "y: 2*tau, w: -y*w",
    "tau: 4*tau^2, y: 4*tau*y, w: -(y^2 + 2*tau)*w",
    "w: w",
)
HEAT_FAMILY = "w: f(tau,y)"

FP_ALGEBRA = (
    "t: 1",
    "x: exp(-t)",
    "t: exp(-2*t), x: -exp(-2*t)*x, u: exp(-2*t)*u",
    "x: exp(t), u: -exp(t)*x*u",
    "t: exp(2*t), x: exp(2*t)*x, u: -exp(2*t)*x^2*u",
    "u: u",
)
FP_FAMILY = "u: f"

# heat generator whose pushforward should reproduce each FP entry
HEAT_PREIMAGE = (2, 1, 0, 3, 4, 5)

P1_ALGEBRA = (
    "t: exp(-2*t), x: -exp(-2*t)*x",
    "x: exp(-t)",
    "t: 1, u: -u",
    "x: exp(t), u: -exp(t)*(x*u + x*vhat), vhat: -vhat",
    "t: exp(2*t), x: exp(2*t)*x, u: -exp(2*t)*(x^2*u + 3*u + 2*x*exp(-t)*vhat), vhat: -exp(2*t)*(x^2 + 1)*vhat",
    "u: u, vhat: vhat",
)
P1_FAMILY = "u: exp(-t)*g_x, vhat: g"

P2_ALGEBRA = (
    "t: 1, u: -u",
    "t: exp(-2*t), x: -exp(-2*t)*x",
    "t: exp(2*t), x: exp(2*t)*x, u: -exp(2*t)*(x^2*u + 3*u + 2*exp(-2*t)*vcheck), vcheck: -exp(2*t)*(x^2 - 1)*vcheck",
    "u: u, vcheck: vcheck",
)
P2_FAMILY = "u: exp(t)*x^(-1)*h_x, vcheck: h"


def fields(lines, chart, prefix):
    return [parse_field(s, chart, name=f"{prefix}[{i + 1}]") for i, s in enumerate(lines)]


def heat_algebra():
    return fields(HEAT_ALGEBRA, HEAT_CHART, "g")


def fp_algebra():
    return fields(FP_ALGEBRA, FP_CHART, "gtilde")


def p1_algebra():
    return fields(P1_ALGEBRA, P1_CHART, "p1")


def p2_algebra():
    return fields(P2_ALGEBRA, P2_CHART, "p2")


def heat_family():
    from .jetcalc import EvolutionEquation
    from .symexpr import parse

    f = heat_function("f")
    field = parse_field(HEAT_FAMILY, HEAT_CHART, name="g[f]")
    return FamilyGenerator(field, f, EvolutionEquation.from_rhs(TAU, Y, f, parse("f_yy(tau,y)")))


def fp_family():
    from .jetcalc import EvolutionEquation
    from .symexpr import parse

    f = fp_function("f")
    field = parse_field(FP_FAMILY, FP_CHART, name="gtilde[f]")
    return FamilyGenerator(field, f, EvolutionEquation.from_rhs(T, X, f, parse("f_xx + x*f_x")))


# printed equations, as residuals (lhs - rhs) or solved right-hand sides
FP_ADJOINT = "alpha_t + alpha_xx - x*alpha_x - alpha"
HEAT_ADJOINT = "alphat_tau + alphat_yy"
VHAT_SYSTEM = ("exp(t)*u", "exp(t)*u_x + exp(t)*x*u")
VCHECK_SYSTEM = ("exp(2*t)*x*u", "exp(2*t)*x*u_x + exp(2*t)*(x^2 - 1)*u")
VHAT_EQUATION = "vhat_t - vhat_xx - x*vhat_x"
VCHECK_EQUATION = "vcheck_t - vcheck_xx + (2*x^(-1) - x)*vcheck_x"
FP_CHARACTERISTICS = ("exp(t)", "exp(2*t)*x")
HEAT_CHARACTERISTICS = ("1", "y")
QUOTED_CHARACTERISTIC = "exp(-x^2/2)"
