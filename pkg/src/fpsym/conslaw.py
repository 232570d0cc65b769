"""Conservation-law characteristics, canonical conserved vectors and their
divergence, and the polynomial solutions of the backward heat equation."""

from dataclasses import dataclass
from fractions import Fraction

from .charts import T, TAU, X, Y
from .jetcalc import EquationError, jet_parts, reduce_mod
from .pdemodel import adjoint_residual, fp_to_heat
from .symexpr import Func, NormalForm, exp, format_atom, substitute, to_nf


class CharacteristicError(ValueError):
    pass


@dataclass(frozen=True)
class Characteristic:
    """A multiplier depending on the independent variables only."""

    expr: NormalForm
    note: str = ""

    def __post_init__(self):
        e = to_nf(self.expr)
        object.__setattr__(self, "expr", e)
        for a in e.atoms():
            parts = jet_parts(a)
            if parts is not None and not isinstance(a, Func):
                raise CharacteristicError(f"characteristic must not involve {format_atom(a)}")

    def __str__(self):
        return str(self.expr)


def as_characteristic(alpha):
    return alpha if isinstance(alpha, Characteristic) else Characteristic(to_nf(alpha))


@dataclass(frozen=True)
class CharacteristicReport:
    residual: NormalForm
    passed: bool


def is_characteristic(alpha, eq):
    alpha = as_characteristic(alpha)
    r = adjoint_residual(eq, alpha.expr)
    return CharacteristicReport(r, r.is_zero())


@dataclass(frozen=True)
class ConservedVector:
    density: NormalForm
    flux: NormalForm
    characteristic: Characteristic

    def __str__(self):
        return f"({self.density}, {self.flux})"


def canonical_cv(alpha, eq):
    """``(alpha u, -alpha a u_x + ((alpha a)_x - alpha b) u)``."""
    if eq.coefficients is None:
        raise EquationError("the canonical conserved vector needs linear coefficients")
    alpha = as_characteristic(alpha)
    a, b, _ = eq.coefficients
    al = alpha.expr
    u = eq.jet_nf()
    ux = eq.jet_nf(0, 1)
    density = al * u
    flux = -al * a * ux + ((al * a).total_diff(eq.x) - al * b) * u
    return ConservedVector(density, flux, alpha)


@dataclass(frozen=True)
class Divergence:
    on_jets: NormalForm
    reduced: NormalForm

    @property
    def vanishes(self):
        return self.reduced.is_zero()


def divergence(cv, eq, constraints=()):
    on = cv.density.total_diff(eq.t) + cv.flux.total_diff(eq.x)
    return Divergence(on, reduce_mod(on, [eq, *constraints]))


def backward_coefficients(n):
    """Coefficients ``c_k`` of ``sum_k c_k tau^k y^(n-2k)`` solving ``a_tau = -a_yy``."""
    cs = [Fraction(1)]
    for k in range(1, n // 2 + 1):
        m = n - 2 * k
        cs.append(-Fraction((m + 2) * (m + 1), k) * cs[-1])
    return cs


def _poly(n, cs, tau, y):
    out = NormalForm()
    for k, c in enumerate(cs):
        out = out + c * NormalForm.atom(tau) ** k * NormalForm.atom(y) ** (n - 2 * k)
    return out


def backward_polynomial(n, tau=TAU, y=Y):
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return _poly(n, backward_coefficients(n), tau, y)


def backward_polynomial_characteristics(p):
    """First ``p`` monic polynomial solutions ``1, y, y^2 - 2tau, ...`` of the backward heat equation."""
    if p < 1:
        raise ValueError("p must be at least 1")
    return [Characteristic(backward_polynomial(n), f"backward polynomial of degree {n}") for n in range(p)]


def transport_characteristic(alpha_heat, T_=None, factor=None):
    """``e^t * (alpha_heat composed with the forward map)`` as an FP characteristic."""
    T_ = T_ or fp_to_heat()
    factor = exp(T) if factor is None else to_nf(factor)
    a = as_characteristic(alpha_heat)
    return Characteristic(factor * substitute(a.expr, T_.fwd), f"transport of {a.expr}")


def generic_identity(eq, name="alpha"):
    """``(D_t rho + D_x sigma) - alpha*(eq residual) - u*(adjoint residual)`` for a generic ``alpha``."""
    alpha = Func(name, (eq.t, eq.x))
    cv = canonical_cv(Characteristic(NormalForm.atom(alpha)), eq)
    on = cv.density.total_diff(eq.t) + cv.flux.total_diff(eq.x)
    return on - NormalForm.atom(alpha) * eq.residual - eq.jet_nf() * adjoint_residual(eq, NormalForm.atom(alpha))


FP_CHARACTERISTICS = (exp(T), exp(2 * NormalForm.atom(T)) * X)
