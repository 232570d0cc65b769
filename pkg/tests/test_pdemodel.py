import pytest
from hypothesis import given
from hypothesis import strategies as st

from fpsym import listings as L
from fpsym.charts import ALPHA, ALPHAT, EPS, TAU, T, U, W, X, Y
from fpsym.jetcalc import EquationError, make_jet
from fpsym.pdemodel import (
    FOKKER_PLANCK as FP,
    HEAT,
    JointSystem,
    PointTransformation,
    adjoint,
    adjoint_residual,
    apply_to_equation,
    apply_to_system,
    compose,
    extend_trivially,
    fp_to_heat,
    heat_to_fp,
    identity,
    make_linear,
    prolong_to_characteristic,
    t_shift,
    transform_expression,
)
from fpsym.symexpr import NonNormalizable, nf, substitute

from gen import random_expr, rng_for


def test_make_linear_rejects_degenerate():
    with pytest.raises(EquationError):
        make_linear(0, X, 0)


def test_builtin_equations():
    assert str(FP) == "u_t = x*u_x + u_xx"
    assert str(HEAT) == "w_tau = w_yy"
    assert FP.coefficients == (nf(1), nf("x"), nf(0))


def test_adjoints_match_printed():
    assert adjoint(FP).residual == nf(L.FP_ADJOINT)
    assert adjoint(HEAT).residual == nf(L.HEAT_ADJOINT)
    assert adjoint(FP).u == ALPHA and adjoint(HEAT).u == ALPHAT


def test_double_adjoint():
    assert adjoint(adjoint(FP), U) == FP
    assert adjoint(adjoint(HEAT), W) == HEAT
    weird = make_linear("x^2 + 1", "exp(t)", "t*x")
    assert adjoint(adjoint(weird), U) == weird


def test_adjoint_residual_on_expressions():
    assert adjoint_residual(FP, nf("exp(t)")).is_zero()
    assert adjoint_residual(FP, nf("exp(2*t)*x")).is_zero()
    assert adjoint_residual(FP, nf("1")) == nf(-1)


def test_joint_system():
    js = JointSystem.of(FP)
    assert js.equations == (FP, adjoint(FP))


def test_round_trip():
    T_ = fp_to_heat()
    assert T_.is_valid()
    assert all(r.is_zero() for r in T_.round_trip_residuals().values())
    assert heat_to_fp().is_valid()
    assert T_.domain == ((nf("tau"), ">"),)


def test_transformation_printing():
    lines = str(fp_to_heat()).splitlines()
    assert lines[:3] == ["tau = (1/2)*exp(2*t)", "y = exp(t)*x", "w = u"]
    assert lines[-1] == "domain: tau > 0"


def test_forward_and_inverse_equations():
    image = apply_to_equation(FP, fp_to_heat())
    assert image == HEAT and image.rhs == nf("w_yy")
    back = apply_to_equation(HEAT, heat_to_fp())
    assert back == FP
    assert back.domain == ((nf("tau"), ">"),)


def test_identity_is_neutral():
    assert apply_to_equation(FP, identity((T, X, U))) == FP
    assert apply_to_equation(HEAT, identity((TAU, Y, W))) == HEAT


def test_compose_examples():
    T_ = fp_to_heat()
    assert compose(T_, identity((TAU, Y, W))) == T_
    assert compose(identity((T, X, U)), T_).fwd == T_.fwd
    loop = compose(T_, heat_to_fp())
    assert loop.fwd == identity((T, X, U)).fwd
    shifted = compose(t_shift(), T_)
    assert shifted.fwd[TAU] == nf("(1/2)*exp(2*t + 2*eps)")
    assert shifted.is_valid()
    assert apply_to_equation(FP, shifted) == HEAT


def test_compose_chart_mismatch():
    with pytest.raises(ValueError):
        compose(fp_to_heat(), fp_to_heat())


def test_t_shift_is_a_symmetry_map():
    assert apply_to_equation(FP, t_shift()) == FP
    assert apply_to_equation(FP, t_shift(nf(3))) == FP


def test_transformation_validation():
    with pytest.raises(ValueError):
        PointTransformation((T, X, U), (TAU, Y, W), {TAU: nf("t")}, {T: nf("tau"), X: nf("y"), U: nf("w")})
    # time depending on u is not fibre preserving
    with pytest.raises(ValueError):
        PointTransformation((T, X, U), (TAU, Y, W),
                            {TAU: nf("t"), Y: nf("x"), W: nf("u")},
                            {T: nf("tau + w"), X: nf("y"), U: nf("w")})


def test_chain_rule_examples():
    T_ = fp_to_heat()
    assert transform_expression(nf("u_x"), T_) == nf("2^(1/2)*tau^(1/2)*w_y")
    # u_t = 2 tau w_tau + y w_y
    assert transform_expression(nf("u_t"), T_) == nf("2*tau*w_tau + y*w_y")
    assert transform_expression(nf("u_xx"), T_) == nf("2*tau*w_yy")


def test_chain_rule_rejects_functions_of_source():
    with pytest.raises(NonNormalizable):
        transform_expression(nf("f(t,x)*u"), fp_to_heat())


def test_characteristic_prolongation_maps_adjoints():
    P = prolong_to_characteristic(fp_to_heat(), nf("exp(-t)"))
    assert P.is_valid()
    assert apply_to_equation(adjoint(FP), P) == adjoint(HEAT)
    with pytest.raises(NonNormalizable):
        prolong_to_characteristic(fp_to_heat(), nf("1 + x"))
    with pytest.raises(EquationError):
        prolong_to_characteristic(fp_to_heat(), nf(0))


def test_apply_to_system():
    P = prolong_to_characteristic(fp_to_heat(), nf("exp(-t)"))
    leads = [make_jet(W, {TAU: 1}), make_jet(ALPHAT, {TAU: 1})]
    solved = apply_to_system([FP.solved, adjoint(FP).solved], P, leads)
    assert [s.rhs for s in solved] == [nf("w_yy"), nf("-alphat_yy")]


def test_extend_trivially():
    from fpsym.charts import VHAT, WHAT

    E = extend_trivially(fp_to_heat(), [(VHAT, WHAT)])
    assert E.is_valid() and E.fwd[WHAT] == nf("vhat")


def _random_shift(rng):
    k = rng.randint(-3, 3)
    return t_shift(nf(f"{k}*eps + {rng.randint(-2, 2)}"))


@given(st.integers(0, 10**6))
def test_composition_property(seed):
    """Applying a composite equals applying the factors in turn."""
    rng = rng_for(seed)
    A, B = _random_shift(rng), fp_to_heat()
    C = compose(A, B)
    assert C.is_valid()
    assert apply_to_equation(FP, C) == apply_to_equation(apply_to_equation(FP, A), B)
    e = nf(random_expr(rng, 2, ["tau", "y", "w", "2", "(1/3)"], fractional=False))
    assert substitute(e, C.fwd) == substitute(substitute(e, B.fwd), A.fwd)


def test_parameter_symbol_survives():
    assert EPS in nf("eps").free_symbols()
