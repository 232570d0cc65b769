import math
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from fpsym.charts import ALPHA, TAU, T, U, W, X, Y
from fpsym.symexpr import (
    DomainError,
    ExpAtom,
    Func,
    NonNormalizable,
    NormalForm,
    ParseError,
    SubstitutionError,
    Symbol,
    UnboundSymbol,
    UnknownIdentifier,
    Workspace,
    diff,
    eval_numeric,
    exp,
    format,
    is_zero,
    nf,
    normalize,
    parse,
    sqrt,
    substitute,
)

from gen import close, random_expr, rng_for, sample_point, sympy_eval, to_sympy


def N(s):
    return nf(s)


# -- parse -------------------------------------------------------------------


def test_parse_half_exp():
    e = parse("(1/2)*exp(2*t)")
    assert N(e) == Fraction(1, 2) * exp(2 * NormalForm.atom(T))
    assert format(e) == "(1/2)*exp(2*t)"


def test_additive_identity():
    assert N("x + 0") == NormalForm.atom(X)


def test_syntax_error_column():
    with pytest.raises(ParseError) as info:
        parse("x + * y")
    assert info.value.column == 5
    assert "column 5" in str(info.value)


@pytest.mark.parametrize("text", ["(x + 1", "x +", "exp()", "x ^ y", "2 $ 3", "x y"])
def test_malformed_inputs(text):
    with pytest.raises(ParseError):
        parse(text)


def test_division_by_zero_is_diagnosed():
    with pytest.raises(NonNormalizable):
        nf("3/0")
    assert nf("x^0") == 1 and nf("0^0") == 1


def test_strict_workspace_rejects_unknown():
    with pytest.raises(UnknownIdentifier):
        parse("x + zeta", strict=True)
    # lenient mode turns it into a parameter
    assert any(a.name == "zeta" for a in N("x + zeta").free_symbols())


def test_custom_workspace():
    ws = Workspace()
    ws.declare(Symbol("s", "independent"), Symbol("q", "dependent"))
    e = nf(parse("q_ss + s", ws))
    assert "q_ss" in str(e)


def test_jet_suffixes():
    assert str(N("u_tx + u_xt")) == "2*u_tx"
    assert str(N("w_tauy")) == "w_tauy"


def test_function_symbol_suffix():
    a = N("alpha(t,x)")
    assert diff(a, X) == N("alpha_x(t,x)")


def test_round_trip_on_random_strings():
    rng = rng_for(11)
    for _ in range(200):
        e = N(random_expr(rng))
        for style in ("plain",):
            assert N(format(e, style)) == e


def test_unicode_format():
    assert format(N("(1/2)*exp(2*t)"), "unicode") == "(1/2)·e^(2·t)"
    assert format(N("alphat_tau + vhat_x"), "unicode") == "α̃_τ + v̂_x"
    assert format(N("-exp(-x^2/2)*x"), "unicode") == "-e^(-(1/2)·x²)·x"


# -- normalize ------------------------------------------------------------------


def test_exp_cancellation():
    assert N("exp(t)*exp(-t)") == 1


def test_polynomial_cancellation():
    e = N("x*(x-1) - x^2 + x")
    assert e.is_zero() and e.terms == ()


def test_exp_merge_oracle():
    e = N("exp(2*t)*x*exp(-t)")
    (mono, c), = e.terms
    assert c == 1
    atoms = {a for a, _ in mono}
    assert atoms == {ExpAtom(N("t")), X}


def test_exp_ln_rewrite():
    assert N("exp((1/2)*ln(2*tau))") == N("2^(1/2)*tau^(1/2)")
    assert N("exp(0)") == 1


def test_ln_of_sum_is_rejected():
    with pytest.raises(NonNormalizable):
        N("ln(x + 1)")


def test_fractional_power_of_sum_is_rejected():
    with pytest.raises(NonNormalizable):
        N("(x + 1)^(1/2)")


def test_fractional_power_of_negative_constant():
    with pytest.raises(NonNormalizable):
        N("(-2)^(1/2)")


def test_surds_simplify():
    assert N("2^(1/2)*2^(1/2)") == 2
    assert N("8^(1/2)") == N("2*2^(1/2)")
    assert N("sqrt(12)") == N("2*3^(1/2)")


def test_idempotence_1000():
    rng = rng_for(1)
    for _ in range(1000):
        tree = parse(random_expr(rng))
        once = normalize(tree)
        assert normalize(once) == once
        assert hash(normalize(once)) == hash(once)


def test_is_zero_soundness_500():
    rng = rng_for(2)
    checked = 0
    for _ in range(500):
        text = random_expr(rng)
        a = parse(text)
        # tree minus the reparsed printed normal form: zero iff printing and normalization agree
        d = a - parse(format(normalize(a)))
        assert is_zero(d)
        for _ in range(20):
            p = sample_point(rng)
            lhs = eval_numeric(a, p)
            assert close(eval_numeric(d, p), 0.0, scale=abs(lhs))
            checked += 1
    assert checked == 10000


def test_is_zero_examples():
    assert is_zero(N("exp(t) + 0 - exp(t)"))
    assert not is_zero(N("u_x"))
    assert is_zero(N("(y^2 + 2*tau) - y^2 - 2*tau"))


@given(st.integers(0, 10**9))
def test_ring_distributivity(seed):
    rng = rng_for(seed)
    a, b, c = (N(random_expr(rng, 2)) for _ in range(3))
    assert a * (b + c) == a * b + a * c
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a


@given(st.integers(0, 10**9))
def test_diff_is_derivation(seed):
    rng = rng_for(seed)
    a, b = N(random_expr(rng, 2)), N(random_expr(rng, 2))
    for v in (T, X, TAU, Y):
        assert diff(a * b, v) == diff(a, v) * b + a * diff(b, v)


def test_diff_matches_sympy():
    rng = rng_for(3)
    names = {"t": T, "x": X, "tau": TAU, "y": Y}
    for _ in range(60):
        text = random_expr(rng, 3)
        ours = N(text)
        theirs = to_sympy(text)
        for name, sym in names.items():
            d_ours = diff(ours, sym)
            d_theirs = sp.diff(theirs, sp.Symbol(name, positive=True) if name == "tau" else sp.Symbol(name, real=True))
            p = sample_point(rng)
            ref = sympy_eval(d_theirs, p)
            assert close(eval_numeric(d_ours, p), ref, scale=abs(ref))


def test_eval_matches_sympy():
    rng = rng_for(4)
    for _ in range(100):
        text = random_expr(rng, 3)
        p = sample_point(rng)
        ref = sympy_eval(to_sympy(text), p)
        assert close(eval_numeric(N(text), p), ref, scale=abs(ref))


# -- diff ------------------------------------------------------------------------


def test_diff_examples():
    assert diff(N("(1/2)*exp(2*t)"), T) == N("exp(2*t)")
    a = Func("alpha", (T, X))
    assert diff(NormalForm.atom(a), X) == NormalForm.atom(Func("alpha", (T, X), (0, 1)))
    assert diff(N("exp(-x^2/2)"), X) == N("-x*exp(-x^2/2)")


def test_function_symbol_derivatives_commute():
    a = NormalForm.atom(Func("alpha", (T, X)))
    assert diff(diff(a, T), X) == diff(diff(a, X), T)
    assert format(a) == "alpha"


def test_diff_ln_and_powers():
    assert diff(N("ln(tau)"), TAU) == N("tau^(-1)")
    assert diff(N("tau^(1/2)"), TAU) == N("(1/2)*tau^(-1/2)")
    assert diff(N("x^3"), X, times=2) == N("6*x")


# -- substitute --------------------------------------------------------------------


def test_substitute_examples():
    assert substitute(N("w"), {W: N("u")}) == N("u")
    assert substitute(N("alpha_x"), {ALPHA: N("exp(t)")}) == 0
    assert substitute(N("y^2"), {Y: N("exp(t)*x")}) == N("exp(2*t)*x^2")


def test_substitute_is_simultaneous():
    assert substitute(N("x + y"), {X: N("y"), Y: N("x")}) == N("x + y")
    assert substitute(N("x*y^2"), {X: N("y"), Y: N("x")}) == N("y*x^2")


def test_substitute_jets_and_functions():
    assert substitute(N("u_xx + u_t"), {U: N("exp(t)*x^2")}) == N("2*exp(t) + exp(t)*x^2")
    assert substitute(N("f_x"), {"f": N("x^3")}) == N("3*x^2")


def test_substitute_rejects_bare_derivative():
    with pytest.raises(SubstitutionError):
        substitute(N("u_x"), {Func("f", (T, X), (0, 1)): N("x")})


# -- eval -----------------------------------------------------------------------------


def test_eval_examples():
    assert eval_numeric(N("(1/2)*exp(2*t)"), {"t": 0}) == 0.5
    assert eval_numeric(N("exp(-x^2/2)"), {"x": 0}) == 1.0
    assert math.isclose(eval_numeric(N("y/(2*tau)^(1/2)"), {"y": 2, "tau": 0.5}), 2.0)


def test_eval_errors():
    with pytest.raises(UnboundSymbol):
        eval_numeric(N("x + t"), {"x": 1.0})
    with pytest.raises(DomainError):
        eval_numeric(parse("ln(tau)"), {"tau": -1.0})
    with pytest.raises(DomainError):
        eval_numeric(N("tau^(1/2)"), {"tau": -1.0})


def test_format_examples():
    assert format(N("0")) == "0"
    assert format(N("exp(t)")) == "exp(t)"
    assert format(sqrt(2)) == "2^(1/2)"


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        nf(0.5)
