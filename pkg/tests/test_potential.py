import pytest

from fpsym import listings as L
from fpsym.charts import VCHECK, VHAT, WHAT, X, potential_symbol
from fpsym.conslaw import CharacteristicError
from fpsym.jetcalc import SolvedEquation
from fpsym.pdemodel import FOKKER_PLANCK as FP
from fpsym.pdemodel import HEAT
from fpsym.potential import (
    PotentialSystem,
    build,
    build_multi,
    check_compatibility,
    family_constraint,
    is_nontrivial_potential_symmetry,
    potential_equation,
    potential_pair,
    project,
    projected_symmetry,
    singular_locus,
    verify_potential_algebra,
)
from fpsym.symexpr import NonNormalizable, nf
from fpsym.vfield import ChartError, FamilyGenerator, is_symmetry_of_system, parse_field, repair_generator


@pytest.fixture(scope="module")
def p1():
    return build(nf("exp(t)"), FP)


@pytest.fixture(scope="module")
def p2():
    return build(nf("exp(2*t)*x"), FP)


def test_systems_match_printed(p1, p2):
    for ps, printed, v in ((p1, L.VHAT_SYSTEM, VHAT), (p2, L.VCHECK_SYSTEM, VCHECK)):
        assert ps.potential == v
        assert ps.eq_x.rhs == nf(printed[0])
        assert ps.eq_t.rhs == nf(printed[1])
    assert str(p1) == "vhat_x = exp(t)*u; vhat_t = exp(t)*x*u + exp(t)*u_x"


def test_compatibility(p1, p2):
    assert check_compatibility(p1).passed
    assert check_compatibility(p2).passed
    heat = build(nf("y"), HEAT)
    assert check_compatibility(heat).passed


def test_corrupted_system_fails(p1):
    bad_t = SolvedEquation(p1.eq_t.lead, p1.eq_t.rhs + nf("exp(t)*u"), "corrupted")
    bad = PotentialSystem(p1.source, p1.characteristic, p1.potential, p1.eq_x, bad_t)
    r = check_compatibility(bad)
    assert not r.passed and r.residual == nf("-exp(t)*u_x")


@pytest.mark.parametrize("alpha", ["exp(t)", "exp(2*t)*x", "exp(x^2/2)", "x", "1", "exp(-x^2/2)", "exp(t) + x", "exp(3*t)*x^2 - exp(3*t)"])
def test_compatible_iff_characteristic(alpha):
    from fpsym.conslaw import as_characteristic, is_characteristic

    a = as_characteristic(nf(alpha))
    ex, et = potential_pair(a, FP, VHAT)
    ps = PotentialSystem(FP, a, VHAT, ex, et)
    assert check_compatibility(ps).passed == is_characteristic(a, FP).passed


def test_build_rejects_non_characteristic():
    with pytest.raises(CharacteristicError):
        build(nf("x"), FP)


def test_potential_equations(p1, p2):
    e1, e2 = potential_equation(p1), potential_equation(p2)
    assert e1.residual == nf(L.VHAT_EQUATION)
    assert e2.residual == nf(L.VCHECK_EQUATION)
    assert e1.domain == () and e2.domain == ((nf("x"), "!="),)
    assert potential_equation(build(nf("1"), HEAT)).residual == nf("what_tau - what_yy")
    assert build(nf("1"), HEAT).potential == WHAT


def test_vhat_potential_equation_is_fp(p1):
    # the potential of the e^t law obeys the source equation itself
    assert potential_equation(p1).rhs == nf("vhat_xx + x*vhat_x")


def test_singular_locus():
    assert singular_locus(nf("exp(t)")) == ()
    assert singular_locus(nf("exp(2*t)*x")) == ((nf("x"), "!="),)
    with pytest.raises(NonNormalizable):
        singular_locus(nf("exp(t) + x"))
    with pytest.raises(ValueError):
        singular_locus(nf(0))


def test_p1_generators(p1):
    checks = verify_potential_algebra(L.p1_algebra(), p1)
    assert [c.passed for c in checks] == [True, True, True, False, True, True]
    assert checks[3].repair is None


def test_p1_fourth_generator_wide_correction(p1):
    X4 = L.p1_algebra()[3]
    fixed = parse_field("x: exp(t), u: -exp(t)*x*u - vhat, vhat: -exp(t)*x*vhat", L.P1_CHART)
    assert all(r.passed for r in is_symmetry_of_system(fixed, p1))
    diff = fixed - X4
    assert diff[X].is_zero()
    wide = [parse_field(s, L.P1_CHART) for s in ("u: exp(t)*x*vhat", "u: vhat", "vhat: vhat", "vhat: exp(t)*x*vhat")]
    assert repair_generator(X4, wide, p1).field == fixed


def test_p2_generators(p2):
    checks = verify_potential_algebra(L.p2_algebra(), p2)
    assert [c.passed for c in checks] == [False, True, True, True]
    assert checks[0].repair.field == parse_field("t: 1, u: -2*u", L.P2_CHART)
    assert checks[0].residuals[2].is_zero()
    assert checks[0].residuals[1] == nf("-exp(2*t)*x*u")


def test_p1_family(p1):
    from fpsym.charts import fp_function

    gf = fp_function("g")
    fam = parse_field(L.P1_FAMILY, L.P1_CHART)
    constraint = family_constraint(p1, gf)
    assert constraint.rhs == nf("g_xx + x*g_x")
    assert all(r.passed for r in is_symmetry_of_system(fam, p1, [constraint]))


def test_p2_family(p2):
    from fpsym.charts import fp_function

    h = fp_function("h")
    constraint = family_constraint(p2, h)
    printed = parse_field(L.P2_FAMILY, L.P2_CHART)
    assert not all(r.passed for r in is_symmetry_of_system(printed, p2, [constraint]))
    corrected = parse_field("u: exp(-2*t)*x^(-1)*h_x, vcheck: h", L.P2_CHART)
    assert all(r.passed for r in is_symmetry_of_system(corrected, p2, [constraint]))
    assert FamilyGenerator(corrected, h, constraint).instance(nf("1"))[VCHECK] == 1


def test_nontriviality(p1, p2):
    g1, g2 = L.p1_algebra(), L.p2_algebra()
    assert is_nontrivial_potential_symmetry(g1[3], p1)
    assert is_nontrivial_potential_symmetry(g2[2], p2)
    assert not is_nontrivial_potential_symmetry(g1[2], p1)
    assert not is_nontrivial_potential_symmetry(g1[5], p1)
    assert not is_nontrivial_potential_symmetry(g2[0], p2)


def test_projection(p1):
    mixed = parse_field("t: 1, vhat: u", L.P1_CHART)
    with pytest.raises(ChartError):
        project(mixed, (mixed.chart[0], mixed.chart[1], VHAT))
    X5 = L.p1_algebra()[4]
    assert projected_symmetry(X5, p1)[1].passed
    X6 = L.p1_algebra()[5]
    Y, rep = projected_symmetry(X6, p1)
    assert Y.chart == (X6.chart[0], X6.chart[1], VHAT) and rep.passed


def test_projection_of_fourth_generator(p1):
    X4 = L.p1_algebra()[3]
    Y, rep = projected_symmetry(X4, p1)
    assert not rep.passed and rep.residual == nf("-2*exp(t)*vhat_x")
    fixed = parse_field("x: exp(t), u: -exp(t)*x*u - vhat, vhat: -exp(t)*x*vhat", L.P1_CHART)
    assert projected_symmetry(fixed, p1)[1].passed


def test_multi_potential():
    m = build_multi([nf("exp(t)"), nf("exp(2*t)*x")], FP)
    assert m.potentials == (potential_symbol(1), potential_symbol(2))
    assert len(m.equations) == 5 and len(m.pairs()) == 2
    lifted = parse_field("t: 1, u: -u", L.FP_CHART)
    reports = is_symmetry_of_system(lifted, m)
    assert not all(r.passed for r in reports)


def test_multi_potential_errors():
    with pytest.raises(CharacteristicError):
        build_multi([nf("exp(t)"), nf("2*exp(t)")], FP)
    with pytest.raises(ValueError):
        build_multi([], FP)
    with pytest.raises(ValueError):
        build_multi([nf("exp(t)")], FP, [VHAT, VCHECK])


def test_multi_potential_scaling_symmetry():
    m = build_multi([nf("exp(t)"), nf("exp(2*t)*x")], FP)
    chart = (m.source.t, m.source.x, m.source.u) + m.potentials
    scaling = parse_field("u: u, v1: v1, v2: v2", chart)
    assert all(r.passed for r in is_symmetry_of_system(scaling, m))
