import math
from fractions import Fraction

import pytest

from fpsym.charts import C1, TAU, T, U, W, X, Y
from fpsym.pdemodel import FOKKER_PLANCK as FP
from fpsym.pdemodel import HEAT
from fpsym.solutions import (
    SEED,
    SolutionFamily,
    family,
    fp_solution,
    gaussian_kernel,
    heat_coefficients,
    heat_polynomial,
    linear_family,
    map_solution,
    residual_report,
    seed,
    substituted_residual,
)
from fpsym.symexpr import DomainError, eval_numeric, nf


def _closed_form(n):
    return nf(" + ".join(
        f"({Fraction(math.factorial(n), math.factorial(k) * math.factorial(n - 2 * k))})*tau^{k}*y^{n - 2 * k}"
        for k in range(n // 2 + 1)
    ))


@pytest.mark.parametrize("n", range(9))
def test_heat_polynomials(n):
    s = heat_polynomial(n)
    assert s.expr == _closed_form(n)
    assert substituted_residual(s, HEAT).is_zero()


def test_heat_polynomial_bounds():
    with pytest.raises(ValueError):
        heat_polynomial(9)
    assert heat_coefficients(2) == [1, 2]


def test_linear_solution_maps_to_boost():
    m = map_solution(linear_family())
    assert m.expr == nf("c1*exp(t)*x")
    assert substituted_residual(m, FP).is_zero()
    assert m.parameters == [C1]


def test_mapped_examples():
    assert map_solution(heat_polynomial(2)).expr == nf("exp(2*t)*x^2 + exp(2*t)")
    g = map_solution(gaussian_kernel())
    assert g.expr == nf("(2*pi)^(-1/2)*exp(-t)*exp(-x^2/2)")


@pytest.mark.parametrize("spec", ["linear", "gaussian"] + [f"heatpoly:{n}" for n in range(7)])
def test_mapped_families_solve_fp(spec):
    m = map_solution(family(spec))
    r = residual_report(m, FP)
    assert r.symbolic.is_zero()
    assert r.numeric_max < 1e-9 and r.samples == 100


def test_heat_side_reports():
    r = residual_report(gaussian_kernel(), HEAT)
    assert r.symbolic.is_zero() and r.numeric_max < 1e-9


def test_linearity_of_the_map():
    a, b = heat_polynomial(3), heat_polynomial(4)
    s = SolutionFamily(a.expr + 5 * b.expr, a.chart)
    assert map_solution(s).expr == map_solution(a).expr + 5 * map_solution(b).expr
    assert substituted_residual(map_solution(s), FP).is_zero()


def test_non_solution_has_residual():
    bad = fp_solution(nf("x^2"))
    r = residual_report(bad, FP)
    assert r.symbolic == nf("-2 - 2*x^2")
    assert r.numeric_max > 1


def test_gaussian_domain():
    g = gaussian_kernel()
    assert g.domain == ((nf("tau"), ">"),)
    with pytest.raises(DomainError):
        eval_numeric(g.expr, {"tau": -1.0, "y": 0.0})
    assert math.isclose(eval_numeric(g.expr, {"tau": 0.25, "y": 0.0}), 1 / math.sqrt(math.pi))


def test_family_errors():
    for spec in ("heatpoly:x", "nope", "heatpoly:12"):
        with pytest.raises(ValueError):
            family(spec)
    with pytest.raises(ValueError):
        map_solution(fp_solution(nf("x")))
    with pytest.raises(ValueError):
        residual_report(heat_polynomial(1), FP)


def test_seed_environment(monkeypatch):
    monkeypatch.delenv("FPSYM_SEED", raising=False)
    assert seed() == SEED
    monkeypatch.setenv("FPSYM_SEED", "0x10")
    assert seed() == 16


def test_reports_are_seeded():
    m = map_solution(heat_polynomial(5))
    assert residual_report(m, FP, rng_seed=3) == residual_report(m, FP, rng_seed=3)


def test_chart_symbols():
    assert heat_polynomial(1).chart == (TAU, Y, W)
    assert fp_solution(nf("u")).chart == (T, X, U)
