"""Seeded random expressions in the input grammar."""

import math
import random

import sympy as sp

LEAVES = ["t", "x", "tau", "y", "1", "2", "3", "(1/2)", "(-2/3)"]
JET_LEAVES = ["t", "x", "u", "u_x", "u_xx", "u_t", "exp(t)", "2", "(1/3)"]


def random_expr(rng, depth=3, leaves=LEAVES, fractional=True):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(leaves)
    r = rng.random()
    a = random_expr(rng, depth - 1, leaves, fractional)
    if r < 0.3:
        return f"({a} + {random_expr(rng, depth - 1, leaves, fractional)})"
    if r < 0.45:
        return f"({a} - {random_expr(rng, depth - 1, leaves, fractional)})"
    if r < 0.7:
        return f"{a}*{random_expr(rng, depth - 1, leaves, fractional)}"
    if r < 0.8:
        return f"({a})^{rng.randint(0, 3)}"
    if r < 0.88:
        return f"exp({random_expr(rng, 1, leaves, fractional)})"
    if fractional and r < 0.93:
        return f"{a}*tau^({rng.choice(['1/2', '-1/2', '3/2'])})"
    if fractional and r < 0.97:
        return f"{a}/tau"
    if fractional:
        return f"({a} + ln(tau))"
    return a


def rng_for(seed):
    return random.Random(seed)


def sample_point(rng):
    return {
        "t": rng.uniform(-1, 1),
        "x": rng.uniform(-3, 3),
        "tau": rng.uniform(0.1, 2),
        "y": rng.uniform(-3, 3),
    }


SYMPY_NAMES = {n: sp.Symbol(n, real=True) for n in ("t", "x", "y")}
SYMPY_NAMES["tau"] = sp.Symbol("tau", positive=True)
SYMPY_NAMES["ln"] = sp.log


def to_sympy(text):
    return sp.sympify(text.replace("^", "**"), locals=dict(SYMPY_NAMES))


def sympy_eval(e, point):
    subs = {SYMPY_NAMES[k]: v for k, v in point.items()}
    return float(e.evalf(subs=subs))


def close(a, b, scale=1.0, tol=1e-9):
    return math.isclose(a, b, rel_tol=tol, abs_tol=tol * max(1.0, scale))
