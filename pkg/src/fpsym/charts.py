"""Standard coordinates of the Fokker-Planck and heat charts."""

from .symexpr.atoms import DEPENDENT, INDEPENDENT, PARAMETER, Func, Symbol
from .symexpr.workspace import Workspace

# Fokker-Planck chart
T = Symbol("t", INDEPENDENT)
X = Symbol("x", INDEPENDENT)
U = Symbol("u", DEPENDENT)
ALPHA = Symbol("alpha", DEPENDENT)  # adjoint variable of the joint system
VHAT = Symbol("vhat", DEPENDENT)
VCHECK = Symbol("vcheck", DEPENDENT)
V = Symbol("v", DEPENDENT)

# heat chart; tau > 0 is the domain of the inverse map
TAU = Symbol("tau", INDEPENDENT, positive=True)
Y = Symbol("y", INDEPENDENT)
W = Symbol("w", DEPENDENT)
ALPHAT = Symbol("alphat", DEPENDENT)
WHAT = Symbol("what", DEPENDENT)

C1 = Symbol("c1", PARAMETER)
C2 = Symbol("c2", PARAMETER)
EPS = Symbol("eps", PARAMETER)


def potential_symbol(i):
    return Symbol(f"v{i}", DEPENDENT)


def fp_function(name):
    return Func(name, (T, X))


def heat_function(name):
    return Func(name, (TAU, Y))


def _default():
    ws = Workspace()
    ws.declare(T, X, U, ALPHA, VHAT, VCHECK, V, TAU, Y, W, ALPHAT, WHAT)
    ws.declare(*(potential_symbol(i) for i in range(1, 10)))
    for name in ("f", "g", "h"):
        ws.declare_function(name, (T, X))
    ws.aliases.update({"τ": "tau", "α": "alpha", "α̃": "alphat", "v̂": "vhat", "v̌": "vcheck", "ŵ": "what"})
    return ws


DEFAULT_WORKSPACE = _default()
