"""Point vector fields: prolongation, symmetry checks, pushforward,
commutators, closure of finite bases and finite-ansatz repair."""

from dataclasses import dataclass, field
from itertools import combinations

from . import linsolve
from .charts import DEFAULT_WORKSPACE, TAU, T, U, W, X, Y
from .jetcalc import (
    DEFAULT_MAX_ORDER,
    EvolutionEquation,
    JetOrderError,
    SolvedEquation,
    jet_parts,
    make_jet,
    reduce_mod,
)
from .symexpr import (
    DEPENDENT,
    INDEPENDENT,
    Func,
    Jet,
    NormalForm,
    ParseError,
    Symbol,
    ZERO,
    format_atom,
    parse,
    substitute,
    to_nf,
)


class ChartError(ValueError):
    pass


def _multi_indices(variables, k):
    """All count maps over ``variables`` with total order 1..k."""
    out = []

    def rec(i, left, acc):
        if i == len(variables):
            if sum(acc.values()):
                out.append(dict(acc))
            return
        for c in range(left + 1):
            acc[variables[i]] = c
            rec(i + 1, left - c, acc)
        del acc[variables[i]]

    rec(0, k, {})
    out.sort(key=lambda m: (sum(m.values()), [-m[v] for v in variables]))
    return out


@dataclass(frozen=True)
class VectorField:
    """``sum_z coeffs[z] * d/dz`` on ``chart`` (independents first)."""

    chart: tuple
    coeffs: tuple
    name: str = field(default="", compare=False)

    def __init__(self, chart, coeffs=None, name=""):
        chart = tuple(chart)
        coeffs = dict(coeffs or {})
        for z in coeffs:
            if z not in chart:
                raise ChartError(f"{format_atom(z)} is not a coordinate of the chart")
        clean = {}
        for z in chart:
            c = to_nf(coeffs.get(z, 0))
            for a in c.atoms():
                if isinstance(a, Jet) or (isinstance(a, Symbol) and a.kind == DEPENDENT and a not in chart):
                    raise ValueError(f"coefficient of d/d{format_atom(z)} is not a point function: {c}")
            clean[z] = c
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "coeffs", tuple((z, clean[z]) for z in chart))
        object.__setattr__(self, "name", name)

    def coefficient(self, z):
        return dict(self.coeffs).get(z, ZERO)

    def __getitem__(self, z):
        return self.coefficient(z)

    @property
    def independents(self):
        return tuple(z for z in self.chart if z.kind == INDEPENDENT)

    @property
    def dependents(self):
        return tuple(z for z in self.chart if z.kind == DEPENDENT)

    def is_zero(self):
        return all(c.is_zero() for _, c in self.coeffs)

    def act(self, e):
        """Directional derivative of a point function."""
        e = to_nf(e)
        out = ZERO
        for z, c in self.coeffs:
            if not c.is_zero():
                out = out + c * e.diff(z)
        return out

    def extend(self, chart):
        """Same field on a larger chart (new coordinates get zero coefficients)."""
        chart = tuple(chart)
        missing = [z for z in self.chart if z not in chart]
        if missing:
            raise ChartError(f"chart lacks {', '.join(format_atom(z) for z in missing)}")
        return VectorField(chart, dict(self.coeffs), self.name)

    def _binary(self, other, op):
        chart = _union_chart(self.chart, other.chart)
        a, b = self.extend(chart), other.extend(chart)
        return VectorField(chart, {z: op(a[z], b[z]) for z in chart})

    def __add__(self, other):
        return self._binary(other, lambda p, q: p + q)

    def __sub__(self, other):
        return self._binary(other, lambda p, q: p - q)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, k):
        k = to_nf(k)
        return VectorField(self.chart, {z: k * c for z, c in self.coeffs}, self.name)

    def __rmul__(self, k):
        return self.scale(k)

    def depends_on(self, symbol):
        return any(not c.diff(symbol).is_zero() for _, c in self.coeffs)

    def to_line(self, style="plain"):
        from .symexpr import format as fmt

        return ", ".join(f"{format_atom(z, style)}: {fmt(c, style)}" for z, c in self.coeffs)

    def operator(self, style="plain"):
        """Operator notation such as ``exp(-t)*D_x``."""
        from .symexpr import format as fmt

        d, dot = ("∂", "·") if style == "unicode" else ("D", "*")
        parts = []
        for z, c in self.coeffs:
            if c.is_zero():
                continue
            name = format_atom(z, style)
            if c == 1:
                parts.append(f"{d}_{name}")
            elif c == -1:
                parts.append(f"-{d}_{name}")
            elif len(c.terms) == 1:
                parts.append(f"{fmt(c, style)}{dot}{d}_{name}")
            else:
                parts.append(f"({fmt(c, style)}){dot}{d}_{name}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __str__(self):
        return self.operator()


def _union_chart(a, b):
    seen = list(a)
    for z in b:
        if z not in seen:
            seen.append(z)
    ind = [z for z in seen if z.kind == INDEPENDENT]
    dep = [z for z in seen if z.kind != INDEPENDENT]
    return tuple(ind + dep)


def zero_field(chart):
    return VectorField(chart, {})


# -- text format --------------------------------------------------------------


def _split_top_level(text):
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p for p in parts if p.strip()]


_FP_NAMES = {"t", "x"}
_HEAT_NAMES = {"tau", "y"}


def parse_field(text, chart=None, workspace=None, name=""):
    """Parse ``"t: exp(-2*t), x: -exp(-2*t)*x, u: 0"``."""
    ws = workspace or DEFAULT_WORKSPACE
    coeffs = {}
    for part in _split_top_level(text):
        if ":" not in part:
            raise ParseError(f"expected 'coordinate: expression' in {part.strip()!r}", 1)
        key, expr = part.split(":", 1)
        sym = ws.resolve(key.strip())
        if not isinstance(sym, Symbol) or sym.kind not in (INDEPENDENT, DEPENDENT):
            raise ParseError(f"{key.strip()!r} is not a coordinate", 1)
        if sym in coeffs:
            raise ParseError(f"duplicate coordinate {key.strip()!r}", 1)
        coeffs[sym] = to_nf(parse(expr, ws))
    if chart is None:
        chart = infer_chart(coeffs)
    return VectorField(chart, coeffs, name)


def infer_chart(coeffs):
    names = {z.name for z in coeffs}
    for c in coeffs.values():
        names |= {a.name for a in c.free_symbols() if isinstance(a, Symbol)}
    heat = bool(names & _HEAT_NAMES) or any(z in (W,) for z in coeffs)
    ind = (TAU, Y) if heat and not names & _FP_NAMES else (T, X)
    deps = [z for z in coeffs if z.kind == DEPENDENT]
    for c in coeffs.values():
        for a in c.free_symbols():
            if isinstance(a, Symbol) and a.kind == DEPENDENT and a not in deps:
                deps.append(a)
    if not deps:
        deps = [W if ind == (TAU, Y) else U]
    return ind + tuple(deps)


def parse_basis(text, chart=None, workspace=None):
    """One field per nonblank line; ``#`` starts a comment."""
    fields = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            fields.append(parse_field(line, chart, workspace, name=f"line {lineno}"))
    if chart is None and fields:
        full = fields[0].chart
        for f in fields[1:]:
            full = _union_chart(full, f.chart)
        fields = [f.extend(full) for f in fields]
    return fields


# -- prolongation -------------------------------------------------------------


@dataclass(frozen=True)
class ProlongedVectorField:
    base: VectorField
    order: int
    jets: tuple  # ((atom, coefficient), ...) for dependents and their jets

    @property
    def jet_map(self):
        return dict(self.jets)

    def coefficient(self, atom):
        return self.jet_map.get(atom, ZERO)

    def apply(self, e):
        return apply(self, e)


def _characteristic(X, u):
    q = X[u]
    for xi in X.independents:
        q = q - X[xi] * NormalForm.atom(make_jet(u, {xi: 1}))
    return q


def prolong(X, k=2):
    """Jet coefficients ``phi^J = D_J(Q) + sum_i xi_i u_{J+i}`` up to order ``k``."""
    if k > DEFAULT_MAX_ORDER * 2:
        raise JetOrderError(f"prolongation order {k} exceeds the hard limit")
    ind = X.independents
    jets = []
    for u in X.dependents:
        jets.append((u, X[u]))
        q = _characteristic(X, u)
        dq = {(): q}
        for counts in _multi_indices(list(ind), k):
            key = tuple(counts[v] for v in ind)
            # D_J Q from a lower index, reusing the cache
            v = next(v for v in ind if counts[v])
            lower = dict(counts)
            lower[v] -= 1
            lkey = tuple(lower[w] for w in ind)
            if lkey == tuple(0 for _ in ind):
                lkey = ()
            dq[key] = dq[lkey].total_diff(v)
            coeff = dq[key]
            for xi in ind:
                bumped = dict(counts)
                bumped[xi] += 1
                coeff = coeff + X[xi] * NormalForm.atom(make_jet(u, bumped))
            jets.append((make_jet(u, counts), coeff))
    return ProlongedVectorField(X, k, tuple(jets))


def prolong_direct(X, k=2):
    """Oracle: ``phi^{J+i} = D_i phi^J - sum_j D_i(xi_j) u_{J+j}``."""
    ind = X.independents
    jets = []
    for u in X.dependents:
        table = {(): X[u]}
        jets.append((u, X[u]))
        for counts in _multi_indices(list(ind), k):
            v = next(v for v in ind if counts[v])
            lower = dict(counts)
            lower[v] -= 1
            lkey = tuple(lower[w] for w in ind) if any(lower.values()) else ()
            coeff = table[lkey].total_diff(v)
            for xj in ind:
                bumped = dict(lower)
                bumped[xj] += 1
                coeff = coeff - X[xj].total_diff(v) * NormalForm.atom(make_jet(u, bumped))
            table[tuple(counts[w] for w in ind)] = coeff
            jets.append((make_jet(u, counts), coeff))
    return ProlongedVectorField(X, k, tuple(jets))


def apply(PX, e):
    """``sum over base and jet coordinates of coefficient * d e / d coordinate``."""
    e = to_nf(e)
    X = PX.base
    deps = set(X.dependents)
    jm = PX.jet_map
    out = ZERO
    for z in X.independents:
        c = X[z]
        if not c.is_zero():
            out = out + c * e.diff(z)
    for a in e.atoms():
        parts = jet_parts(a)
        if parts is None or isinstance(a, Func) or parts[0] not in deps:
            continue
        if any(v not in X.independents for v in parts[1]):
            raise ChartError(f"jet {format_atom(a)} is not on the field's chart")
        if a not in jm:
            raise JetOrderError(f"{format_atom(a)} exceeds the prolongation order {PX.order}")
        c = jm[a]
        if not c.is_zero():
            out = out + c * e.diff(a)
    return out


# -- symmetry checks ----------------------------------------------------------


@dataclass(frozen=True)
class SymmetryReport:
    residual: NormalForm
    passed: bool
    equation: str = ""

    def __bool__(self):
        return self.passed


def _order_of(eq):
    rhs = eq.rhs
    best = 1
    for a in rhs.atoms():
        parts = jet_parts(a)
        if parts:
            best = max(best, sum(parts[1].values()))
    return best


def is_symmetry(X, eq, constraints=()):
    """Residual of the prolonged field on ``u_t - rhs``, reduced on solutions.

    ``constraints`` are equations for function symbols appearing in ``X``
    (e.g. ``f_t = f_xx + x f_x``), used in the same reduction.
    """
    if tuple(X.independents) != tuple(eq.independents):
        raise ChartError("field and equation live on different charts")
    if eq.u not in X.chart:
        X = X.extend(X.chart + (eq.u,))
    PX = prolong(X, _order_of(eq) + 1)
    res = apply(PX, eq.residual)
    eqs = [eq.solved] + [c.solved if isinstance(c, EvolutionEquation) else c for c in constraints]
    red = reduce_mod(res, eqs)
    return SymmetryReport(red, red.is_zero(), eq.name)


def system_equations(system):
    """Solved equations (priority order) and independents of a system-like value."""
    if hasattr(system, "equations") and hasattr(system, "independents"):
        eqs = list(system.equations)
        ind = tuple(system.independents)
    else:
        eqs = list(system)
        ind = None
    solved = []
    for e in eqs:
        if isinstance(e, EvolutionEquation):
            if ind is None:
                ind = e.independents
            elif tuple(ind) != e.independents:
                raise ChartError("equations of the system live on different charts")
            solved.append(e.solved)
        elif isinstance(e, SolvedEquation):
            solved.append(e)
        else:
            raise TypeError(f"not an equation: {e!r}")
    return solved, ind


def is_symmetry_of_system(X, system, constraints=()):
    """One report per equation, each reduced modulo the whole system."""
    solved, ind = system_equations(system)
    if ind is not None and tuple(X.independents) != tuple(ind):
        raise ChartError("field and system live on different charts")
    chart = X.chart
    for s in solved:
        if s.base not in chart:
            chart = chart + (s.base,)
    X = X.extend(chart)
    order = max(max(sum(s.lead_counts.values()), _order_of(s)) for s in solved) + 1 if solved else 1
    PX = prolong(X, order)
    rules = solved + [c.solved if isinstance(c, EvolutionEquation) else c for c in constraints]
    reports = []
    for s in solved:
        red = reduce_mod(apply(PX, s.residual), rules)
        reports.append(SymmetryReport(red, red.is_zero(), s.label or str(s)))
    return reports


def residual_vector(X, target, constraints=()):
    """Residuals as one sparse rational vector (tagged by equation index)."""
    if isinstance(target, EvolutionEquation):
        reports = [is_symmetry(X, target, constraints)]
    else:
        reports = is_symmetry_of_system(X, target, constraints)
    return linsolve.add_vectors(*(linsolve.nf_vector(r.residual, i) for i, r in enumerate(reports))), reports


def passes(X, target, constraints=()):
    _, reports = residual_vector(X, target, constraints)
    return all(r.passed for r in reports)


# -- pushforward and commutators ----------------------------------------------


def pushforward(X, T_):
    """Coefficient of each target ``z`` is ``X(forward_z)`` in target coordinates."""
    src = set(T_.source)
    for z, c in X.coeffs:
        if z not in src and not c.is_zero():
            raise ChartError(f"{format_atom(z)} is not a source coordinate of the transformation")
    inv = T_.inv
    coeffs = {}
    for z, fz in T_.forward:
        coeffs[z] = substitute(X.act(fz), inv)
    name = f"{X.name} pushed forward" if X.name else ""
    return VectorField(T_.target, coeffs, name)


def commutator(A, B):
    chart = _union_chart(A.chart, B.chart)
    A, B = A.extend(chart), B.extend(chart)
    return VectorField(chart, {z: A.act(B[z]) - B.act(A[z]) for z in chart})


def field_vector(X):
    return linsolve.add_vectors(*(linsolve.nf_vector(c, z) for z, c in X.coeffs))


def express_in_basis(X, basis):
    """Rational coordinates of ``X`` in ``basis``, or ``None`` when not in the span."""
    return linsolve.solve([field_vector(B) for B in basis], field_vector(X))


# -- bases ---------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyGenerator:
    """A generator depending on an arbitrary function constrained by an equation."""

    field: VectorField
    function: Func
    constraint: EvolutionEquation

    def instance(self, solution):
        """Specialize the function symbol to a concrete solution."""
        sol = to_nf(solution)
        coeffs = {z: substitute(v, {self.function.name: sol}) for z, v in self.field.coeffs}
        return VectorField(self.field.chart, coeffs, self.field.name)


@dataclass(frozen=True)
class AlgebraBasis:
    generators: tuple
    family: FamilyGenerator = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __getitem__(self, i):
        return self.generators[i]

    def is_independent(self):
        return linsolve.rank([field_vector(g) for g in self.generators]) == len(self.generators)


@dataclass(frozen=True)
class ClosureReport:
    constants: dict  # (i, j) -> list of Fractions
    unresolved: tuple

    @property
    def closed(self):
        return not self.unresolved

    def bracket_string(self, i, j, names=None):
        names = names or [f"X{k + 1}" for k in range(len(self.constants.get((i, j), [])))]
        cs = self.constants.get((i, j))
        if cs is None:
            return "unresolved"
        parts = []
        for c, n in zip(cs, names):
            if c:
                parts.append(f"{c}*{n}" if c != 1 else n)
        return " + ".join(parts) if parts else "0"


def closure_check(basis):
    gens = list(basis)
    chart = gens[0].chart if gens else ()
    for g in gens[1:]:
        chart = _union_chart(chart, g.chart)
    gens = [g.extend(chart) for g in gens]
    vecs = [field_vector(g) for g in gens]
    constants, unresolved = {}, []
    for i, j in combinations(range(len(gens)), 2):
        br = commutator(gens[i], gens[j])
        sol = linsolve.solve(vecs, field_vector(br))
        if sol is None:
            unresolved.append((i, j))
        else:
            constants[(i, j)] = sol
    return ClosureReport(constants, tuple(unresolved))


def jacobi(A, B, C):
    return commutator(commutator(A, B), C) + commutator(commutator(B, C), A) + commutator(commutator(C, A), B)


# -- repair ---------------------------------------------------------------------


@dataclass(frozen=True)
class Repair:
    field: VectorField
    coefficients: tuple  # ((ansatz index, Fraction), ...)
    terms: tuple  # ansatz fields actually used

    def added(self):
        out = None
        for (_, lam), A in zip(self.coefficients, self.terms):
            if lam:
                out = A.scale(lam) if out is None else out + A.scale(lam)
        return out


def repair_generator(X, ansatz, target, constraints=()):
    """Rational ``lambda`` with ``X + sum lambda_i A_i`` a symmetry, or ``None``.

    The symmetry residual is linear in the field, so this is one exact solve.
    """
    ansatz = list(ansatz)
    chart = X.chart
    for A in ansatz:
        chart = _union_chart(chart, A.chart)
    X = X.extend(chart)
    ansatz = [A.extend(chart) for A in ansatz]
    rx, _ = residual_vector(X, target, constraints)
    cols = [residual_vector(A, target, constraints)[0] for A in ansatz]
    return _finish(X, ansatz, list(range(len(ansatz))), cols, rx, target, constraints)


def _finish(X, ansatz, idx, cols, rx, target, constraints):
    sol = linsolve.solve(cols, {k: -c for k, c in rx.items()})
    if sol is None:
        return None
    fixed = X
    for lam, A in zip(sol, ansatz):
        if lam:
            fixed = fixed + A.scale(lam)
    fixed = VectorField(fixed.chart, dict(fixed.coeffs), X.name)
    if not passes(fixed, target, constraints):  # pragma: no cover - linearity guard
        raise AssertionError("repaired field does not verify")
    return Repair(fixed, tuple(zip(idx, sol)), tuple(ansatz))


def minimal_repair(X, pool, target, max_terms=2, constraints=()):
    """Smallest subset of ``pool`` (up to ``max_terms`` fields) that repairs ``X``."""
    pool = list(pool)
    chart = X.chart
    for A in pool:
        chart = _union_chart(chart, A.chart)
    X = X.extend(chart)
    pool = [A.extend(chart) for A in pool]
    rx, _ = residual_vector(X, target, constraints)
    if not rx:
        return Repair(X, (), ())
    cols = [residual_vector(A, target, constraints)[0] for A in pool]
    for size in range(1, max_terms + 1):
        for idx in combinations(range(len(pool)), size):
            sub = [cols[i] for i in idx]
            sol = linsolve.solve(sub, {k: -c for k, c in rx.items()})
            if sol is not None and all(sol):
                return _finish(X, [pool[i] for i in idx], list(idx), sub, rx, target, constraints)
    return None


def scaling_pool(chart, ks=(-2, -1, 0, 1, 2), t=T):
    """``{exp(k t) z d_z}`` for every dependent ``z`` of ``chart``."""
    from .symexpr import exp

    pool = []
    for z in chart:
        if z.kind != DEPENDENT:
            continue
        for k in ks:
            pool.append(VectorField(chart, {z: exp(k * NormalForm.atom(t)) * z}))
    return pool
