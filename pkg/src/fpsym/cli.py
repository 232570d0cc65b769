"""Command-line front end: ``fpsym verify all --format json`` and friends."""

import argparse
import sys

from . import listings as L
from .conslaw import canonical_cv, divergence, is_characteristic
from .pdemodel import FOKKER_PLANCK, HEAT, apply_to_equation, fp_to_heat, heat_to_fp
from .potential import build, check_compatibility, potential_equation, verify_potential_algebra
from .report import FAIL, PASS, Claim, Report
from .solutions import family, map_solution, residual_report, seed
from .symexpr import SymexprError, to_nf
from .symexpr import parse as parse_expr
from .verification import NUMERIC_TOLERANCE, verify
from .vfield import closure_check, commutator, is_symmetry, parse_basis, pushforward

EQUATIONS = {"fp": FOKKER_PLANCK, "heat": HEAT}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p):
    p.add_argument("--format", choices=("json", "markdown"), default="json")
    p.add_argument("--strict", action="store_true", help="count documented discrepancies as failures")


def build_parser():
    parser = _Parser(prog="fpsym", description="Exact verification of Fokker-Planck and heat equation claims.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run builtin or user-supplied checks")
    vsub = v.add_subparsers(dest="target", required=True, parser_class=_Parser)
    p = vsub.add_parser("all")
    _common(p)
    p = vsub.add_parser("symmetries")
    p.add_argument("--equation", choices=sorted(EQUATIONS))
    p.add_argument("--basis", help="file with one vector field per line")
    _common(p)
    p = vsub.add_parser("conslaws")
    p.add_argument("--equation", choices=sorted(EQUATIONS), default="fp")
    p.add_argument("--characteristic", help="expression to test as a characteristic")
    _common(p)
    p = vsub.add_parser("potentials")
    p.add_argument("--algebra", help="file of generators on the potential chart")
    p.add_argument("--characteristic", default=L.FP_CHARACTERISTICS[0])
    p.add_argument("--equation", choices=sorted(EQUATIONS), default="fp")
    _common(p)

    p = sub.add_parser("potential", help="build a potential system from a characteristic")
    p.add_argument("--characteristic", required=True)
    p.add_argument("--equation", choices=sorted(EQUATIONS), default="fp")
    p.add_argument("--verify-algebra", dest="verify_algebra")
    _common(p)

    p = sub.add_parser("transform", help="map an equation through the point transformation")
    p.add_argument("--equation", choices=sorted(EQUATIONS), default="fp")
    p.add_argument("--inverse", action="store_true", help="map the other equation back onto this chart")
    _common(p)

    p = sub.add_parser("algebra", help="Lie algebra utilities")
    asub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = asub.add_parser("commutators")
    q.add_argument("--basis", required=True, help="file, builtin:g, builtin:gtilde or builtin:gtilde-pushforward")
    _common(q)

    p = sub.add_parser("solutions", help="exact solution families")
    ssub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = ssub.add_parser("map")
    q.add_argument("--family", required=True, help="heatpoly:<n>, gaussian or linear")
    q.add_argument("--to", choices=("fp",), default="fp")
    _common(q)
    return parser


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from None


def _status(ok):
    return PASS if ok else FAIL


def _res(*nfs):
    parts = [str(e) for e in nfs if not e.is_zero()]
    return "; ".join(parts) if parts else "0"


def _expr(text):
    return to_nf(parse_expr(text))


def cmd_verify(args):
    if args.target == "all":
        return verify()
    if args.target == "symmetries":
        if not args.basis:
            report = verify(["symmetries"])
            if args.equation:
                prefix = "g:" if args.equation == "heat" else "gtilde:"
                report = Report([c for c in report.claims if c.id.startswith(prefix)], report.seed)
            return report
        eq = EQUATIONS[args.equation or "fp"]
        claims = []
        for i, X in enumerate(parse_basis(_read(args.basis)), 1):
            r = is_symmetry(X, eq)
            claims.append(Claim(f"basis:{i}", f"{X} is a symmetry of {eq}", "vfield", _status(r.passed),
                                _res(r.residual), f"file:{args.basis}"))
        return Report(claims, seed())
    if args.target == "conslaws":
        if not args.characteristic:
            return verify(["conslaws"])
        eq = EQUATIONS[args.equation]
        alpha = _expr(args.characteristic)
        r = is_characteristic(alpha, eq)
        d = divergence(canonical_cv(alpha, eq), eq)
        claims = [
            Claim("characteristic:user", f"{alpha} solves the adjoint of {eq}", "conslaw", _status(r.passed),
                  _res(r.residual), "user"),
            Claim("divergence:user", f"canonical conserved vector of {alpha} is conserved", "conslaw",
                  _status(d.vanishes), _res(d.reduced), "user"),
        ]
        return Report(claims, seed())
    # potentials
    if not args.algebra:
        return verify(["potentials"])
    return _potential_report(args.characteristic, args.equation, args.algebra)


def _potential_report(characteristic, equation, algebra):
    eq = EQUATIONS[equation]
    alpha = _expr(characteristic)
    ar = is_characteristic(alpha, eq)
    if not ar.passed:
        claim = Claim("characteristic:user", f"{alpha} solves the adjoint of {eq}", "conslaw", FAIL,
                      _res(ar.residual), "user", "no potential system without a characteristic")
        return Report([claim], seed())
    ps = build(alpha, eq)
    comp = check_compatibility(ps)
    claims = [Claim("compatibility", f"potential system {ps}", "potential", _status(comp.passed),
                    _res(comp.residual), "user")]
    artifacts = {"potential system": str(ps)}
    try:
        peq = potential_equation(ps)
        artifacts["potential equation"] = str(peq) + (" on x != 0" if peq.domain else "")
    except SymexprError as err:
        artifacts["potential equation"] = f"not available: {err}"
    if algebra:
        gens = parse_basis(_read(algebra), ps.chart)
        for i, check in enumerate(verify_potential_algebra(gens, ps), 1):
            c = Claim(f"generator:{i}", f"{check.field} on the potential system", "potential",
                      _status(check.passed), _res(*check.residuals), f"file:{algebra}")
            if check.repair is not None:
                c.notes = f"repairable within the exp(k t) z d_z ansatz: {check.repair.field}"
            claims.append(c)
    return Report(claims, seed(), artifacts)


def cmd_potential(args):
    return _potential_report(args.characteristic, args.equation, args.verify_algebra)


def cmd_transform(args):
    named = EQUATIONS[args.equation]
    other = HEAT if named is FOKKER_PLANCK else FOKKER_PLANCK
    eq, expected = (other, named) if args.inverse else (named, other)
    T_ = fp_to_heat() if eq is FOKKER_PLANCK else heat_to_fp()
    image = apply_to_equation(eq, T_)
    ok = image == expected
    claim = Claim("transform", f"{eq} maps to {image}", "pdemodel", _status(ok),
                  _res(image.rhs - expected.rhs) if image.u == expected.u else str(image), "transformation")
    dom = "; ".join(f"{e} {rel} 0" for e, rel in image.domain)
    artifacts = {"transformation": str(T_), "image": str(image) + (f" on {dom}" if dom else "")}
    return Report([claim], seed(), artifacts)


def _builtin_basis(name):
    if name == "builtin:g":
        return L.heat_algebra()
    if name == "builtin:gtilde":
        return L.fp_algebra()
    if name == "builtin:gtilde-pushforward":
        return [pushforward(X, heat_to_fp()) for X in L.heat_algebra()]
    raise UsageError(f"unknown builtin basis {name!r}")


def cmd_algebra(args):
    gens = _builtin_basis(args.basis) if args.basis.startswith("builtin:") else parse_basis(_read(args.basis))
    rep = closure_check(gens)
    claims = []
    for (i, j), cs in sorted(rep.constants.items()):
        terms = [f"{c}*X{k + 1}" if c != 1 else f"X{k + 1}" for k, c in enumerate(cs) if c]
        claims.append(Claim(f"bracket:{i + 1}:{j + 1}", f"[X{i + 1}, X{j + 1}] = {' + '.join(terms) or '0'}",
                            "vfield", PASS, "0", args.basis))
    for i, j in rep.unresolved:
        br = commutator(gens[i], gens[j])
        claims.append(Claim(f"bracket:{i + 1}:{j + 1}", f"[X{i + 1}, X{j + 1}] = {br} is not in the span",
                            "vfield", FAIL, str(br), args.basis))
    artifacts = {"basis": "\n".join(f"X{k + 1} = {X}" for k, X in enumerate(gens))}
    return Report(claims, seed(), artifacts)


def cmd_solutions(args):
    try:
        s = family(args.family)
    except ValueError as err:
        raise UsageError(str(err)) from None
    m = map_solution(s)
    r = residual_report(m, FOKKER_PLANCK)
    ok = r.symbolic.is_zero() and r.numeric_max < NUMERIC_TOLERANCE
    claim = Claim(f"solution:{args.family}", f"{s} maps to {m}", "solutions", _status(ok),
                  _res(r.symbolic) if not r.symbolic.is_zero() or ok else f"numeric max {r.numeric_max:.3e}",
                  "solution", f"numeric max {r.numeric_max:.3e} over {r.samples} points")
    return Report([claim], seed(), {"heat solution": str(s), "fp solution": str(m)})


COMMANDS = {
    "verify": cmd_verify,
    "potential": cmd_potential,
    "transform": cmd_transform,
    "algebra": cmd_algebra,
    "solutions": cmd_solutions,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        report = COMMANDS[args.command](args)
    except (UsageError, SymexprError, ValueError) as err:
        print(f"fpsym: error: {err}", file=sys.stderr)
        return 2
    sys.stdout.write(report.render(args.format, args.strict))
    return report.exit_code(args.strict)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
