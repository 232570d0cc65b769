"""Builtin claims: every published formula is recomputed and compared."""

from . import charts as C
from . import listings as L
from .conslaw import (
    backward_polynomial_characteristics,
    canonical_cv,
    divergence,
    generic_identity,
    is_characteristic,
    transport_characteristic,
)
from .pdemodel import (
    FOKKER_PLANCK,
    HEAT,
    adjoint,
    apply_to_equation,
    apply_to_system,
    extend_trivially,
    fp_to_heat,
    heat_to_fp,
    prolong_to_characteristic,
)
from .potential import (
    build,
    build_multi,
    check_compatibility,
    family_constraint,
    is_nontrivial_potential_symmetry,
    potential_equation,
    project,
    verify_potential_algebra,
)
from .report import FAIL, PASS, UNRESOLVED, Claim, Report
from .solutions import family, map_solution, residual_report, seed
from .symexpr import NormalForm, exp, to_nf
from .symexpr import parse as _parse
from .vfield import (
    ChartError,
    VectorField,
    closure_check,
    commutator,
    is_symmetry,
    is_symmetry_of_system,
    jacobi,
    minimal_repair,
    parse_field,
    pushforward,
    repair_generator,
    scaling_pool,
)

NUMERIC_TOLERANCE = 1e-9


def parse(text):
    return to_nf(_parse(text))


def _status(ok):
    return PASS if ok else FAIL


def _res(*nfs):
    parts = [str(e) for e in nfs if not NormalForm.is_zero(e)]
    return "; ".join(parts) if parts else "0"


# -- pdemodel -------------------------------------------------------------------


def pdemodel_claims():
    T_ = fp_to_heat()
    out = []
    fwd = apply_to_equation(FOKKER_PLANCK, T_)
    out.append(Claim("fp-to-heat", "the forward map sends the FP equation to the heat equation", "pdemodel",
                     _status(fwd == HEAT), _res(fwd.rhs - HEAT.rhs), "transformation:forward",
                     f"image: {fwd}"))
    back = apply_to_equation(HEAT, heat_to_fp())
    ok = back == FOKKER_PLANCK and back.domain == ((NormalForm.atom(C.TAU), ">"),)
    out.append(Claim("heat-to-fp", "the inverse map sends the heat equation back to FP, on tau > 0", "pdemodel",
                     _status(ok), _res(back.rhs - FOKKER_PLANCK.rhs), "transformation:inverse",
                     f"image: {back}; domain tau > 0"))
    rt = T_.round_trip_residuals()
    out.append(Claim("transformation-round-trip", "forward and inverse maps compose to the identity", "pdemodel",
                     _status(T_.is_valid()), _res(*rt.values()), "transformation:inverse"))
    fa = adjoint(FOKKER_PLANCK)
    exp_fa = parse(L.FP_ADJOINT)
    out.append(Claim("adjoint-fp", "adjoint of the FP equation", "pdemodel",
                     _status(fa.residual == exp_fa), _res(fa.residual - exp_fa), "equation:adjoint-fp", str(fa)))
    ha = adjoint(HEAT)
    exp_ha = parse(L.HEAT_ADJOINT)
    out.append(Claim("adjoint-heat", "adjoint of the heat equation is the backward heat equation", "pdemodel",
                     _status(ha.residual == exp_ha), _res(ha.residual - exp_ha), "equation:backward-heat", str(ha)))
    P = prolong_to_characteristic(T_, exp(-NormalForm.atom(C.T)))
    mapped = apply_to_equation(fa, P)
    out.append(Claim("joint-system-map", "alphat = exp(-t)*alpha maps the FP adjoint to the backward heat equation",
                     "pdemodel", _status(mapped == ha), _res(mapped.rhs - ha.rhs), "rule:alpha-prolongation",
                     str(mapped)))
    return out


# -- vfield -----------------------------------------------------------------------


def _family_claim(cid, fam, eq, anchor):
    r = is_symmetry(fam.field, eq, [fam.constraint])
    return Claim(cid, f"{fam.field} with {fam.constraint}", "vfield", _status(r.passed), _res(r.residual), anchor)


def vfield_claims():
    out = []
    heat = L.heat_algebra()
    for i, X in enumerate(heat, 1):
        r = is_symmetry(X, HEAT)
        out.append(Claim(f"g:{i}", f"{X} is a symmetry of the heat equation", "vfield", _status(r.passed),
                         _res(r.residual), f"listing:g[{i}]"))
    out.append(_family_claim("g:family", L.heat_family(), HEAT, "listing:g[f]"))

    inv = heat_to_fp()
    images = [pushforward(X, inv) for X in heat]
    printed = L.fp_algebra()
    pool = scaling_pool(L.FP_CHART)
    for i, X in enumerate(printed, 1):
        r = is_symmetry(X, FOKKER_PLANCK)
        j = L.HEAT_PREIMAGE[i - 1]
        image = images[j]
        same = image == X
        note = f"pushforward of g[{j + 1}] is {image}" + ("" if same else " (differs from the printed entry)")
        claim = Claim(f"gtilde:{i}", f"{X} is a symmetry of the FP equation", "vfield", _status(r.passed),
                      _res(r.residual), f"listing:gtilde[{i}]", note)
        if not r.passed:
            fix = minimal_repair(X, pool, FOKKER_PLANCK, max_terms=1)
            claim.discrepancy = True
            if fix is not None:
                (k, lam), = fix.coefficients
                claim.repair = str(fix.field)
                claim.repair_verified = is_symmetry(fix.field, FOKKER_PLANCK).passed
                claim.notes += f"; one-term repair: {lam} * ({pool[k]}); repaired field equals the pushforward: {fix.field == image}"
            else:
                claim.status = UNRESOLVED
        out.append(claim)
    out.append(_family_claim("gtilde:family", L.fp_family(), FOKKER_PLANCK, "listing:gtilde[f]"))

    for j, (X, Y) in enumerate(zip(heat, images), 1):
        r = is_symmetry(Y, FOKKER_PLANCK)
        out.append(Claim(f"pushforward:{j}", f"pushforward of {X} is {Y}, a symmetry of FP", "vfield",
                         _status(r.passed), _res(r.residual), "pushforward:inverse-map"))

    for cid, basis, anchor in (("closure:g", heat, "listing:g"), ("closure:gtilde-pushforward", images, "listing:gtilde")):
        rep = closure_check(basis)
        triples = [(a, b, c) for a in range(6) for b in range(a + 1, 6) for c in range(b + 1, 6)]
        bad = [t for t in triples if not jacobi(*(basis[k] for k in t)).is_zero()]
        ok = rep.closed and not bad
        out.append(Claim(cid, "finite part closes with rational structure constants; Jacobi identity on all triples",
                         "vfield", _status(ok), "0" if ok else f"unresolved pairs {list(rep.unresolved)}; Jacobi failures {bad}",
                         anchor, _structure_note(rep)))
    morph = all(pushforward(commutator(a, b), inv) == commutator(pushforward(a, inv), pushforward(b, inv))
                for k, a in enumerate(heat) for b in heat[k + 1:])
    out.append(Claim("pushforward-morphism", "pushforward commutes with brackets on the finite part of g", "vfield",
                     _status(morph), "0" if morph else "bracket mismatch", "pushforward:inverse-map"))
    return out


def _structure_note(rep):
    parts = []
    for (i, j), cs in sorted(rep.constants.items()):
        terms = [f"{c}*X{k + 1}" if c != 1 else f"X{k + 1}" for k, c in enumerate(cs) if c]
        if terms:
            parts.append(f"[X{i + 1},X{j + 1}] = {' + '.join(terms)}")
    return "; ".join(parts) if parts else "abelian"


# -- conslaw ------------------------------------------------------------------------


def conslaw_claims():
    out = []
    for k, s in enumerate(L.FP_CHARACTERISTICS, 1):
        r = is_characteristic(parse(s), FOKKER_PLANCK)
        out.append(Claim(f"characteristic:fp:{k}", f"{s} solves the FP adjoint equation", "conslaw",
                         _status(r.passed), _res(r.residual), f"characteristic:alphatilde[{k}]"))
    for n, a in enumerate(backward_polynomial_characteristics(4)):
        r = is_characteristic(a, HEAT)
        out.append(Claim(f"characteristic:heat:{n}", f"{a} solves the backward heat equation", "conslaw",
                         _status(r.passed), _res(r.residual), "characteristic:backward-polynomial"))
        tr = transport_characteristic(a)
        rt = is_characteristic(tr, FOKKER_PLANCK)
        out.append(Claim(f"characteristic-transport:{n}", f"exp(t) times {a} under the forward map is {tr}",
                         "conslaw", _status(rt.passed), _res(rt.residual), "rule:alpha-prolongation"))
    gi = generic_identity(FOKKER_PLANCK)
    out.append(Claim("canonical-cv-identity", "D_t(rho) + D_x(sigma) = alpha*(FP residual) + u*(adjoint residual)",
                     "conslaw", _status(gi.is_zero()), _res(gi), "conserved-vector:canonical",
                     f"canonical vector for generic alpha: {canonical_cv(parse('alpha(t,x)'), FOKKER_PLANCK)}"))
    for a in L.FP_CHARACTERISTICS:
        d = divergence(canonical_cv(parse(a), FOKKER_PLANCK), FOKKER_PLANCK)
        out.append(Claim(f"divergence:fp:{a}", f"canonical vector of {a} is conserved", "conslaw",
                         _status(d.vanishes), _res(d.reduced), "conserved-vector:canonical"))

    quoted = parse(L.QUOTED_CHARACTERISTIC)
    r = is_characteristic(quoted, FOKKER_PLANCK)
    flipped = parse("exp(x^2/2)")
    rf = is_characteristic(flipped, FOKKER_PLANCK)
    out.append(Claim("characteristic:fp:quoted", f"{L.QUOTED_CHARACTERISTIC} as an FP characteristic", "conslaw",
                     _status(r.passed), _res(r.residual), "characteristic:quoted",
                     "direct substitution into the FP adjoint; the opposite exponent sign solves it",
                     discrepancy=not r.passed, repair=str(flipped) if not r.passed else None,
                     repair_verified=rf.passed, open_question=True))
    out.append(Claim("characteristic:fp:flipped-sign", "exp(x^2/2) as an FP characteristic", "conslaw",
                     _status(rf.passed), _res(rf.residual), "characteristic:quoted",
                     "companion check for the quoted characteristic", open_question=True))
    return out


# -- potential -----------------------------------------------------------------------


def _extended_pool(ps):
    """Cross and diagonal terms exp(k t) x^m z d_w, potential-valued terms first."""
    t, x = ps.independents
    zs = (ps.potential, ps.source.u)
    pool = []
    for w in zs:
        for z in zs:
            for m in (0, 1):
                for k in range(-2, 3):
                    c = exp(k * NormalForm.atom(t)) * NormalForm.atom(x) ** m * NormalForm.atom(z)
                    pool.append(VectorField(ps.chart, {w: c}))
    return pool


def _potential_generator_claims(tag, ps, gens, anchor, corrected):
    out = []
    for i, check in enumerate(verify_potential_algebra(gens, ps), 1):
        X = check.field
        claim = Claim(f"{tag}:{i}", f"{X} is a symmetry of the potential system", "potential",
                      _status(check.passed), _res(*check.residuals), f"{anchor}[{i}]")
        if not check.passed:
            claim.discrepancy = True
            if check.repair is not None:
                claim.repair = str(check.repair.field)
                claim.repair_verified = True
                corrected[claim.id] = check.repair.field
                added = " + ".join(f"{lam} * ({check.repair.terms[n]})" for n, (_, lam) in enumerate(check.repair.coefficients))
                claim.notes = f"repair within the exp(k t) z d_z ansatz: {added}"
            else:
                claim.status = UNRESOLVED
                wide = repair_generator(X, _extended_pool(ps), ps)
                if wide is not None:
                    claim.repair = str(wide.field)
                    claim.repair_verified = True
                    corrected[claim.id] = wide.field
                    claim.notes = ("no repair with at most two exp(k t) z d_z terms; "
                                   "a correction in the wider ansatz exp(k t) x^m z d_w verifies")
                else:
                    claim.notes = "no repair found in either ansatz"
        out.append(claim)
    return out


def potential_claims():
    out = []
    p7 = build(parse(L.FP_CHARACTERISTICS[0]), FOKKER_PLANCK)
    p8 = build(parse(L.FP_CHARACTERISTICS[1]), FOKKER_PLANCK)
    for ps, printed, peq, tag in ((p7, L.VHAT_SYSTEM, L.VHAT_EQUATION, "vhat"),
                                  (p8, L.VCHECK_SYSTEM, L.VCHECK_EQUATION, "vcheck")):
        dx = ps.eq_x.rhs - parse(printed[0])
        dt = ps.eq_t.rhs - parse(printed[1])
        out.append(Claim(f"potential-system:{tag}", f"potential system {ps}", "potential",
                         _status(dx.is_zero() and dt.is_zero()), _res(dx, dt), f"system:{tag}"))
        comp = check_compatibility(ps)
        out.append(Claim(f"compatibility:{tag}", "cross-derivative compatibility on FP solutions", "potential",
                         _status(comp.passed), _res(comp.residual), f"system:{tag}"))
        e = potential_equation(ps)
        d = e.residual - parse(peq)
        dom = " on x != 0" if e.domain else ""
        out.append(Claim(f"potential-equation:{tag}", f"{e}{dom}", "potential", _status(d.is_zero()), _res(d),
                         f"equation:potential-{tag}"))

    corrected = {}
    out += _potential_generator_claims("p1", p7, L.p1_algebra(), "listing:p1", corrected)
    out += _potential_generator_claims("p2", p8, L.p2_algebra(), "listing:p2", corrected)

    for tag, ps, line, fn, anchor, fixed_line in (
        ("p1:family", p7, L.P1_FAMILY, "g", "listing:p1[g]", None),
        ("p2:family", p8, L.P2_FAMILY, "h", "listing:p2[h]", "u: exp(-2*t)*x^(-1)*h_x, vcheck: h"),
    ):
        F = C.fp_function(fn)
        con = family_constraint(ps, F)
        X = parse_field(line, ps.chart)
        reports = is_symmetry_of_system(X, ps, [con])
        ok = all(r.passed for r in reports)
        claim = Claim(tag, f"{X} with {con}", "potential", _status(ok), _res(*(r.residual for r in reports)), anchor)
        if not ok:
            claim.discrepancy = True
            if fixed_line:
                Y = parse_field(fixed_line, ps.chart)
                claim.repair = str(Y)
                claim.repair_verified = all(r.passed for r in is_symmetry_of_system(Y, ps, [con]))
                claim.notes = "u-coefficient implied by u = v_x/alpha; the printed exp(t) factor fails"
        out.append(claim)

    for tag, ps, idx, expect in (("p1", p7, 4, True), ("p2", p8, 3, True), ("p1", p7, 3, False), ("p1", p7, 6, False)):
        X = (L.p1_algebra() if tag == "p1" else L.p2_algebra())[idx - 1]
        got = is_nontrivial_potential_symmetry(X, ps)
        out.append(Claim(f"nontrivial:{tag}:{idx}", f"{X} {'depends' if expect else 'does not depend'} on the potential",
                         "potential", _status(got == expect), "0" if got == expect else f"returned {got}",
                         f"listing:{tag}[{idx}]"))

    weq = {p7.potential: potential_equation(p7), p8.potential: potential_equation(p8)}
    checked = {c.id: c for c in out}
    for tag, ps, gens in (("p1", p7, L.p1_algebra()), ("p2", p8, L.p2_algebra())):
        for i, X in enumerate(gens, 1):
            note = ""
            if checked[f"{tag}:{i}"].status != PASS:
                if f"{tag}:{i}" not in corrected:
                    continue
                X = corrected[f"{tag}:{i}"]
                note = "projection of the corrected field; the printed field does not verify on the system"
            try:
                Y = project(X, ps.independents + (ps.potential,))
            except ChartError:
                continue
            r = is_symmetry(Y, weq[ps.potential])
            out.append(Claim(f"projection:{tag}:{i}", f"projection {Y} is a symmetry of the potential equation",
                             "potential", _status(r.passed), _res(r.residual), f"listing:{tag}[{i}]", note))

    mh = build_multi(backward_polynomial_characteristics(2), HEAT)
    ok = all(check_compatibility(s).passed for s in mh.systems)
    out.append(Claim("multi-potential:heat:2", "; ".join(str(s) for s in mh.systems), "potential", _status(ok),
                     "0" if ok else "incompatible", "series:gp"))
    mf = build_multi([parse(s) for s in L.FP_CHARACTERISTICS], FOKKER_PLANCK)
    ok = all(check_compatibility(s).passed for s in mf.systems) and all(
        s.eq_x.rhs == p.eq_x.rhs and s.eq_t.rhs == p.eq_t.rhs for s, p in zip(mf.systems, (p7, p8)))
    out.append(Claim("multi-potential:fp:2", "; ".join(str(s) for s in mf.systems), "potential", _status(ok),
                     "0" if ok else "mismatch", "series:gp"))

    pw = build(1, HEAT)
    ext = extend_trivially(heat_to_fp(), [(C.WHAT, C.VHAT)])
    jx = p7.eq_x.lead
    jt = p7.eq_t.lead
    mapped = apply_to_system([pw.eq_x, pw.eq_t], ext, [jx, jt])
    dx = mapped[0].rhs - p7.eq_x.rhs
    dt = mapped[1].rhs - p7.eq_t.rhs
    out.append(Claim("potential-coherence", "the inverse map, trivially prolonged, sends the heat potential system to the vhat system",
                     "potential", _status(dx.is_zero() and dt.is_zero()), _res(dx, dt), "system:vhat"))
    return out


# -- solutions -------------------------------------------------------------------------


def solution_claims():
    out = []
    specs = ["linear", "gaussian"] + [f"heatpoly:{n}" for n in range(7)]
    for spec in specs:
        s = family(spec)
        heat = residual_report(s, HEAT)
        m = map_solution(s)
        fp = residual_report(m, FOKKER_PLANCK)
        symbolic = _res(heat.symbolic, fp.symbolic)
        numeric_ok = fp.numeric_max < NUMERIC_TOLERANCE
        residual = symbolic if symbolic != "0" or numeric_ok else f"numeric max {fp.numeric_max:.3e}"
        out.append(Claim(f"solution:{spec}", f"heat solution {s} maps to FP solution {m}", "solutions",
                         _status(symbolic == "0" and numeric_ok), residual,
                         "solution:linear" if spec == "linear" else "solution:heat",
                         f"numeric max {fp.numeric_max:.3e} over {fp.samples} points"))
    return out


GROUPS = {
    "pdemodel": pdemodel_claims,
    "symmetries": vfield_claims,
    "conslaws": conslaw_claims,
    "potentials": potential_claims,
    "solutions": solution_claims,
}


def verify(groups=None):
    groups = groups or list(GROUPS)
    claims = []
    for g in groups:
        claims += GROUPS[g]()
    return Report(claims, seed())
