"""gfrob command line.

    gfrob <command> [args] --bundle PATH [--out PATH] [--format text|json]

Exit codes: 0 all checks passed, 1 a mathematical check failed, 2 invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys

from .actions import ActionSet, orbits, translation_groupoid
from .bundle import SCHEMA, Bundle, BundleError, load_bundle
from .errors import GfrobError, InvalidInput, NotApplicable, UnknownName
from .frobenius import (
    algebra_map,
    frobenius_system,
    module_condition,
    orbit_criterion,
    verify_frobenius_system,
)
from .functors import (
    coinduce,
    induce,
    left_adjunction_transpose,
    right_adjunction_transpose,
    verify_projection_formula,
)
from .groupoid import connected_components, is_equivalence_relation_groupoid, star
from .morphisms import kernel, quotient
from .representations import hom_space, restrict

COMMANDS = {
    "validate": 0,
    "info": 1,
    "orbits": 1,
    "quotient": 2,
    "restrict": 2,
    "induce": 2,
    "coinduce": 2,
    "adjoint-check": 3,
    "frobenius": 1,
    "algebra-map": 1,
    "projection-formula": 3,
    "verify-system": 1,
}


def _gname(bundle: Bundle, g):
    for n, h in bundle.groupoids.items():
        if h == g:
            return n
    return None


def _rep_fragment(bundle: Bundle, g, gname: str, reps: dict) -> dict:
    """A loadable bundle holding one groupoid and some representations on it."""
    return {
        "schema": SCHEMA,
        "field": bundle.field.to_json(),
        "groupoids": {gname: g.to_json()},
        "representations": {n: {"groupoid": gname, **r.to_json()} for n, r in reps.items()},
    }


def _dims(rep):
    g = rep.groupoid
    return {g.objects[x]: d for x, d in enumerate(rep.dims)}


def cmd_validate(bundle: Bundle):
    checks = {}
    for name, sys_ in bundle.frobenius_systems.items():
        ok, wit, _ = verify_frobenius_system(sys_.phi, sys_)
        checks[name] = {"verified": ok, "witnesses": wit}
    passed = all(c["verified"] for c in checks.values())
    return {"counts": bundle.counts(), "field": bundle.field.name(), "frobenius_systems": checks}, passed


def cmd_verify_system(bundle: Bundle, name):
    sys_ = bundle.get("frobenius_systems", name)
    ok, wit, counts = verify_frobenius_system(sys_.phi, sys_)
    return {"system": name, "verified": ok, "witnesses": wit, "counts": counts}, ok


def cmd_info(bundle: Bundle, name):
    g = bundle.get("groupoids", name)
    comps = connected_components(g)
    eq, wit = is_equivalence_relation_groupoid(g)
    return {
        "groupoid": name,
        "objects": g.n_objects,
        "arrows": g.n_arrows,
        "components": [[g.objects[x] for x in b] for b in comps.blocks],
        "component_count": len(comps.blocks),
        "isotropy_orders": {g.objects[x]: len(g.loops(x)) for x in range(g.n_objects)},
        "stars": {g.objects[x]: {"left": len(star(g, x, "left")), "right": len(star(g, x, "right"))}
                  for x in range(g.n_objects)},
        "equivalence_relation": eq,
        "parallel_witness": None if eq else [g.arrows[a] for a in wit],
    }, True


def cmd_orbits(bundle: Bundle, name):
    section, obj = bundle.lookup(name)
    if section not in ("actions", "bisets"):
        raise UnknownName(f"{name!r} is not an action set or biset", witness=name)
    part = orbits(obj)
    out = {
        "name": name,
        "orbit_count": len(part.blocks),
        "orbits": [[obj.carrier[e] for e in b] for b in part.blocks],
        "representatives": [obj.carrier[r] for r in part.representatives],
    }
    ok = True
    if isinstance(obj, ActionSet):
        tg, _ = translation_groupoid(obj)
        agree = [tuple(b) for b in connected_components(tg).blocks] == list(part.blocks)
        out["matches_translation_groupoid"] = agree
        ok = agree
    return out, ok


def cmd_quotient(bundle: Bundle, gname, nname):
    g = bundle.get("groupoids", gname)
    n = bundle.get("normal_subgroupoids", nname)
    q, pi = quotient(g, n)
    ker_ok = kernel(pi).arrows == n.arrows
    surj = sorted(set(pi.arr_map)) == list(range(q.n_arrows)) and sorted(set(pi.obj_map)) == list(range(q.n_objects))
    qname = f"{gname}/{nname}"
    return {
        "quotient_objects": q.n_objects,
        "quotient_arrows": q.n_arrows,
        "kernel_equals_n": ker_ok,
        "projection_surjective": surj,
        "bundle": {"schema": SCHEMA, "field": bundle.field.to_json(),
                   "groupoids": {gname: g.to_json(), qname: q.to_json()},
                   "morphisms": {"pi": {"dom": gname, "cod": qname, **pi.to_json()}}},
    }, ker_ok and surj


def cmd_restrict(bundle: Bundle, mname, rname):
    phi = bundle.get("morphisms", mname)
    v = bundle.get("representations", rname)
    out = restrict(phi, v)
    dname = _gname(bundle, phi.dom) or "dom"
    return {"dims": _dims(out), "bundle": _rep_fragment(bundle, phi.dom, dname, {f"res_{rname}": out})}, True


def cmd_induce(bundle: Bundle, mname, rname):
    phi = bundle.get("morphisms", mname)
    w = bundle.get("representations", rname)
    ind = induce(phi, w)
    G, H = phi.cod, phi.dom
    routes = all(a == b for a, b in zip(ind.spaces, ind.orbit_spaces))
    cname = _gname(bundle, G) or "cod"
    return {
        "dims": _dims(ind.rep),
        "routes_agree": routes,
        "orbit_representatives": {G.objects[x]: [[H.objects[u], G.arrows[p]] for u, p in reps]
                                  for x, reps in enumerate(ind.orbit_reps)},
        "bundle": _rep_fragment(bundle, G, cname, {f"ind_{rname}": ind.rep}),
    }, routes


def cmd_coinduce(bundle: Bundle, mname, rname):
    phi = bundle.get("morphisms", mname)
    w = bundle.get("representations", rname)
    co = coinduce(phi, w)
    G = phi.cod
    cname = _gname(bundle, G) or "cod"
    return {
        "dims": _dims(co.rep),
        "relations_rank": {G.objects[x]: r.dim for x, r in enumerate(co.relations)},
        "bundle": _rep_fragment(bundle, G, cname, {f"coind_{rname}": co.rep}),
    }, True


def cmd_adjoint_check(bundle: Bundle, mname, vname, wname, side="right"):
    phi = bundle.get("morphisms", mname)
    v = bundle.get("representations", vname)
    w = bundle.get("representations", wname)
    res = restrict(phi, v)
    if side == "right":
        ind = induce(phi, w)
        lhs = hom_space(res, w)
        rhs = hom_space(v, ind.rep)
        a = all(right_adjunction_transpose(phi, v, w, right_adjunction_transpose(phi, v, w, s, "psi", ind),
                                           "phi_inv", ind) == s for s in lhs)
        b = all(right_adjunction_transpose(phi, v, w, right_adjunction_transpose(phi, v, w, g, "phi_inv", ind),
                                           "psi", ind) == g for g in rhs)
        out = {"side": "right", "dim_hom_restricted": len(lhs), "dim_hom_induced": len(rhs),
               "phi_psi_identity": a, "psi_phi_identity": b}
    elif side == "left":
        co = coinduce(phi, w)
        lhs = hom_space(w, res)
        rhs = hom_space(co.rep, v)
        a = all(left_adjunction_transpose(phi, v, w, left_adjunction_transpose(phi, v, w, d, "sigma", co),
                                          "gamma", co) == d for d in lhs)
        b = all(left_adjunction_transpose(phi, v, w, left_adjunction_transpose(phi, v, w, t, "gamma", co),
                                          "sigma", co) == t for t in rhs)
        out = {"side": "left", "dim_hom_restricted": len(lhs), "dim_hom_coinduced": len(rhs),
               "gamma_sigma_identity": a, "sigma_gamma_identity": b}
    else:
        raise InvalidInput(f"side must be left or right, got {side!r}")
    return out, a and b and len(lhs) == len(rhs)


def cmd_frobenius(bundle: Bundle, mname):
    phi = bundle.get("morphisms", mname)
    crit = orbit_criterion(phi)
    out = {"criterion": crit, "applicable": crit["applicable"]}
    if not crit["applicable"]:
        out["verdict"] = "undecided"
        return out, True
    sys_ = frobenius_system(phi, bundle.field)
    ok, wit, counts = verify_frobenius_system(phi, sys_)
    mod = module_condition(phi, sys_)
    out.update({
        "system": sys_.to_json(),
        "system_verified": ok,
        "witnesses": wit,
        "checked": counts,
        "module_condition": mod,
        "verdict": "frobenius" if ok and mod["passed"] else "check failed",
    })
    return out, ok and mod["passed"]


def cmd_algebra_map(bundle: Bundle, mname):
    phi = bundle.get("morphisms", mname)
    rep = algebra_map(phi, bundle.field)
    # multiplicativity is only required when phi0 is injective
    return rep, rep["multiplicative"] or not rep["injective_on_objects"]


def cmd_projection_formula(bundle: Bundle, mname, wname, vname):
    phi = bundle.get("morphisms", mname)
    w = bundle.get("representations", wname)
    v = bundle.get("representations", vname)
    r = verify_projection_formula(phi, w, v)
    G = phi.cod
    return {
        "natural": r["natural"],
        "invertible": r["invertible"],
        "dims_left": {G.objects[x]: d for x, d in enumerate(r["dims_left"])},
        "dims_right": {G.objects[x]: d for x, d in enumerate(r["dims_right"])},
    }, r["valid"]


_HANDLERS = {
    "validate": cmd_validate,
    "info": cmd_info,
    "orbits": cmd_orbits,
    "quotient": cmd_quotient,
    "restrict": cmd_restrict,
    "induce": cmd_induce,
    "coinduce": cmd_coinduce,
    "adjoint-check": cmd_adjoint_check,
    "frobenius": cmd_frobenius,
    "algebra-map": cmd_algebra_map,
    "projection-formula": cmd_projection_formula,
    "verify-system": cmd_verify_system,
}


def execute(command: str, args, bundle: Bundle, side: str = "right") -> dict:
    """Run one command; returns a report with ``status`` pass or fail."""
    if command not in _HANDLERS:
        raise InvalidInput(f"unknown command {command!r}")
    if len(args) != COMMANDS[command]:
        raise InvalidInput(f"{command} takes {COMMANDS[command]} argument(s), got {len(args)}")
    kwargs = {"side": side} if command == "adjoint-check" else {}
    try:
        payload, ok = _HANDLERS[command](bundle, *args, **kwargs)
    except NotApplicable as exc:
        payload, ok = {"applicable": False, "reason": str(exc), "witness": exc.witness}, True
    return {"command": command, "args": list(args), "status": "pass" if ok else "fail", "result": payload}


def exit_code(report: dict) -> int:
    if report.get("status") == "invalid":
        return 2
    return 0 if report.get("status") == "pass" else 1


def _text(value, indent=0) -> list:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
    elif isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            lines.append(pad + json.dumps(value))
        else:
            for v in value:
                sub = _text(v, indent + 1)
                lines.append(f"{pad}-" + (" " + sub[0].strip() if sub else ""))
                lines.extend(sub[1:])
    else:
        lines.append(pad + json.dumps(value))
    return lines


def render_report(report: dict, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    body = dict(report)
    if isinstance(body.get("result"), dict):
        body["result"] = {k: v for k, v in body["result"].items() if k != "bundle"}
    return "\n".join(_text(body)) + "\n"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="gfrob", description="Finite groupoid representation toolkit.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("args", nargs="*")
    parser.add_argument("--bundle", required=True)
    parser.add_argument("--out")
    parser.add_argument("--format", choices=["text", "json"], default="text")
    parser.add_argument("--side", choices=["left", "right"], default="right")
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        bundle = load_bundle(ns.bundle)
        report = execute(ns.command, ns.args, bundle, side=ns.side)
    except BundleError as exc:
        report = {"command": ns.command, "args": ns.args, "status": "invalid",
                  "error": type(exc).__name__, "errors": exc.errors}
    except GfrobError as exc:
        report = {"command": ns.command, "args": ns.args, "status": "invalid",
                  "error": type(exc).__name__, "message": str(exc), "witness": exc.witness}
    text = render_report(report, ns.format)
    if ns.out:
        with open(ns.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
