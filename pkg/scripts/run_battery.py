"""Run the Frobenius implication chain and both adjunctions over the morphism battery.

    python3 scripts/run_battery.py [--fields Q,5] [--json out.json]
"""
import argparse
import json
import time

from gfrob.catalog import battery_instances
from gfrob.exactlin import QQ, Field
from gfrob.frobenius import frobenius_system, module_condition, orbit_criterion, verify_frobenius_system
from gfrob.functors import coinduce, induce, left_adjunction_transpose, right_adjunction_transpose
from gfrob.representations import hom_space, restrict


def adjunctions(phi, v, w):
    res = restrict(phi, v)
    ind, co = induce(phi, w), coinduce(phi, w)
    lhs, rhs = hom_space(res, w), hom_space(v, ind.rep)
    right = len(lhs) == len(rhs) and all(
        right_adjunction_transpose(phi, v, w, right_adjunction_transpose(phi, v, w, s, "psi", ind), "phi_inv", ind) == s
        for s in lhs) and all(
        right_adjunction_transpose(phi, v, w, right_adjunction_transpose(phi, v, w, g, "phi_inv", ind), "psi", ind) == g
        for g in rhs)
    lhs, rhs = hom_space(w, res), hom_space(co.rep, v)
    left = len(lhs) == len(rhs) and all(
        left_adjunction_transpose(phi, v, w, left_adjunction_transpose(phi, v, w, d, "sigma", co), "gamma", co) == d
        for d in lhs) and all(
        left_adjunction_transpose(phi, v, w, left_adjunction_transpose(phi, v, w, t, "gamma", co), "sigma", co) == t
        for t in rhs)
    return right, left


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--fields", default="Q,5")
    ap.add_argument("--json")
    ns = ap.parse_args()
    fields = [QQ if f == "Q" else Field(int(f)) for f in ns.fields.split(",")]
    rows = []
    t0 = time.perf_counter()
    for fld, name, phi, hreps, greps in battery_instances(fields):
        crit = orbit_criterion(phi)
        sys_ = frobenius_system(phi, fld)
        verified = verify_frobenius_system(phi, sys_)[0]
        module = module_condition(phi, sys_)["passed"]
        dims_eq = all(induce(phi, w).rep.dims == coinduce(phi, w).rep.dims for _, w in hreps)
        adj = [adjunctions(phi, v, w) for _, v in greps for _, w in hreps]
        row = {"field": fld.name(), "morphism": name, "criterion": crit["frobenius"], "verified": verified,
               "module": module, "dims_equal": dims_eq,
               "right_adjunction": all(r for r, _ in adj), "left_adjunction": all(l for _, l in adj)}
        rows.append(row)
        print(" ".join(f"{k}={v}" for k, v in row.items()))
    print(f"elapsed {time.perf_counter() - t0:.1f}s")
    if ns.json:
        with open(ns.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
