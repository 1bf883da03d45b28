import pytest
from hypothesis import given, strategies as st

from gfrob.catalog import (
    battery_instances, cyclic_into_s3, morphism_battery, rep_battery, swap_action_groupoid, trivial_into_cyclic,
)
from gfrob.errors import GroupoidMismatch, ShapeMismatch
from gfrob.exactlin import QQ, Field
from gfrob.functors import (
    coinduce, induce, induce_direct, induce_orbit, left_adjunction_transpose, right_adjunction_transpose,
    verify_projection_formula, _induce_fibres,
)
from gfrob.groupoid import cyclic_group, symmetric_group
from gfrob.morphisms import build_morphism, identity_morphism
from gfrob.representations import (
    hom_space, identity_rep_morphism, representable_rep, restrict, trivial_rep,
    validate_rep, zero_rep,
)
from oracles import induced_dim_faithful

F5 = Field(5)
S3 = symmetric_group(3)


def test_identity_morphism_induce_coinduce():
    for _, w in rep_battery(S3, QQ):
        phi = identity_morphism(S3)
        assert induce(phi, w).rep.dims == w.dims
        assert coinduce(phi, w).rep.dims == w.dims
    w = rep_battery(S3, QQ)[3][1]
    phi = identity_morphism(S3)
    # canonical basis: the fibre is the family p -> W^p w, coordinates read at the identity
    assert induce(phi, w).rep == w
    co = coinduce(phi, w)
    ups = co.upsilon(0, S3.ident[0], 0)
    assert ups.rank() == w.dims[0] == ups.nrows
    assert all(co.rep.mats[g] @ ups == ups @ w.mats[g] for g in range(S3.n_arrows))


def test_trivial_into_z3():
    phi = trivial_into_cyclic(3)
    one = trivial_rep(phi.dom, QQ)
    assert induce(phi, one).rep.dims == (3,)
    assert coinduce(phi, one).rep.dims == (3,)
    assert coinduce(phi, zero_rep(phi.dom, QQ)).rep.dims == (0,)


def test_action_groupoid_global_sections():
    ag = swap_action_groupoid()
    z2 = cyclic_group(2)
    pr = build_morphism(ag, z2, {"1": "*", "2": "*"}, {a: a.split(",")[1][:-1] for a in ag.arrows})
    for _, w in rep_battery(ag, QQ):
        assert induce(pr, w).rep.dims == (sum(w.dims),)


def test_mismatch_errors():
    phi = cyclic_into_s3(2)
    with pytest.raises(GroupoidMismatch):
        induce(phi, trivial_rep(S3, QQ))
    v, w = trivial_rep(S3, QQ), trivial_rep(phi.dom, QQ)
    with pytest.raises(ShapeMismatch):
        right_adjunction_transpose(phi, v, w, identity_rep_morphism(v), "psi")


def test_z2_in_s3_std_hom_dims():
    phi = cyclic_into_s3(2)
    v = rep_battery(S3, QQ)[2][1]
    from test_representations import std_rep
    std = std_rep()
    one = trivial_rep(phi.dom, QQ)
    a = len(hom_space(restrict(phi, std), one))
    b = len(hom_space(std, induce(phi, one).rep))
    assert a == b == 1
    assert v.dims == (6,)


def test_trivial_into_z3_left_adjunction_dims():
    phi = trivial_into_cyclic(3)
    w = trivial_rep(phi.dom, QQ)
    v = representable_rep(phi.cod, QQ, 0)
    co = coinduce(phi, w)
    assert len(hom_space(w, restrict(phi, v))) == len(hom_space(co.rep, v)) == 3


def test_projection_formula_trivial_v():
    phi = cyclic_into_s3(2)
    w = rep_battery(phi.dom, QQ)[3][1]
    r = verify_projection_formula(phi, w, trivial_rep(S3, QQ))
    assert r["valid"]
    assert r["dims_left"] == r["dims_right"] == list(induce(phi, w).rep.dims)
    assert all(c.is_identity() for c in r["iso"].comps)


CASES = [(fi, i) for fi in range(2) for i in range(len(morphism_battery()))]


def _case(fi, i):
    return list(battery_instances(fields=(QQ, F5)[fi:fi + 1]))[i]


@given(st.sampled_from(CASES))
def test_induction_routes_and_closed_form(case):
    fld, name, phi, hreps, _ = _case(*case)
    for _, w in hreps:
        fibres, offs, amb = _induce_fibres(phi, w)
        direct = induce_direct(phi, w, fibres, offs, amb)
        ospaces, reps = induce_orbit(phi, w, fibres, offs, amb)
        assert direct == ospaces
        assert all(len(r) > 0 for r in reps)
        ind = induce(phi, w)
        validate_rep(ind.rep)
        for x in range(phi.cod.n_objects):
            assert ind.rep.dims[x] == induced_dim_faithful(phi.dom, phi.cod, phi.obj_map, w.dims, x)


@given(st.sampled_from(CASES))
def test_coinduce_squares_and_dims(case):
    fld, name, phi, hreps, _ = _case(*case)
    G = phi.cod
    for _, w in hreps:
        co = coinduce(phi, w)
        validate_rep(co.rep)
        for g in range(G.n_arrows):
            x = G.src[g]
            for (a, u) in co.fibres[x]:
                assert co.rep.mats[g] @ co.upsilon(x, a, u) == co.upsilon(G.tgt[g], G.mul(g, a), u)
        assert co.rep.dims == induce(phi, w).rep.dims


@given(st.sampled_from(CASES))
def test_projection_formula_battery(case):
    fld, name, phi, hreps, greps = _case(*case)
    for _, w in hreps[:2]:
        for _, v in greps[:3]:
            r = verify_projection_formula(phi, w, v)
            assert r["natural"] and r["invertible"]
            assert r["dims_left"] == r["dims_right"]


def test_identity_transposes_are_canonical():
    phi = identity_morphism(S3)
    reps = rep_battery(S3, F5)
    v, w = reps[3][1], reps[1][1]
    for s in hom_space(restrict(phi, v), w):
        assert right_adjunction_transpose(phi, v, w, s, "psi").comps == s.comps
    co = coinduce(phi, w)
    ups = co.upsilon(0, S3.ident[0], 0)
    for d in hom_space(w, restrict(phi, v)):
        sig = left_adjunction_transpose(phi, v, w, d, "sigma", co)
        assert sig.comps[0] @ ups == d.comps[0]
