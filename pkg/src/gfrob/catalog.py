"""Small named morphisms and representation families used by the test battery and scripts."""
from __future__ import annotations

from .exactlin import QQ, Field
from .groupoid import FiniteGroupoid, construct_example_groupoid, cyclic_group, subgroupoid, symmetric_group
from .morphisms import GroupoidMorphism, build_morphism, identity_morphism, inclusion
from .representations import (
    direct_sum_rep,
    one_dim_rep,
    random_conjugate,
    representable_rep,
    trivial_rep,
)


def _objs(n):
    return [str(i) for i in range(1, n + 1)]


def discrete_into_pair(n: int) -> GroupoidMorphism:
    pair = construct_example_groupoid("pair", {"objects": _objs(n)})
    disc = subgroupoid(pair, pair.ident)
    return inclusion(disc, pair)


def cyclic_into_s3(order: int) -> GroupoidMorphism:
    s3 = symmetric_group(3)
    gen = {2: "213", 3: "231"}[order]
    cn = cyclic_group(order)
    amap, p = {}, s3.arrow("123")
    for i in range(order):
        amap[f"r{i}"] = s3.arrows[p]
        p = s3.mul(s3.arrow(gen), p)
    return build_morphism(cn, s3, {"*": "*"}, amap)


def swap_action_groupoid() -> FiniteGroupoid:
    z2 = cyclic_group(2)
    act = {("1", "r0"): "1", ("2", "r0"): "2", ("1", "r1"): "2", ("2", "r1"): "1"}
    return construct_example_groupoid("action", {"objects": ["1", "2"], "group": z2, "action": act})


def action_sub_inclusion() -> GroupoidMorphism:
    """Wide subgroupoid of identities inside the swap action groupoid of Z/2 on {1,2}."""
    ag = swap_action_groupoid()
    return inclusion(subgroupoid(ag, ag.ident), ag)


def trivial_into_cyclic(n: int = 3) -> GroupoidMorphism:
    triv = construct_example_groupoid("trivial", {"objects": ["*"]})
    return build_morphism(triv, cyclic_group(n), {"*": "*"}, {"id_*": "r0"})


def constant_map() -> GroupoidMorphism:
    x = construct_example_groupoid("trivial", {"objects": ["x", "x'"]})
    y = construct_example_groupoid("trivial", {"objects": ["y"]})
    return build_morphism(x, y, {"x": "y", "x'": "y"}, {"id_x": "id_y", "id_x'": "id_y"})


def morphism_battery() -> list:
    """(name, phi) pairs; all faithful and injective on objects."""
    return [
        ("id_S3", identity_morphism(symmetric_group(3))),
        ("id_pair2", identity_morphism(construct_example_groupoid("pair", {"objects": _objs(2)}))),
        ("disc2_in_pair2", discrete_into_pair(2)),
        ("disc3_in_pair3", discrete_into_pair(3)),
        ("Z2_in_S3", cyclic_into_s3(2)),
        ("Z3_in_S3", cyclic_into_s3(3)),
        ("ids_in_swap_action", action_sub_inclusion()),
        ("triv_in_Z3", trivial_into_cyclic(3)),
    ]


def _sign_like(g: FiniteGroupoid, field: Field):
    """A one-dimensional rep with a -1 somewhere, when one is easy to write down."""
    if g.n_objects == 1 and all(len(a) == 3 and a.isdigit() for a in g.arrows):
        def parity(a):
            return sum(1 for i in range(3) for j in range(i + 1, 3) if a[i] > a[j]) % 2
        return one_dim_rep(g, field, {a: -1 if parity(a) else 1 for a in g.arrows})
    if g.n_objects == 1 and g.n_arrows % 2 == 0 and all(a.startswith("r") for a in g.arrows):
        return one_dim_rep(g, field, {a: (-1) ** int(a[1:]) for a in g.arrows})
    return None


def rep_battery(g: FiniteGroupoid, field: Field = QQ, seed: int = 0) -> list:
    """At least four (name, rep) pairs on g, with non-permutation matrices among them."""
    last = g.n_objects - 1
    reg = representable_rep(g, field, 0)
    out = [
        ("trivial", trivial_rep(g, field)),
        ("representable", reg),
        ("conj_representable", random_conjugate(representable_rep(g, field, last), seed)),
        ("trivial_plus_conj", random_conjugate(direct_sum_rep(trivial_rep(g, field), reg), seed + 1)),
    ]
    sign = _sign_like(g, field)
    if sign is not None:
        out.append(("sign", sign))
    return out


def battery_instances(fields=(QQ, Field(5))):
    """Yield (field, name, phi, H-reps, G-reps) over each field."""
    for fld in fields:
        for name, phi in morphism_battery():
            yield fld, name, phi, rep_battery(phi.dom, fld), rep_battery(phi.cod, fld)
