import pytest
from hypothesis import given, strategies as st

from gfrob.actions import (
    build_action, build_biset, empty_biset, fibre, fibre_isomorphism, objects_action, opposite, orbits,
    pullback_bisets, regular_action, regular_biset, tensor_over, translation_groupoid, two_sided_translation,
)
from gfrob.catalog import discrete_into_pair, morphism_battery, swap_action_groupoid, trivial_into_cyclic
from gfrob.errors import AssociativityViolation, CompatibilityViolation, StructureMapViolation, UnitViolation
from gfrob.groupoid import connected_components, construct_example_groupoid, cyclic_group, symmetric_group
from gfrob.morphisms import build_morphism, identity_morphism
from oracles import bfs_components

S3 = symmetric_group(3)
Z2 = cyclic_group(2)
PAIR3 = construct_example_groupoid("pair", {"objects": ["1", "2", "3"]})


def swap_set(side="right"):
    act = [["a", "r0", "a"], ["b", "r0", "b"], ["c", "r0", "c"],
           ["a", "r1", "b"], ["b", "r1", "a"], ["c", "r1", "c"]]
    return build_action(Z2, ["a", "b", "c"], {"a": "*", "b": "*", "c": "*"}, act, side)


def test_regular_and_objects_actions_valid():
    for g in (S3, PAIR3):
        r = regular_action(g, "right")
        assert len(r) == g.n_arrows
        assert regular_action(g, "left").side == "left"
        o = objects_action(g)
        assert all(o.act(g.tgt[a], a) == g.src[a] for a in range(g.n_arrows))


def test_action_validators():
    with pytest.raises(StructureMapViolation):
        build_action(PAIR3, ["p"], {"p": "1"}, [["p", "(1,1)", "p"], ["p", "(1,2)", "p"]], "right")
    with pytest.raises(UnitViolation):
        build_action(Z2, ["a", "b"], {"a": "*", "b": "*"},
                     [["a", "r0", "b"], ["b", "r0", "a"], ["a", "r1", "a"], ["b", "r1", "b"]], "right")
    z3 = cyclic_group(3)
    bad = [[x, "r0", x] for x in "ab"] + [["a", "r1", "b"], ["b", "r1", "a"], ["a", "r2", "b"], ["b", "r2", "a"]]
    with pytest.raises(AssociativityViolation):
        build_action(z3, ["a", "b"], {"a": "*", "b": "*"}, bad, "right")


def test_opposite():
    x = swap_set()
    assert opposite(opposite(x)) == x
    r = regular_action(S3, "right")
    op = opposite(r)
    assert op.side == "left"
    assert all(op.act(e, a) == S3.mul(e, S3.inv[a]) for e in range(6) for a in range(6))
    assert orbits(op) == orbits(r)


def test_translation_groupoids():
    tg, sigma = translation_groupoid(objects_action(PAIR3))
    assert tg.n_objects == 3 and tg.n_arrows == 9
    assert sorted(sigma.arr_map) == list(range(9))
    ag = swap_action_groupoid()
    act = build_action(Z2, ["1", "2"], {"1": "*", "2": "*"},
                       [["1", "r0", "1"], ["2", "r0", "2"], ["1", "r1", "2"], ["2", "r1", "1"]], "right")
    tg, _ = translation_groupoid(act)
    assert tg.n_arrows == ag.n_arrows
    assert sorted((tg.objects[tg.src[a]], tg.objects[tg.tgt[a]]) for a in range(4)) == \
        sorted((ag.objects[ag.src[a]], ag.objects[ag.tgt[a]]) for a in range(4))
    triv = construct_example_groupoid("trivial", {"objects": ["*"]})
    tg, _ = translation_groupoid(build_action(triv, ["p"], {"p": "*"}, [["p", "id_*", "p"]], "right"))
    assert tg.n_objects == 1 and tg.n_arrows == 1


def test_orbits_examples():
    assert list(orbits(objects_action(PAIR3)).blocks) == list(connected_components(PAIR3).blocks)
    assert len(orbits(regular_action(S3)).blocks) == 1
    part = orbits(swap_set())
    assert part.blocks == ((0, 1), (2,)) and part.representatives == (0, 2)


def test_biset_validation():
    b = regular_biset(S3)
    assert len(b) == 6 and len(orbits(b).blocks) == 1
    with pytest.raises(CompatibilityViolation):
        # left and right Z/2 actions on {a, b, c} that do not commute
        build_biset(Z2, Z2, ["a", "b", "c"], {k: "*" for k in "abc"}, {k: "*" for k in "abc"},
                    [["a", "r0", "a"], ["b", "r0", "b"], ["c", "r0", "c"],
                     ["a", "r1", "b"], ["b", "r1", "a"], ["c", "r1", "c"]],
                    [["a", "r0", "a"], ["b", "r0", "b"], ["c", "r0", "c"],
                     ["a", "r1", "a"], ["b", "r1", "c"], ["c", "r1", "b"]])


def test_two_sided_translation_components_are_orbits():
    right, _ = pullback_bisets(morphism_battery()[4][1])
    tg = two_sided_translation(right)
    comps = [tuple(b) for b in connected_components(tg).blocks]
    assert comps == list(orbits(right).blocks)


def test_tensor_unit_and_empty():
    x = regular_biset(S3)
    t = tensor_over(regular_biset(S3), x)
    assert len(t) == len(x)
    # g (x) x' -> g x' is a bijection onto X, equivariant on both sides
    img = {k: S3.mul(a, b) for k, (a, b) in enumerate(t.data)}
    assert sorted(img.values()) == list(range(6))
    for k in range(len(t)):
        for g in range(6):
            assert img[t.lact(g, k)] == x.lact(g, img[k])
            assert img[t.ract(k, g)] == x.ract(img[k], g)
    assert len(tensor_over(regular_biset(S3), empty_biset(S3, Z2))) == 0


def test_tensor_representative_independence():
    right, left = pullback_bisets(morphism_battery()[4][1])
    t = tensor_over(right, left)
    H = right.rgrp
    pairs = [(a, b) for a in range(len(right)) for b in range(len(left)) if right.rmap[a] == left.lmap[b]]
    idx = {p: i for i, p in enumerate(pairs)}
    edges = [(idx[(a, b)], idx[(right.ract(a, h), left.lact(H.inv[h], b))])
             for a, b in pairs for h in range(H.n_arrows) if H.tgt[h] == right.rmap[a]]
    classes = bfs_components(len(pairs), edges)
    assert len(t) == len(classes) == 18
    reps = {min(c) for c in classes}
    assert {idx[p] for p in t.data} == reps


def test_pullback_examples():
    right, left = pullback_bisets(identity_morphism(S3))
    assert len(right) == 6 == len(left)
    right, left = pullback_bisets(trivial_into_cyclic(3))
    assert len(right) == 3 == len(left)
    phi = build_morphism(construct_example_groupoid("trivial", {"objects": ["1"]}),
                         construct_example_groupoid("pair", {"objects": ["1", "2"]}),
                         {"1": "1"}, {"id_1": "(1,1)"})
    right, _ = pullback_bisets(phi)
    assert len(fibre(right, "2", "left")) == 1


def test_fibre_empty():
    phi = discrete_into_pair(2)
    right, left = pullback_bisets(phi)
    assert len(fibre(left, "1", "right")) == 2
    z = empty_biset(S3, Z2)
    assert len(fibre(z, "*", "right")) == 0


@given(st.sampled_from(range(len(morphism_battery()))))
def test_pullbacks_and_fibre_counts(i):
    name, phi = morphism_battery()[i]
    right, left = pullback_bisets(phi)
    for x in range(phi.cod.n_objects):
        lf, rf, bij = fibre_isomorphism(phi, x)
        assert len(orbits(lf).blocks) == len(orbits(rf).blocks)


@given(st.sampled_from(range(len(morphism_battery()))))
def test_orbits_equal_translation_components(i):
    _, phi = morphism_battery()[i]
    right, left = pullback_bisets(phi)
    for x in range(phi.cod.n_objects):
        for f in (fibre(left, x, "right"), fibre(right, x, "left")):
            tg, _ = translation_groupoid(f)
            ref = bfs_components(tg.n_objects, [(tg.src[a], tg.tgt[a]) for a in range(tg.n_arrows)])
            assert [list(b) for b in orbits(f).blocks] == ref
