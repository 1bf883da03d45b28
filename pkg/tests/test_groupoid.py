import pytest
from hypothesis import given, strategies as st

from gfrob.errors import (
    AssociativityViolation, InvalidParams, MissingComposite, NoInverse, UnitViolation, UnknownArrow, UnknownObject,
)
from gfrob.groupoid import (
    adjoint, build_groupoid, connected_components, construct_example_groupoid, cyclic_group,
    is_equivalence_relation_groupoid, isotropy_group, star, symmetric_group,
)
from oracles import bfs_components, perm_compose, s3_elements

Z3_ARROWS = [("e", "*", "*"), ("a", "*", "*"), ("b", "*", "*")]
Z3_TABLE = {("e", "e"): "e", ("e", "a"): "a", ("e", "b"): "b", ("a", "e"): "a", ("b", "e"): "b",
            ("a", "a"): "b", ("a", "b"): "e", ("b", "a"): "e", ("b", "b"): "a"}


def triples(table):
    return [(f, g, h) for (f, g), h in table.items()]


def swap_action():
    act = {("1", "r0"): "1", ("2", "r0"): "2", ("1", "r1"): "2", ("2", "r1"): "1"}
    return construct_example_groupoid("action", {"objects": ["1", "2"], "group": cyclic_group(2), "action": act})


def test_trivial_one_object():
    g = build_groupoid(["a"], [("1a", "a", "a")], [("1a", "1a", "1a")])
    assert g.n_arrows == 1 and g.inv == (0,)


def test_s3_table_from_permutations():
    els = s3_elements()
    comp = [(f, h, perm_compose(f, h)) for f in els for h in els]
    g = build_groupoid(["*"], [(p, "*", "*") for p in els], comp)
    assert g.n_arrows == 6
    assert g == symmetric_group(3)


def test_z3_inverses_derived():
    g = build_groupoid(["*"], Z3_ARROWS, triples(Z3_TABLE))
    assert g.arrows[g.inv[g.arrow("a")]] == "b"


def test_associativity_violation_names_triple():
    bad = dict(Z3_TABLE)
    bad.update({("a", "a"): "e", ("a", "b"): "e", ("b", "a"): "e", ("b", "b"): "a"})
    with pytest.raises(AssociativityViolation) as exc:
        build_groupoid(["*"], Z3_ARROWS, triples(bad))
    assert exc.value.witness == ["a", "a", "b"]


def test_missing_composite():
    bad = dict(Z3_TABLE)
    del bad[("b", "b")]
    with pytest.raises(MissingComposite) as exc:
        build_groupoid(["*"], Z3_ARROWS, triples(bad))
    assert exc.value.witness == ["b", "b"]


def test_no_inverse():
    mono = {k: v for k, v in Z3_TABLE.items() if "e" in k}
    mono.update({("a", "a"): "a", ("a", "b"): "b", ("b", "a"): "b", ("b", "b"): "b"})
    with pytest.raises(NoInverse):
        build_groupoid(["*"], Z3_ARROWS, triples(mono))


def test_unit_violation():
    with pytest.raises(UnitViolation):
        build_groupoid(["*"], Z3_ARROWS, triples(Z3_TABLE), identities={"*": "a"})


def test_families_counts():
    p = construct_example_groupoid("pair", {"objects": ["a", "b"]})
    assert p.n_arrows == 4 and len(connected_components(p).blocks) == 1
    t = construct_example_groupoid("trivial", {"objects": ["a", "b", "c"]})
    assert t.n_arrows == 3 and len(connected_components(t).blocks) == 3
    ag = swap_action()
    assert ag.n_arrows == 4
    assert all(len(isotropy_group(ag, x).loops) == 1 for x in range(2))
    ind = construct_example_groupoid("induced", {"groupoid": symmetric_group(3), "objects": ["1", "2"],
                                                 "map": {"1": "*", "2": "*"}})
    assert ind.n_arrows == 24


def test_pair_convention():
    p = construct_example_groupoid("pair", {"objects": ["a", "b"]})
    f = p.arrow("(a,b)")
    assert p.objects[p.src[f]] == "b" and p.objects[p.tgt[f]] == "a"
    assert p.arrows[p.mul(p.arrow("(a,b)"), p.arrow("(b,a)"))] == "(a,a)"


def test_equivalence_family():
    e = construct_example_groupoid("equivalence", {"objects": ["1", "2", "3"], "classes": [["1", "2"], ["3"]]})
    assert e.n_arrows == 5
    with pytest.raises(InvalidParams):
        construct_example_groupoid("equivalence", {"objects": ["1", "2", "3"],
                                                   "pairs": [["1", "1"], ["2", "2"], ["3", "3"], ["1", "2"],
                                                             ["2", "1"], ["2", "3"], ["3", "2"]]})


def test_isotropy_and_frame_families():
    iso = construct_example_groupoid("isotropy", {"groupoid": swap_action()})
    assert iso.n_arrows == 2
    fr = construct_example_groupoid("finite_frame", {"map": {"p": "x", "q": "x", "r": "y", "s": "y", "t": "z"}})
    # fibres of sizes 2, 2, 1: 4 * 2! + 1 * 1!
    assert fr.n_arrows == 9
    with pytest.raises(InvalidParams):
        construct_example_groupoid("finite_frame", {"map": {str(i): "x" for i in range(7)}})


def test_isotropy_examples():
    p = construct_example_groupoid("pair", {"objects": ["a", "b", "c"]})
    assert all(len(isotropy_group(p, x).loops) == 1 for x in p.objects)
    assert len(isotropy_group(symmetric_group(3), "*").loops) == 6
    with pytest.raises(UnknownObject):
        isotropy_group(p, "zz")


def test_stabilizer_is_isotropy():
    act = {("1", "r0"): "1", ("2", "r0"): "2", ("3", "r0"): "3",
           ("1", "r1"): "2", ("2", "r1"): "1", ("3", "r1"): "3"}
    ag = construct_example_groupoid("action", {"objects": ["1", "2", "3"], "group": cyclic_group(2), "action": act})
    assert [ag.arrows[a] for a in isotropy_group(ag, "3").loops] == ["(3,r0)", "(3,r1)"]
    assert len(isotropy_group(ag, "1").loops) == 1


def test_adjoint():
    s3 = symmetric_group(3)
    e = s3.arrow("123")
    assert adjoint(s3, e) == {f: f for f in s3.loops(0)}
    for a in range(s3.n_arrows):
        ad = adjoint(s3, a)
        for b in range(s3.n_arrows):
            adab = adjoint(s3, s3.mul(a, b))
            adb = adjoint(s3, b)
            assert all(adab[f] == ad[adb[f]] for f in adab)
    with pytest.raises(UnknownArrow):
        adjoint(s3, "999")


def test_stars():
    s3 = symmetric_group(3)
    assert len(star(s3, "*", "left")) == 6 == len(star(s3, "*", "right"))
    p = construct_example_groupoid("pair", {"objects": ["a", "b", "c"]})
    for x in p.objects:
        left, right = star(p, x, "left"), star(p, x, "right")
        assert len(left) == 3 == len(right)
        assert sorted(p.inv[a] for a in left) == sorted(right)


def test_equivalence_relation_flag():
    assert is_equivalence_relation_groupoid(construct_example_groupoid("pair", {"objects": ["a", "b"]}))[0]
    ok, wit = is_equivalence_relation_groupoid(cyclic_group(2))
    assert not ok and sorted(wit) == [0, 1]
    assert is_equivalence_relation_groupoid(swap_action())[0]


@st.composite
def relation_groupoids(draw):
    n = draw(st.integers(1, 6))
    labels = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    xs = [str(i) for i in range(n)]
    classes = {}
    for x, l in zip(xs, labels):
        classes.setdefault(l, []).append(x)
    return construct_example_groupoid("equivalence", {"objects": xs, "classes": list(classes.values())}), labels


@given(relation_groupoids())
def test_components_match_bfs(data):
    g, labels = data
    blocks = [list(b) for b in connected_components(g).blocks]
    ref = bfs_components(g.n_objects, [(g.src[a], g.tgt[a]) for a in range(g.n_arrows)])
    assert sorted(blocks) == ref
    assert len(blocks) == len(set(labels))


@given(relation_groupoids())
def test_axioms_and_star_sizes(data):
    g, _ = data
    for f in range(g.n_arrows):
        assert g.mul(f, g.ident[g.src[f]]) == f and g.mul(g.ident[g.tgt[f]], f) == f
        assert g.mul(f, g.inv[f]) == g.ident[g.tgt[f]]
        for h in g.hom(g.tgt[f], g.tgt[f]) + tuple(a for a in range(g.n_arrows) if g.src[a] == g.tgt[f]):
            for k in (a for a in range(g.n_arrows) if g.tgt[a] == g.src[f]):
                assert g.mul(g.mul(h, f), k) == g.mul(h, g.mul(f, k))
    for x in range(g.n_objects):
        assert len(star(g, x, "left")) == len(star(g, x, "right"))
    if is_equivalence_relation_groupoid(g)[0]:
        assert all(len(g.loops(x)) == 1 for x in range(g.n_objects))


@given(st.integers(1, 6))
def test_pair_family_size(n):
    g = construct_example_groupoid("pair", {"objects": [str(i) for i in range(n)]})
    assert g.n_arrows == n * n and len(connected_components(g).blocks) == 1


def test_triple_cap_from_environment(monkeypatch):
    els = s3_elements()
    comp = [(f, h, perm_compose(f, h)) for f in els for h in els]
    monkeypatch.setenv("GFROB_MAX_TRIPLES", "10")
    g = build_groupoid(["*"], [(p, "*", "*") for p in els], comp)
    assert g == symmetric_group(3)
    bad = dict(Z3_TABLE)
    bad.update({("a", "a"): "e", ("a", "b"): "e", ("b", "a"): "e", ("b", "b"): "a"})
    # exhaustive when the cap is above the triple count
    monkeypatch.setenv("GFROB_MAX_TRIPLES", "1000")
    with pytest.raises(AssociativityViolation):
        build_groupoid(["*"], Z3_ARROWS, triples(bad))
