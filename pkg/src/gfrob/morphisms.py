"""Groupoid morphisms, kernels, normal subgroupoids and quotients."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CompositionNotPreserved,
    GroupoidMismatch,
    IdentityNotPreserved,
    InvalidParams,
    KernelTooSmall,
    NotNormal,
    SourceTargetMismatch,
    UnknownArrow,
    UnknownObject,
)
from .groupoid import FiniteGroupoid, build_groupoid
from .unionfind import UnionFind


class GroupoidMorphism:
    """phi = (phi_1, phi_0) stored as index tuples ``arr_map`` and ``obj_map``."""

    def __init__(self, dom: FiniteGroupoid, cod: FiniteGroupoid, obj_map, arr_map):
        self.dom = dom
        self.cod = cod
        self.obj_map = tuple(obj_map)
        self.arr_map = tuple(arr_map)

    def __call__(self, a: int) -> int:
        return self.arr_map[a]

    def __eq__(self, other):
        return (isinstance(other, GroupoidMorphism) and self.dom == other.dom and self.cod == other.cod
                and self.obj_map == other.obj_map and self.arr_map == other.arr_map)

    def __hash__(self):
        return hash((self.obj_map, self.arr_map))

    def __repr__(self):
        return f"GroupoidMorphism({self.dom!r} -> {self.cod!r})"

    def to_json(self):
        d, c = self.dom, self.cod
        return {
            "object_map": {d.objects[u]: c.objects[v] for u, v in enumerate(self.obj_map)},
            "arrow_map": {d.arrows[a]: c.arrows[b] for a, b in enumerate(self.arr_map)},
        }


def _validate_morphism(dom, cod, obj_map, arr_map) -> GroupoidMorphism:
    for a in range(dom.n_arrows):
        b = arr_map[a]
        if cod.src[b] != obj_map[dom.src[a]] or cod.tgt[b] != obj_map[dom.tgt[a]]:
            raise SourceTargetMismatch(f"arrow {dom.arrows[a]!r} maps to {cod.arrows[b]!r} with wrong ends",
                                       witness=dom.arrows[a])
    for u in range(dom.n_objects):
        if arr_map[dom.ident[u]] != cod.ident[obj_map[u]]:
            raise IdentityNotPreserved(f"identity of {dom.objects[u]!r} not preserved", witness=dom.objects[u])
    for (f, g), fg in dom.comp_table().items():
        if arr_map[fg] != cod.mul(arr_map[f], arr_map[g]):
            raise CompositionNotPreserved(
                f"phi({dom.arrows[f]}{dom.arrows[g]}) != phi({dom.arrows[f]})phi({dom.arrows[g]})",
                witness=[dom.arrows[f], dom.arrows[g]])
    return GroupoidMorphism(dom, cod, obj_map, arr_map)


def build_morphism(dom: FiniteGroupoid, cod: FiniteGroupoid, object_map: dict, arrow_map: dict) -> GroupoidMorphism:
    """Validate name-level maps; both must be total on dom."""
    obj_map = []
    for o in dom.objects:
        if o not in object_map:
            raise UnknownObject(f"object map undefined at {o!r}", witness=o)
        obj_map.append(cod.obj(object_map[o]))
    arr_map = []
    for a in dom.arrows:
        if a not in arrow_map:
            raise UnknownArrow(f"arrow map undefined at {a!r}", witness=a)
        arr_map.append(cod.arrow(arrow_map[a]))
    return _validate_morphism(dom, cod, obj_map, arr_map)


def morphism_from_indices(dom, cod, obj_map, arr_map) -> GroupoidMorphism:
    return _validate_morphism(dom, cod, tuple(obj_map), tuple(arr_map))


def identity_morphism(g: FiniteGroupoid) -> GroupoidMorphism:
    return GroupoidMorphism(g, g, range(g.n_objects), range(g.n_arrows))


def inclusion(sub: FiniteGroupoid, parent: FiniteGroupoid) -> GroupoidMorphism:
    """Name-preserving inclusion of a subgroupoid."""
    return build_morphism(sub, parent, {o: o for o in sub.objects}, {a: a for a in sub.arrows})


def compose_morphisms(psi: GroupoidMorphism, phi: GroupoidMorphism) -> GroupoidMorphism:
    """psi after phi."""
    if phi.cod != psi.dom:
        raise GroupoidMismatch("cannot compose: codomain and domain differ")
    return GroupoidMorphism(phi.dom, psi.cod,
                            [psi.obj_map[v] for v in phi.obj_map],
                            [psi.arr_map[b] for b in phi.arr_map])


def morphism_properties(phi: GroupoidMorphism) -> dict:
    d = phi.dom
    faithful = True
    seen = {}
    for a in range(d.n_arrows):
        key = (d.src[a], d.tgt[a], phi.arr_map[a])
        if key in seen:
            faithful = False
            break
        seen[key] = a
    inj_obj = len(set(phi.obj_map)) == len(phi.obj_map)
    inj_arr = len(set(phi.arr_map)) == len(phi.arr_map)
    iso = {u: {a: phi.arr_map[a] for a in d.loops(u)} for u in range(d.n_objects)}
    return {
        "faithful": faithful,
        "injective_on_objects": inj_obj,
        "injective_on_arrows": inj_arr,
        "isotropy_maps": iso,
    }


# ---------------------------------------------------------------------------
# normal subgroupoids

@dataclass(frozen=True)
class NormalSubgroupoid:
    parent: FiniteGroupoid
    arrows: frozenset

    def loops(self, x: int):
        return tuple(a for a in self.parent.loops(x) if a in self.arrows)

    def to_json(self):
        return sorted((self.parent.arrows[a] for a in self.arrows), key=self.parent.arrow_index.get)


def _subgroupoid_witness(g: FiniteGroupoid, n: frozenset):
    for x in range(g.n_objects):
        if g.ident[x] not in n:
            return ("identity", g.arrows[g.ident[x]])
    for a in n:
        if g.inv[a] not in n:
            return ("inverse", g.arrows[a])
    for a in n:
        for b in n:
            c = g.compose(a, b)
            if c is not None and c not in n:
                return ("composition", [g.arrows[a], g.arrows[b]])
    return None


def _normal_def(g: FiniteGroupoid, n: frozenset):
    # all identities, closed, and Ad_h(N^{s(h)}) = N^{t(h)} for every h
    w = _subgroupoid_witness(g, n)
    if w:
        return w
    for h in range(g.n_arrows):
        hi = g.inv[h]
        image = {g.mul(g.mul(h, l), hi) for l in g.loops(g.src[h]) if l in n}
        target = {l for l in g.loops(g.tgt[h]) if l in n}
        if image != target:
            return ("conjugation", g.arrows[h])
    return None


def _normal_invariant_loops(g: FiniteGroupoid, n: frozenset):
    # the loop set of N is stable under the action h . l = h l h^-1
    w = _subgroupoid_witness(g, n)
    if w:
        return w
    out = {}
    for h in range(g.n_arrows):
        out.setdefault(g.src[h], []).append(h)
    for l in sorted(n):
        x = g.src[l]
        if g.tgt[l] != x:
            continue
        for h in out[x]:
            if g.mul(g.mul(h, l), g.inv[h]) not in n:
                return ("conjugation", g.arrows[h])
    return None


def is_normal(parent: FiniteGroupoid, arrows):
    """(bool, witness); both normality criteria are run and must agree."""
    n = frozenset(arrows)
    for a in n:
        if not 0 <= a < parent.n_arrows:
            raise UnknownArrow(f"arrow index {a} not in parent")
    w1 = _normal_def(parent, n)
    w2 = _normal_invariant_loops(parent, n)
    assert (w1 is None) == (w2 is None), f"normality routes disagree: {w1} vs {w2}"
    return w1 is None, w1


def normal_subgroupoid(parent: FiniteGroupoid, arrows) -> NormalSubgroupoid:
    ids = [parent.arrow(a) if isinstance(a, str) else a for a in arrows]
    ok, w = is_normal(parent, ids)
    if not ok:
        raise NotNormal(f"not a normal subgroupoid ({w[0]})", witness=w)
    return NormalSubgroupoid(parent, frozenset(ids))


def kernel(phi: GroupoidMorphism) -> NormalSubgroupoid:
    d, c = phi.dom, phi.cod
    ker = frozenset(a for a in range(d.n_arrows) if phi.arr_map[a] == c.ident[phi.obj_map[d.src[a]]])
    ok, w = is_normal(d, ker)
    assert ok, w
    return NormalSubgroupoid(d, ker)


# ---------------------------------------------------------------------------
# quotients

def quotient(parent: FiniteGroupoid, n: NormalSubgroupoid):
    """(H/N, projection).  Classes are labelled by their least-index member."""
    if n.parent != parent:
        raise GroupoidMismatch("normal subgroupoid belongs to another groupoid")
    ok, w = is_normal(parent, n.arrows)
    if not ok:
        raise NotNormal("not a normal subgroupoid", witness=w)
    g = parent
    uf = UnionFind(g.n_objects)
    for a in n.arrows:
        uf.union(g.src[a], g.tgt[a])
    oblocks = uf.blocks()
    oclass = {}
    for i, b in enumerate(oblocks):
        for x in b:
            oclass[x] = i
    # arrow classes: h ~ e h e'
    nin = {}
    nout = {}
    for e in n.arrows:
        nin.setdefault(g.tgt[e], []).append(e)
        nout.setdefault(g.src[e], []).append(e)
    auf = UnionFind(g.n_arrows)
    for h in range(g.n_arrows):
        for e in nout.get(g.tgt[h], ()):
            for e2 in nin.get(g.src[h], ()):
                auf.union(h, g.mul(g.mul(e, h), e2))
    ablocks = auf.blocks()
    aclass = {}
    for i, b in enumerate(ablocks):
        for h in b:
            aclass[h] = i
    # path in N between objects of one class
    npath = {}
    for e in n.arrows:
        npath.setdefault((g.src[e], g.tgt[e]), e)
    obj_names = [g.objects[b[0]] for b in oblocks]
    arr_names = [g.arrows[b[0]] for b in ablocks]
    arrows = [(arr_names[i], obj_names[oclass[g.src[b[0]]]], obj_names[oclass[g.tgt[b[0]]]])
              for i, b in enumerate(ablocks)]
    comp = {}
    for i, bi in enumerate(ablocks):
        for j, bj in enumerate(ablocks):
            if oclass[g.src[bi[0]]] != oclass[g.tgt[bj[0]]]:
                continue
            # [h][h'] = [h e h'] for any e in N from t(h') to s(h); all choices checked
            vals = set()
            for h in bi:
                for h2 in bj:
                    e = npath.get((g.tgt[h2], g.src[h]))
                    if e is not None:
                        vals.add(aclass[g.mul(g.mul(h, e), h2)])
            assert len(vals) == 1, "quotient composition not well defined"
            comp[(i, j)] = vals.pop()
    triples = [(arr_names[i], arr_names[j], arr_names[k]) for (i, j), k in comp.items()]
    q = build_groupoid(obj_names, arrows, triples)
    pi = _validate_morphism(g, q, [oclass[x] for x in range(g.n_objects)],
                            [aclass[h] for h in range(g.n_arrows)])
    assert kernel(pi).arrows == n.arrows
    return q, pi


def factor_through(phi: GroupoidMorphism, n: NormalSubgroupoid, quotient_data=None) -> GroupoidMorphism:
    """The unique phibar with phibar . pi = phi, on H/N."""
    ker = kernel(phi).arrows
    for a in sorted(n.arrows):
        if a not in ker:
            raise KernelTooSmall(f"arrow {phi.dom.arrows[a]!r} of N is not in the kernel",
                                 witness=phi.dom.arrows[a])
    q, pi = quotient_data if quotient_data is not None else quotient(phi.dom, n)
    obj_map = [None] * q.n_objects
    arr_map = [None] * q.n_arrows
    for x in range(phi.dom.n_objects):
        c = pi.obj_map[x]
        if obj_map[c] is None:
            obj_map[c] = phi.obj_map[x]
        elif obj_map[c] != phi.obj_map[x]:
            raise InvalidParams("phi is not constant on object classes")
    for h in range(phi.dom.n_arrows):
        c = pi.arr_map[h]
        if arr_map[c] is None:
            arr_map[c] = phi.arr_map[h]
        elif arr_map[c] != phi.arr_map[h]:
            raise InvalidParams("phi is not constant on arrow classes")
    phibar = _validate_morphism(q, phi.cod, obj_map, arr_map)
    assert compose_morphisms(phibar, pi) == phi
    return phibar
