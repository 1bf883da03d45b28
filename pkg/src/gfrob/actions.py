"""Groupoid-sets, bisets, translation groupoids, orbits and tensor products.

A right action ``x.g`` is defined when ``struct(x) == tgt(g)`` and lands over
``src(g)``; a left action ``g.x`` is defined when ``struct(x) == src(g)`` and
lands over ``tgt(g)``.  Tables are keyed ``(element, arrow)`` on both sides.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    AssociativityViolation,
    CompatibilityViolation,
    GroupoidMismatch,
    InvalidParams,
    StructureMapViolation,
    UnitViolation,
    UnknownObject,
)
from .groupoid import FiniteGroupoid, build_groupoid
from .morphisms import GroupoidMorphism, _validate_morphism
from .unionfind import UnionFind


def _defined(g: FiniteGroupoid, side: str, s: int, a: int) -> bool:
    return s == (g.tgt[a] if side == "right" else g.src[a])


def _landing(g: FiniteGroupoid, side: str, a: int) -> int:
    return g.src[a] if side == "right" else g.tgt[a]


class ActionSet:
    def __init__(self, groupoid, carrier, struct, side, table, data=None):
        self.groupoid = groupoid
        self.carrier = tuple(carrier)
        self.struct = tuple(struct)
        self.side = side
        self.table = table
        self.data = tuple(data) if data is not None else None
        self.index = {c: i for i, c in enumerate(self.carrier)}

    def __len__(self):
        return len(self.carrier)

    def act(self, x: int, a: int):
        """x.a (right) or a.x (left) on indices; None when undefined."""
        return self.table.get((x, a))

    def __eq__(self, other):
        return (isinstance(other, ActionSet) and self.groupoid == other.groupoid and self.side == other.side
                and self.carrier == other.carrier and self.struct == other.struct and self.table == other.table)

    def __repr__(self):
        return f"ActionSet({self.side}, {len(self.carrier)} elements)"

    def to_json(self):
        g = self.groupoid
        return {
            "side": self.side,
            "carrier": list(self.carrier),
            "struct": {self.carrier[x]: g.objects[o] for x, o in enumerate(self.struct)},
            "action": [[self.carrier[x], g.arrows[a], self.carrier[y]] for (x, a), y in sorted(self.table.items())],
        }


def _validate_action(g, carrier, struct, side, table):
    n = len(carrier)
    for x in range(n):
        for a in range(g.n_arrows):
            defined = _defined(g, side, struct[x], a)
            y = table.get((x, a))
            if defined and y is None:
                raise StructureMapViolation(f"action undefined at ({carrier[x]}, {g.arrows[a]})",
                                            witness=[carrier[x], g.arrows[a]])
            if not defined and y is not None:
                raise StructureMapViolation(f"action defined at non-composable ({carrier[x]}, {g.arrows[a]})",
                                            witness=[carrier[x], g.arrows[a]])
            if defined and struct[y] != _landing(g, side, a):
                raise StructureMapViolation(f"structure map of ({carrier[x]}, {g.arrows[a]}) is wrong",
                                            witness=[carrier[x], g.arrows[a]])
    for x in range(n):
        if table[(x, g.ident[struct[x]])] != x:
            raise UnitViolation(f"identity does not fix {carrier[x]}", witness=carrier[x])
    for x in range(n):
        for a in range(g.n_arrows):
            y = table.get((x, a))
            if y is None:
                continue
            for b in range(g.n_arrows):
                z = table.get((y, b))
                if z is None:
                    continue
                # right: (x a) b = x (a b); left: b (a x) = (b a) x
                ab = g.mul(a, b) if side == "right" else g.mul(b, a)
                if table[(x, ab)] != z:
                    raise AssociativityViolation(
                        f"action not associative at ({carrier[x]}, {g.arrows[a]}, {g.arrows[b]})",
                        witness=[carrier[x], g.arrows[a], g.arrows[b]])


def make_action(groupoid, carrier, struct, side, act_fn, data=None) -> ActionSet:
    """Build from index data and a function (x, a) -> y, then validate."""
    if side not in ("left", "right"):
        raise InvalidParams(f"side must be left or right, got {side!r}")
    table = {}
    for x in range(len(carrier)):
        for a in range(groupoid.n_arrows):
            if _defined(groupoid, side, struct[x], a):
                table[(x, a)] = act_fn(x, a)
    _validate_action(groupoid, carrier, struct, side, table)
    return ActionSet(groupoid, carrier, struct, side, table, data)


def build_action(groupoid: FiniteGroupoid, carrier, struct: dict, action, side: str) -> ActionSet:
    """Name-level builder: ``struct`` maps element -> object, ``action`` is a list of
    ``(element, arrow, result)`` triples (for left actions read ``arrow . element``)."""
    if side not in ("left", "right"):
        raise InvalidParams(f"side must be left or right, got {side!r}")
    carrier = list(carrier)
    ci = {c: i for i, c in enumerate(carrier)}
    if len(ci) != len(carrier):
        raise InvalidParams("duplicate carrier elements")
    st = []
    for c in carrier:
        if c not in struct:
            raise StructureMapViolation(f"structure map undefined at {c}", witness=c)
        st.append(groupoid.obj(struct[c]))
    table = {}
    for x, a, y in action:
        if x not in ci or y not in ci:
            raise InvalidParams(f"unknown element in action entry ({x}, {a}, {y})", witness=[x, a, y])
        table[(ci[x], groupoid.arrow(a))] = ci[y]
    _validate_action(groupoid, carrier, st, side, table)
    return ActionSet(groupoid, carrier, st, side, table)


def regular_action(g: FiniteGroupoid, side: str = "right") -> ActionSet:
    """(G_1, s) with right multiplication, or (G_1, t) with left multiplication."""
    if side == "right":
        return make_action(g, g.arrows, g.src, "right", lambda x, a: g.mul(x, a))
    return make_action(g, g.arrows, g.tgt, "left", lambda x, a: g.mul(a, x))


def objects_action(g: FiniteGroupoid) -> ActionSet:
    """(G_0, id) with x.g = s(g)."""
    return make_action(g, g.objects, range(g.n_objects), "right", lambda x, a: g.src[a])


def opposite(x: ActionSet) -> ActionSet:
    """Same carrier, other side, acting through inverses."""
    g = x.groupoid
    side = "left" if x.side == "right" else "right"
    table = {(e, g.inv[b]): y for (e, b), y in x.table.items()}
    _validate_action(g, x.carrier, x.struct, side, table)
    return ActionSet(g, x.carrier, x.struct, side, table, x.data)


# ---------------------------------------------------------------------------
# bisets

class Biset:
    """Left action of ``left`` (structure map ``lmap``) commuting with a right
    action of ``right`` (structure map ``rmap``)."""

    def __init__(self, left: ActionSet, right: ActionSet):
        self.left_action = left
        self.right_action = right
        self.lgrp = left.groupoid
        self.rgrp = right.groupoid
        self.carrier = left.carrier
        self.lmap = left.struct
        self.rmap = right.struct
        self.data = left.data
        self.index = left.index

    def __len__(self):
        return len(self.carrier)

    def lact(self, h: int, x: int):
        return self.left_action.table.get((x, h))

    def ract(self, x: int, g: int):
        return self.right_action.table.get((x, g))

    def __eq__(self, other):
        return (isinstance(other, Biset) and self.left_action == other.left_action
                and self.right_action == other.right_action)

    def __repr__(self):
        return f"Biset({len(self.carrier)} elements)"

    def to_json(self):
        return {"left": self.left_action.to_json(), "right": self.right_action.to_json()}


def _validate_biset(left: ActionSet, right: ActionSet) -> Biset:
    if left.carrier != right.carrier:
        raise InvalidParams("left and right actions have different carriers")
    if left.side != "left" or right.side != "right":
        raise InvalidParams("biset needs a left and a right action")
    H, G = left.groupoid, right.groupoid
    c = left.carrier
    for (x, g), y in right.table.items():
        if left.struct[y] != left.struct[x]:
            raise CompatibilityViolation(f"left structure map moved by right action at ({c[x]}, {G.arrows[g]})",
                                         witness=[c[x], G.arrows[g]])
    for (x, h), y in left.table.items():
        if right.struct[y] != right.struct[x]:
            raise CompatibilityViolation(f"right structure map moved by left action at ({H.arrows[h]}, {c[x]})",
                                         witness=[H.arrows[h], c[x]])
    for (x, g), xg in right.table.items():
        for h in range(H.n_arrows):
            hxg = left.table.get((xg, h))
            if hxg is None:
                continue
            if right.table[(left.table[(x, h)], g)] != hxg:
                raise CompatibilityViolation(
                    f"h(xg) != (hx)g at ({H.arrows[h]}, {c[x]}, {G.arrows[g]})",
                    witness=[H.arrows[h], c[x], G.arrows[g]])
    return Biset(left, right)


def make_biset(lgrp, rgrp, carrier, lmap, rmap, lact, ract, data=None) -> Biset:
    left = make_action(lgrp, carrier, lmap, "left", lact, data)
    right = make_action(rgrp, carrier, rmap, "right", ract, data)
    return _validate_biset(left, right)


def build_biset(left_groupoid, right_groupoid, carrier, lmap: dict, rmap: dict, left_action, right_action) -> Biset:
    """Name-level builder; action lists as in :func:`build_action`."""
    left = build_action(left_groupoid, carrier, lmap, left_action, "left")
    right = build_action(right_groupoid, carrier, rmap, right_action, "right")
    return _validate_biset(left, right)


def regular_biset(g: FiniteGroupoid) -> Biset:
    """G_1 over (G, G) by left and right multiplication."""
    return make_biset(g, g, g.arrows, g.tgt, g.src,
                      lambda x, a: g.mul(a, x), lambda x, a: g.mul(x, a))


def empty_biset(lgrp, rgrp) -> Biset:
    return make_biset(lgrp, rgrp, [], [], [], None, None)


# ---------------------------------------------------------------------------
# translation groupoids and orbits

def translation_groupoid(x: ActionSet):
    """(X x| G, sigma) for a right action; (G |x X, sigma) for a left one.

    Right: arrows (x, g) with t = x, s = xg and (x,g)(xg,g') = (x,gg').
    Left: arrows (g, x) with s = x, t = gx and (g, hx)(h, x) = (gh, x).
    sigma sends an element to its structure object and an arrow to g.
    """
    g = x.groupoid
    c = x.carrier
    arrows, info, names = [], [], {}
    for (e, a), y in sorted(x.table.items()):
        if x.side == "right":
            n = f"({c[e]},{g.arrows[a]})"
            arrows.append((n, c[y], c[e]))
        else:
            n = f"({g.arrows[a]},{c[e]})"
            arrows.append((n, c[e], c[y]))
        names[(e, a)] = n
        info.append((e, a))
    lookup = dict(zip((n for n, _, _ in arrows), info))
    comp = []
    for f, sf, tf in arrows:
        e1, a1 = lookup[f]
        for h, sh, th in arrows:
            if th != sf:
                continue
            e2, a2 = lookup[h]
            if x.side == "right":
                comp.append((f, h, names[(e1, g.mul(a1, a2))]))
            else:
                comp.append((f, h, names[(e2, g.mul(a1, a2))]))
    tg = build_groupoid(c, arrows, comp)
    sigma = _validate_morphism(tg, g, x.struct, [lookup[n][1] for n in tg.arrows])
    return tg, sigma


def two_sided_translation(b: Biset) -> FiniteGroupoid:
    """Arrows (h, x, g) with s(h) = lmap(x), s(g) = rmap(x); source x, target h x g^-1."""
    H, G = b.lgrp, b.rgrp
    c = b.carrier
    arrows, lookup = [], {}
    for x in range(len(c)):
        for h in range(H.n_arrows):
            if H.src[h] != b.lmap[x]:
                continue
            hx = b.lact(h, x)
            for g in range(G.n_arrows):
                if G.src[g] != b.rmap[x]:
                    continue
                y = b.ract(hx, G.inv[g])
                n = f"({H.arrows[h]},{c[x]},{G.arrows[g]})"
                arrows.append((n, c[x], c[y]))
                lookup[n] = (h, x, g)
    names = {v: k for k, v in lookup.items()}
    comp = []
    for f, sf, _ in arrows:
        h, _, g = lookup[f]
        for k, sk, tk in arrows:
            if tk != sf:
                continue
            h2, x2, g2 = lookup[k]
            comp.append((f, k, names[(H.mul(h, h2), x2, G.mul(g, g2))]))
    return build_groupoid(c, arrows, comp)


@dataclass(frozen=True)
class OrbitPartition:
    blocks: tuple
    representatives: tuple

    def block_of(self, x: int) -> int:
        for i, b in enumerate(self.blocks):
            if x in b:
                return i
        raise KeyError(x)


def orbits(x) -> OrbitPartition:
    """Union-find over action edges; for bisets, over both actions."""
    tables = [x.table] if isinstance(x, ActionSet) else [x.left_action.table, x.right_action.table]
    uf = UnionFind(len(x.carrier))
    for t in tables:
        for (e, _), y in t.items():
            uf.union(e, y)
    blocks = tuple(uf.blocks())
    return OrbitPartition(blocks, tuple(b[0] for b in blocks))


def fibre(b: Biset, x, side: str) -> ActionSet:
    """Elements over the object x.

    side="right": x is an object of the right groupoid; the fibre rmap^-1(x)
    keeps the left action.  side="left": x is an object of the left groupoid;
    lmap^-1(x) keeps the right action.
    """
    grp = b.rgrp if side == "right" else b.lgrp
    if side not in ("left", "right"):
        raise InvalidParams(f"side must be left or right, got {side!r}")
    xi = grp.obj(x) if not isinstance(x, int) else x
    if not 0 <= xi < grp.n_objects:
        raise UnknownObject(f"unknown object {x!r}")
    fixed = b.rmap if side == "right" else b.lmap
    keep = [e for e in range(len(b.carrier)) if fixed[e] == xi]
    pos = {e: i for i, e in enumerate(keep)}
    src = b.left_action if side == "right" else b.right_action
    data = [b.data[e] for e in keep] if b.data is not None else None
    return make_action(src.groupoid, [b.carrier[e] for e in keep], [src.struct[e] for e in keep],
                       src.side, lambda i, a: pos[src.table[(keep[i], a)]], data)


# ---------------------------------------------------------------------------
# tensor product and pull-back bisets

def tensor_over(y: Biset, x: Biset) -> Biset:
    """Y (x)_H X for Y over (G, H) and X over (H, K).

    Carrier: classes of pairs (y, x) with rmap(y) = lmap(x) under
    (y, x) h = (y h, h^-1 x), labelled by least-index pairs.
    """
    if y.rgrp != x.lgrp:
        raise GroupoidMismatch("middle groupoids of the tensor product differ")
    H = y.rgrp
    pairs = [(a, b) for a in range(len(y.carrier)) for b in range(len(x.carrier)) if y.rmap[a] == x.lmap[b]]
    pidx = {p: i for i, p in enumerate(pairs)}
    uf = UnionFind(len(pairs))
    for i, (a, b) in enumerate(pairs):
        for h in range(H.n_arrows):
            if H.tgt[h] != y.rmap[a]:
                continue
            uf.union(i, pidx[(y.ract(a, h), x.lact(H.inv[h], b))])
    blocks = uf.blocks()
    cls = {}
    for k, bl in enumerate(blocks):
        for i in bl:
            cls[pairs[i]] = k
    reps = [pairs[bl[0]] for bl in blocks]
    carrier = [f"{y.carrier[a]}@{x.carrier[b]}" for a, b in reps]
    lmap = [y.lmap[a] for a, _ in reps]
    rmap = [x.rmap[b] for _, b in reps]
    return make_biset(y.lgrp, x.rgrp, carrier, lmap, rmap,
                      lambda k, g: cls[(y.lact(g, reps[k][0]), reps[k][1])],
                      lambda k, g: cls[(reps[k][0], x.ract(reps[k][1], g))],
                      data=reps)


def pullback_bisets(phi: GroupoidMorphism):
    """(U^phi(G) over (G, H), ^phiU(G) over (H, G)) for phi: H -> G.

    U^phi(G) = {(a, u) : s(a) = phi0(u)}, lmap = t(a), rmap = u,
      g(a, u) = (ga, u),  (a, u) h = (a phi1(h), s(h)).
    ^phiU(G) = {(u, a) : phi0(u) = t(a)}, lmap = u, rmap = s(a),
      h(u, a) = (t(h), phi1(h) a),  (u, a) g = (u, a g).
    Element data are the index pairs.
    """
    H, G = phi.dom, phi.cod
    rdata = [(a, u) for a in range(G.n_arrows) for u in range(H.n_objects) if G.src[a] == phi.obj_map[u]]
    ri = {d: i for i, d in enumerate(rdata)}
    right = make_biset(
        G, H, [f"({G.arrows[a]},{H.objects[u]})" for a, u in rdata],
        [G.tgt[a] for a, _ in rdata], [u for _, u in rdata],
        lambda i, g: ri[(G.mul(g, rdata[i][0]), rdata[i][1])],
        lambda i, h: ri[(G.mul(rdata[i][0], phi.arr_map[h]), H.src[h])],
        data=rdata)
    ldata = [(u, a) for u in range(H.n_objects) for a in range(G.n_arrows) if G.tgt[a] == phi.obj_map[u]]
    li = {d: i for i, d in enumerate(ldata)}
    left = make_biset(
        H, G, [f"({H.objects[u]},{G.arrows[a]})" for u, a in ldata],
        [u for u, _ in ldata], [G.src[a] for _, a in ldata],
        lambda i, h: li[(H.tgt[h], G.mul(phi.arr_map[h], ldata[i][1]))],
        lambda i, g: li[(ldata[i][0], G.mul(ldata[i][1], g))],
        data=ldata)
    return right, left


def fibre_isomorphism(phi: GroupoidMorphism, x: int):
    """The bijection (u, c) -> (c^-1, u) from the left-biset fibre over x onto
    the right-biset fibre over x, checked to intertwine h.(u,c) with (c^-1,u).h^-1."""
    G = phi.cod
    right, left = pullback_bisets(phi)
    lf = fibre(left, x, "right")
    rf = fibre(right, x, "left")
    ridx = {d: i for i, d in enumerate(rf.data)}
    bij = {i: ridx[(G.inv[c], u)] for i, (u, c) in enumerate(lf.data)}
    assert sorted(bij.values()) == list(range(len(rf)))
    H = phi.dom
    for (i, h), j in lf.table.items():
        assert bij[j] == rf.table[(bij[i], H.inv[h])]
    return lf, rf, bij
