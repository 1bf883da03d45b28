"""Finite groupoids as validated composition tables.

Objects and arrows carry string labels and are interned to dense indices.
Composition follows the convention ``compose(f, g) = fg``, defined exactly
when ``src(f) == tgt(g)``; so ``fg`` means "first g, then f".
"""
from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass

from .errors import (
    AssociativityViolation,
    InvalidParams,
    MissingComposite,
    NoInverse,
    SourceTargetMismatch,
    UnitViolation,
    UnknownArrow,
    UnknownObject,
)
from .unionfind import UnionFind

MAX_FRAME_FIBRE = 6


class FiniteGroupoid:
    """Immutable finite groupoid.  Build through :func:`build_groupoid`."""

    def __init__(self, objects, arrows, src, tgt, ident, inv, comp):
        self.objects = tuple(objects)
        self.arrows = tuple(arrows)
        self.src = tuple(src)
        self.tgt = tuple(tgt)
        self.ident = tuple(ident)
        self.inv = tuple(inv)
        self._comp = comp
        self.obj_index = {o: i for i, o in enumerate(self.objects)}
        self.arrow_index = {a: i for i, a in enumerate(self.arrows)}
        self._hom = {}
        for a in range(len(self.arrows)):
            self._hom.setdefault((self.src[a], self.tgt[a]), []).append(a)
        self._hom = {k: tuple(v) for k, v in self._hom.items()}

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    def obj(self, name) -> int:
        try:
            return self.obj_index[name]
        except KeyError:
            raise UnknownObject(f"unknown object {name!r}", witness=name) from None

    def arrow(self, name) -> int:
        try:
            return self.arrow_index[name]
        except KeyError:
            raise UnknownArrow(f"unknown arrow {name!r}", witness=name) from None

    def mul(self, f: int, g: int) -> int:
        """fg on indices; raises KeyError when s(f) != t(g)."""
        return self._comp[(f, g)]

    def compose(self, f: int, g: int):
        """fg, or None when not composable."""
        return self._comp.get((f, g))

    def hom(self, x: int, y: int) -> tuple:
        """Arrows with source x and target y."""
        return self._hom.get((x, y), ())

    def loops(self, x: int) -> tuple:
        return self.hom(x, x)

    def is_identity(self, a: int) -> bool:
        return self.ident[self.src[a]] == a

    def comp_table(self):
        return self._comp

    def __eq__(self, other):
        return isinstance(other, FiniteGroupoid) and self.table() == other.table()

    def __hash__(self):
        return hash((self.objects, self.arrows))

    def table(self):
        return (self.objects, self.arrows, self.src, self.tgt, self.ident, self.inv,
                tuple(sorted(self._comp.items())))

    def __repr__(self):
        return f"FiniteGroupoid({self.n_objects} objects, {self.n_arrows} arrows)"

    def to_json(self):
        return {
            "objects": list(self.objects),
            "arrows": [{"name": a, "src": self.objects[self.src[i]], "tgt": self.objects[self.tgt[i]]}
                       for i, a in enumerate(self.arrows)],
            "identities": {self.objects[x]: self.arrows[e] for x, e in enumerate(self.ident)},
            "composition": [[self.arrows[f], self.arrows[g], self.arrows[h]]
                            for (f, g), h in sorted(self._comp.items())],
        }


def default_max_triples():
    v = os.environ.get("GFROB_MAX_TRIPLES")
    return int(v) if v else None


def build_groupoid(objects, arrows, composition, identities=None, inverses=None,
                   max_triples="env", seed: int = 0) -> FiniteGroupoid:
    """Validate a raw table and return a FiniteGroupoid.

    ``arrows`` is a list of ``(name, src, tgt)``; ``composition`` a list of
    ``(f, g, fg)`` name triples.  ``identities`` maps object to arrow name and is
    derived when omitted, as are ``inverses``.  Associativity is checked on all
    composable triples unless their number exceeds ``max_triples``, in which
    case a seeded random sample of that size is checked.
    """
    if max_triples == "env":
        max_triples = default_max_triples()
    objects = list(objects)
    if len(set(objects)) != len(objects):
        raise InvalidParams("duplicate object names")
    oi = {o: i for i, o in enumerate(objects)}
    names, src, tgt = [], [], []
    for a in arrows:
        name, s, t = a
        if s not in oi:
            raise UnknownObject(f"arrow {name!r} has unknown source {s!r}", witness=name)
        if t not in oi:
            raise UnknownObject(f"arrow {name!r} has unknown target {t!r}", witness=name)
        names.append(name)
        src.append(oi[s])
        tgt.append(oi[t])
    if len(set(names)) != len(names):
        raise InvalidParams("duplicate arrow names")
    ai = {a: i for i, a in enumerate(names)}

    def arrow_id(n):
        if n not in ai:
            raise UnknownArrow(f"unknown arrow {n!r}", witness=n)
        return ai[n]

    comp = {}
    for f, g, h in composition:
        fi, gi, hi = arrow_id(f), arrow_id(g), arrow_id(h)
        if src[fi] != tgt[gi]:
            raise SourceTargetMismatch(f"composite listed for non-composable pair ({f}, {g})", witness=[f, g])
        if src[hi] != src[gi] or tgt[hi] != tgt[fi]:
            raise SourceTargetMismatch(f"{f}{g} = {h} has wrong source or target", witness=[f, g, h])
        if comp.get((fi, gi), hi) != hi:
            raise InvalidParams(f"conflicting composites for ({f}, {g})", witness=[f, g])
        comp[(fi, gi)] = hi
    return _validate(objects, names, src, tgt, comp, identities, inverses, max_triples, seed)


def _validate(objects, names, src, tgt, comp, identities, inverses, max_triples, seed):
    n = len(names)
    by_src, by_tgt = {}, {}
    for a in range(n):
        by_src.setdefault(src[a], []).append(a)
        by_tgt.setdefault(tgt[a], []).append(a)
    # totality
    for f in range(n):
        for g in by_tgt.get(src[f], ()):
            if (f, g) not in comp:
                raise MissingComposite(f"missing composite of ({names[f]}, {names[g]})",
                                       witness=[names[f], names[g]])
    # identities
    oi = {o: i for i, o in enumerate(objects)}
    ident = [None] * len(objects)
    if identities is not None:
        for o, e in identities.items():
            if o not in oi:
                raise UnknownObject(f"identity for unknown object {o!r}", witness=o)
            if e not in names:
                raise UnknownArrow(f"unknown identity arrow {e!r}", witness=e)
            ident[oi[o]] = names.index(e)
    for x in range(len(objects)):
        if ident[x] is None:
            cands = [e for e in by_src.get(x, ()) if tgt[e] == x and comp[(e, e)] == e]
            if not cands:
                raise UnitViolation(f"object {objects[x]!r} has no identity arrow", witness=objects[x])
            ident[x] = cands[0]
        e = ident[x]
        if src[e] != x or tgt[e] != x:
            raise UnitViolation(f"identity {names[e]!r} is not a loop at {objects[x]!r}", witness=names[e])
    for f in range(n):
        if comp[(f, ident[src[f]])] != f:
            raise UnitViolation(f"{names[f]} * id != {names[f]}", witness=names[f])
        if comp[(ident[tgt[f]], f)] != f:
            raise UnitViolation(f"id * {names[f]} != {names[f]}", witness=names[f])
    # associativity
    triples_count = sum(len(by_tgt.get(src[g], ())) * len(by_src.get(tgt[g], ())) for g in range(n))

    def check(f, g, h):
        if comp[(comp[(f, g)], h)] != comp[(f, comp[(g, h)])]:
            raise AssociativityViolation(
                f"({names[f]}{names[g]}){names[h]} != {names[f]}({names[g]}{names[h]})",
                witness=[names[f], names[g], names[h]])

    if max_triples is None or triples_count <= max_triples:
        for g in range(n):
            for f in by_src.get(tgt[g], ()):
                for h in by_tgt.get(src[g], ()):
                    check(f, g, h)
    else:
        rng = random.Random(seed)
        for _ in range(max_triples):
            g = rng.randrange(n)
            f = rng.choice(by_src[tgt[g]])
            h = rng.choice(by_tgt[src[g]])
            check(f, g, h)
    # inverses
    inv = [None] * n
    if inverses is not None:
        for f, g in inverses.items():
            if f not in names or g not in names:
                raise UnknownArrow(f"unknown arrow in inverse entry {f!r}: {g!r}", witness=[f, g])
            inv[names.index(f)] = names.index(g)
    for f in range(n):
        if inv[f] is None:
            for g in by_src.get(tgt[f], ()):
                if tgt[g] == src[f] and comp[(f, g)] == ident[tgt[f]] and comp[(g, f)] == ident[src[f]]:
                    inv[f] = g
                    break
            else:
                raise NoInverse(f"arrow {names[f]!r} has no inverse", witness=names[f])
        g = inv[f]
        if src[g] != tgt[f] or tgt[g] != src[f] or comp[(f, g)] != ident[tgt[f]] or comp[(g, f)] != ident[src[f]]:
            raise NoInverse(f"declared inverse of {names[f]!r} is wrong", witness=names[f])
    return FiniteGroupoid(objects, names, src, tgt, ident, inv, comp)


def groupoid_from_rule(objects, arrows, mul, max_triples="env") -> FiniteGroupoid:
    """Build from (name, src, tgt) arrows and a python composition rule on names."""
    arrows = list(arrows)
    by_src = {}
    for name, s, t in arrows:
        by_src.setdefault(s, []).append(name)
    comp = []
    for f, sf, _ in arrows:
        for g, sg, tg in arrows:
            if tg == sf:
                comp.append((f, g, mul(f, g)))
    return build_groupoid(objects, arrows, comp, max_triples=max_triples)


# ---------------------------------------------------------------------------
# groups as one-object groupoids

def group_groupoid(elements, mul, obj="*") -> FiniteGroupoid:
    """One-object groupoid from a list of element names and a product rule."""
    return groupoid_from_rule([obj], [(e, obj, obj) for e in elements], mul)


def cyclic_group(n: int, obj="*") -> FiniteGroupoid:
    """Z/n with arrows r0..r{n-1}, r0 the identity."""
    names = [f"r{k}" for k in range(n)]
    return group_groupoid(names, lambda a, b: f"r{(int(a[1:]) + int(b[1:])) % n}", obj)


def perm_name(p) -> str:
    return "".join(str(i + 1) for i in p)


def symmetric_group(n: int, obj="*") -> FiniteGroupoid:
    """S_n; arrows are one-line notations like "213", product fg = f after g."""
    perms = sorted(itertools.permutations(range(n)))
    names = [perm_name(p) for p in perms]

    def mul(a, b):
        pa = [int(c) - 1 for c in a]
        pb = [int(c) - 1 for c in b]
        return perm_name(pa[pb[i]] for i in range(n))

    return group_groupoid(names, mul, obj)


# ---------------------------------------------------------------------------
# constructor families

def _pair_name(a, b):
    return f"({a},{b})"


def construct_example_groupoid(family: str, params: dict) -> FiniteGroupoid:
    """One of trivial | pair | equivalence | action | induced | isotropy | finite_frame.

    params:
      trivial, pair: {"objects": [...]}
      equivalence: {"objects": [...], "pairs": [[a, b], ...]}  (or "classes")
      action: {"objects": X, "group": FiniteGroupoid with one object,
               "action": {(x, g): x'}}  a right action
      induced: {"groupoid": G, "objects": X, "map": {x: G-object}}
      isotropy: {"groupoid": G}
      finite_frame: {"map": {element: base point}}
    """
    builder = _FAMILIES.get(family)
    if builder is None:
        raise InvalidParams(f"unknown groupoid family {family!r}")
    try:
        return builder(params)
    except KeyError as exc:
        raise InvalidParams(f"{family}: missing parameter {exc}") from None


def _trivial(params):
    xs = list(params["objects"])
    return groupoid_from_rule(xs, [(f"id_{x}", x, x) for x in xs], lambda f, g: f)


def _pair(params):
    xs = list(params["objects"])
    return _relation_groupoid(xs, [(a, b) for a in xs for b in xs])


def _relation_groupoid(xs, pairs):
    # arrow (a,b): source b, target a; (a,b)(b,c) = (a,c)
    arrows = [(_pair_name(a, b), b, a) for a, b in pairs]
    lookup = {_pair_name(a, b): (a, b) for a, b in pairs}
    g = groupoid_from_rule(xs, arrows, lambda f, h: _pair_name(lookup[f][0], lookup[h][1]))
    return g


def _equivalence(params):
    xs = list(params["objects"])
    if "classes" in params:
        pairs = {(a, b) for c in params["classes"] for a in c for b in c}
    else:
        pairs = {tuple(p) for p in params["pairs"]}
    xset = set(xs)
    for a, b in pairs:
        if a not in xset or b not in xset:
            raise InvalidParams(f"relation mentions unknown element in ({a},{b})", witness=[a, b])
    for a in xs:
        if (a, a) not in pairs:
            raise InvalidParams(f"relation not reflexive at {a}", witness=[a, a])
    for a, b in pairs:
        if (b, a) not in pairs:
            raise InvalidParams(f"relation not symmetric at ({a},{b})", witness=[a, b])
    for a, b in pairs:
        for c, d in pairs:
            if b == c and (a, d) not in pairs:
                raise InvalidParams(f"relation not transitive at ({a},{b}),({b},{d})", witness=[a, b, d])
    order = {x: i for i, x in enumerate(xs)}
    ordered = sorted(pairs, key=lambda p: (order[p[0]], order[p[1]]))
    return _relation_groupoid(xs, ordered)


def _action(params):
    xs = list(params["objects"])
    grp = params["group"]
    if grp.n_objects != 1:
        raise InvalidParams("action family needs a one-object groupoid (a group)")
    act = {(x, g): y for (x, g), y in params["action"].items()}
    e = grp.arrows[grp.ident[0]]
    for x in xs:
        for g in grp.arrows:
            if (x, g) not in act or act[(x, g)] not in xs:
                raise InvalidParams(f"action undefined or invalid at ({x},{g})", witness=[x, g])
        if act[(x, e)] != x:
            raise InvalidParams(f"identity does not fix {x}", witness=[x])
    for x in xs:
        for g in range(grp.n_arrows):
            for h in range(grp.n_arrows):
                gn, hn = grp.arrows[g], grp.arrows[h]
                if act[(act[(x, gn)], hn)] != act[(x, grp.arrows[grp.mul(g, h)])]:
                    raise InvalidParams(f"not a right action: (x g) h != x (g h) at ({x},{gn},{hn})",
                                        witness=[x, gn, hn])
    # arrow (x,g): source xg, target x; (x,g)(xg,g') = (x,gg')
    arrows, lookup = [], {}
    for x in xs:
        for g in grp.arrows:
            n = _pair_name(x, g)
            arrows.append((n, act[(x, g)], x))
            lookup[n] = (x, g)

    def mul(f, h):
        x, g = lookup[f]
        _, g2 = lookup[h]
        return _pair_name(x, grp.arrows[grp.mul(grp.arrow(g), grp.arrow(g2))])

    return groupoid_from_rule(xs, arrows, mul)


def _induced(params):
    grp = params["groupoid"]
    xs = list(params["objects"])
    sigma = params["map"]
    for x in xs:
        if x not in sigma:
            raise InvalidParams(f"map undefined at {x}", witness=[x])
        grp.obj(sigma[x])
    arrows, lookup = [], {}
    for x in xs:
        for gi, g in enumerate(grp.arrows):
            if grp.objects[grp.tgt[gi]] != sigma[x]:
                continue
            for y in xs:
                if grp.objects[grp.src[gi]] == sigma[y]:
                    n = f"({x},{g},{y})"
                    arrows.append((n, y, x))
                    lookup[n] = (x, gi, y)

    def mul(f, h):
        x, g, _ = lookup[f]
        _, g2, y = lookup[h]
        return f"({x},{grp.arrows[grp.mul(g, g2)]},{y})"

    return groupoid_from_rule(xs, arrows, mul)


def _isotropy(params):
    grp = params["groupoid"]
    keep = [a for a in range(grp.n_arrows) if grp.src[a] == grp.tgt[a]]
    return subgroupoid(grp, keep)


def _finite_frame(params):
    pi = params["map"]
    base = list(dict.fromkeys(params.get("base", list(dict.fromkeys(pi.values())))))
    fibres = {b: [e for e in pi if pi[e] == b] for b in base}
    for b, fb in fibres.items():
        if not fb:
            raise InvalidParams(f"empty fibre over {b} (map must be surjective)", witness=[b])
        if len(fb) > MAX_FRAME_FIBRE:
            raise InvalidParams(f"fibre over {b} has {len(fb)} > {MAX_FRAME_FIBRE} elements", witness=[b])
    for e, b in pi.items():
        if b not in fibres:
            raise InvalidParams(f"element {e} maps outside the base", witness=[e])
    # arrow from x to y: a bijection fibre(x) -> fibre(y), written as the image list
    arrows, lookup = [], {}
    for x in base:
        for y in base:
            if len(fibres[x]) != len(fibres[y]):
                continue
            for perm in itertools.permutations(fibres[y]):
                n = f"{x}->{y}:[{','.join(map(str, perm))}]"
                arrows.append((n, x, y))
                lookup[n] = (x, y, dict(zip(fibres[x], perm)))
    names_by_map = {(x, y, tuple(sorted(m.items(), key=str))): n for n, (x, y, m) in lookup.items()}

    def mul(f, h):
        _, z, mf = lookup[f]
        x, _, mh = lookup[h]
        m = {e: mf[mh[e]] for e in mh}
        return names_by_map[(x, z, tuple(sorted(m.items(), key=str)))]

    return groupoid_from_rule(base, arrows, mul)


_FAMILIES = {
    "trivial": _trivial,
    "pair": _pair,
    "equivalence": _equivalence,
    "action": _action,
    "induced": _induced,
    "isotropy": _isotropy,
    "finite_frame": _finite_frame,
}


def subgroupoid(g: FiniteGroupoid, arrow_ids) -> FiniteGroupoid:
    """Wide subgroupoid on the given arrows (must contain identities, be closed)."""
    keep = sorted(set(arrow_ids))
    ks = set(keep)
    for x in range(g.n_objects):
        if g.ident[x] not in ks:
            raise InvalidParams(f"subset misses identity of {g.objects[x]!r}")
    comp = []
    for f in keep:
        for h in keep:
            if g.src[f] == g.tgt[h]:
                fh = g.mul(f, h)
                if fh not in ks:
                    raise InvalidParams(f"subset not closed: {g.arrows[f]}{g.arrows[h]}",
                                        witness=[g.arrows[f], g.arrows[h]])
                comp.append((g.arrows[f], g.arrows[h], g.arrows[fh]))
    arrows = [(g.arrows[a], g.objects[g.src[a]], g.objects[g.tgt[a]]) for a in keep]
    return build_groupoid(g.objects, arrows, comp)


# ---------------------------------------------------------------------------
# structural queries

@dataclass(frozen=True)
class IsotropyGroup:
    base_object: int
    loops: tuple


@dataclass(frozen=True)
class ComponentPartition:
    blocks: tuple

    def block_of(self, x: int) -> int:
        for i, b in enumerate(self.blocks):
            if x in b:
                return i
        raise UnknownObject(f"object index {x} not in partition")


def isotropy_group(g: FiniteGroupoid, x) -> IsotropyGroup:
    xi = g.obj(x) if not isinstance(x, int) else x
    if not 0 <= xi < g.n_objects:
        raise UnknownObject(f"unknown object {x!r}")
    loops = g.loops(xi)
    ls = set(loops)
    assert g.ident[xi] in ls
    for a in loops:
        assert g.inv[a] in ls
        for b in loops:
            assert g.mul(a, b) in ls
    return IsotropyGroup(xi, loops)


def connected_components(g: FiniteGroupoid) -> ComponentPartition:
    uf = UnionFind(g.n_objects)
    for a in range(g.n_arrows):
        uf.union(g.src[a], g.tgt[a])
    return ComponentPartition(tuple(uf.blocks()))


def adjoint(g: FiniteGroupoid, a) -> dict:
    """Ad_a: loops at s(a) -> loops at t(a), f -> a f a^-1, verified an isomorphism."""
    ai = g.arrow(a) if not isinstance(a, int) else a
    if not 0 <= ai < g.n_arrows:
        raise UnknownArrow(f"unknown arrow {a!r}")
    ainv = g.inv[ai]
    table = {f: g.mul(g.mul(ai, f), ainv) for f in g.loops(g.src[ai])}
    assert sorted(table.values()) == sorted(g.loops(g.tgt[ai]))
    for f1 in table:
        for f2 in table:
            assert table[g.mul(f1, f2)] == g.mul(table[f1], table[f2])
    return table


def star(g: FiniteGroupoid, x, side: str = "left") -> tuple:
    """left: arrows with target x; right: arrows with source x."""
    xi = g.obj(x) if not isinstance(x, int) else x
    if not 0 <= xi < g.n_objects:
        raise UnknownObject(f"unknown object {x!r}")
    if side == "left":
        return tuple(a for a in range(g.n_arrows) if g.tgt[a] == xi)
    if side == "right":
        return tuple(a for a in range(g.n_arrows) if g.src[a] == xi)
    raise InvalidParams(f"side must be left or right, got {side!r}")


def is_equivalence_relation_groupoid(g: FiniteGroupoid):
    """(True, None) when no two arrows are parallel, else (False, (a, b))."""
    seen = {}
    for a in range(g.n_arrows):
        key = (g.src[a], g.tgt[a])
        if key in seen:
            return False, (seen[key], a)
        seen[key] = a
    return True, None
