"""Linear representations of finite groupoids.

A representation stores a dimension per object and a ``dims[t] x dims[s]``
matrix per arrow.  Hom-representation fibres are flattened column-major, so a
map sigma: U_x -> V_x becomes vec(sigma) and ``A sigma B`` becomes
``kron(B^T, A) vec(sigma)``.
"""
from __future__ import annotations

import random

from .errors import (
    FieldMismatch,
    FunctorialityViolation,
    GroupoidMismatch,
    IdentityViolation,
    NotNormal,
    NotTrivialOnN,
    ShapeMismatch,
    UnknownArrow,
    UnknownObject,
)
from .exactlin import Field, Matrix, Subspace, block_diag, kernel_basis, quotient_map, vstack_all
from .groupoid import FiniteGroupoid
from .morphisms import GroupoidMorphism, NormalSubgroupoid, is_normal, kernel


class Representation:
    def __init__(self, groupoid: FiniteGroupoid, field: Field, dims, mats):
        self.groupoid = groupoid
        self.field = field
        self.dims = tuple(dims)
        self.mats = tuple(mats)

    def __eq__(self, other):
        return (isinstance(other, Representation) and self.groupoid == other.groupoid
                and self.field == other.field and self.dims == other.dims and self.mats == other.mats)

    def __hash__(self):
        return hash((self.dims, self.mats))

    def __repr__(self):
        return f"Representation(dims={list(self.dims)}, {self.field.name()})"

    def total_dim(self) -> int:
        return sum(self.dims)

    def to_json(self):
        g = self.groupoid
        return {
            "dims": {g.objects[x]: d for x, d in enumerate(self.dims)},
            "matrices": {g.arrows[a]: m.to_json() for a, m in enumerate(self.mats)},
        }


def validate_rep(rep: Representation) -> Representation:
    g, f = rep.groupoid, rep.field
    if len(rep.dims) != g.n_objects or len(rep.mats) != g.n_arrows:
        raise ShapeMismatch("dims/matrices do not cover the groupoid")
    for a, m in enumerate(rep.mats):
        if m.field != f:
            raise FieldMismatch(f"matrix of {g.arrows[a]!r} lives over another field")
        if m.shape != (rep.dims[g.tgt[a]], rep.dims[g.src[a]]):
            raise ShapeMismatch(f"matrix of {g.arrows[a]!r} has shape {m.shape}, expected "
                                f"{(rep.dims[g.tgt[a]], rep.dims[g.src[a]])}", witness=g.arrows[a])
    for x in range(g.n_objects):
        if not rep.mats[g.ident[x]].is_identity():
            raise IdentityViolation(f"identity of {g.objects[x]!r} is not sent to the identity matrix",
                                    witness=g.arrows[g.ident[x]])
    for (a, b), c in sorted(g.comp_table().items()):
        if rep.mats[a] @ rep.mats[b] != rep.mats[c]:
            raise FunctorialityViolation(f"V({g.arrows[a]}{g.arrows[b]}) != V({g.arrows[a]})V({g.arrows[b]})",
                                         witness=[g.arrows[a], g.arrows[b]])
    return rep


def make_rep(g, field, dims, mats, check=True) -> Representation:
    rep = Representation(g, field, dims, mats)
    return validate_rep(rep) if check else rep


def build_rep(groupoid: FiniteGroupoid, field: Field, dims: dict, matrices: dict) -> Representation:
    """Name-level builder; matrices are nested lists of scalars or strings."""
    d = []
    for o in groupoid.objects:
        if o not in dims:
            raise UnknownObject(f"dimension missing for object {o!r}", witness=o)
        d.append(int(dims[o]))
    for o in dims:
        groupoid.obj(o)
    mats = []
    for i, a in enumerate(groupoid.arrows):
        if a not in matrices:
            raise UnknownArrow(f"matrix missing for arrow {a!r}", witness=a)
        raw = matrices[a]
        mats.append(Matrix(field, raw, d[groupoid.src[i]]) if len(raw) else
                    Matrix.zeros(field, 0, d[groupoid.src[i]]))
    for a in matrices:
        groupoid.arrow(a)
    return make_rep(groupoid, field, d, mats)


class RepMorphism:
    def __init__(self, source: Representation, target: Representation, comps):
        self.source = source
        self.target = target
        self.comps = tuple(comps)

    def __eq__(self, other):
        return isinstance(other, RepMorphism) and self.comps == other.comps

    def __hash__(self):
        return hash(self.comps)

    def __repr__(self):
        return f"RepMorphism({[c.shape for c in self.comps]})"

    def vec(self) -> tuple:
        """All components flattened column-major, concatenated over objects."""
        out = []
        for c in self.comps:
            for j in range(c.ncols):
                out.extend(c.col(j))
        return tuple(out)

    def to_json(self):
        g = self.source.groupoid
        return {g.objects[x]: c.to_json() for x, c in enumerate(self.comps)}


def validate_rep_morphism(m: RepMorphism) -> RepMorphism:
    s, t = m.source, m.target
    if s.groupoid != t.groupoid:
        raise GroupoidMismatch("source and target live on different groupoids")
    if s.field != t.field:
        raise FieldMismatch("source and target live over different fields")
    g = s.groupoid
    for x, c in enumerate(m.comps):
        if c.shape != (t.dims[x], s.dims[x]):
            raise ShapeMismatch(f"component at {g.objects[x]!r} has shape {c.shape}", witness=g.objects[x])
    for a in range(g.n_arrows):
        if t.mats[a] @ m.comps[g.src[a]] != m.comps[g.tgt[a]] @ s.mats[a]:
            raise FunctorialityViolation(f"not natural at {g.arrows[a]!r}", witness=g.arrows[a])
    return m


def make_rep_morphism(source, target, comps, check=True) -> RepMorphism:
    m = RepMorphism(source, target, comps)
    return validate_rep_morphism(m) if check else m


def compose_rep_morphisms(f: RepMorphism, g: RepMorphism) -> RepMorphism:
    """f after g."""
    return RepMorphism(g.source, f.target, [a @ b for a, b in zip(f.comps, g.comps)])


def identity_rep_morphism(v: Representation) -> RepMorphism:
    return RepMorphism(v, v, [Matrix.identity(v.field, d) for d in v.dims])


def _same(u: Representation, v: Representation):
    if u.groupoid != v.groupoid:
        raise GroupoidMismatch("representations live on different groupoids")
    if u.field != v.field:
        raise FieldMismatch("representations live over different fields")


# ---------------------------------------------------------------------------
# basic families

def trivial_rep(g: FiniteGroupoid, field: Field) -> Representation:
    one = Matrix.identity(field, 1)
    return make_rep(g, field, [1] * g.n_objects, [one] * g.n_arrows, check=False)


def zero_rep(g: FiniteGroupoid, field: Field) -> Representation:
    z = Matrix.zeros(field, 0, 0)
    return make_rep(g, field, [0] * g.n_objects, [z] * g.n_arrows, check=False)


def one_dim_rep(g: FiniteGroupoid, field: Field, scalars: dict) -> Representation:
    """All dims 1, arrow a acting by scalars[a]; validation is the cocycle condition."""
    return make_rep(g, field, [1] * g.n_objects,
                    [Matrix(field, [[scalars[g.arrows[a]]]]) for a in range(g.n_arrows)])


def permutation_rep(x, field: Field) -> Representation:
    """k[X] for a left action set X: fibre at o has basis struct^-1(o)."""
    g = x.groupoid
    fib = [[e for e in range(len(x.carrier)) if x.struct[e] == o] for o in range(g.n_objects)]
    pos = {e: i for f in fib for i, e in enumerate(f)}
    mats = []
    for a in range(g.n_arrows):
        m = [[field.zero] * len(fib[g.src[a]]) for _ in fib[g.tgt[a]]]
        for j, e in enumerate(fib[g.src[a]]):
            m[pos[x.table[(e, a)]]][j] = field.one
        mats.append(Matrix(field, m, len(fib[g.src[a]])))
    return make_rep(g, field, [len(f) for f in fib], mats)


def representable_rep(g: FiniteGroupoid, field: Field, u: int) -> Representation:
    """x -> k G(u, x), arrows acting by left composition; basis in arrow-index order."""
    homs = [g.hom(u, x) for x in range(g.n_objects)]
    pos = {a: i for h in homs for i, a in enumerate(h)}
    mats = []
    for a in range(g.n_arrows):
        hs, ht = homs[g.src[a]], homs[g.tgt[a]]
        m = [[field.zero] * len(hs) for _ in ht]
        for j, p in enumerate(hs):
            m[pos[g.mul(a, p)]][j] = field.one
        mats.append(Matrix(field, m, len(hs)))
    return make_rep(g, field, [len(h) for h in homs], mats)


def direct_sum_rep(u: Representation, v: Representation) -> Representation:
    _same(u, v)
    return make_rep(u.groupoid, u.field, [a + b for a, b in zip(u.dims, v.dims)],
                    [block_diag(u.field, [a, b]) for a, b in zip(u.mats, v.mats)], check=False)


def random_invertible(field: Field, n: int, rng: random.Random) -> Matrix:
    while True:
        m = Matrix(field, [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)], n)
        if m.rank() == n:
            return m


def conjugate_rep(v: Representation, changes) -> Representation:
    """P_t V^g P_s^-1 with one change of basis P_x per object."""
    g = v.groupoid
    inv = [p.inverse() for p in changes]
    return make_rep(g, v.field, v.dims,
                    [changes[g.tgt[a]] @ v.mats[a] @ inv[g.src[a]] for a in range(g.n_arrows)])


def random_conjugate(v: Representation, seed: int = 0) -> Representation:
    rng = random.Random(seed)
    return conjugate_rep(v, [random_invertible(v.field, d, rng) for d in v.dims])


# ---------------------------------------------------------------------------
# tensor, hom, dual

def tensor_rep(u: Representation, v: Representation) -> Representation:
    _same(u, v)
    return make_rep(u.groupoid, u.field, [a * b for a, b in zip(u.dims, v.dims)],
                    [a.kron(b) for a, b in zip(u.mats, v.mats)], check=False)


def hom_rep(u: Representation, v: Representation) -> Representation:
    """Fibre Hom(U_x, V_x), column-major; g acts by sigma -> V^g sigma U^(g^-1)."""
    _same(u, v)
    g = u.groupoid
    mats = [u.mats[g.inv[a]].T.kron(v.mats[a]) for a in range(g.n_arrows)]
    return make_rep(g, u.field, [a * b for a, b in zip(u.dims, v.dims)], mats, check=False)


def dual_rep(v: Representation) -> Representation:
    return hom_rep(v, trivial_rep(v.groupoid, v.field))


def unvec(field: Field, vec, rows: int, cols: int) -> Matrix:
    """Inverse of column-major flattening."""
    return Matrix(field, [[vec[j * rows + i] for j in range(cols)] for i in range(rows)], cols)


# ---------------------------------------------------------------------------
# sub- and quotient representations

def _sub_rep(v: Representation, spaces) -> tuple:
    """Restrict v to per-object subspaces, verifying stability under every arrow."""
    g, f = v.groupoid, v.field
    mats = []
    for a in range(g.n_arrows):
        src_sp, tgt_sp = spaces[g.src[a]], spaces[g.tgt[a]]
        cols = []
        for b in src_sp.basis.rows:
            c = tgt_sp.coords(v.mats[a].apply(b))
            assert c is not None, f"subspace not stable under {g.arrows[a]!r}"
            cols.append(c)
        mats.append(Matrix(f, [tuple(c[i] for c in cols) for i in range(tgt_sp.dim)], src_sp.dim))
    sub = make_rep(g, f, [s.dim for s in spaces], mats)
    emb = make_rep_morphism(sub, v, [s.basis.T if s.dim else Matrix.zeros(f, s.ambient_dim, 0)
                                     for s in spaces])
    return sub, emb


def _fixed_space(v: Representation, x: int, loops) -> Subspace:
    f = v.field
    n = v.dims[x]
    eye = Matrix.identity(f, n)
    blocks = [v.mats[l] - eye for l in loops]
    if not blocks or n == 0:
        return Subspace(f, n, Matrix.identity(f, n))
    return Subspace(f, n, kernel_basis(vstack_all(f, blocks, n)))


def invariants(v: Representation):
    """(V^G, embedding): fibre at x = vectors fixed by every loop at x."""
    g = v.groupoid
    return _sub_rep(v, [_fixed_space(v, x, g.loops(x)) for x in range(g.n_objects)])


def normal_invariants(w: Representation, n: NormalSubgroupoid):
    """Fibre at u = vectors fixed by the loops of N at u; stable under all arrows."""
    g = w.groupoid
    if n.parent != g:
        raise GroupoidMismatch("normal subgroupoid belongs to another groupoid")
    ok, wit = is_normal(g, n.arrows)
    if not ok:
        raise NotNormal("not a normal subgroupoid", witness=wit)
    return _sub_rep(w, [_fixed_space(w, x, n.loops(x)) for x in range(g.n_objects)])


def _quotient_rep(v: Representation, subs):
    g, f = v.groupoid, v.field
    maps = [quotient_map(v.dims[x], subs[x]) for x in range(g.n_objects)]
    mats = []
    for a in range(g.n_arrows):
        p_t, _ = maps[g.tgt[a]]
        _, s_s = maps[g.src[a]]
        # well defined: V^g sends the relations at s(g) into those at t(g)
        for r in subs[g.src[a]].basis.rows:
            assert not any(p_t.apply(v.mats[a].apply(r))), f"relations not stable under {g.arrows[a]!r}"
        mats.append(p_t @ v.mats[a] @ s_s)
    q = make_rep(g, f, [v.dims[x] - subs[x].dim for x in range(g.n_objects)], mats)
    proj = make_rep_morphism(v, q, [m[0] for m in maps])
    return q, proj


def coinvariants(v: Representation):
    """(V_G, projection): fibre at x = V_x / span{(V^e - 1) w : e a loop at x}."""
    g, f = v.groupoid, v.field
    subs = []
    for x in range(g.n_objects):
        n = v.dims[x]
        eye = Matrix.identity(f, n)
        rows = []
        for l in g.loops(x):
            rows.extend((v.mats[l] - eye).T.rows)
        subs.append(Subspace(f, n, Matrix(f, rows, n, _trusted=True)))
    return _quotient_rep(v, subs)


# ---------------------------------------------------------------------------
# limits, colimits, hom spaces

def _offsets(dims):
    off, out = 0, []
    for d in dims:
        out.append(off)
        off += d
    return out, off


def _relation_rows(v: Representation, transpose: bool):
    """Rows of pi_g = V^g p_s - p_t (transpose=False), or of the image vectors
    tau_g(w) = incl_t V^g w - incl_s w (transpose=True), over all arrows."""
    g, f = v.groupoid, v.field
    off, total = _offsets(v.dims)
    rows = []
    for a in range(g.n_arrows):
        s, t = g.src[a], g.tgt[a]
        m = v.mats[a]
        outer, inner = (v.dims[s], v.dims[t]) if transpose else (v.dims[t], v.dims[s])
        for i in range(outer):
            r = [f.zero] * total
            for j in range(inner):
                x = m[j, i] if transpose else m[i, j]
                r[off[t] + j if transpose else off[s] + j] += x
            r[off[s] + i if transpose else off[t] + i] -= f.one
            rows.append(tuple(f(x) for x in r))
    return Matrix(f, rows, total, _trusted=True)


def rep_limits(v: Representation) -> dict:
    """lim V as the equalizer subspace of the product and colim V as the cokernel
    of the coproduct relations, each over all arrows, plus dimension reports for
    lim V^G and colim V_G (compared, never asserted equal)."""
    f = v.field
    total = v.total_dim()
    lim = Subspace(f, total, kernel_basis(_relation_rows(v, False)))
    rel = Subspace(f, total, _relation_rows(v, True))
    proj, sec = quotient_map(total, rel)
    inv_rep, _ = invariants(v)
    coinv_rep, _ = coinvariants(v)
    return {
        "lim": lim,
        "colim_relations": rel,
        "colim_projection": proj,
        "colim_section": sec,
        "dim_lim": lim.dim,
        "dim_colim": total - rel.dim,
        "dim_lim_invariants": inv_rep.total_dim() - _relation_rows(inv_rep, False).rank(),
        "dim_colim_coinvariants": coinv_rep.total_dim() - _relation_rows(coinv_rep, True).rank(),
    }


def naturality_system(u: Representation, v: Representation):
    """Matrix whose kernel is the vec of natural maps U -> V (per-object blocks,
    column-major), together with the block offsets."""
    _same(u, v)
    g, f = u.groupoid, u.field
    sizes = [u.dims[x] * v.dims[x] for x in range(g.n_objects)]
    off, total = _offsets(sizes)
    rows = []
    for a in range(g.n_arrows):
        s, t = g.src[a], g.tgt[a]
        # vec(V^g C_s) - vec(C_t U^g) = (I kron V^g) vec C_s - ((U^g)^T kron I) vec C_t
        left = Matrix.identity(f, u.dims[s]).kron(v.mats[a])
        right = u.mats[a].T.kron(Matrix.identity(f, v.dims[t]))
        for i in range(left.nrows):
            r = [f.zero] * total
            for j in range(left.ncols):
                r[off[s] + j] += left[i, j]
            for j in range(right.ncols):
                r[off[t] + j] -= right[i, j]
            rows.append(tuple(f(x) for x in r))
    return Matrix(f, rows, total, _trusted=True), off


def morphism_from_vec(u: Representation, v: Representation, vec, off=None) -> RepMorphism:
    g = u.groupoid
    if off is None:
        off, _ = _offsets([u.dims[x] * v.dims[x] for x in range(g.n_objects)])
    comps = []
    for x in range(g.n_objects):
        n = u.dims[x] * v.dims[x]
        comps.append(unvec(u.field, vec[off[x]:off[x] + n], v.dims[x], u.dims[x]) if u.dims[x]
                     else Matrix.zeros(u.field, v.dims[x], 0))
    return RepMorphism(u, v, comps)


def hom_space(u: Representation, v: Representation) -> list:
    """Basis of Hom_G(U, V) as validated RepMorphisms."""
    sysm, off = naturality_system(u, v)
    basis = kernel_basis(sysm)
    return [validate_rep_morphism(morphism_from_vec(u, v, r, off)) for r in basis.rows]


def hom_dim(u: Representation, v: Representation) -> int:
    sysm, _ = naturality_system(u, v)
    return sysm.ncols - sysm.rank()


# ---------------------------------------------------------------------------
# restriction and the quotient correspondence

def restrict(phi: GroupoidMorphism, v: Representation) -> Representation:
    if v.groupoid != phi.cod:
        raise GroupoidMismatch("representation does not live on the codomain")
    return make_rep(phi.dom, v.field, [v.dims[y] for y in phi.obj_map],
                    [v.mats[b] for b in phi.arr_map], check=False)


def quotient_rep_transport(pi: GroupoidMorphism, rep: Representation, direction: str) -> Representation:
    """descend: an H-representation trivial on N = Ker pi to H/N; lift: restrict along pi."""
    if direction == "lift":
        if rep.groupoid != pi.cod:
            raise GroupoidMismatch("lift expects a representation of the quotient")
        return restrict(pi, rep)
    if direction != "descend":
        raise ValueError(f"direction must be descend or lift, got {direction!r}")
    if rep.groupoid != pi.dom:
        raise GroupoidMismatch("descend expects a representation of the parent groupoid")
    h, q = pi.dom, pi.cod
    for e in sorted(kernel(pi).arrows):
        if not rep.mats[e].is_identity():
            raise NotTrivialOnN(f"arrow {h.arrows[e]!r} of N acts nontrivially", witness=h.arrows[e])
    dims = [None] * q.n_objects
    for x in range(h.n_objects):
        if dims[pi.obj_map[x]] is None:
            dims[pi.obj_map[x]] = rep.dims[x]
    mats = [None] * q.n_arrows
    for a in range(h.n_arrows):
        if mats[pi.arr_map[a]] is None:
            mats[pi.arr_map[a]] = rep.mats[a]
    out = make_rep(q, rep.field, dims, mats)
    assert restrict(pi, out) == rep
    return out
