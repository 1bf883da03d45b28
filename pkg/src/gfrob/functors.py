"""Induction and co-induction along a groupoid morphism phi: H -> G.

Induction.  At a G-object x the fibre is the space of families
alpha = (alpha_u(p))_(u,p) with p in G(x, phi0 u) and alpha_u(p) in W_u, subject to
alpha_{t(h)}(phi1(h) p) = W^h alpha_{s(h)}(p).  These live in the ambient space
(+)_(u,p) W_u, ordered like the elements of the left pull-back biset over x.
An arrow g: x' -> x acts by (g alpha)_u(q) = alpha_u(q g).

Co-induction.  At x the fibre is the colimit of W over the translation groupoid
of {(a, u) : s(a) = phi0 u, t(a) = x} under (a, u) h = (a phi1(h), s(h)): the
quotient of (+)_(a,u) W_u by the relations i_(a,u)(W^h w) - i_((a,u)h)(w).
An arrow g moves block (a, u) to block (ga, u).
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .actions import fibre, orbits, pullback_bisets
from .errors import FunctorialityViolation, GroupoidMismatch, ShapeMismatch
from .exactlin import Matrix, Subspace, kernel_basis, quotient_map
from .morphisms import GroupoidMorphism
from .representations import (
    Representation,
    RepMorphism,
    make_rep,
    make_rep_morphism,
    restrict,
    tensor_rep,
    validate_rep_morphism,
)


def _blocks(elements, dim_of):
    off, pos = {}, 0
    for e in elements:
        off[e] = pos
        pos += dim_of(e)
    return off, pos


@dataclass
class InducedRep:
    rep: Representation
    fibres: list            # per x: list of (u, p)
    offsets: list           # per x: {(u, p): offset in the ambient space}
    ambient: list           # per x: ambient dimension
    spaces: list            # per x: Subspace of the ambient (RREF basis = fibre basis)
    orbit_reps: list = dc_field(default_factory=list)  # per x: list of representative (u, p)
    orbit_spaces: list = dc_field(default_factory=list)

    def expand(self, x: int, coords) -> tuple:
        """Ambient family of a fibre vector given in basis coordinates."""
        sp = self.spaces[x]
        if sp.dim == 0:
            return (sp.field.zero,) * sp.ambient_dim
        return sp.basis.T.apply(coords)


@dataclass
class CoinducedRep:
    rep: Representation
    fibres: list            # per x: list of (a, u)
    offsets: list
    ambient: list
    relations: list         # per x: Subspace of relations
    projections: list       # per x: P_x
    sections: list          # per x: S_x
    w: Representation

    def upsilon(self, x: int, a: int, u: int) -> Matrix:
        """Structure map W_u -> coinduced fibre at x for the element (a, u)."""
        w = self.w
        off = self.offsets[x][(a, u)]
        p = self.projections[x]
        return p.submatrix(range(p.nrows), range(off, off + w.dims[u]))


def _check(phi: GroupoidMorphism, w: Representation):
    if w.groupoid != phi.dom:
        raise GroupoidMismatch("representation does not live on the domain of phi")


def _induce_fibres(phi, w):
    H, G = phi.dom, phi.cod
    fibres = [[] for _ in range(G.n_objects)]
    # same order as the left pull-back biset: u first, then arrow index
    for u in range(H.n_objects):
        for p in range(G.n_arrows):
            if G.tgt[p] == phi.obj_map[u]:
                fibres[G.src[p]].append((u, p))
    offs, amb = [], []
    for x in range(G.n_objects):
        o, n = _blocks(fibres[x], lambda e: w.dims[e[0]])
        offs.append(o)
        amb.append(n)
    return fibres, offs, amb


def induce_direct(phi: GroupoidMorphism, w: Representation, fibres, offs, amb):
    """Fibre subspaces by solving every naturality constraint."""
    H, G = phi.dom, phi.cod
    f = w.field
    spaces = []
    for x in range(G.n_objects):
        rows = []
        for (u, p) in fibres[x]:
            for h in range(H.n_arrows):
                if H.src[h] != u:
                    continue
                v = H.tgt[h]
                q = G.mul(phi.arr_map[h], p)
                wh = w.mats[h]
                o_src, o_tgt = offs[x][(u, p)], offs[x][(v, q)]
                for i in range(w.dims[v]):
                    r = [f.zero] * amb[x]
                    r[o_tgt + i] += f.one
                    for j in range(w.dims[u]):
                        r[o_src + j] -= wh[i, j]
                    rows.append(tuple(f(c) for c in r))
        spaces.append(Subspace(f, amb[x], kernel_basis(Matrix(f, rows, amb[x], _trusted=True))))
    return spaces


def induce_orbit(phi: GroupoidMorphism, w: Representation, fibres, offs, amb):
    """Fibre subspaces from orbit representatives and stabilizer invariants.

    The stabilizer of (u0, p0) is {h in H^{u0} : phi1(h) = id}.  A vector w fixed
    by it is extended along the orbit by alpha(h.(u0, p0)) = W^h w.
    """
    H, G = phi.dom, phi.cod
    f = w.field
    _, left = pullback_bisets(phi)
    reps_all, spaces = [], []
    for x in range(G.n_objects):
        fb = fibre(left, x, "right")
        assert list(fb.data) == fibres[x]
        part = orbits(fb)
        vecs, reps = [], []
        for block, r in zip(part.blocks, part.representatives):
            u0, p0 = fb.data[r]
            reps.append((u0, p0))
            stab = [h for h in H.loops(u0) if phi.arr_map[h] == G.ident[phi.obj_map[u0]]]
            assert all(fb.table[(r, h)] == r for h in stab)
            d = w.dims[u0]
            eye = Matrix.identity(f, d)
            if d == 0:
                continue
            fixed = kernel_basis(Matrix(f, [row for h in stab for row in (w.mats[h] - eye).rows], d,
                                        _trusted=True))
            # transversal: one h with h.rep = e for each e in the orbit
            trans = {}
            for h in range(H.n_arrows):
                if H.src[h] == u0:
                    trans.setdefault(fb.table[(r, h)], h)
            assert set(trans) == set(block)
            for wv in fixed.rows:
                vec = [f.zero] * amb[x]
                for e, h in trans.items():
                    img = w.mats[h].apply(wv)
                    o = offs[x][fb.data[e]]
                    vec[o:o + len(img)] = img
                vecs.append(tuple(vec))
        reps_all.append(reps)
        spaces.append(Subspace(f, amb[x], Matrix(f, vecs, amb[x], _trusted=True)))
    return spaces, reps_all


def induce(phi: GroupoidMorphism, w: Representation) -> InducedRep:
    """The induced G-representation; both computation routes must agree."""
    _check(phi, w)
    G = phi.cod
    f = w.field
    fibres, offs, amb = _induce_fibres(phi, w)
    spaces = induce_direct(phi, w, fibres, offs, amb)
    ospaces, reps = induce_orbit(phi, w, fibres, offs, amb)
    for x in range(G.n_objects):
        assert spaces[x] == ospaces[x], f"induction routes disagree at {G.objects[x]!r}"
    mats = []
    for g in range(G.n_arrows):
        xs, xt = G.src[g], G.tgt[g]
        cols = []
        for b in spaces[xs].basis.rows:
            out = [f.zero] * amb[xt]
            for (u, q) in fibres[xt]:
                o_out = offs[xt][(u, q)]
                o_in = offs[xs][(u, G.mul(q, g))]
                out[o_out:o_out + w.dims[u]] = b[o_in:o_in + w.dims[u]]
            c = spaces[xt].coords(out)
            assert c is not None
            cols.append(c)
        mats.append(Matrix(f, [tuple(c[i] for c in cols) for i in range(spaces[xt].dim)], spaces[xs].dim,
                           _trusted=True))
    rep = make_rep(G, f, [s.dim for s in spaces], mats)
    return InducedRep(rep, fibres, offs, amb, spaces, reps, ospaces)


def coinduce(phi: GroupoidMorphism, w: Representation) -> CoinducedRep:
    _check(phi, w)
    H, G = phi.dom, phi.cod
    f = w.field
    fibres = [[] for _ in range(G.n_objects)]
    for a in range(G.n_arrows):
        for u in range(H.n_objects):
            if G.src[a] == phi.obj_map[u]:
                fibres[G.tgt[a]].append((a, u))
    offs, amb, rels, projs, secs = [], [], [], [], []
    for x in range(G.n_objects):
        o, n = _blocks(fibres[x], lambda e: w.dims[e[1]])
        offs.append(o)
        amb.append(n)
        rows = []
        for (a, u) in fibres[x]:
            for h in range(H.n_arrows):
                if H.tgt[h] != u:
                    continue
                src_el = (G.mul(a, phi.arr_map[h]), H.src[h])
                wh = w.mats[h]
                o_t, o_s = o[(a, u)], o[src_el]
                for j in range(w.dims[H.src[h]]):
                    r = [f.zero] * n
                    for i in range(w.dims[u]):
                        r[o_t + i] += wh[i, j]
                    r[o_s + j] -= f.one
                    rows.append(tuple(f(c) for c in r))
        rel = Subspace(f, n, Matrix(f, rows, n, _trusted=True))
        p, s = quotient_map(n, rel)
        rels.append(rel)
        projs.append(p)
        secs.append(s)
    mats = []
    for g in range(G.n_arrows):
        xs, xt = G.src[g], G.tgt[g]
        shift = [[f.zero] * amb[xs] for _ in range(amb[xt])]
        for (a, u) in fibres[xs]:
            o_in = offs[xs][(a, u)]
            o_out = offs[xt][(G.mul(g, a), u)]
            for i in range(w.dims[u]):
                shift[o_out + i][o_in + i] = f.one
        sh = Matrix(f, [tuple(r) for r in shift], amb[xs], _trusted=True)
        for r in rels[xs].basis.rows:
            assert not any(projs[xt].apply(sh.apply(r))), "co-induced arrow not well defined"
        mats.append(projs[xt] @ sh @ secs[xs])
    rep = make_rep(G, f, [amb[x] - rels[x].dim for x in range(G.n_objects)], mats)
    out = CoinducedRep(rep, fibres, offs, amb, rels, projs, secs, w)
    # defining squares: coind^g . upsilon_(a,u) = upsilon_(ga,u)
    for g in range(G.n_arrows):
        for (a, u) in fibres[G.src[g]]:
            assert mats[g] @ out.upsilon(G.src[g], a, u) == out.upsilon(G.tgt[g], G.mul(g, a), u)
    return out


# ---------------------------------------------------------------------------
# adjunction transposes

def _ident_pair(phi, ind: InducedRep, u: int):
    G = phi.cod
    y = phi.obj_map[u]
    return y, ind.offsets[y][(u, G.ident[y])]


def right_adjunction_transpose(phi: GroupoidMorphism, v: Representation, w: Representation,
                               inp: RepMorphism, direction: str, ind: InducedRep | None = None) -> RepMorphism:
    """psi: sigma: restrict(phi, V) -> W  gives  V -> induce(phi, W) with
    Psi(sigma)_x(v) = [(u, p) -> sigma_u(V^p v)].
    phi_inv: gamma: V -> induce(phi, W)  gives  Phi(gamma)_u(v) = gamma_{phi0 u}(v)_u(id)."""
    H, G = phi.dom, phi.cod
    f = v.field
    if ind is None:
        ind = induce(phi, w)
    if direction == "psi":
        res = restrict(phi, v)
        if inp.source != res or inp.target != w:
            raise ShapeMismatch("psi expects a morphism restrict(phi, V) -> W")
        comps = []
        for x in range(G.n_objects):
            cols = []
            for j in range(v.dims[x]):
                e = [f.zero] * v.dims[x]
                e[j] = f.one
                fam = [f.zero] * ind.ambient[x]
                for (u, p) in ind.fibres[x]:
                    img = inp.comps[u].apply(v.mats[p].apply(e))
                    o = ind.offsets[x][(u, p)]
                    fam[o:o + len(img)] = img
                c = ind.spaces[x].coords(fam)
                assert c is not None, "Psi(sigma) is not a natural family"
                cols.append(c)
            comps.append(Matrix(f, [tuple(c[i] for c in cols) for i in range(ind.spaces[x].dim)],
                                v.dims[x], _trusted=True))
        return make_rep_morphism(v, ind.rep, comps)
    if direction == "phi_inv":
        if inp.source != v or inp.target != ind.rep:
            raise ShapeMismatch("phi_inv expects a morphism V -> induce(phi, W)")
        comps = []
        for u in range(H.n_objects):
            y, o = _ident_pair(phi, ind, u)
            sp = ind.spaces[y]
            expand = sp.basis.T if sp.dim else Matrix.zeros(f, sp.ambient_dim, 0)
            full = expand @ inp.comps[y]
            comps.append(full.submatrix(range(o, o + w.dims[u]), range(v.dims[y])))
        return make_rep_morphism(restrict(phi, v), w, comps)
    raise ValueError(f"direction must be psi or phi_inv, got {direction!r}")


def left_adjunction_transpose(phi: GroupoidMorphism, v: Representation, w: Representation,
                              inp: RepMorphism, direction: str, coind: CoinducedRep | None = None) -> RepMorphism:
    """sigma: delta: W -> restrict(phi, V)  gives  coinduce(phi, W) -> V, induced on the
    colimit by the cocone (a, u) -> V^a delta_u.
    gamma: theta: coinduce(phi, W) -> V  gives  Gamma(theta)_u = theta_{phi0 u} . upsilon_(id, u)."""
    H, G = phi.dom, phi.cod
    f = v.field
    if coind is None:
        coind = coinduce(phi, w)
    if direction == "sigma":
        res = restrict(phi, v)
        if inp.source != w or inp.target != res:
            raise ShapeMismatch("sigma expects a morphism W -> restrict(phi, V)")
        comps = []
        for x in range(G.n_objects):
            cocone = Matrix.zeros(f, v.dims[x], 0)
            for (a, u) in coind.fibres[x]:
                cocone = cocone.hstack(v.mats[a] @ inp.comps[u])
            for r in coind.relations[x].basis.rows:
                assert not any(cocone.apply(r)), "cocone does not kill the relations"
            comps.append(cocone @ coind.sections[x])
        return make_rep_morphism(coind.rep, v, comps)
    if direction == "gamma":
        if inp.source != coind.rep or inp.target != v:
            raise ShapeMismatch("gamma expects a morphism coinduce(phi, W) -> V")
        comps = []
        for u in range(H.n_objects):
            y = phi.obj_map[u]
            comps.append(inp.comps[y] @ coind.upsilon(y, G.ident[y], u))
        return make_rep_morphism(w, restrict(phi, v), comps)
    raise ValueError(f"direction must be sigma or gamma, got {direction!r}")


def verify_projection_formula(phi: GroupoidMorphism, w: Representation, v: Representation) -> dict:
    """induce(W) (x) V -> induce(W (x) restrict(V)),  eta (x) v -> [(u, b) -> eta_u(b) (x) V^b v]."""
    _check(phi, w)
    if v.groupoid != phi.cod:
        raise GroupoidMismatch("V must live on the codomain of phi")
    G = phi.cod
    f = w.field
    ind_w = induce(phi, w)
    ind_wv = induce(phi, tensor_rep(w, restrict(phi, v)))
    left = tensor_rep(ind_w.rep, v)
    comps = []
    for x in range(G.n_objects):
        cols = []
        for i in range(ind_w.spaces[x].dim):
            e = [f.zero] * ind_w.spaces[x].dim
            e[i] = f.one
            eta = ind_w.expand(x, e)
            for j in range(v.dims[x]):
                ev = [f.zero] * v.dims[x]
                ev[j] = f.one
                fam = [f.zero] * ind_wv.ambient[x]
                for (u, b) in ind_w.fibres[x]:
                    o = ind_w.offsets[x][(u, b)]
                    eta_u = Matrix.column(f, eta[o:o + w.dims[u]])
                    vb = Matrix.column(f, v.mats[b].apply(ev))
                    img = eta_u.kron(vb).col(0) if eta_u.nrows and vb.nrows else ()
                    o2 = ind_wv.offsets[x][(u, b)]
                    fam[o2:o2 + len(img)] = img
                c = ind_wv.spaces[x].coords(fam)
                assert c is not None
                cols.append(c)
        comps.append(Matrix(f, [tuple(c[k] for c in cols) for k in range(ind_wv.spaces[x].dim)],
                            left.dims[x], _trusted=True))
    iso = RepMorphism(left, ind_wv.rep, comps)
    natural = True
    try:
        validate_rep_morphism(iso)
    except FunctorialityViolation:
        natural = False
    invertible = all(c.nrows == c.ncols and c.rank() == c.nrows for c in comps)
    return {"iso": iso, "natural": natural, "invertible": invertible, "valid": natural and invertible,
            "dims_left": list(left.dims), "dims_right": list(ind_wv.rep.dims)}
