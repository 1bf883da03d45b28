"""Path algebras, the induced linear map A -> B, and Frobenius certificates.

For phi: H -> G, A = kH and B = kG.  B is an A-bimodule through phi, so
``a . b = phi(a) b``.  When phi is faithful and injective on objects the
certificate is built from orbit representatives (u_i, q_i) of
{(u, q) : q in G(x, phi0 u)}: b_i = q_i^-1, c_i = q_i, and E(g) is the unique
h with phi1(h) = g, or 0 when there is none.
"""
from __future__ import annotations

from dataclasses import dataclass

from .actions import fibre, orbits, pullback_bisets
from .errors import NotApplicable
from .exactlin import QQ, Field, Matrix, Subspace, kernel_basis
from .functors import coinduce, induce
from .groupoid import FiniteGroupoid
from .morphisms import GroupoidMorphism, morphism_properties


class AlgebraElement:
    """Sparse linear combination of arrows; zero coefficients are dropped."""

    __slots__ = ("alg", "coeffs")

    def __init__(self, alg: "PathAlgebra", coeffs=None):
        self.alg = alg
        f = alg.field
        c = {}
        for a, x in (coeffs or {}).items():
            x = f(x)
            if x != 0:
                c[a] = x
        self.coeffs = c

    def __add__(self, other):
        c = dict(self.coeffs)
        for a, x in other.coeffs.items():
            c[a] = c.get(a, 0) + x
        return AlgebraElement(self.alg, c)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        return AlgebraElement(self.alg, {a: s * x for a, x in self.coeffs.items()})

    def __mul__(self, other):
        return self.alg.mul(self, other)

    def __eq__(self, other):
        return isinstance(other, AlgebraElement) and self.alg is other.alg and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def support(self):
        return sorted(self.coeffs)

    def __repr__(self):
        g = self.alg.groupoid
        if not self.coeffs:
            return "0"
        return " + ".join(f"{self.alg.field.fmt(x)}*{g.arrows[a]}" for a, x in sorted(self.coeffs.items()))

    def to_json(self):
        g = self.alg.groupoid
        return [[g.arrows[a], self.alg.field.fmt(x)] for a, x in sorted(self.coeffs.items())]


class PathAlgebra:
    """Basis = arrows; r r' = (composite) when s(r) = t(r'), else 0."""

    def __init__(self, groupoid: FiniteGroupoid, field: Field = QQ):
        self.groupoid = groupoid
        self.field = field

    @property
    def dim(self) -> int:
        return self.groupoid.n_arrows

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self)

    def basis(self, a: int) -> AlgebraElement:
        return AlgebraElement(self, {a: 1})

    def idempotent(self, x: int) -> AlgebraElement:
        return self.basis(self.groupoid.ident[x])

    def elem(self, coeffs) -> AlgebraElement:
        return AlgebraElement(self, coeffs)

    def mul(self, p: AlgebraElement, q: AlgebraElement) -> AlgebraElement:
        g = self.groupoid
        f = self.field
        out = {}
        for a, x in p.coeffs.items():
            for b, y in q.coeffs.items():
                c = g.compose(a, b)
                if c is not None:
                    v = out.get(c, f.zero) + x * y
                    out[c] = v % f.p if f.p else v
        return AlgebraElement(self, out)

    def left_graded(self):
        """1_x R spanned by arrows with target x, per x."""
        g = self.groupoid
        return [tuple(a for a in range(g.n_arrows) if g.tgt[a] == x) for x in range(g.n_objects)]

    def right_graded(self):
        """R 1_x spanned by arrows with source x, per x."""
        g = self.groupoid
        return [tuple(a for a in range(g.n_arrows) if g.src[a] == x) for x in range(g.n_objects)]


def path_algebra(g: FiniteGroupoid, field: Field = QQ) -> PathAlgebra:
    alg = PathAlgebra(g, field)
    for parts in (alg.left_graded(), alg.right_graded()):
        assert sorted(a for p in parts for a in p) == list(range(g.n_arrows))
    return alg


def idempotent_check(alg: PathAlgebra) -> bool:
    """1_x 1_y = delta_xy 1_x, and 1_x R, R 1_x are spanned by the expected arrows."""
    g = alg.groupoid
    for x in range(g.n_objects):
        for y in range(g.n_objects):
            p = alg.idempotent(x) * alg.idempotent(y)
            if p != (alg.idempotent(x) if x == y else alg.zero()):
                return False
    for x in range(g.n_objects):
        for a in range(g.n_arrows):
            left = alg.idempotent(x) * alg.basis(a)
            right = alg.basis(a) * alg.idempotent(x)
            if left != (alg.basis(a) if g.tgt[a] == x else alg.zero()):
                return False
            if right != (alg.basis(a) if g.src[a] == x else alg.zero()):
                return False
    return True


def map_element(phi: GroupoidMorphism, A: PathAlgebra, B: PathAlgebra, e: AlgebraElement) -> AlgebraElement:
    out = B.zero()
    for a, x in e.coeffs.items():
        out = out + B.basis(phi.arr_map[a]).scale(x)
    return out


def algebra_map(phi: GroupoidMorphism, field: Field = QQ) -> dict:
    """h -> phi1(h) extended linearly; multiplicativity checked on all basis pairs."""
    A, B = path_algebra(phi.dom, field), path_algebra(phi.cod, field)
    H = phi.dom
    witness = None
    for h in range(H.n_arrows):
        for k in range(H.n_arrows):
            lhs = map_element(phi, A, B, A.basis(h) * A.basis(k))
            rhs = B.basis(phi.arr_map[h]) * B.basis(phi.arr_map[k])
            if lhs != rhs:
                witness = {
                    "pair": [H.arrows[h], H.arrows[k]],
                    "product": (A.basis(h) * A.basis(k)).to_json(),
                    "image_of_product": lhs.to_json(),
                    "product_of_images": rhs.to_json(),
                }
                break
        if witness:
            break
    return {
        "map": {H.arrows[h]: phi.cod.arrows[b] for h, b in enumerate(phi.arr_map)},
        "multiplicative": witness is None,
        "witness": witness,
        "injective_on_objects": len(set(phi.obj_map)) == len(phi.obj_map),
    }


# ---------------------------------------------------------------------------
# orbit criterion and Frobenius systems

def _applicability(phi):
    props = morphism_properties(phi)
    reasons = []
    if not props["faithful"]:
        reasons.append("not faithful")
    if not props["injective_on_objects"]:
        reasons.append("not injective on objects")
    return reasons


def orbit_criterion(phi: GroupoidMorphism) -> dict:
    """Orbit counts of both pull-back fibres over every x (applicable only for
    faithful phi injective on objects)."""
    reasons = _applicability(phi)
    G = phi.cod
    out = {"applicable": not reasons, "reasons": reasons, "frobenius": False, "objects": {}}
    if reasons:
        return out
    right, left = pullback_bisets(phi)
    for x in range(G.n_objects):
        lf = fibre(left, x, "right")
        rf = fibre(right, x, "left")
        lo, ro = orbits(lf), orbits(rf)
        assert len(lo.blocks) == len(ro.blocks)
        out["objects"][G.objects[x]] = {
            "orbits": len(lo.blocks),
            "left_fibre_size": len(lf),
            "right_fibre_size": len(rf),
            "representatives": [lf.carrier[r] for r in lo.representatives],
        }
    out["frobenius"] = True
    return out


@dataclass
class FrobeniusSystem:
    phi: GroupoidMorphism
    field: Field
    A: PathAlgebra
    B: PathAlgebra
    E: dict          # (u, v, g) -> h or None, for g in G(phi0 u, phi0 v)
    triples: list    # per x: list of (u_i, b_i arrow, c_i AlgebraElement of B)

    def apply_E(self, e: AlgebraElement) -> AlgebraElement:
        """Linear extension of E to B; arrows outside the image hom-sets go to 0."""
        pre = self._preimage()
        out = self.A.zero()
        for g, x in e.coeffs.items():
            h = self._E_arrow(g, pre)
            if h is not None:
                out = out + self.A.basis(h).scale(x)
        return out

    def _preimage(self):
        if not hasattr(self, "_pre"):
            self._pre = {self.phi.obj_map[u]: u for u in range(self.phi.dom.n_objects)}
        return self._pre

    def _E_arrow(self, g, pre=None):
        pre = pre or self._preimage()
        G = self.phi.cod
        u, v = pre.get(G.src[g]), pre.get(G.tgt[g])
        if u is None or v is None:
            return None
        return self.E.get((u, v, g))

    def to_json(self):
        H, G = self.phi.dom, self.phi.cod
        return {
            "E": [[H.objects[u], H.objects[v], G.arrows[g], [] if h is None else [[H.arrows[h], "1"]]]
                  for (u, v, g), h in sorted(self.E.items())],
            "triples": [[G.objects[x], H.objects[u], G.arrows[b], c.to_json()]
                        for x, ts in enumerate(self.triples) for (u, b, c) in ts],
        }


def _fibre_orbit_reps(phi: GroupoidMorphism, x: int):
    """Representatives (u, q) of the H-orbits on {(u, q) : q in G(x, phi0 u)},
    least index except that an identity pair represents its orbit and comes first."""
    G = phi.cod
    _, left = pullback_bisets(phi)
    fb = fibre(left, x, "right")
    part = orbits(fb)
    reps = []
    first = None
    for block, r in zip(part.blocks, part.representatives):
        ident = [e for e in block if fb.data[e][1] == G.ident[x]]
        if ident:
            first = fb.data[ident[0]]
        else:
            reps.append(fb.data[r])
    return ([first] if first is not None else []) + reps


def frobenius_system(phi: GroupoidMorphism, field: Field = QQ) -> FrobeniusSystem:
    reasons = _applicability(phi)
    if reasons:
        raise NotApplicable("no constructive Frobenius system: " + ", ".join(reasons), witness=reasons)
    H, G = phi.dom, phi.cod
    A, B = path_algebra(H, field), path_algebra(G, field)
    E = {}
    for u in range(H.n_objects):
        for v in range(H.n_objects):
            pre = {phi.arr_map[h]: h for h in H.hom(u, v)}
            for g in G.hom(phi.obj_map[u], phi.obj_map[v]):
                E[(u, v, g)] = pre.get(g)
    triples = []
    for x in range(G.n_objects):
        ts = []
        for (u, q) in _fibre_orbit_reps(phi, x):
            ts.append((u, G.inv[q], B.basis(q)))
        triples.append(ts)
    return FrobeniusSystem(phi, field, A, B, E, triples)


def _homogeneous(phi, x):
    """b in G(x, phi0 u) and b' in G(phi0 u, x), over all u."""
    G = phi.cod
    img = set(phi.obj_map)
    bs = [b for b in range(G.n_arrows) if G.src[b] == x and G.tgt[b] in img]
    bps = [b for b in range(G.n_arrows) if G.tgt[b] == x and G.src[b] in img]
    return bs, bps


def verify_frobenius_system(phi: GroupoidMorphism, sys: FrobeniusSystem):
    """(ok, witnesses, counts).  Checks E-naturality and, for every x and every
    pair of homogeneous b, b', both dual-basis identities."""
    H, G = phi.dom, phi.cod
    A, B = sys.A, sys.B
    witnesses = []
    phimap = lambda e: map_element(phi, A, B, e)
    # naturality: E(phi1(h') g phi1(h)) = h' E(g) h
    n_nat = 0
    for (u, v, g), _ in sorted(sys.E.items()):
        for h in range(H.n_arrows):
            if H.tgt[h] != u:
                continue
            for h2 in range(H.n_arrows):
                if H.src[h2] != v:
                    continue
                n_nat += 1
                lhs = sys.apply_E(B.basis(phi.arr_map[h2]) * B.basis(g) * B.basis(phi.arr_map[h]))
                rhs = A.basis(h2) * sys.apply_E(B.basis(g)) * A.basis(h)
                if lhs != rhs:
                    witnesses.append({"check": "naturality", "g": G.arrows[g], "h": H.arrows[h],
                                      "h_prime": H.arrows[h2]})
    counts = {"naturality": n_nat, "pairs": {}}
    for x in range(G.n_objects):
        ts = sys.triples[x]
        bs, bps = _homogeneous(phi, x)
        counts["pairs"][G.objects[x]] = len(bs) * len(bps)
        first_ok, second_ok = {}, {}
        for b in bs:
            total = B.zero()
            for (_, bi, ci) in ts:
                total = total + phimap(sys.apply_E(B.basis(b) * B.basis(bi))) * ci
            first_ok[b] = total == B.basis(b)
        for bp in bps:
            total = B.zero()
            for (_, bi, ci) in ts:
                total = total + B.basis(bi) * phimap(sys.apply_E(ci * B.basis(bp)))
            second_ok[bp] = total == B.basis(bp)
        for b in bs:
            for bp in bps:
                if not first_ok[b]:
                    witnesses.append({"check": "sum E(b b_i) c_i = b", "x": G.objects[x], "b": G.arrows[b],
                                      "b_prime": G.arrows[bp]})
                if not second_ok[bp]:
                    witnesses.append({"check": "sum b_i E(c_i b') = b'", "x": G.objects[x], "b": G.arrows[b],
                                      "b_prime": G.arrows[bp]})
        if not bs and not bps and ts:
            witnesses.append({"check": "triples over an object with no homogeneous elements", "x": G.objects[x]})
    return not witnesses, witnesses, counts


# ---------------------------------------------------------------------------
# projective module condition

def _a_linear_solve(phi, sys, y: int, u: int):
    """Basis of Hom_{A-}(A B 1_y, A 1_u) as matrices from span(M_y) to span(H-arrows out of u).

    Left A-linearity: f(phi1(h) m) = h f(m) for every basis arrow m and every h
    composable with it."""
    H, G = phi.dom, phi.cod
    f = sys.field
    pre = sys._preimage()
    M = [m for m in range(G.n_arrows) if G.src[m] == y and G.tgt[m] in pre]
    T = [k for k in range(H.n_arrows) if H.src[k] == u]
    mi = {m: i for i, m in enumerate(M)}
    ti = {k: i for i, k in enumerate(T)}
    nT = len(T)
    n = len(M) * nT  # unknown f(m)_k at index mi[m]*nT + ti[k]
    rows = []
    for m in M:
        v = pre[G.tgt[m]]
        for h in range(H.n_arrows):
            if H.src[h] != v:
                continue
            m2 = G.mul(phi.arr_map[h], m)
            # f(m2) - h f(m) = 0, coordinatewise in the arrows out of u
            for k in T:
                r = [f.zero] * n
                r[mi[m2] * nT + ti[k]] += f.one
                for k2 in T:
                    if H.compose(h, k2) == k:
                        r[mi[m] * nT + ti[k2]] -= f.one
                rows.append(tuple(f(c) for c in r))
    basis = kernel_basis(Matrix(f, rows, n, _trusted=True)) if n else Matrix.zeros(f, 0, 0)
    return M, T, basis


def module_condition(phi: GroupoidMorphism, sys: FrobeniusSystem | None = None) -> dict:
    """Dual basis and freeness of A B 1_x for every x, and Psi_u / its inverse on
    every degree y of B 1_{phi0 u} -> Hom_{A-}(A B, A 1_u)."""
    reasons = _applicability(phi)
    if reasons:
        raise NotApplicable("module condition needs a Frobenius system: " + ", ".join(reasons), witness=reasons)
    if sys is None:
        sys = frobenius_system(phi)
    H, G = phi.dom, phi.cod
    A, B = sys.A, sys.B
    pre = sys._preimage()
    report = {"objects": {}, "hom": [], "passed": True}
    for x in range(G.n_objects):
        ts = sys.triples[x]
        M = [m for m in range(G.n_arrows) if G.src[m] == x and G.tgt[m] in pre]
        # dual basis: m = sum_i *e_i(m) c_i with *e_i = E(- b_i), each *e_i left A-linear
        dual_ok = True
        for m in M:
            total = B.zero()
            for (_, bi, ci) in ts:
                total = total + map_element(phi, A, B, sys.apply_E(B.basis(m) * B.basis(bi))) * ci
            if total != B.basis(m):
                dual_ok = False
            for (_, bi, _) in ts:
                for h in range(H.n_arrows):
                    if G.tgt[m] != phi.obj_map[H.src[h]]:
                        continue
                    lhs = sys.apply_E(B.basis(phi.arr_map[h]) * B.basis(m) * B.basis(bi))
                    rhs = A.basis(h) * sys.apply_E(B.basis(m) * B.basis(bi))
                    if lhs != rhs:
                        dual_ok = False
        # freeness: a -> phi(a) c_i is injective on A 1_{u_i} and the images partition M
        cover = []
        free_ok = True
        for (ui, _, ci) in ts:
            (q,) = ci.support()
            imgs = [G.mul(phi.arr_map[h], q) for h in range(H.n_arrows) if H.src[h] == ui]
            if len(set(imgs)) != len(imgs):
                free_ok = False
            cover.extend(imgs)
        if sorted(cover) != sorted(M):
            free_ok = False
        report["objects"][G.objects[x]] = {
            "rank": len(ts), "module_dim": len(M), "dual_basis": dual_ok, "free": free_ok,
        }
        report["passed"] &= dual_ok and free_ok
    f = sys.field
    for u in range(H.n_objects):
        for y in range(G.n_objects):
            Mb, T, basis = _a_linear_solve(phi, sys, y, u)
            nT = len(T)
            ti = {k: i for i, k in enumerate(T)}
            D = G.hom(phi.obj_map[u], y)

            def psi(b):
                # m -> E(m b), as a vector in the unknown layout
                vec = [f.zero] * (len(Mb) * nT)
                for i, m in enumerate(Mb):
                    e = sys.apply_E(B.basis(m) * B.basis(b))
                    for k, c in e.coeffs.items():
                        vec[i * nT + ti[k]] = c
                return tuple(vec)

            def mho(vec):
                # sum_i b_i phi(alpha(c_i)) over the triples at y
                total = B.zero()
                mpos = {m: i for i, m in enumerate(Mb)}
                for (_, bi, ci) in sys.triples[y]:
                    (q,) = ci.support()
                    i = mpos[q]
                    a = A.elem({k: vec[i * nT + ti[k]] for k in T})
                    total = total + B.basis(bi) * map_element(phi, A, B, a)
                return total

            hom_rows = basis.rows
            hom_sp = Subspace(f, len(Mb) * nT, basis) if Mb and nT else Subspace(f, 0)
            mho_psi = all(mho(psi(b)) == B.basis(b) for b in D)
            in_hom = all(hom_sp.contains(psi(b)) for b in D) if hom_sp.ambient_dim else True
            psi_mho = True
            for r in hom_rows:
                img = mho(r)
                back = [f.zero] * len(r)
                for b, c in img.coeffs.items():
                    back = [x + c * z for x, z in zip(back, psi(b))]
                if tuple(f(z) for z in back) != tuple(r):
                    psi_mho = False
            ok = mho_psi and psi_mho and in_hom and len(hom_rows) == len(D)
            report["hom"].append({
                "u": H.objects[u], "y": G.objects[y], "hom_dim": len(hom_rows), "expected": len(D),
                "psi_lands_in_hom": in_hom, "mho_psi_id": mho_psi, "psi_mho_id": psi_mho,
            })
            report["passed"] &= ok
    return report


def functor_iso_evidence(phi: GroupoidMorphism, battery) -> dict:
    """Compare induced and co-induced fibre dimensions; a verdict on the Frobenius
    property is given only when phi is faithful and injective on objects."""
    G = phi.cod
    rows = []
    consistent = True
    for i, w in enumerate(battery):
        ind = induce(phi, w).rep.dims
        co = coinduce(phi, w).rep.dims
        rows.append({"rep": i, "induce": {G.objects[x]: d for x, d in enumerate(ind)},
                     "coinduce": {G.objects[x]: d for x, d in enumerate(co)}})
        consistent &= ind == co
    reasons = _applicability(phi)
    if reasons:
        frob = "undecided"
    else:
        sys = frobenius_system(phi)
        frob = "certified" if verify_frobenius_system(phi, sys)[0] else "failed"
    return {"dims": rows, "verdict": "consistent" if consistent else "inconsistent", "frobenius": frob}
