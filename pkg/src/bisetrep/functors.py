"""Functors over biset groupoids and their tensor product.

A functor assigns a module to every point of a biset and a transport
matrix to every (h, g) in H x G, mapping the fibre at u to the fibre at
h u g^{-1} and composing like the group law.  The direct sum of all fibres
(sigma) is then a bimodule, a module over a transitive biset's defining
subgroup extends to a functor by coset bookkeeping, and two composable
functors admit a tensor product over the middle group whose components are
explicit quotient spaces.

Component presentation for a composed point with chosen raw pair (v0, u0):
the ambient space is the direct sum over h in H of N(v0 h) (x) M(h^{-1} u0)
with coordinates [n (x) m]_h.  Its relation set identifies [n (x) m]_h with
[n y (x) y^{-1} m]_{h y} for every y, and identifies blocks h, h' verbatim
whenever they carry the same raw pair (v0 h, h^{-1} u0).  The verbatim
identifications make placement independent of the chosen block, and they
turn the shift relations at pair-stabilising y into in-block amalgamation,
which is what gives each component the expected dimension of
N(v0) (x)_{stab} M(u0).
"""

from __future__ import annotations

from dataclasses import dataclass

from .bisets import Biset, ComposedBiset, TransitiveBiset, compose_bisets, middle_stabilizer
from .groups import ProductGroup
from .linalg import Matrix, QuotientSpace, quotient_by
from .prodsub import ProductSubgroup
from .reps import BimoduleRep, Rep, TensorBimodule


class FunctorOverBiset:
    """Pointwise modules with transport matrices along the groupoid."""

    def __init__(self, biset: Biset, field, dims, transport_fn, label="functor"):
        self.biset = biset
        self.field = field
        self.dims = list(dims)
        self._transport_fn = transport_fn
        self._cache: dict[tuple[int, int], Matrix] = {}
        self.label = label

    def target_point(self, hg: int, u: int) -> int:
        return self.biset.act(hg, u)

    def transport(self, hg: int, u: int) -> Matrix:
        key = (hg, u)
        m = self._cache.get(key)
        if m is None:
            m = self._transport_fn(hg, u)
            self._cache[key] = m
        return m

    def point_module(self, u: int, aut: ProductSubgroup | None = None) -> Rep:
        """The fibre at u as a representation of its automorphism group."""
        from .bisets import aut_group

        if aut is None:
            aut = aut_group(self.biset, u)
        return Rep(
            aut,
            self.field,
            self.dims[u],
            lambda x: self.transport(x, u),
            label=f"{self.label}({u})",
        )

    def validate(self, exhaustive=False, sample=256, rng_seed=0):
        """Identity and composition laws for transports; raises on failure."""
        import random

        pg = self.biset.product_group
        points = range(self.biset.size)
        for u in points:
            if self.transport(0, u) != Matrix.identity(self.field, self.dims[u]):
                raise ValueError(f"{self.label}: identity transport at {u} is not identity")
        n = pg.order
        if exhaustive or n * n * self.biset.size <= 4096:
            triples = [(a, b, u) for a in range(n) for b in range(n) for u in points]
        else:
            rng = random.Random(rng_seed)
            triples = [
                (rng.randrange(n), rng.randrange(n), rng.randrange(self.biset.size))
                for _ in range(sample)
            ]
        for a, b, u in triples:
            v = self.target_point(b, u)
            lhs = self.transport(a, v) @ self.transport(b, u)
            if lhs != self.transport(pg.mul(a, b), u):
                raise ValueError(
                    f"{self.label}: transports fail composition at {(a, b, u)}"
                )
        return self

    def __repr__(self):
        return f"FunctorOverBiset({self.label}, dims={self.dims})"


def functor_from_module(u_biset: TransitiveBiset, m: Rep) -> FunctorOverBiset:
    """Spread a module over the defining subgroup across a transitive biset.

    Every point carries a copy of the module; the transport of (h, g) at
    the point with coset representative r is the image of the unique
    subgroup element x with (h, g) r = r' x, r' the target representative.
    Restricted to the base point's automorphisms this recovers the module,
    and sigma of the result is the induced bimodule on the nose.
    """
    x_sub = u_biset.subgroup
    pg = x_sub.ambient
    dom = m.domain
    ok = dom is x_sub or (
        hasattr(dom, "elements")
        and not isinstance(dom, ProductGroup)
        and getattr(dom, "ambient", None) is pg
        and tuple(dom.elements) == x_sub.elements
    )
    if not ok:
        raise ValueError("module does not live over the biset's defining subgroup")
    reps = u_biset.coset_reps
    index = u_biset.coset_index

    def transport(hg, u):
        e = pg.mul(hg, reps[u])
        v = index[e]
        x = pg.mul(pg.inv(reps[v]), e)
        return m.image(x)

    return FunctorOverBiset(
        u_biset,
        m.field,
        [m.dim] * u_biset.size,
        transport,
        label=f"{m.label}~",
    )


def sigma(f: FunctorOverBiset, ambient: ProductGroup | None = None) -> BimoduleRep:
    """Direct sum of all fibres, as a module over H x G.

    (h, g) permutes the blocks along u -> h u g^{-1} with the transport
    matrices inside.
    """
    pg = ambient if ambient is not None else f.biset.product_group
    dims = f.dims
    offs = [sum(dims[:i]) for i in range(len(dims))]
    total = sum(dims)

    def image(hg):
        out = Matrix.zeros(f.field, total, total)
        for u in range(f.biset.size):
            v = f.target_point(hg, u)
            blk = f.transport(hg, u)
            out.a[offs[v] : offs[v] + dims[v], offs[u] : offs[u] + dims[u]] = blk.a
        return out

    rep = BimoduleRep(pg, f.field, total, image, label=f"Sigma[{f.label}]")
    rep.functor = f
    rep.block_offsets = offs
    return rep


@dataclass
class TensorFunctorComponent:
    """One fibre of a tensor of functors, over a composed-biset point."""

    point: int
    rep_pair: tuple[int, int]
    block_h: list[int]          # block index -> h
    block_pairs: list[tuple[int, int]]  # block index -> (v0 h, h^{-1} u0)
    block_dims: list[tuple[int, int]]
    offsets: list[int]
    h_to_block: list[int]       # h -> block index carrying the same raw pair
    ambient_dim: int
    quotient: QuotientSpace

    @property
    def dim(self):
        return self.quotient.quotient_dim

    def coord(self, h: int, i: int, j: int) -> int:
        """Ambient coordinate of [n_i (x) m_j]_h."""
        b = self.h_to_block[h]
        return self.offsets[b] + i * self.block_dims[b][1] + j


class TensorFunctor(FunctorOverBiset):
    """Tensor of a (K, H)-functor with an (H, G)-functor over the middle group."""

    def __init__(self, nf: FunctorOverBiset, mf: FunctorOverBiset, check=True, ambient=None):
        if nf.biset.right_group is not mf.biset.left_group:
            raise ValueError("tensor of functors needs a shared middle group")
        if nf.field != mf.field:
            raise ValueError("tensor of functors needs a shared field")
        self.nf = nf
        self.mf = mf
        composed = compose_bisets(nf.biset, mf.biset)
        if ambient is not None:
            composed.use_product_group(ambient)
        self.components = [
            _build_component(nf, mf, composed, w) for w in range(composed.size)
        ]
        field = nf.field
        pg_n = nf.biset.product_group
        pg_m = mf.biset.product_group

        def transport(kg, w):
            pg = composed.product_group
            k, g = pg.unpair(kg)
            return _component_transport(self, composed, pg_n, pg_m, k, g, w)

        super().__init__(
            composed,
            field,
            [c.dim for c in self.components],
            transport,
            label=f"{nf.label}(x){mf.label}",
        )
        if check:
            self._check_transports_well_defined()

    def _check_transports_well_defined(self, sample=200):
        """Transports must kill the component relations (sampled)."""
        composed = self.biset
        pg = composed.product_group
        pg_n = self.nf.biset.product_group
        pg_m = self.mf.biset.product_group
        gens = pg.generating_set() or (0,)
        checked = 0
        for kg in gens:
            k, g = pg.unpair(kg)
            for comp in self.components:
                rows = comp.quotient.reducer.basis_rows()
                for rel in rows:
                    if checked >= sample:
                        return
                    checked += 1
                    img, target = _transport_ambient_vec(
                        self, composed, pg_n, pg_m, k, g, comp, rel
                    )
                    if not self.components[target].quotient.kills(img):
                        raise AssertionError(
                            "tensor-functor transport does not preserve relations"
                        )


def _build_component(nf, mf, composed: ComposedBiset, w: int) -> TensorFunctorComponent:
    """Ambient blocks, relations, and quotient for one composed point."""
    field = nf.field
    h_group = nf.biset.right_group
    v0, u0 = composed.rep_pairs[w]
    n_h = h_group.order
    pair_of_h = []
    for h in range(n_h):
        vh = nf.biset.right_act[v0][h]
        hu = mf.biset.left_act[h_group.inv(h)][u0]
        pair_of_h.append((vh, hu))
    block_h: list[int] = []
    block_pairs = []
    h_to_block = [None] * n_h
    seen: dict[tuple[int, int], int] = {}
    for h in range(n_h):
        pr = pair_of_h[h]
        if pr in seen:
            h_to_block[h] = seen[pr]
        else:
            seen[pr] = len(block_h)
            h_to_block[h] = len(block_h)
            block_h.append(h)
            block_pairs.append(pr)
    block_dims = [(nf.dims[v], mf.dims[u]) for (v, u) in block_pairs]
    offsets = []
    total = 0
    for dn, dm in block_dims:
        offsets.append(total)
        total += dn * dm
    comp = TensorFunctorComponent(
        point=w,
        rep_pair=(v0, u0),
        block_h=block_h,
        block_pairs=block_pairs,
        block_dims=block_dims,
        offsets=offsets,
        h_to_block=h_to_block,
        ambient_dim=total,
        quotient=None,
    )
    pg_n = nf.biset.product_group
    pg_m = mf.biset.product_group

    def relations():
        for h in range(n_h):
            b = comp.h_to_block[h]
            dn, dm = comp.block_dims[b]
            vh, hu = pair_of_h[h]
            for y in range(1, n_h):
                hy = h_group.mul(h, y)
                tn = nf.transport(pg_n.pair(0, h_group.inv(y)), vh)
                tm = mf.transport(pg_m.pair(h_group.inv(y), 0), hu)
                for i in range(dn):
                    ci = tn.col_dict(i)
                    for j in range(dm):
                        cj = tm.col_dict(j)
                        rel: dict = {}
                        for r, vn in ci.items():
                            for r2, vm in cj.items():
                                key = comp.coord(hy, r, r2)
                                nv = field.add(rel.get(key, 0), field.mul(vn, vm))
                                if field.is_zero(nv):
                                    rel.pop(key, None)
                                else:
                                    rel[key] = nv
                        key = comp.coord(h, i, j)
                        nv = field.sub(rel.get(key, 0), field.of(1))
                        if field.is_zero(nv):
                            rel.pop(key, None)
                        else:
                            rel[key] = nv
                        if rel:
                            yield rel

    comp.quotient = quotient_by(field, total, relations())
    return comp


def _transport_ambient_vec(tf, composed, pg_n, pg_m, k, g, comp, vec):
    """Push an ambient vector of comp through (k, g); returns (vector, target)."""
    g_group = tf.mf.biset.right_group
    g_inv = g_group.inv(g)
    w2 = composed.left_act[k][composed.right_act[comp.point][g_inv]]
    target = tf.components[w2]
    out: dict = {}
    field = tf.field
    for amb, coeff in vec.items():
        b = _block_of_coord(comp, amb)
        dn, dm = comp.block_dims[b]
        local = amb - comp.offsets[b]
        i, j = divmod(local, dm)
        vh, hu = comp.block_pairs[b]
        tn = tf.nf.transport(pg_n.pair(k, 0), vh)
        tm = tf.mf.transport(pg_m.pair(0, g), hu)
        v1 = tf.nf.biset.act(pg_n.pair(k, 0), vh)
        u1 = tf.mf.biset.act(pg_m.pair(0, g), hu)
        shifts = composed.shifts_to(w2, v1, u1)
        h2 = shifts[0]
        ci = tn.col_dict(i)
        cj = tm.col_dict(j)
        for r, vn in ci.items():
            for r2, vm in cj.items():
                key = target.coord(h2, r, r2)
                nv = field.add(out.get(key, 0), field.mul(coeff, field.mul(vn, vm)))
                if field.is_zero(nv):
                    out.pop(key, None)
                else:
                    out[key] = nv
    return out, w2


def _block_of_coord(comp: TensorFunctorComponent, amb: int) -> int:
    b = len(comp.offsets) - 1
    while comp.offsets[b] > amb:
        b -= 1
    return b


def _component_transport(tf, composed, pg_n, pg_m, k, g, w) -> Matrix:
    comp = tf.components[w]
    cols = []
    target_idx = None
    for q in range(comp.dim):
        vec = comp.quotient.section_vec(q)
        img, w2 = _transport_ambient_vec(tf, composed, pg_n, pg_m, k, g, comp, vec)
        target_idx = w2
        cols.append(tf.components[w2].quotient.project_vec(img))
    if target_idx is None:
        g_group = tf.mf.biset.right_group
        target_idx = composed.left_act[k][composed.right_act[w][g_group.inv(g)]]
    target = tf.components[target_idx]
    out = Matrix.zeros(tf.field, target.dim, comp.dim)
    for q, col in enumerate(cols):
        for r, v in col.items():
            out.a[r, q] = v
    return out


def tensor_functors(
    nf: FunctorOverBiset, mf: FunctorOverBiset, check=True, ambient=None
) -> TensorFunctor:
    return TensorFunctor(nf, mf, check=check, ambient=ambient)


# the two explicit maps between sigma-of-tensor and tensor-of-sigmas --------


def alpha(tf: TensorFunctor, lhs: TensorBimodule) -> Matrix:
    """Sigma(N (x)_H M) -> Sigma(N) (x)_{RH} Sigma(M), [n (x) m]_h -> n (x) m.

    lhs must be the tensor of the two sigma bimodules; the matrix is
    asserted to kill the component relations by construction (it is built
    on quotient coordinates through the sections).
    """
    nf, mf = tf.nf, tf.mf
    offs_n = [sum(nf.dims[:i]) for i in range(len(nf.dims))]
    offs_m = [sum(mf.dims[:i]) for i in range(len(mf.dims))]
    sig_m_dim = sum(mf.dims)
    comp_offs = _component_offsets(tf)
    total = sum(c.dim for c in tf.components)
    out = Matrix.zeros(tf.field, lhs.dim, total)
    for comp in tf.components:
        for q in range(comp.dim):
            vec = comp.quotient.section_vec(q)
            amb: dict = {}
            for coord, coeff in vec.items():
                b = _block_of_coord(comp, coord)
                dn, dm = comp.block_dims[b]
                local = coord - comp.offsets[b]
                i, j = divmod(local, dm)
                vpt, upt = comp.block_pairs[b]
                big = (offs_n[vpt] + i) * sig_m_dim + (offs_m[upt] + j)
                amb[big] = tf.field.add(amb.get(big, 0), coeff)
            col = lhs.quotient.project_vec(amb)
            for r, v in col.items():
                out.a[r, comp_offs[comp.point] + q] = v
    return out


def beta(tf: TensorFunctor, lhs: TensorBimodule) -> Matrix:
    """Sigma(N) (x)_{RH} Sigma(M) -> Sigma(N (x)_H M).

    n (x) m with n over v and m over u lands in [n (x) m]_h for the least
    shift h aligning the raw pair (v, u) with its orbit representative.
    """
    nf, mf = tf.nf, tf.mf
    composed: ComposedBiset = tf.biset
    sig_m_dim = sum(mf.dims)
    point_of_n = _point_of_offset(nf.dims)
    point_of_m = _point_of_offset(mf.dims)
    offs_n = [sum(nf.dims[:i]) for i in range(len(nf.dims))]
    offs_m = [sum(mf.dims[:i]) for i in range(len(mf.dims))]
    comp_offs = _component_offsets(tf)
    total = sum(c.dim for c in tf.components)
    out = Matrix.zeros(tf.field, total, lhs.dim)
    for q in range(lhs.dim):
        amb = lhs.quotient.free_cols[q]
        pn, pm = divmod(amb, sig_m_dim)
        vpt = point_of_n[pn]
        upt = point_of_m[pm]
        i = pn - offs_n[vpt]
        j = pm - offs_m[upt]
        w = composed.orbit_of_pair(vpt, upt)
        comp = tf.components[w]
        h = composed.shifts_to(w, vpt, upt)[0]
        col = comp.quotient.project_vec({comp.coord(h, i, j): tf.field.of(1)})
        for r, v in col.items():
            out.a[comp_offs[w] + r, q] = v
    return out


def _component_offsets(tf: TensorFunctor) -> list[int]:
    offs = []
    total = 0
    for c in tf.components:
        offs.append(total)
        total += c.dim
    return offs


def _point_of_offset(dims) -> dict[int, int]:
    table = {}
    pos = 0
    for p, d in enumerate(dims):
        for _ in range(d):
            table[pos] = p
            pos += 1
    return table
