"""Finite bisets, their groupoid structure, and biset composition.

An (H, G)-biset is a finite set with commuting left H- and right G-actions,
stored as dense action tables.  The groupoid attached to a biset has the
points as objects and hom(u, v) = {(h, g) : h u = v g}; identifying an
(H, G)-biset with a left module over H x G uses the (h, g) . u = h u g^{-1}
convention everywhere, so transitive bisets (H x G)/X act by
h . (t, s)X . g = (h t, g^{-1} s)X.
"""

from __future__ import annotations

from .groups import Group, ProductGroup, Subgroup, coset_index_table
from .prodsub import ProductSubgroup


class Biset:
    """Dense (H, G)-biset: left_act is |H| x size, right_act is size x |G|."""

    def __init__(self, left_group: Group, right_group: Group, left_act, right_act, check=True):
        self.left_group = left_group
        self.right_group = right_group
        self.left_act = [list(map(int, row)) for row in left_act]
        self.right_act = [list(map(int, row)) for row in right_act]
        self.size = len(self.right_act)
        self._pg = None
        if check:
            self.validate()

    def validate(self):
        h_n, g_n, m = self.left_group.order, self.right_group.order, self.size
        if len(self.left_act) != h_n or any(len(r) != m for r in self.left_act):
            raise ValueError("left action table has wrong shape")
        if any(len(r) != g_n for r in self.right_act):
            raise ValueError("right action table has wrong shape")
        for u in range(m):
            if self.left_act[0][u] != u or self.right_act[u][0] != u:
                raise ValueError(f"identity does not fix point {u}")
        mulh = self.left_group.mul
        for h1 in range(h_n):
            for h2 in range(h_n):
                h12 = mulh(h1, h2)
                for u in range(m):
                    if self.left_act[h12][u] != self.left_act[h1][self.left_act[h2][u]]:
                        raise ValueError(f"left action is not an action at {(h1, h2, u)}")
        mulg = self.right_group.mul
        for u in range(m):
            for g1 in range(g_n):
                ug1 = self.right_act[u][g1]
                for g2 in range(g_n):
                    if self.right_act[u][mulg(g1, g2)] != self.right_act[ug1][g2]:
                        raise ValueError(f"right action is not an action at {(u, g1, g2)}")
        for h in range(h_n):
            for u in range(m):
                hu = self.left_act[h][u]
                for g in range(g_n):
                    if self.right_act[hu][g] != self.left_act[h][self.right_act[u][g]]:
                        raise ValueError(f"actions do not commute at {(h, u, g)}")

    def act_left(self, h: int, u: int) -> int:
        return self.left_act[h][u]

    def act_right(self, u: int, g: int) -> int:
        return self.right_act[u][g]

    def act(self, hg: int, u: int) -> int:
        """(h, g) . u = h u g^{-1}, for hg a composite id of H x G."""
        h, g = self.product_group.unpair(hg)
        return self.left_act[h][self.right_act[u][self.right_group.inv(g)]]

    @property
    def product_group(self) -> ProductGroup:
        if self._pg is None:
            self._pg = ProductGroup(self.left_group, self.right_group)
        return self._pg

    def use_product_group(self, pg: ProductGroup):
        """Share an existing H x G object so composite ids stay comparable."""
        if pg.left is not self.left_group or pg.right is not self.right_group:
            raise ValueError("product group does not match the acting groups")
        self._pg = pg
        return self

    def orbits(self) -> list[tuple]:
        """(H, G)-orbits as sorted point tuples, ordered by minimum point."""
        seen = [False] * self.size
        out = []
        for u in range(self.size):
            if seen[u]:
                continue
            todo = [u]
            seen[u] = True
            orbit = {u}
            while todo:
                v = todo.pop()
                for h in range(self.left_group.order):
                    w = self.left_act[h][v]
                    if not seen[w]:
                        seen[w] = True
                        orbit.add(w)
                        todo.append(w)
                for g in range(self.right_group.order):
                    w = self.right_act[v][g]
                    if not seen[w]:
                        seen[w] = True
                        orbit.add(w)
                        todo.append(w)
            out.append(tuple(sorted(orbit)))
        return out

    def __repr__(self):
        return f"Biset({self.left_group.name} | {self.size} pts | {self.right_group.name})"


class TransitiveBiset(Biset):
    """(H x G)/X for a subgroup X, points indexed by left cosets of X."""

    def __init__(self, subgroup: ProductSubgroup):
        pg = subgroup.ambient
        h_group, g_group = pg.left, pg.right
        reps, index = coset_index_table(pg, subgroup)
        m = len(reps)
        left_act = [
            [index[pg.mul(pg.pair(h, 0), reps[u])] for u in range(m)]
            for h in range(h_group.order)
        ]
        right_act = [
            [index[pg.mul(pg.pair(0, g_group.inv(g)), reps[u])] for g in range(g_group.order)]
            for u in range(m)
        ]
        self.subgroup = subgroup
        self.coset_reps = reps
        self.coset_index = index
        super().__init__(h_group, g_group, left_act, right_act)
        self._pg = pg

    def point_of(self, elem: int) -> int:
        """Point carrying the coset of an element of H x G."""
        return self.coset_index[elem]

    def __repr__(self):
        return f"TransitiveBiset(({self.left_group.name} x {self.right_group.name})/|X|={self.subgroup.order})"


def transitive_biset(x: ProductSubgroup) -> TransitiveBiset:
    return TransitiveBiset(x)


def hom_set(biset: Biset, u: int, v: int) -> list[int]:
    """Composite ids (h, g) with h u = v g; empty across distinct orbits."""
    pg = biset.product_group
    out = []
    for h in range(biset.left_group.order):
        hu = biset.left_act[h][u]
        for g in range(biset.right_group.order):
            if hu == biset.right_act[v][g]:
                out.append(pg.pair(h, g))
    return out


def aut_group(biset: Biset, u: int) -> ProductSubgroup:
    """hom(u, u) packaged as a subgroup of H x G; closure is re-checked."""
    return ProductSubgroup(biset.product_group, tuple(hom_set(biset, u, u)))


def orbit_reps(biset: Biset) -> list[int]:
    return [orbit[0] for orbit in biset.orbits()]


class ComposedBiset(Biset):
    """V x_H U: H-orbits of pairs under (v, u) . h = (v h, h^{-1} u).

    Each point stores its lexicographically least raw pair; K acts through
    V on the left and G acts through U on the right.
    """

    def __init__(self, v_biset: Biset, u_biset: Biset):
        if v_biset.right_group is not u_biset.left_group:
            raise ValueError("composition needs a shared middle group")
        h_group = v_biset.right_group
        self.v_biset = v_biset
        self.u_biset = u_biset
        nu = u_biset.size
        raw_orbit = [None] * (v_biset.size * nu)
        rep_pairs = []
        for v in range(v_biset.size):
            for u in range(nu):
                if raw_orbit[v * nu + u] is not None:
                    continue
                w = len(rep_pairs)
                rep_pairs.append((v, u))
                for h in range(h_group.order):
                    vv = v_biset.right_act[v][h]
                    uu = u_biset.left_act[h_group.inv(h)][u]
                    raw_orbit[vv * nu + uu] = w
        self.rep_pairs = rep_pairs
        self.raw_orbit = raw_orbit
        m = len(rep_pairs)
        left_act = [
            [raw_orbit[v_biset.left_act[k][rv] * nu + ru] for (rv, ru) in rep_pairs]
            for k in range(v_biset.left_group.order)
        ]
        right_act = [
            [raw_orbit[rv * nu + u_biset.right_act[ru][g]] for g in range(u_biset.right_group.order)]
            for (rv, ru) in rep_pairs
        ]
        super().__init__(v_biset.left_group, u_biset.right_group, left_act, right_act)

    def orbit_of_pair(self, v: int, u: int) -> int:
        return self.raw_orbit[v * self.u_biset.size + u]

    def shifts_to(self, w: int, v: int, u: int) -> list[int]:
        """All h with (v0 h, h^{-1} u0) == (v, u), for (v0, u0) = rep pair of w."""
        v0, u0 = self.rep_pairs[w]
        h_group = self.v_biset.right_group
        out = []
        for h in range(h_group.order):
            if (
                self.v_biset.right_act[v0][h] == v
                and self.u_biset.left_act[h_group.inv(h)][u0] == u
            ):
                out.append(h)
        return out

    def __repr__(self):
        return f"ComposedBiset({self.left_group.name} | {self.size} pts | {self.right_group.name})"


def compose_bisets(v_biset: Biset, u_biset: Biset) -> ComposedBiset:
    return ComposedBiset(v_biset, u_biset)


def stabilizer(c: Biset, w: int, ambient: ProductGroup | None = None) -> ProductSubgroup:
    """{(k, g) : k w = w g} as a subgroup of K x G."""
    if ambient is None:
        ambient = c.product_group
    elif ambient.left is not c.left_group or ambient.right is not c.right_group:
        raise ValueError("supplied ambient does not match the biset's acting groups")
    out = []
    for k in range(c.left_group.order):
        kw = c.left_act[k][w]
        for g in range(c.right_group.order):
            if kw == c.right_act[w][g]:
                out.append(ambient.pair(k, g))
    return ProductSubgroup(ambient, tuple(out))


def middle_stabilizer(v_biset: Biset, u_biset: Biset, v: int, u: int) -> list[int]:
    """{h in H : v h = v and h u = u} for a raw pair of a composition."""
    h_group = v_biset.right_group
    if u_biset.left_group is not h_group:
        raise ValueError("middle groups do not match")
    return [
        h
        for h in range(h_group.order)
        if v_biset.right_act[v][h] == v and u_biset.left_act[h][u] == u
    ]


def disjoint_union(a: Biset, b: Biset) -> Biset:
    if a.left_group is not b.left_group or a.right_group is not b.right_group:
        raise ValueError("disjoint union needs matching acting groups")
    off = a.size
    left = [row_a + [x + off for x in row_b] for row_a, row_b in zip(a.left_act, b.left_act)]
    right = [list(r) for r in a.right_act] + [[x + off for x in row] for row in b.right_act]
    return Biset(a.left_group, a.right_group, left, right)
