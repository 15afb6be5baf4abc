"""Subgroups of direct products: projections, kernels, twisted conjugates,
and the star product that composes subgroup correspondences through a
shared middle group.

Conventions used throughout the library: for t in H, h^t means t^{-1} h t
and the left conjugate of a subgroup A by t is t A t^{-1}.
"""

from __future__ import annotations

from .groups import (
    Group,
    ProductGroup,
    Subgroup,
    conjugate_subgroup,
    intersect,
    subgroup_generated,
)


class ProductSubgroup(Subgroup):
    """Subgroup X of a product H x G with cached p1/p2/k1/k2 data.

    p1, p2 are the coordinate images; k1 = {h : (h, 1) in X} and
    k2 = {g : (1, g) in X} are the coordinate kernels.
    """

    def __post_init__(self):
        super().__post_init__()
        if not isinstance(self.ambient, ProductGroup):
            raise ValueError("ProductSubgroup needs a ProductGroup ambient")
        pg = self.ambient
        h_ids = sorted({pg.proj1(x) for x in self.elements})
        g_ids = sorted({pg.proj2(x) for x in self.elements})
        k1_ids = sorted(pg.proj1(x) for x in self.elements if pg.proj2(x) == 0)
        k2_ids = sorted(pg.proj2(x) for x in self.elements if pg.proj1(x) == 0)
        object.__setattr__(self, "p1", Subgroup(pg.left, tuple(h_ids)))
        object.__setattr__(self, "p2", Subgroup(pg.right, tuple(g_ids)))
        object.__setattr__(self, "k1", Subgroup(pg.left, tuple(k1_ids)))
        object.__setattr__(self, "k2", Subgroup(pg.right, tuple(k2_ids)))

    def pairs(self):
        pg = self.ambient
        return [pg.unpair(x) for x in self.elements]

    def __repr__(self):
        return f"ProductSubgroup(order={self.order} of {self.ambient.name})"


def product_subgroup(pg: ProductGroup, elements) -> ProductSubgroup:
    return ProductSubgroup(pg, tuple(sorted(elements)))


def product_subgroup_from_pairs(pg: ProductGroup, pairs) -> ProductSubgroup:
    """Closure of the given (left, right) generator pairs inside pg."""
    ids = []
    for a, b in pairs:
        if not (0 <= a < pg.left.order and 0 <= b < pg.right.order):
            raise ValueError(f"generator pair {(a, b)} out of range for {pg.name}")
        ids.append(pg.pair(a, b))
    closed = subgroup_generated(pg, ids)
    return ProductSubgroup(pg, closed.elements)


def diagonal(pg: ProductGroup) -> ProductSubgroup:
    """Delta(G) inside G x G; both factors must be the same group object."""
    if pg.left is not pg.right:
        raise ValueError("diagonal needs both factors equal")
    return ProductSubgroup(pg, tuple(pg.pair(a, a) for a in range(pg.left.order)))


def full_product_subgroup(pg: ProductGroup) -> ProductSubgroup:
    return ProductSubgroup(pg, tuple(range(pg.order)))


def conj_t1(x: ProductSubgroup, t: int) -> ProductSubgroup:
    """Conjugate by (t, 1): {(t h t^{-1}, g) : (h, g) in X}."""
    pg = x.ambient
    h_group = pg.left
    if not (0 <= t < h_group.order):
        raise ValueError(f"element id {t} out of range for {h_group.name}")
    ti = h_group.inv(t)
    out = tuple(
        sorted(
            pg.pair(h_group.mul(h_group.mul(t, pg.proj1(e)), ti), pg.proj2(e))
            for e in x.elements
        )
    )
    return ProductSubgroup(pg, out)


def star(y: ProductSubgroup, x: ProductSubgroup, ambient: ProductGroup | None = None) -> ProductSubgroup:
    """Y * X = {(k, g) : exists h with (k, h) in Y and (h, g) in X}.

    Y lives in K x H and X in H x G over the same middle group H; the
    output is verified to be closed (it always is, but a failed check here
    is the cheapest symptom of an action-convention bug upstream).
    """
    yk, yh = y.ambient.left, y.ambient.right
    xh, xg = x.ambient.left, x.ambient.right
    if yh is not xh:
        raise ValueError("star needs a shared middle group")
    if ambient is None:
        ambient = ProductGroup(yk, xg)
    else:
        if ambient.left is not yk or ambient.right is not xg:
            raise ValueError("supplied ambient does not match K x G")
    by_h: dict[int, list[int]] = {}
    for e in x.elements:
        by_h.setdefault(x.ambient.proj1(e), []).append(x.ambient.proj2(e))
    out = set()
    for e in y.elements:
        k, h = y.ambient.unpair(e)
        for g in by_h.get(h, ()):
            out.add(ambient.pair(k, g))
    return ProductSubgroup(ambient, tuple(sorted(out)))


def middle_section(y: ProductSubgroup, x: ProductSubgroup, t: int) -> Subgroup:
    """k2(Y) intersected with the left conjugate t k1(X) t^{-1}."""
    h_group = y.ambient.right
    if x.ambient.left is not h_group:
        raise ValueError("middle groups do not match")
    return intersect(y.k2, conjugate_subgroup(h_group, x.k1, t))
