"""Finite groups as dense multiplication tables.

Element ids are 0..order-1 with the identity fixed at 0.  The catalog
covers C<n>, S<n> (n <= 5), D<n> (dihedral of order 2n), Q8, and binary
direct products "A x B"; generators of the atomic groups receive the
smallest available ids, and the rest are numbered by breadth-first closure
so every table is reproducible.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

GROUP_ORDER_CAP = 1024
SUBGROUP_ENUM_CAP = 64


class Group:
    """A finite group given by its Cayley table."""

    def __init__(self, name, mul_table, generators=(), elem_names=None, check=True):
        self.name = name
        self.order = len(mul_table)
        self.mul_table = [list(map(int, row)) for row in mul_table]
        self.generators = tuple(generators)
        self.elem_names = list(elem_names) if elem_names else [str(i) for i in range(self.order)]
        self.inv_table = self._compute_inverses()
        self._classes = None
        self._subgroups = None
        if check:
            self.validate()

    # core operations ----------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        return self.inv_table[a]

    @property
    def id_elem(self) -> int:
        return 0

    def elements(self) -> range:
        return range(self.order)

    def elem_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def _compute_inverses(self):
        inv = [None] * self.order
        for a in range(self.order):
            row = self.mul_table[a]
            for b in range(self.order):
                if row[b] == 0:
                    inv[a] = b
                    break
            if inv[a] is None:
                raise ValueError(f"element {a} of {self.name} has no inverse")
        return inv

    def validate(self):
        n = self.order
        if n <= 0 or n > GROUP_ORDER_CAP:
            raise ValueError(f"group order {n} outside 1..{GROUP_ORDER_CAP}")
        for a in range(n):
            if self.mul(0, a) != a or self.mul(a, 0) != a:
                raise ValueError(f"{self.name}: 0 is not a two-sided identity at {a}")
            if self.mul(a, self.inv(a)) != 0 or self.mul(self.inv(a), a) != 0:
                raise ValueError(f"{self.name}: bad inverse for {a}")
        triples = (
            itertools.product(range(n), repeat=3)
            if n <= 64
            else _sampled_triples(n, 4096)
        )
        for a, b, c in triples:
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                raise ValueError(f"{self.name}: associativity fails at {(a, b, c)}")

    # cached structure ----------------------------------------------------

    def conjugacy_classes(self):
        if self._classes is None:
            self._classes = conjugacy_classes(self)
        return self._classes

    def subgroups(self):
        if self._subgroups is None:
            self._subgroups = all_subgroups(self)
        return self._subgroups

    def generating_set(self):
        if self.generators:
            return self.generators
        gens = []
        have = {0}
        for a in range(self.order):
            if a not in have:
                gens.append(a)
                have = _closure(self, have | {a})
                if len(have) == self.order:
                    break
        self.generators = tuple(gens)
        return self.generators

    def __repr__(self):
        return f"Group({self.name}, order={self.order})"


def _sampled_triples(n, count):
    import random

    rng = random.Random(0)
    return ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(count))


@dataclass(frozen=True)
class Subgroup:
    """Subgroup of a table group, stored as a sorted tuple of element ids."""

    ambient: Group
    elements: tuple = field(default=())

    def __post_init__(self):
        elems = tuple(sorted(set(self.elements)))
        object.__setattr__(self, "elements", elems)
        if 0 not in elems:
            raise ValueError("subgroup must contain the identity")
        eset = set(elems)
        for a in elems:
            if self.ambient.inv(a) not in eset:
                raise ValueError(f"subgroup not closed under inverse at {a}")
            for b in elems:
                if self.ambient.mul(a, b) not in eset:
                    raise ValueError(f"subgroup not closed under product at {(a, b)}")

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.ambient.order // self.order

    def __contains__(self, a: int) -> bool:
        return a in set(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    # group-like protocol so Reps can live over subgroups directly

    def mul(self, a, b):
        return self.ambient.mul(a, b)

    def inv(self, a):
        return self.ambient.inv(a)

    @property
    def id_elem(self):
        return 0

    def generating_set(self):
        gens = []
        have = {0}
        for a in self.elements:
            if a not in have:
                gens.append(a)
                have = _closure(self.ambient, have | {a})
        return tuple(gens)

    def conjugacy_classes(self):
        eset = list(self.elements)
        seen = set()
        classes = []
        for a in eset:
            if a in seen:
                continue
            cls = sorted({self.mul(self.mul(x, a), self.inv(x)) for x in eset})
            classes.append(tuple(cls))
            seen.update(cls)
        return classes

    def is_normal_in(self, other: "Subgroup") -> bool:
        eset = set(self.elements)
        for t in other.elements:
            if any(self.ambient.mul(self.ambient.mul(t, a), self.ambient.inv(t)) not in eset for a in eset):
                return False
        return True

    def __repr__(self):
        return f"Subgroup(order={self.order} of {self.ambient.name})"


def _closure(g: Group, seed: set) -> set:
    elems = set(seed) | {0}
    frontier = list(elems)
    while frontier:
        new = []
        for a in frontier:
            for b in list(elems):
                for c in (g.mul(a, b), g.mul(b, a)):
                    if c not in elems:
                        elems.add(c)
                        new.append(c)
        frontier = new
    return elems


def subgroup_generated(g: Group, gens) -> Subgroup:
    gens = list(gens)
    for a in gens:
        if not (0 <= a < g.order):
            raise ValueError(f"element id {a} out of range for {g.name}")
    return Subgroup(g, tuple(sorted(_closure(g, set(gens)))))


def trivial_subgroup(g: Group) -> Subgroup:
    return Subgroup(g, (0,))


def full_subgroup(g: Group) -> Subgroup:
    return Subgroup(g, tuple(range(g.order)))


def all_subgroups(g: Group) -> list[Subgroup]:
    """Every subgroup, by closure over extensions of known subgroups.

    Sorted by (order, element tuple); capped to keep sweeps at desk scale.
    """
    if g.order > SUBGROUP_ENUM_CAP:
        raise ValueError(
            f"subgroup enumeration capped at order {SUBGROUP_ENUM_CAP}, got {g.order}"
        )
    found = {(0,)}
    frontier = [(0,)]
    while frontier:
        new = []
        for elems in frontier:
            base = set(elems)
            for x in range(1, g.order):
                if x in base:
                    continue
                closed = tuple(sorted(_closure(g, base | {x})))
                if closed not in found:
                    found.add(closed)
                    new.append(closed)
        frontier = new
    subs = [Subgroup(g, elems) for elems in found]
    subs.sort(key=lambda s: (s.order, s.elements))
    return subs


def left_coset_reps(g: Group, a: Subgroup) -> list[int]:
    """Minimum-id representative of each left coset tA; the identity first."""
    if a.ambient is not g:
        raise ValueError("subgroup does not live in the given group")
    seen = [False] * g.order
    reps = []
    for t in range(g.order):
        if seen[t]:
            continue
        reps.append(t)
        for x in a.elements:
            seen[g.mul(t, x)] = True
    return reps


def coset_index_table(g: Group, a: Subgroup):
    """(reps, index) where index[e] is the position of e's left coset."""
    reps = left_coset_reps(g, a)
    index = [None] * g.order
    for i, t in enumerate(reps):
        for x in a.elements:
            index[g.mul(t, x)] = i
    return reps, index


def double_coset_reps(g: Group, a: Subgroup, b: Subgroup) -> list[int]:
    """Minimum-id representative of each double coset AtB, ascending."""
    if a.ambient is not g or b.ambient is not g:
        raise ValueError("subgroups do not live in the given group")
    seen = [False] * g.order
    reps = []
    for t in range(g.order):
        if seen[t]:
            continue
        reps.append(t)
        for x in a.elements:
            xt = g.mul(x, t)
            for y in b.elements:
                seen[g.mul(xt, y)] = True
    return reps


def double_coset_of(g: Group, a: Subgroup, b: Subgroup, t: int) -> set[int]:
    return {g.mul(g.mul(x, t), y) for x in a.elements for y in b.elements}


def conjugacy_classes(g: Group) -> list[tuple]:
    seen = [False] * g.order
    classes = []
    for a in range(g.order):
        if seen[a]:
            continue
        cls = sorted({g.mul(g.mul(x, a), g.inv(x)) for x in range(g.order)})
        for c in cls:
            seen[c] = True
        classes.append(tuple(cls))
    return classes


def conjugate_subgroup(g: Group, a: Subgroup, t: int) -> Subgroup:
    """t A t^{-1}."""
    if not (0 <= t < g.order):
        raise ValueError(f"element id {t} out of range")
    ti = g.inv(t)
    return Subgroup(g, tuple(sorted(g.mul(g.mul(t, x), ti) for x in a.elements)))


def intersect(a: Subgroup, b: Subgroup) -> Subgroup:
    assert a.ambient is b.ambient
    return Subgroup(a.ambient, tuple(sorted(set(a.elements) & set(b.elements))))


# direct products ---------------------------------------------------------


class ProductGroup(Group):
    """Direct product H x G with composite ids pair(h, g) = h * |G| + g."""

    def __init__(self, left: Group, right: Group):
        order = left.order * right.order
        if order > GROUP_ORDER_CAP:
            raise ValueError(f"product order {order} exceeds cap {GROUP_ORDER_CAP}")
        self.left = left
        self.right = right
        n2 = right.order
        table = [[0] * order for _ in range(order)]
        for a1 in range(left.order):
            for b1 in range(n2):
                x = a1 * n2 + b1
                row = table[x]
                lrow = left.mul_table[a1]
                rrow = right.mul_table[b1]
                for a2 in range(left.order):
                    la = lrow[a2] * n2
                    base = a2 * n2
                    for b2 in range(n2):
                        row[base + b2] = la + rrow[b2]
        gens = [self_pair * n2 for self_pair in left.generating_set()] + list(
            right.generating_set()
        )
        names = [
            f"({left.elem_names[a]},{right.elem_names[b]})"
            for a in range(left.order)
            for b in range(n2)
        ]
        super().__init__(
            f"{left.name} x {right.name}", table, generators=gens, elem_names=names, check=False
        )
        self.validate()

    def pair(self, a: int, b: int) -> int:
        return a * self.right.order + b

    def unpair(self, x: int) -> tuple[int, int]:
        return divmod(x, self.right.order)

    def proj1(self, x: int) -> int:
        return x // self.right.order

    def proj2(self, x: int) -> int:
        return x % self.right.order


def direct_product(a: Group, b: Group) -> ProductGroup:
    return ProductGroup(a, b)


# catalog ------------------------------------------------------------------


def _group_from_objects(name, elems_seed, gens, mulfn, namefn):
    """Number elements by BFS from the identity, generators first."""
    ident = elems_seed
    gens = [g for g in gens if g != ident]
    order_list = [ident]
    index = {ident: 0}
    for g in gens:
        if g not in index:
            index[g] = len(order_list)
            order_list.append(g)
    queue = list(order_list)
    while queue:
        nxt = []
        for x in queue:
            for gname in gens:
                y = mulfn(x, gname)
                if y not in index:
                    index[y] = len(order_list)
                    order_list.append(y)
                    nxt.append(y)
        queue = nxt
    n = len(order_list)
    table = [[index[mulfn(a, b)] for b in order_list] for a in order_list]
    gen_ids = [index[g] for g in gens]
    names = [namefn(e) for e in order_list]
    return Group(name, table, generators=gen_ids, elem_names=names)


def _perm_mul(p, q):
    # p after q: (p*q)(i) = p(q(i))
    return tuple(p[q[i]] for i in range(len(p)))


def _perm_cycles(p):
    n = len(p)
    seen = [False] * n
    out = []
    for i in range(n):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = p[j]
        out.append("(" + " ".join(str(k + 1) for k in cyc) + ")")
    return "".join(out) if out else "e"


def cyclic_group(n: int) -> Group:
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    gens = [1] if n > 1 else []
    return Group(f"C{n}", table, generators=gens, elem_names=[f"g{k}" if k else "e" for k in range(n)])


def symmetric_group(n: int) -> Group:
    if not (1 <= n <= 5):
        raise ValueError("S<n> supported for n <= 5 only")
    ident = tuple(range(n))
    if n == 1:
        return Group("S1", [[0]], elem_names=["e"])
    gens = [tuple([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(tuple(list(range(1, n)) + [0]))
    return _group_from_objects(f"S{n}", ident, gens, _perm_mul, _perm_cycles)


def dihedral_group(n: int) -> Group:
    """Symmetries of the regular n-gon, order 2n: elements (rotation, flip)."""
    if n < 1:
        raise ValueError("D<n> requires n >= 1")

    def mul(x, y):
        (r1, f1), (r2, f2) = x, y
        if f1:
            return ((r1 - r2) % n, 1 - f2)
        return ((r1 + r2) % n, f2)

    def nm(x):
        r, f = x
        return ("s" if f else "") + (f"r{r}" if r else ("" if f else "e"))

    gens = [(1 % n, 0), (0, 1)] if n > 1 else [(0, 1)]
    return _group_from_objects(f"D{n}", (0, 0), gens, mul, nm)


_Q8_MUL = {}  # (axis, axis) -> (sign, axis) for axes 0=1, 1=i, 2=j, 3=k


def _q8_fill():
    rules = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (2, 0): (1, 2), (3, 0): (1, 3),
        (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
        (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
        (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2),
    }
    _Q8_MUL.update(rules)


_q8_fill()


def quaternion_group() -> Group:
    def mul(x, y):
        (s1, a1), (s2, a2) = x, y
        s3, a3 = _Q8_MUL[(a1, a2)]
        return (s1 * s2 * s3, a3)

    def nm(x):
        s, a = x
        return ("" if s > 0 else "-") + "1ijk"[a]

    return _group_from_objects("Q8", (1, 0), [(1, 1), (1, 2)], mul, nm)


_ATOM_RE = re.compile(r"^(C|S|D)(\d+)$|^(Q8)$")


def build_group(spec: str) -> Group:
    """Build a catalog group from a spec string such as "S3" or "C2 x C2"."""
    text = spec.strip()
    if not text:
        raise ValueError("empty group spec")
    parts = [p.strip() for p in text.split("x")]
    if any(not p for p in parts):
        raise ValueError(f"malformed group spec {spec!r}")
    groups = [_build_atom(p) for p in parts]
    g = groups[0]
    for h in groups[1:]:
        g = direct_product(g, h)
    return g


def _build_atom(token: str) -> Group:
    m = _ATOM_RE.match(token)
    if not m:
        raise ValueError(f"unknown group spec token {token!r}")
    if m.group(3):
        return quaternion_group()
    kind, n = m.group(1), int(m.group(2))
    if kind == "C":
        if n > GROUP_ORDER_CAP:
            raise ValueError(f"group order {n} exceeds cap {GROUP_ORDER_CAP}")
        return cyclic_group(n)
    if kind == "S":
        return symmetric_group(n)
    if 2 * n > GROUP_ORDER_CAP:
        raise ValueError(f"group order {2 * n} exceeds cap {GROUP_ORDER_CAP}")
    return dihedral_group(n)


def cayley_dump(g: Group) -> str:
    """Textual Cayley table: "order <n>" then the rows of the mul table."""
    lines = [f"order {g.order}"]
    for row in g.mul_table:
        lines.append(" ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"
