"""Exact linear algebra over the rationals and over prime fields.

Scalars over Q are plain ints or fractions.Fraction; scalars over F_p are
ints in 0..p-1.  Matrices are dense numpy object arrays tagged with their
field.  Large, very sparse systems (relation sets of tensor quotients) go
through RowReducer, an incremental echelon form keyed by pivot column that
only ever touches nonzero entries.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

_INT_SAFE = 1 << 62


class RationalField:
    """The rationals.  Ints are kept as ints so integer matrices stay fast."""

    characteristic = 0

    def of(self, x):
        if isinstance(x, int):
            return x
        f = Fraction(x)
        return int(f) if f.denominator == 1 else f

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 1 or a == -1:
            return a
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        f = Fraction(1, 1) / a
        return int(f) if f.denominator == 1 else f

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a == 0

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class PrimeField:
    """F_p for prime p; elements are ints reduced into 0..p-1."""

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p
        self.characteristic = p

    def of(self, x):
        if isinstance(x, Fraction):
            return self.mul(x.numerator % self.p, self.inv(x.denominator % self.p))
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a % self.p == 0

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = RationalField()

_GF_CACHE: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _GF_CACHE:
        _GF_CACHE[p] = PrimeField(p)
    return _GF_CACHE[p]


def parse_field(text: str):
    """Field names used by the CLI and report files: "Q", "F2", "F3", ..."""
    t = text.strip()
    if t in ("Q", "QQ", "q"):
        return QQ
    if t and t[0] in "Ff" and t[1:].isdigit():
        return GF(int(t[1:]))
    raise ValueError(f"unknown field {text!r} (expected Q or F<p>)")


def field_name(field) -> str:
    return "Q" if field.characteristic == 0 else f"F{field.characteristic}"


class Matrix:
    """Dense exact matrix with a field tag.

    Multiplication routes through int64 numpy when every entry is a small
    int (always true for the permutation-flavoured matrices this library
    mostly moves around), and falls back to object arithmetic otherwise.
    """

    __slots__ = ("field", "a", "rows", "cols")

    def __init__(self, field, a: np.ndarray):
        self.field = field
        self.a = a
        self.rows, self.cols = a.shape

    # construction ------------------------------------------------------

    @staticmethod
    def zeros(field, rows, cols):
        a = np.zeros((rows, cols), dtype=object)
        return Matrix(field, a)

    @staticmethod
    def identity(field, n):
        m = Matrix.zeros(field, n, n)
        for i in range(n):
            m.a[i, i] = 1
        return m

    @staticmethod
    def from_rows(field, rows):
        data = [[field.of(x) for x in row] for row in rows]
        a = np.empty((len(data), len(data[0]) if data else 0), dtype=object)
        for i, row in enumerate(data):
            for j, x in enumerate(row):
                a[i, j] = x
        return Matrix(field, a)

    def copy(self):
        return Matrix(self.field, self.a.copy())

    # access ------------------------------------------------------------

    def __getitem__(self, ij):
        return self.a[ij]

    def __setitem__(self, ij, v):
        self.a[ij] = v

    def col_dict(self, j) -> dict:
        """Nonzero entries of column j as {row: value}."""
        f = self.field
        return {i: self.a[i, j] for i in range(self.rows) if not f.is_zero(self.a[i, j])}

    def row_dict(self, i) -> dict:
        f = self.field
        return {j: self.a[i, j] for j in range(self.cols) if not f.is_zero(self.a[i, j])}

    def to_lists(self):
        return [[self.a[i, j] for j in range(self.cols)] for i in range(self.rows)]

    # arithmetic --------------------------------------------------------

    def _int64_view(self):
        flat = self.a.ravel()
        for x in flat.tolist():
            if type(x) is not int:
                return None
        try:
            return self.a.astype(np.int64)
        except OverflowError:
            return None

    def __matmul__(self, other: "Matrix") -> "Matrix":
        assert self.field == other.field and self.cols == other.rows
        p = self.field.characteristic
        ia, ib = self._int64_view(), other._int64_view()
        if ia is not None and ib is not None:
            ma = int(np.abs(ia).max()) if ia.size else 0
            mb = int(np.abs(ib).max()) if ib.size else 0
            if ma * mb * max(self.cols, 1) < _INT_SAFE:
                c = ia @ ib
                if p:
                    c %= p
                return Matrix(self.field, c.astype(object))
        c = self.a @ other.a
        if p:
            c = np.vectorize(lambda x: x % p, otypes=[object])(c)
        return Matrix(self.field, c)

    def _elementwise(self, other, op):
        assert self.field == other.field and self.a.shape == other.a.shape
        c = op(self.a, other.a)
        p = self.field.characteristic
        if p:
            c = np.vectorize(lambda x: x % p, otypes=[object])(c)
        return Matrix(self.field, c)

    def __add__(self, other):
        return self._elementwise(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._elementwise(other, lambda x, y: x - y)

    def __neg__(self):
        p = self.field.characteristic
        c = -self.a
        if p:
            c = np.vectorize(lambda x: x % p, otypes=[object])(c)
        return Matrix(self.field, c)

    def scale(self, s):
        f = self.field
        c = np.vectorize(lambda x: f.mul(s, x), otypes=[object])(self.a)
        return Matrix(f, c)

    def transpose(self):
        return Matrix(self.field, self.a.T.copy())

    def trace(self):
        f = self.field
        t = f.of(0)
        for i in range(min(self.rows, self.cols)):
            t = f.add(t, self.a[i, i])
        return t

    def kron(self, other: "Matrix") -> "Matrix":
        assert self.field == other.field
        return Matrix(self.field, np.kron(self.a, other.a))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.a.shape == other.a.shape
            and bool((self.a == other.a).all())
        )

    def __repr__(self):
        return f"Matrix({self.field}, {self.rows}x{self.cols})"

    def is_zero(self):
        f = self.field
        return all(f.is_zero(x) for x in self.a.ravel().tolist())


def rref(m: Matrix):
    """Reduced row echelon form.  Returns (rref matrix, pivot columns, rank)."""
    f = m.field
    a = [[f.of(x) for x in row] for row in m.to_lists()]
    nr, nc = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(nc):
        pr = None
        for i in range(r, nr):
            if not f.is_zero(a[i][c]):
                pr = i
                break
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        lead = a[r][c]
        if lead != 1:
            s = f.inv(lead)
            a[r] = [f.mul(s, x) for x in a[r]]
        for i in range(nr):
            if i != r and not f.is_zero(a[i][c]):
                co = a[i][c]
                a[i] = [f.sub(x, f.mul(co, y)) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return Matrix.from_rows(f, a) if nr else m, tuple(pivots), r


def _rank_modp(a: np.ndarray, p: int) -> int:
    """Rank of an int64 matrix over F_p, vectorised elimination."""
    a = np.mod(a, p)
    nr, nc = a.shape
    r = 0
    for c in range(nc):
        if r == nr:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        rest = np.nonzero(a[r + 1 :, c])[0]
        if rest.size:
            rows = rest + r + 1
            a[rows] = (a[rows] - np.outer(a[rows, c], a[r])) % p
        r += 1
    return r


_CERT_PRIMES = (2147483629, 2147482951)


def rank(m: Matrix) -> int:
    p = m.field.characteristic
    if p and p < 46341:
        ia = m._int64_view()
        if ia is not None:
            return _rank_modp(ia, p)
    if m.rows * m.cols > 4096:
        red = RowReducer(m.field, m.cols)
        for i in range(m.rows):
            red.add_row(m.row_dict(i))
        return red.rank
    return rref(m)[2]


def is_invertible(m: Matrix) -> bool:
    if m.rows != m.cols:
        raise ValueError("is_invertible requires a square matrix")
    if m.field.characteristic == 0:
        ia = m._int64_view()
        if ia is not None:
            # full rank mod any prime certifies a nonzero integer determinant;
            # a deficient modular rank is inconclusive, so fall through.
            ma = int(np.abs(ia).max()) if ia.size else 0
            for p in _CERT_PRIMES:
                if ma < p and _rank_modp(ia.copy(), p) == m.rows:
                    return True
    return rank(m) == m.rows


def solve_right(a: Matrix, b: Matrix):
    """Some X with a @ X == b, or None if the system is inconsistent."""
    assert a.field == b.field and a.rows == b.rows
    f = a.field
    aug = Matrix.zeros(f, a.rows, a.cols + b.cols)
    aug.a[:, : a.cols] = a.a
    aug.a[:, a.cols :] = b.a
    red, pivots, _ = rref(aug)
    if any(c >= a.cols for c in pivots):
        return None
    x = Matrix.zeros(f, a.cols, b.cols)
    for i, c in enumerate(pivots):
        for j in range(b.cols):
            x.a[c, j] = red.a[i, a.cols + j]
    return x


def inverse(m: Matrix) -> Matrix:
    x = solve_right(m, Matrix.identity(m.field, m.rows))
    if x is None or rank(m) != m.rows:
        raise ValueError("matrix is not invertible")
    return x


class RowReducer:
    """Incremental echelon form over a field, with rows as {col: coeff} dicts.

    Pivot rows are normalised to leading coefficient 1 at their minimal
    column.  reduce() eliminates every pivot column from a vector, so the
    residue is supported on free columns only; this is exactly the quotient
    projection used by QuotientSpace.
    """

    def __init__(self, field, ncols: int):
        self.field = field
        self.ncols = ncols
        self.pivots: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        f = self.field
        row = {c: v for c, v in row.items() if not f.is_zero(v)}
        while True:
            hit = None
            for c in row:
                if c in self.pivots and (hit is None or c < hit):
                    hit = c
            if hit is None:
                return row
            coef = row.pop(hit)
            for c2, v2 in self.pivots[hit].items():
                if c2 == hit:
                    continue
                nv = f.sub(row.get(c2, 0), f.mul(coef, v2))
                if f.is_zero(nv):
                    row.pop(c2, None)
                else:
                    row[c2] = nv

    def add_row(self, row: dict) -> bool:
        """Reduce and install as a new pivot row; True if the rank grew."""
        res = self.reduce(row)
        if not res:
            return False
        lead = min(res)
        f = self.field
        co = res[lead]
        if co != 1:
            s = f.inv(co)
            res = {c: f.mul(s, v) for c, v in res.items()}
        self.pivots[lead] = res
        return True

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)

    def basis_rows(self):
        return [self.pivots[c] for c in sorted(self.pivots)]


def nullspace_basis(red: RowReducer) -> list[dict]:
    """Kernel basis of the row system in red, one vector per free column.

    Works backwards from each free column through a "who references me"
    index, so the cost is proportional to the support actually reached.
    """
    import heapq

    f = red.field
    dependents: dict[int, list] = {}
    for c, row in red.pivots.items():
        for c2, v in row.items():
            if c2 != c:
                dependents.setdefault(c2, []).append((c, v))
    basis = []
    for fc in range(red.ncols):
        if fc in red.pivots:
            continue
        x = {fc: f.of(1)}
        heap = [-fc]
        queued = {fc}
        while heap:
            c2 = -heapq.heappop(heap)
            queued.discard(c2)
            val = x.get(c2)
            if val is None or f.is_zero(val):
                continue
            for cp, v in dependents.get(c2, ()):
                nv = f.sub(x.get(cp, 0), f.mul(v, val))
                if f.is_zero(nv):
                    x.pop(cp, None)
                else:
                    x[cp] = nv
                if cp not in queued:
                    queued.add(cp)
                    heapq.heappush(heap, -cp)
        basis.append({c: v for c, v in x.items() if not f.is_zero(v)})
    return basis


class QuotientSpace:
    """Ambient space modulo the row space of a set of relations.

    Quotient coordinates are the non-pivot (free) columns of the reduced
    relations; section sends quotient basis vectors to the corresponding
    ambient basis vectors, and project reduces an ambient vector by the
    relations and reads off the free coordinates.
    """

    def __init__(self, field, ambient_dim: int, reducer: RowReducer):
        self.field = field
        self.ambient_dim = ambient_dim
        self.reducer = reducer
        self.free_cols = tuple(c for c in range(ambient_dim) if c not in reducer.pivots)
        self._free_pos = {c: k for k, c in enumerate(self.free_cols)}

    @property
    def quotient_dim(self) -> int:
        return len(self.free_cols)

    @property
    def relation_rank(self) -> int:
        return self.reducer.rank

    def relation_basis(self) -> Matrix:
        rows = self.reducer.basis_rows()
        m = Matrix.zeros(self.field, len(rows), self.ambient_dim)
        for i, row in enumerate(rows):
            for c, v in row.items():
                m.a[i, c] = v
        return m

    def project_vec(self, vec: dict) -> dict:
        """Ambient {coord: coeff} -> quotient {coord: coeff}."""
        res = self.reducer.reduce(vec)
        return {self._free_pos[c]: v for c, v in res.items()}

    def section_vec(self, k: int) -> dict:
        return {self.free_cols[k]: self.field.of(1)}

    def project_matrix(self) -> Matrix:
        m = Matrix.zeros(self.field, self.quotient_dim, self.ambient_dim)
        for c in range(self.ambient_dim):
            for r, v in self.project_vec({c: self.field.of(1)}).items():
                m.a[r, c] = v
        return m

    def section_matrix(self) -> Matrix:
        m = Matrix.zeros(self.field, self.ambient_dim, self.quotient_dim)
        for k, c in enumerate(self.free_cols):
            m.a[c, k] = 1
        return m

    def kills(self, vec: dict) -> bool:
        return not self.reducer.reduce(vec)


def quotient_by(field, ambient_dim: int, relations) -> QuotientSpace:
    """Quotient of field^ambient_dim by the span of the given relation rows.

    Relations may be {coord: coeff} dicts or dense iterables of length
    ambient_dim.
    """
    red = RowReducer(field, ambient_dim)
    for rel in relations:
        if not isinstance(rel, dict):
            rel = {
                c: field.of(v) for c, v in enumerate(rel) if not field.is_zero(field.of(v))
            }
        red.add_row(rel)
    return QuotientSpace(field, ambient_dim, red)


def descend_kron(quot: QuotientSpace, a: Matrix, b: Matrix) -> Matrix:
    """Matrix of the operator (a tensor b) pushed down to a tensor quotient.

    The ambient space is indexed by pairs (i, j) -> i * b.cols + j, and the
    image of each quotient basis vector is computed as a sparse outer
    product before projecting, so permutation-like factors cost O(dim)
    per column.
    """
    f = quot.field
    q = quot.quotient_dim
    bc = b.cols
    out = Matrix.zeros(f, q, q)
    for k in range(q):
        amb = quot.free_cols[k]
        i, j = divmod(amb, bc)
        ca = a.col_dict(i)
        cb = b.col_dict(j)
        img = {}
        for ra, va in ca.items():
            base = ra * bc
            for rb, vb in cb.items():
                img[base + rb] = f.mul(va, vb)
        for r, v in quot.project_vec(img).items():
            out.a[r, k] = v
    return out


def random_matrix(field, rows, cols, rng, lo=-2, hi=2) -> Matrix:
    m = Matrix.zeros(field, rows, cols)
    for i in range(rows):
        for j in range(cols):
            m.a[i, j] = field.of(rng.randint(lo, hi))
    return m


def random_invertible(field, n, rng, tries=64) -> Matrix:
    for _ in range(tries):
        m = random_matrix(field, n, n, rng)
        if rank(m) == n:
            return m
    raise RuntimeError("failed to sample an invertible matrix")
