"""Exact rational linear algebra: matrices, RREF, kernels, subspaces.

All arithmetic is exact.  Elimination works on integer-scaled rows with
fraction-free cross-multiplication and per-row gcd stripping (Bareiss-style
pivoting), and results are normalized to canonical reduced row echelon form
with unit pivots, so equal subspaces have identical representations.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .combinat import dim_forms, monomial_index, monomials

Row = tuple[Fraction, ...]


def _to_int_rows(vectors) -> list[list[int]]:
    """Scale each vector to integers (kernels/row spaces are scale-invariant)."""
    out = []
    for v in vectors:
        fr = [Fraction(x) for x in v]
        den = 1
        for x in fr:
            den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in fr])
    return out


def _ref_int(rows: list[list[int]], ncols: int) -> list[int]:
    """In-place integer row echelon form; returns the pivot column list."""
    m = len(rows)
    rank = 0
    pivots = []
    for col in range(ncols):
        piv = None
        for i in range(rank, m):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        pv = prow[col]
        for i in range(rank + 1, m):
            ri = rows[i]
            f = ri[col]
            if not f:
                continue
            g = 0
            for j in range(col, ncols):
                ri[j] = pv * ri[j] - f * prow[j]
                if ri[j]:
                    g = gcd(g, ri[j])
            if g > 1:
                for j in range(col, ncols):
                    ri[j] //= g
        pivots.append(col)
        rank += 1
        if rank == m:
            break
    del rows[rank:]
    return pivots


def _rref_int(rows: list[list[int]], ncols: int) -> list[int]:
    """In-place integer RREF (pivot entries positive, rows gcd-free)."""
    pivots = _ref_int(rows, ncols)
    for k in range(len(pivots) - 1, -1, -1):
        pc = pivots[k]
        prow = rows[k]
        pv = prow[pc]
        for i in range(k):
            ri = rows[i]
            f = ri[pc]
            if not f:
                continue
            g = 0
            for j in range(ncols):
                ri[j] = pv * ri[j] - f * prow[j]
                if ri[j]:
                    g = gcd(g, ri[j])
            if g > 1:
                for j in range(ncols):
                    ri[j] //= g
    for ri in rows:
        g = 0
        for x in ri:
            if x:
                g = gcd(g, x)
        lead = next(x for x in ri if x)
        if lead < 0:
            g = -g
        if g not in (0, 1):
            for j in range(ncols):
                ri[j] //= g
    return pivots


def rref(vectors, ncols: int):
    """Canonical RREF over Q.  Returns (rows of Fractions, pivot columns)."""
    rows = _to_int_rows(vectors)
    rows = [r for r in rows if any(r)]
    pivots = _rref_int(rows, ncols)
    out = []
    for r, pc in zip(rows, pivots):
        pv = r[pc]
        out.append(tuple(Fraction(x, pv) for x in r))
    return out, pivots


def rank(vectors, ncols: int) -> int:
    rows = _to_int_rows(vectors)
    rows = [r for r in rows if any(r)]
    return len(_ref_int(rows, ncols))


def det_bareiss(rows) -> int:
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    a = [list(map(int, r)) for r in rows]
    m = len(a)
    if any(len(r) != m for r in a):
        raise ValueError("determinant needs a square matrix")
    sign = 1
    prev = 1
    for k in range(m - 1):
        if not a[k][k]:
            piv = next((i for i in range(k + 1, m) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, m):
            for j in range(k + 1, m):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1] if m else 1


class Mat:
    """Dense exact rational matrix (immutable rows of Fractions)."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows, ncols: int | None = None):
        rs = tuple(tuple(Fraction(x) for x in r) for r in rows)
        if ncols is None:
            if not rs:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(rs[0])
        if any(len(r) != ncols for r in rs):
            raise ValueError("ragged rows")
        self.rows = rs
        self.ncols = ncols

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def __eq__(self, other):
        return isinstance(other, Mat) and self.rows == other.rows and self.ncols == other.ncols

    def __hash__(self):
        return hash((self.rows, self.ncols))

    def __repr__(self):
        return f"Mat({self.nrows}x{self.ncols})"

    def transpose(self) -> "Mat":
        return Mat(tuple(zip(*self.rows)) if self.rows else (), self.nrows) if self.nrows else Mat([(Fraction(0),)] * 0, self.nrows)

    def column_sums(self):
        return [sum(r[j] for r in self.rows) for j in range(self.ncols)]

    def matvec(self, v):
        return [sum(a * b for a, b in zip(r, v) if a) for r in self.rows]

    def rank(self) -> int:
        return rank(self.rows, self.ncols)

    def det(self) -> Fraction:
        ints = _to_int_rows(self.rows)
        scale = Fraction(1)
        for orig, scaled in zip(self.rows, ints):
            for o, s in zip(orig, scaled):
                if s:
                    scale *= Fraction(o) / s
                    break
        return det_bareiss(ints) * scale

    def kernel(self) -> "Subspace":
        return kernel(self)


def kernel(M) -> "Subspace":
    """Canonical basis of the right null space of M (rows over any rationals)."""
    if isinstance(M, Mat):
        vectors, ncols = M.rows, M.ncols
    else:
        vectors, ncols = M
    rows, pivots = rref(vectors, ncols)
    pivset = set(pivots)
    free = [j for j in range(ncols) if j not in pivset]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][f]
        basis.append(v)
    return Subspace.from_vectors(ncols, basis)


class Subspace:
    """Row space in canonical RREF; equality is representation equality."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, basis, pivots):
        self.ambient_dim = ambient_dim
        self.basis = tuple(tuple(r) for r in basis)
        self.pivots = tuple(pivots)

    @classmethod
    def from_vectors(cls, ambient_dim: int, vectors) -> "Subspace":
        rows, pivots = rref(vectors, ambient_dim)
        return cls(ambient_dim, rows, pivots)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, (), ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        eye = []
        for i in range(ambient_dim):
            r = [Fraction(0)] * ambient_dim
            r[i] = Fraction(1)
            eye.append(r)
        return cls(ambient_dim, eye, range(ambient_dim))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} in {self.ambient_dim})"

    def reduce(self, v):
        """Canonical representative of v modulo this subspace (pivot coords killed)."""
        w = [Fraction(x) for x in v]
        for row, pc in zip(self.basis, self.pivots):
            c = w[pc]
            if c:
                for j in range(pc, self.ambient_dim):
                    if row[j]:
                        w[j] -= c * row[j]
        return w

    def contains_vector(self, v) -> bool:
        return not any(self.reduce(v))

    def contains(self, other: "Subspace") -> bool:
        """Subspace containment other <= self."""
        self._check_ambient(other)
        return all(self.contains_vector(r) for r in other.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        return Subspace.from_vectors(self.ambient_dim, list(self.basis) + list(other.basis))

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: row reduce [A|A; B|0], read intersection off [0|C] rows."""
        self._check_ambient(other)
        n = self.ambient_dim
        stacked = [list(r) + list(r) for r in self.basis]
        stacked += [list(r) + [Fraction(0)] * n for r in other.basis]
        rows, pivots = rref(stacked, 2 * n)
        inter = [row[n:] for row, pc in zip(rows, pivots) if pc >= n]
        return Subspace.from_vectors(n, inter)

    def _check_ambient(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")


def quotient_dim(A: Subspace, B: Subspace) -> int:
    """dim(B/A) for A <= B; raises if containment fails."""
    if not B.contains(A):
        raise ValueError("quotient_dim requires A contained in B")
    return B.dim - A.dim


def mul_map_matrix(n: int, d: int, j: int) -> Mat:
    """Matrix of multiplication by x_j from degree-d forms to degree-(d+1) forms."""
    if not 1 <= j <= n:
        raise ValueError(f"variable index {j} out of range 1..{n}")
    src = monomials(n, d)
    tgt_index = monomial_index(n, d + 1)
    nrows = dim_forms(n, d + 1)
    rows = [[0] * len(src) for _ in range(nrows)]
    for col, m in enumerate(src):
        e = list(m)
        e[j - 1] += 1
        rows[tgt_index[tuple(e)]][col] = 1
    return Mat(rows, len(src))


def infer_degree(n: int, ambient_dim: int) -> int:
    """Degree d with dim_forms(n, d) == ambient_dim (n >= 2 makes it unique)."""
    d = 0
    while dim_forms(n, d) < ambient_dim:
        d += 1
    if dim_forms(n, d) != ambient_dim:
        raise ValueError(f"no degree has a {ambient_dim}-dimensional form space for n={n}")
    return d


def mul_by_linear(V: Subspace, n: int, d: int | None = None) -> Subspace:
    """Row space of { x_j * v : v in V, j = 1..n } inside degree d+1."""
    if d is None:
        d = infer_degree(n, V.ambient_dim)
    if V.ambient_dim != dim_forms(n, d):
        raise ValueError("ambient dimension does not match dim of degree-d forms")
    src = monomials(n, d)
    tgt_index = monomial_index(n, d + 1)
    tgt_dim = dim_forms(n, d + 1)
    vectors = []
    for row in V.basis:
        for j in range(n):
            w = [Fraction(0)] * tgt_dim
            for col, c in enumerate(row):
                if c:
                    e = list(src[col])
                    e[j] += 1
                    w[tgt_index[tuple(e)]] = c
            vectors.append(w)
    return Subspace.from_vectors(tgt_dim, vectors)


def solve_exact(A: Mat, b):
    """One exact solution x of A x = b, or None if inconsistent."""
    aug = [list(r) + [Fraction(v)] for r, v in zip(A.rows, b)]
    rows, pivots = rref(aug, A.ncols + 1)
    if any(pc == A.ncols for pc in pivots):
        return None
    x = [Fraction(0)] * A.ncols
    for row, pc in zip(rows, pivots):
        x[pc] = row[A.ncols]
    return x
