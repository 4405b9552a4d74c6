"""Graded tangent spaces of 2-step ideals and nestings.

A degree-t homomorphism I -> R/I is parametrized by the images of the minimal
generators; the constraints are the minimal first syzygies (degrees k+1..k+3,
which generate the whole syzygy module since reg(I) <= k+2).  For nestings the
per-level systems are joined by the compatibility constraints
pi^(i) o phi^(i+1) = phi^(i) imposed on the minimal generators of each smaller
ideal.  All dimensions are exact (certified modular elimination).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._modp import kernel_dim_certified
from .combinat import dim_forms, monomial_index, monomials
from .exactla import Mat, _to_int_rows, rank, solve_exact
from .ideals import (
    GradedIdeal,
    Nesting,
    _syzygy_eval_rows,
    minimal_generators,
    syzygy_generators,
)

_CTX_CACHE: dict[int, "_IdealContext"] = {}


class _IdealContext:
    """Cached quotient bases, reduction maps and presentation for one ideal.

    Syzygies are computed lazily: degrees t >= 1 need none."""

    def __init__(self, I: GradedIdeal):
        self.I = I
        self._gens = None
        self._syzygies = None
        self._syz2 = None
        self._free: dict[int, list[int]] = {}
        self._mult: dict = {}
        self._eval: dict[int, tuple[list[list[Fraction]], list]] = {}

    @property
    def gens(self):
        if self._gens is None:
            self._gens = minimal_generators(self.I)
        return self._gens

    def gen_count(self, d: int) -> int:
        """Number of minimal generators of degree d without extracting them."""
        from .exactla import _to_int_rows
        from .ideals import _shift_products
        from ._modp import rank_certified

        I, k = self.I, self.I.k
        if self._gens is not None:
            return sum(1 for deg, _ in self._gens if deg == d)
        if d == k:
            return I.h(k)
        if d in (k + 1, k + 2):
            grown = _shift_products(I.n, I.piece(d - 1), d - 1)
            return I.h(d) - rank_certified(_to_int_rows(grown), dim_forms(I.n, d))
        return 0

    @property
    def syzygies(self):
        if self._syzygies is None:
            self._syzygies = syzygy_generators(self.I, self.gens)
        return self._syzygies

    def syz_columns(self, j: int):
        cols = []
        for i, (deg, _) in enumerate(self.gens):
            if deg <= j:
                from .combinat import monomials as _mons

                for m in _mons(self.I.n, j - deg):
                    cols.append((i, m))
        return cols

    def qdim(self, d: int) -> int:
        return len(self.free_columns(d)) if d >= 0 else 0

    def free_columns(self, d: int) -> list[int]:
        """Indices of the quotient-basis monomials of degree d."""
        if d < 0:
            return []
        if d not in self._free:
            piece = self.I.piece(d)
            pivset = set(piece.pivots)
            self._free[d] = [j for j in range(dim_forms(self.I.n, d)) if j not in pivset]
        return self._free[d]

    def reduce_vec(self, d: int, vec) -> list[Fraction]:
        """Quotient coordinates of an ambient degree-d coefficient vector."""
        piece = self.I.piece(d)
        if piece.dim:
            vec = piece.reduce(vec)
        free = self.free_columns(d)
        return [Fraction(vec[j]) for j in free]

    def mult_matrix(self, m: tuple[int, ...], src_deg: int):
        """Matrix of multiplication by the monomial m: (R/I)_src -> (R/I)_{src+|m|}."""
        key = (m, src_deg)
        if key in self._mult:
            return self._mult[key]
        n = self.I.n
        tgt_deg = src_deg + sum(m)
        src_mons = monomials(n, src_deg)
        tgt_dim = dim_forms(n, tgt_deg)
        tgt_index = monomial_index(n, tgt_deg)
        cols = []
        for j in self.free_columns(src_deg):
            prod = tuple(a + b for a, b in zip(src_mons[j], m))
            e = [Fraction(0)] * tgt_dim
            e[tgt_index[prod]] = Fraction(1)
            cols.append(self.reduce_vec(tgt_deg, e))
        qt = self.qdim(tgt_deg)
        rows = tuple(tuple(col[r] for col in cols) for r in range(qt))
        self._mult[key] = rows
        return rows

    def eval_columns(self, d: int):
        """Evaluation matrix of the minimal generators into R_d with its column index."""
        if d not in self._eval:
            gens = [(deg, list(v)) for deg, v in self.gens]
            rows, _ = _syzygy_eval_rows(self.I, gens, d)
            self._eval[d] = (rows, self.syz_columns(d))
        return self._eval[d]

    @property
    def flat_syzygies(self):
        """[(degree, coeff vector over syz_columns(degree))], flattened."""
        out = []
        for j, syzlist in self.syzygies:
            for s in syzlist:
                out.append((j, s))
        return out

    @property
    def second_syzygies(self):
        """Generators of the relations among the first-syzygy generators.

        Degrees k+2..k+4 suffice (the resolution has regularity <= k+2); they
        supply exact left-kernel certificates for the degree-t systems."""
        if self._syz2 is None:
            from .exactla import _to_int_rows
            from ._modp import kernel_dim_certified

            n, k = self.I.n, self.I.k
            flat = self.flat_syzygies
            out = []
            for j2 in (k + 2, k + 3, k + 4):
                target_index = {col: i for i, col in enumerate(self.syz_columns(j2))}
                cols = []
                col_index = []
                for s_idx, (j_s, s) in enumerate(flat):
                    if j_s > j2:
                        continue
                    src_cols = self.syz_columns(j_s)
                    for m2 in monomials(n, j2 - j_s):
                        w = [Fraction(0)] * len(target_index)
                        for pos, (gi, m_s) in enumerate(src_cols):
                            c = s[pos]
                            if c:
                                prod = tuple(a + b for a, b in zip(m_s, m2))
                                w[target_index[(gi, prod)]] += c
                        cols.append(w)
                        col_index.append((s_idx, m2))
                if not cols:
                    continue
                rows = [[cols[c][r] for c in range(len(cols))] for r in range(len(target_index))]
                _, basis = kernel_dim_certified(
                    _to_int_rows(rows), len(cols), need_basis=True
                )
                for v in basis or []:
                    out.append((j2, col_index, v))
            self._syz2 = out
        return self._syz2


def _context(I: GradedIdeal) -> _IdealContext:
    ctx = _CTX_CACHE.get(id(I))
    if ctx is None or ctx.I is not I:
        ctx = _IdealContext(I)
        if len(_CTX_CACHE) > 64:
            _CTX_CACHE.clear()
        _CTX_CACHE[id(I)] = ctx
    return ctx


def _unknown_blocks(ctx: _IdealContext, t: int):
    """(offset, size, degree) per minimal generator; size = q_{deg+t}."""
    blocks = []
    offset = 0
    for deg, _ in ctx.gens:
        size = ctx.qdim(deg + t)
        blocks.append((offset, size, deg))
        offset += size
    return blocks, offset


def _hom_rows(ctx: _IdealContext, t: int):
    """Constraint rows of the degree-t homomorphism system."""
    blocks, ncols = _unknown_blocks(ctx, t)
    rows: list[list[Fraction]] = []
    # no constraint can bite when every syzygy degree has a zero target
    k = ctx.I.k
    if all(ctx.qdim(j + t) == 0 for j in (k + 1, k + 2, k + 3)):
        return rows, ncols, blocks
    for j, syzlist in ctx.syzygies:
        qt = ctx.qdim(j + t)
        if qt == 0 or not syzlist:
            continue
        col_index = ctx.syz_columns(j)
        for s in syzlist:
            block = [[Fraction(0)] * ncols for _ in range(qt)]
            for pos, (i, m) in enumerate(col_index):
                c = s[pos]
                if not c:
                    continue
                off, size, deg = blocks[i]
                if size == 0:
                    continue
                T = ctx.mult_matrix(m, deg + t)
                for r in range(qt):
                    Tr = T[r]
                    Br = block[r]
                    for cc in range(size):
                        if Tr[cc]:
                            Br[off + cc] += c * Tr[cc]
            rows.extend(block)
    return rows, ncols, blocks


def hom_graded(I: GradedIdeal, t: int, with_basis: bool = True):
    """(dimension, basis) of Hom_R(I, R/I)_t.

    Unknowns are the generator images in the quotient pieces; the basis (when
    requested) is given in those coordinates, free-column-identity form.
    """
    ctx = _context(I)
    rows, ncols, _ = _hom_rows(ctx, t)
    if ncols == 0:
        return 0, []
    if not rows:
        dim, basis = ncols, None
        if with_basis:
            from .exactla import Subspace

            basis = [list(r) for r in Subspace.full(ncols).basis]
        return dim, basis
    dim, basis = kernel_dim_certified(_to_int_rows(rows), ncols, need_basis=with_basis)
    return dim, basis


def _row_offsets(ctx: _IdealContext, t: int):
    """Row layout of _hom_rows: flat syzygy index -> (offset, block height)."""
    offs = {}
    pos = 0
    flat_idx = 0
    for j, syzlist in ctx.syzygies:
        qt = ctx.qdim(j + t)
        for _ in syzlist:
            if qt:
                offs[flat_idx] = (pos, qt)
                pos += qt
            flat_idx += 1
    return offs, pos


def _left_certificates(ctx: _IdealContext, t: int):
    """Row dependencies of the degree-t system predicted by second syzygies.

    Each generator sigma with sum_s c_s s = 0 (coefficients in R) forces, for
    every monomial multiple and every quotient coordinate in its degree, one
    exact left-kernel vector of the constraint matrix (multiplication maps on
    quotients compose)."""
    flat = ctx.flat_syzygies
    offs, nrows = _row_offsets(ctx, t)
    if not nrows:
        return []
    k = ctx.I.k
    n = ctx.I.n
    out = []
    for j2g, col_index, sig in ctx.second_syzygies:
        delta_deg = 0
        while j2g + delta_deg + t <= k + 1:
            q2 = ctx.qdim(j2g + delta_deg + t)
            if q2:
                for m2 in monomials(n, delta_deg):
                    rows_block = [[Fraction(0)] * nrows for _ in range(q2)]
                    touched = False
                    for pos, (s_idx, m_s) in enumerate(col_index):
                        c = sig[pos]
                        if not c or s_idx not in offs:
                            continue
                        j_s = flat[s_idx][0]
                        off, height = offs[s_idx]
                        prod = tuple(a + b for a, b in zip(m_s, m2))
                        M = ctx.mult_matrix(prod, j_s + t)
                        for qc in range(q2):
                            Mr = M[qc]
                            row = rows_block[qc]
                            for rho in range(height):
                                if Mr[rho]:
                                    row[off + rho] += c * Mr[rho]
                                    touched = True
                    if touched:
                        out.extend(rows_block)
            delta_deg += 1
    if not out:
        return []
    return _to_int_rows(out)


def _hom_dim(ctx: _IdealContext, t: int, known_kernel=None) -> int:
    k = ctx.I.k
    if all(ctx.qdim(j + t) == 0 for j in (k + 1, k + 2, k + 3)):
        # constraint-free: the dimension is the count of unknowns, and only
        # generator degrees with a non-zero target piece contribute
        return sum(
            ctx.gen_count(d) * ctx.qdim(d + t) for d in (k, k + 1, k + 2) if ctx.qdim(d + t)
        )
    rows, ncols, _ = _hom_rows(ctx, t)
    if ncols == 0:
        return 0
    if not rows:
        return ncols
    provider = (lambda: _left_certificates(ctx, t)) if t <= 0 else None
    dim, _ = kernel_dim_certified(
        _to_int_rows(rows), ncols, known_kernel=known_kernel, left_provider=provider
    )
    return dim


def _derivative_vector(n: int, d: int, vec, j: int) -> list[Fraction]:
    """Coefficient vector of d(f)/dx_j for f of degree d (result degree d-1)."""
    src = monomials(n, d)
    tgt_index = monomial_index(n, d - 1) if d >= 1 else {}
    out = [Fraction(0)] * dim_forms(n, d - 1)
    for pos, c in enumerate(vec):
        if c:
            e = src[pos]
            if e[j]:
                m = list(e)
                m[j] -= 1
                out[tgt_index[tuple(m)]] += c * e[j]
    return out


def derivation_classes(I: GradedIdeal) -> list[list[Fraction]]:
    """The n translation homomorphisms f -> df/dx_j mod I in t = -1 coordinates."""
    ctx = _context(I)
    blocks, ncols = _unknown_blocks(ctx, -1)
    rows, _, _ = _hom_rows(ctx, -1)
    out = []
    for j in range(I.n):
        v = [Fraction(0)] * ncols
        for (off, size, deg), (gdeg, gvec) in zip(blocks, ctx.gens):
            if size == 0:
                continue
            dv = _derivative_vector(I.n, gdeg, gvec, j)
            red = ctx.reduce_vec(gdeg - 1, dv)
            for cc in range(size):
                v[off + cc] = red[cc]
        for row in rows:
            # Leibniz makes every derivation an actual homomorphism
            assert not sum(a * b for a, b in zip(row, v) if a), "derivation fails syzygy"
        out.append(v)
    return out


def derivation_rank(I: GradedIdeal) -> int:
    vecs = derivation_classes(I)
    ncols = len(vecs[0]) if vecs else 0
    if ncols == 0:
        return 0
    return rank(vecs, ncols)


@dataclass(frozen=True)
class TangentReport:
    """Graded tangent dimensions, the translation rank, and the TNT verdict."""

    dims: dict
    t_neg_total: int
    t0: int
    t1: int
    derivation_rank: int
    tnt: bool

    def to_json_dict(self) -> dict:
        return {
            "dims": {str(t): v for t, v in sorted(self.dims.items())},
            "derivation_rank": self.derivation_rank,
            "tnt": self.tnt,
        }


def tangent_report(I: GradedIdeal) -> TangentReport:
    ctx = _context(I)
    k = I.k
    derivations = derivation_classes(I)
    ncols_d = len(derivations[0]) if derivations else 0
    der_int = _to_int_rows(derivations) if ncols_d else []
    drank = rank(derivations, ncols_d) if ncols_d else 0
    dims = {}
    for t in range(-(k + 2), 2):
        dims[t] = _hom_dim(ctx, t, known_kernel=der_int if t == -1 else None)
    assert _hom_dim(ctx, -(k + 3)) == 0, "tangent below -(k+2) must vanish"
    assert _hom_dim(ctx, 2) == 0 and _hom_dim(ctx, 3) == 0, "tangent above 1 must vanish"
    t_neg = sum(v for t, v in dims.items() if t < 0)
    tnt = all(dims[t] == 0 for t in dims if t <= -2) and drank == dims[-1]
    return TangentReport(dims, t_neg, dims[0], dims[1], drank, tnt)


# ---------------------------------------------------------------------------
# nestings


def _decompose(ctx: _IdealContext, d: int, vec) -> list[Fraction]:
    """Coefficients expressing a degree-d element of the ideal over the
    generator multiples (columns of the evaluation matrix)."""
    rows, col_index = ctx.eval_columns(d)
    sol = solve_exact(Mat(rows, len(col_index)), vec)
    if sol is None:
        raise ValueError("element does not lie in the ideal piece")
    return sol


def _nested_system(ideals: tuple[GradedIdeal, ...], t: int):
    """Joint constraint system for degree-t tuples (phi^(1), ..., phi^(r))."""
    ctxs = [_context(I) for I in ideals]
    level_blocks = []
    level_offset = []
    total = 0
    all_rows: list[list[Fraction]] = []
    level_row_ranges = []
    for ctx in ctxs:
        blocks, ncols = _unknown_blocks(ctx, t)
        level_blocks.append(blocks)
        level_offset.append(total)
        total += ncols
    for li, ctx in enumerate(ctxs):
        rows, ncols, _ = _hom_rows(ctx, t)
        off = level_offset[li]
        start = len(all_rows)
        for row in rows:
            big = [Fraction(0)] * total
            big[off : off + ncols] = row
            all_rows.append(big)
        level_row_ranges.append((start, len(all_rows)))
    # compatibility: pi^(i) o phi^(i+1) = phi^(i) on minimal generators of level i+1
    for li in range(len(ctxs) - 1):
        big_ctx, small_ctx = ctxs[li], ctxs[li + 1]
        for gi, (gdeg, gvec) in enumerate(small_ctx.gens):
            qt_big = big_ctx.qdim(gdeg + t)
            if qt_big == 0:
                continue
            blocks_small = level_blocks[li + 1]
            off_small, size_small, _ = blocks_small[gi]
            # projection of the small-level quotient coords into the big level
            n = big_ctx.I.n
            src_mons = monomials(n, gdeg + t)
            tgt_dim = dim_forms(n, gdeg + t)
            P = []
            for j in small_ctx.free_columns(gdeg + t):
                e = [Fraction(0)] * tgt_dim
                e[j] = Fraction(1)
                P.append(big_ctx.reduce_vec(gdeg + t, e))
            coeffs = _decompose(big_ctx, gdeg, list(gvec))
            _, col_index = big_ctx.eval_columns(gdeg)
            block = [[Fraction(0)] * total for _ in range(qt_big)]
            for pos, (i, m) in enumerate(col_index):
                c = coeffs[pos]
                if not c:
                    continue
                off_b, size_b, deg_b = level_blocks[li][i]
                if size_b == 0:
                    continue
                T = big_ctx.mult_matrix(m, deg_b + t)
                base = level_offset[li]
                for r in range(qt_big):
                    Tr = T[r]
                    Br = block[r]
                    for cc in range(size_b):
                        if Tr[cc]:
                            Br[base + off_b + cc] += c * Tr[cc]
            if size_small:
                base = level_offset[li + 1]
                for r in range(qt_big):
                    Br = block[r]
                    for cc in range(size_small):
                        x = P[cc][r]
                        if x:
                            Br[base + off_small + cc] -= x
            all_rows.extend(block)
    return all_rows, total, level_blocks, level_offset, level_row_ranges, ctxs


def nested_hom_graded(N: Nesting, t: int, known_kernel=None) -> int:
    """Dimension of the degree-t tangent space of the nesting (one joint system)."""
    rows, total, _, _, level_row_ranges, ctxs = _nested_system(N.ideals, t)
    if total == 0:
        return 0
    if not rows:
        return total
    provider = None
    if t <= 0:
        nrows = len(rows)
        ranges = level_row_ranges

        def provider():
            out = []
            for li, ctx in enumerate(ctxs):
                start, stop = ranges[li]
                for v in _left_certificates(ctx, t):
                    big = [0] * nrows
                    big[start:stop] = v
                    out.append(big)
            return out

    dim, _ = kernel_dim_certified(
        _to_int_rows(rows), total, known_kernel=known_kernel, left_provider=provider
    )
    return dim


def nested_derivation_vectors(N: Nesting) -> list[list[Fraction]]:
    """Tuples of the n simultaneous translations in joint t = -1 coordinates."""
    ideals = N.ideals
    rows, total, level_blocks, level_offset, _, _ = _nested_system(ideals, -1)
    out = []
    for j in range(N.n):
        v = [Fraction(0)] * total
        for li, I in enumerate(ideals):
            ctx = _context(I)
            for (off, size, deg), (gdeg, gvec) in zip(level_blocks[li], ctx.gens):
                if size == 0:
                    continue
                dv = _derivative_vector(I.n, gdeg, gvec, j)
                red = ctx.reduce_vec(gdeg - 1, dv)
                for cc in range(size):
                    v[level_offset[li] + off + cc] = red[cc]
        for row in rows:
            assert not sum(a * b for a, b in zip(row, v) if a), "translation fails nesting"
        out.append(v)
    return out


def nested_tangent_report(N: Nesting) -> TangentReport:
    kmax = max(I.k for I in N.ideals)
    vecs = nested_derivation_vectors(N)
    ncols = len(vecs[0]) if vecs else 0
    drank = rank(vecs, ncols) if ncols else 0
    vec_int = _to_int_rows(vecs) if ncols else []
    dims = {}
    for t in range(-(kmax + 2), 2):
        dims[t] = nested_hom_graded(N, t, known_kernel=vec_int if t == -1 else None)
    assert nested_hom_graded(N, -(kmax + 3)) == 0
    assert nested_hom_graded(N, 2) == 0
    t_neg = sum(v for t, v in dims.items() if t < 0)
    tnt = all(dims[t] == 0 for t in dims if t <= -2) and drank == dims[-1]
    return TangentReport(dims, t_neg, dims[0], dims[1], drank, tnt)


def fiber_dim_initial(obj) -> int:
    """Dimension of the initial-ideal fiber: the degree-1 tangent dimension."""
    if isinstance(obj, Nesting):
        return nested_hom_graded(obj, 1)
    return _hom_dim(_context(obj), 1)
