"""Concrete graded 2-step ideals: construction, samplers, Betti slices, nestings."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .combinat import HilbertFunction, dim_forms, monomial_index, monomials
from .exactla import Mat, Subspace, kernel, mul_by_linear
from .forms import Form
from .profiles import NestedProfile, SyzygyRegime, TwoStepProfile, classify


def _shift_products(n: int, piece: Subspace, d: int) -> list[list[Fraction]]:
    """Raw vectors x_j * v in degree d+1 for every basis v of the piece."""
    from .combinat import monomial_index as _mi, monomials as _mons

    src = _mons(n, d)
    tgt = _mi(n, d + 1)
    out = []
    for row in piece.basis:
        for j in range(n):
            w = [Fraction(0)] * dim_forms(n, d + 1)
            for col, c in enumerate(row):
                if c:
                    e = list(src[col])
                    e[j] += 1
                    w[tgt[tuple(e)]] = c
            out.append(w)
    return out


def _closed_under_linear(n: int, k: int, piece_k: Subspace, piece_k1: Subspace) -> bool:
    """R_1 * piece_k contained in piece_k1, certified without new eliminations."""
    from .exactla import _to_int_rows
    from ._modp import rank_certified

    products = _shift_products(n, piece_k, k)
    stacked = _to_int_rows(list(piece_k1.basis) + products)
    return rank_certified(stacked, piece_k1.ambient_dim) == piece_k1.dim


class SamplerExhausted(RuntimeError):
    """Retry budget ran out before the exact dimension checks passed."""


class InfeasibleIntersection(RuntimeError):
    """The kernel meets the ambient piece trivially: no such nested ideal."""


DEFAULT_COEFF_BOUND = 10
DEFAULT_RETRIES = 25


class GradedIdeal:
    """Homogeneous 2-step ideal of order k: explicit pieces in degrees k, k+1.

    Degrees below k are zero, degrees k+2 and above are full.
    """

    __slots__ = ("n", "k", "pieces", "short_gens")

    def __init__(self, n: int, k: int, piece_k: Subspace, piece_k1: Subspace, short_gens=None):
        if k < 1:
            raise ValueError("order must be positive")
        if piece_k.ambient_dim != dim_forms(n, k) or piece_k1.ambient_dim != dim_forms(n, k + 1):
            raise ValueError("piece ambient dimensions do not match the degrees")
        if piece_k.dim == 0:
            raise ValueError("order-k piece is zero: the ideal has larger order")
        if not _closed_under_linear(n, k, piece_k, piece_k1):
            raise ValueError("pieces are not closed under multiplication by linear forms")
        self.n = n
        self.k = k
        self.pieces = {k: piece_k, k + 1: piece_k1}
        # optional dict degree -> small generator vectors (performance hint,
        # not part of the value: equality and hashing ignore it)
        self.short_gens = short_gens

    def piece(self, d: int) -> Subspace:
        if d < self.k:
            return Subspace.zero(dim_forms(self.n, d))
        if d in self.pieces:
            return self.pieces[d]
        return Subspace.full(dim_forms(self.n, d))

    def h(self, d: int) -> int:
        if d < self.k:
            return 0
        if d in self.pieces:
            return self.pieces[d].dim
        return dim_forms(self.n, d)

    def q(self, d: int) -> int:
        return dim_forms(self.n, d) - self.h(d)

    def profile(self) -> TwoStepProfile:
        return TwoStepProfile(self.n, self.k, self.h(self.k), self.h(self.k + 1))

    def contains(self, other: "GradedIdeal") -> bool:
        for d in range(other.k, other.k + 2):
            if not self.piece(d).contains(other.piece(d)):
                return False
        return True

    def __eq__(self, other):
        return (
            isinstance(other, GradedIdeal)
            and (self.n, self.k) == (other.n, other.k)
            and self.pieces == other.pieces
        )

    def __hash__(self):
        return hash((self.n, self.k, self.pieces[self.k], self.pieces[self.k + 1]))

    def __repr__(self):
        return f"GradedIdeal(n={self.n}, k={self.k}, h=({self.h(self.k)}, {self.h(self.k + 1)}))"


def two_step_closure(n: int, k: int, gens: list[Form]) -> GradedIdeal:
    """Ideal generated by forms of degree k, k+1, k+2 together with m^{k+2}."""
    by_deg: dict[int, list[Form]] = {}
    for g in gens:
        if g.n != n:
            raise ValueError("generator in the wrong polynomial ring")
        if g.degree not in (k, k + 1, k + 2):
            raise ValueError(f"generator degree {g.degree} outside {{{k}, {k + 1}, {k + 2}}}")
        by_deg.setdefault(g.degree, []).append(g)
    if k not in by_deg:
        raise ValueError("need at least one generator of degree k")
    gen_vecs = [g.to_vector() for g in by_deg[k]]
    V = Subspace.from_vectors(dim_forms(n, k), gen_vecs)
    W = mul_by_linear(V, n, k)
    hints = {k: gen_vecs} if V.dim == len(gen_vecs) else None
    if k + 1 in by_deg:
        W = W.sum(Subspace.from_vectors(dim_forms(n, k + 1), [g.to_vector() for g in by_deg[k + 1]]))
        if hints is not None:
            hints[k + 1] = [g.to_vector() for g in by_deg[k + 1]]
    return GradedIdeal(n, k, V, W, short_gens=hints)


def hilbert_function(I: GradedIdeal) -> HilbertFunction:
    """Quotient-side Hilbert function (1, n, ..., r_{k-1}, q_k, q_{k+1})."""
    vals = [dim_forms(I.n, d) for d in range(I.k)]
    vals.append(I.q(I.k))
    vals.append(I.q(I.k + 1))
    while vals and vals[-1] == 0:
        vals.pop()
    return HilbertFunction(I.n, vals, "quotient")


# ---------------------------------------------------------------------------
# minimal presentation: generators and first syzygies


@lru_cache(maxsize=None)
def _multiplication_blocks(n: int, d: int) -> tuple[Mat, ...]:
    from .exactla import mul_map_matrix

    return tuple(mul_map_matrix(n, d, j) for j in range(1, n + 1))


@dataclass(frozen=True)
class Presentation:
    """Minimal generators (degree, coefficient vector) and minimal first syzygies.

    A syzygy of degree j is stored as a vector over columns indexed by
    (generator index, monomial of degree j - deg(gen)) in generator order.
    """

    n: int
    k: int
    gens: tuple[tuple[int, tuple[Fraction, ...]], ...]
    syzygies: tuple[tuple[int, tuple[tuple[Fraction, ...], ...]], ...]

    def gens_of_degree(self, d: int):
        return [(i, v) for i, (deg, v) in enumerate(self.gens) if deg == d]

    def syz_columns(self, j: int) -> list[tuple[int, tuple[int, ...]]]:
        cols = []
        for i, (deg, _) in enumerate(self.gens):
            if deg <= j:
                for m in monomials(self.n, j - deg):
                    cols.append((i, m))
        return cols


def _modular_complement(base_raw, pool, ncols: int) -> list:
    """Vectors from `pool` completing span(base_raw) to span(base_raw + pool).

    Selection runs mod p and is then certified exactly; every vector of pool
    is returned if the certificate fails (safe redundancy for constraints,
    never wrong spans)."""
    from .exactla import _to_int_rows
    from ._modp import rank_certified, select_spanning_rows

    pool = [list(v) for v in pool]
    if not pool:
        return []
    base_int = _to_int_rows(base_raw) if base_raw else []
    pool_int = _to_int_rows(pool)
    sel = select_spanning_rows(base_int, pool_int, ncols)
    chosen_int = [pool_int[i] for i in sel]
    total = rank_certified(base_int + pool_int, ncols)
    rank_base = rank_certified(base_int, ncols) if base_int else 0
    if (
        len(sel) == total - rank_base
        and rank_certified(base_int + chosen_int, ncols) == total
    ):
        return [pool[i] for i in sel]
    return pool


def minimal_generators(I: GradedIdeal) -> list[tuple[int, list[Fraction]]]:
    """Canonical minimal generating set in degrees k, k+1, k+2.

    Verified short_gens hints replace RREF rows degreewise (same spans, much
    smaller entries)."""
    from .exactla import _to_int_rows, rank as _rank
    from ._modp import rank_certified

    n, k = I.n, I.k
    hints = I.short_gens or {}
    deg_k_rows = [list(r) for r in I.piece(k).basis]
    hint_k = hints.get(k)
    if hint_k:
        cand = [[Fraction(x) for x in v] for v in hint_k]
        piece = I.piece(k)
        if (
            len(cand) == piece.dim
            and all(piece.contains_vector(v) for v in cand)
            and _rank(cand, piece.ambient_dim) == piece.dim
        ):
            deg_k_rows = cand
    gens: list[tuple[int, list[Fraction]]] = [(k, v) for v in deg_k_rows]
    grown = _shift_products(n, I.piece(k), k)
    h_k1 = I.h(k + 1)
    deg_k1_rows = None
    hint_k1 = hints.get(k + 1)
    if hint_k1 is not None:
        cand = [[Fraction(x) for x in v] for v in hint_k1]
        piece1 = I.piece(k + 1)
        if all(piece1.contains_vector(v) for v in cand):
            r_g = rank_certified(_to_int_rows(grown), dim_forms(n, k + 1))
            if r_g + len(cand) == h_k1 and (
                not cand
                or rank_certified(_to_int_rows(grown + cand), dim_forms(n, k + 1)) == h_k1
            ):
                deg_k1_rows = cand
    if deg_k1_rows is None:
        deg_k1_rows = _modular_complement(
            grown, [list(r) for r in I.piece(k + 1).basis], dim_forms(n, k + 1)
        )
    gens += [(k + 1, v) for v in deg_k1_rows]
    grown2 = _shift_products(n, I.piece(k + 1), k + 1)
    eye = [list(r) for r in Subspace.full(dim_forms(n, k + 2)).basis]
    gens += [(k + 2, v) for v in _modular_complement(grown2, eye, dim_forms(n, k + 2))]
    return gens


def _syzygy_columns(I: GradedIdeal, gens, j: int) -> list[tuple[int, tuple[int, ...]]]:
    cols = []
    for i, (deg, _) in enumerate(gens):
        if deg <= j:
            for m in monomials(I.n, j - deg):
                cols.append((i, m))
    return cols


def _syzygy_eval_rows(I: GradedIdeal, gens, j: int) -> tuple[list[list[Fraction]], int]:
    """Evaluation matrix of the generating set into R_j (kernel = Syz_j)."""
    n = I.n
    nrows = dim_forms(n, j)
    cols: list[list[Fraction]] = []
    tgt = monomial_index(n, j)
    for deg, v in gens:
        if deg > j:
            continue
        src = monomials(n, deg)
        for m in monomials(n, j - deg):
            w = [Fraction(0)] * nrows
            for pos, c in enumerate(v):
                if c:
                    prod = tuple(a + b for a, b in zip(src[pos], m))
                    w[tgt[prod]] += c
            cols.append(w)
    rows = [[cols[c][r] for c in range(len(cols))] for r in range(nrows)]
    return rows, len(cols)


def syzygy_basis(I: GradedIdeal, gens, j: int) -> list[list[Fraction]]:
    """Exact basis of the degree-j syzygies of the generating set.

    Large-entry ideals route through the saturated integer kernel, which
    yields syzygy vectors of moderate size."""
    from .exactla import _to_int_rows
    from ._modp import _BIG_ENTRY_BITS, kernel_dim_certified, saturated_kernel_basis

    rows, ncols = _syzygy_eval_rows(I, gens, j)
    if ncols == 0:
        return []
    int_rows = _to_int_rows(rows)
    if any(abs(x).bit_length() > _BIG_ENTRY_BITS for r in int_rows for x in r):
        sat = saturated_kernel_basis(int_rows, ncols)
        if sat is not None:
            return _size_reduce(sat)
    _, basis = kernel_dim_certified(int_rows, ncols, need_basis=True)
    return basis


def _syzygy_shift(I: GradedIdeal, gens, syz_rows, j: int) -> list[list[Fraction]]:
    """Images of degree-j syzygies under multiplication by each variable."""
    n = I.n
    src_cols = {col: i for i, col in enumerate(_syzygy_columns(I, gens, j))}
    tgt_cols = {col: i for i, col in enumerate(_syzygy_columns(I, gens, j + 1))}
    out = []
    for row in syz_rows:
        for var in range(n):
            w = [Fraction(0)] * len(tgt_cols)
            for (gi, m), pos in src_cols.items():
                c = row[pos]
                if c:
                    e = list(m)
                    e[var] += 1
                    w[tgt_cols[(gi, tuple(e))]] += c
            out.append(w)
    return out


def _syzygy_dim(I: GradedIdeal, gens, j: int) -> int:
    from .exactla import _to_int_rows
    from ._modp import kernel_dim_certified

    rows, ncols = _syzygy_eval_rows(I, gens, j)
    if ncols == 0:
        return 0
    dim, _ = kernel_dim_certified(_to_int_rows(rows), ncols)
    return dim


def syzygy_generators(I: GradedIdeal, gens) -> list[tuple[int, tuple]]:
    """A generating set of first syzygies of the given minimal generators.

    Syzygy generators live in degrees k+1, k+2, k+3 (the regularity of a
    2-step ideal is at most k+2): degree j keeps a complement of the shifts
    of the lower generators inside Syz_j.  A degree with no minimal syzygies
    (certified by dimensions) skips the basis computation entirely; a failed
    complement certificate keeps the whole degree-j basis (redundant but
    safe)."""
    from .exactla import _to_int_rows
    from ._modp import rank_lower_bound, select_spanning_rows

    n, k = I.n, I.k
    syzygies: list[tuple[int, tuple]] = []
    minimal: dict[int, list[list[Fraction]]] = {}
    for j in (k + 1, k + 2, k + 3):
        ncols = len(_syzygy_columns(I, gens, j))
        # shift span of all lower minimal syzygies: monomial multiples
        shifted: list[list[Fraction]] = []
        for j0, vs in minimal.items():
            rows = vs
            for _ in range(j - j0):
                rows = _syzygy_shift(I, gens, rows, j0)
                j0 += 1
            shifted.extend(rows)
        d_full = _syzygy_dim(I, gens, j)
        shifted_int = _to_int_rows(shifted) if shifted else []
        r_shift_lower = rank_lower_bound(shifted_int, ncols) if shifted else 0
        if d_full == r_shift_lower:
            # the shifts of lower syzygy generators already span Syz_j
            syzygies.append((j, ()))
            minimal[j] = []
            continue
        basis_j = syzygy_basis(I, gens, j)
        basis_int = _to_int_rows(basis_j)
        if shifted:
            sel = select_spanning_rows(shifted_int, basis_int, ncols)
            chosen = [basis_j[i] for i in sel]
            # one modular full-dimension witness certifies the span
            if rank_lower_bound(shifted_int + [basis_int[i] for i in sel], ncols) != d_full:
                chosen = basis_j  # certificate failed: keep everything
        else:
            chosen = basis_j
        syzygies.append((j, tuple(tuple(r) for r in chosen)))
        minimal[j] = [list(r) for r in chosen]
    return syzygies


def presentation(I: GradedIdeal) -> Presentation:
    """Minimal generators plus a generating set of first syzygies."""
    gens = minimal_generators(I)
    return Presentation(
        I.n,
        I.k,
        tuple((d, tuple(v)) for d, v in gens),
        tuple(syzygy_generators(I, gens)),
    )


@dataclass(frozen=True)
class BettiSlice:
    """Graded Betti numbers on the first anti-diagonal and beta_{2,k+2}."""

    k: int
    beta0: dict
    beta1_k1: int
    beta1_k2: int
    beta2_k2: int


def betti_slice(I: GradedIdeal) -> BettiSlice:
    from .exactla import _to_int_rows
    from ._modp import rank_certified

    n, k = I.n, I.k
    p = I.profile()
    gens = minimal_generators(I)
    # generator counts from certified ranks (independent of the selection)
    grown = rank_certified(_to_int_rows(_shift_products(n, I.piece(k), k)), dim_forms(n, k + 1))
    grown2 = rank_certified(
        _to_int_rows(_shift_products(n, I.piece(k + 1), k + 1)), dim_forms(n, k + 2)
    )
    beta0 = {
        k: I.h(k),
        k + 1: I.h(k + 1) - grown,
        k + 2: dim_forms(n, k + 2) - grown2,
    }
    syz1 = syzygy_basis(I, gens, k + 1)
    d2 = _syzygy_dim(I, gens, k + 2)
    if syz1:
        from .exactla import rank as _rank

        shifted = _syzygy_shift(I, gens, syz1, k + 1)
        ncols2 = len(_syzygy_columns(I, gens, k + 2))
        if len(shifted) <= 64:
            shift_dim = _rank(shifted, ncols2)
        else:
            shift_dim = rank_certified(_to_int_rows(shifted), ncols2)
    else:
        shift_dim = 0
    beta1_k1 = len(syz1)
    beta1_k2 = d2 - shift_dim
    beta2_k2 = p.t_h - beta0[k + 2] + beta1_k2
    slice_ = BettiSlice(k, beta0, beta1_k1, beta1_k2, beta2_k2)
    assert beta0[k] == p.h_k
    assert beta0[k + 1] - beta1_k1 == p.s_h
    assert beta0[k + 2] - beta1_k2 + beta2_k2 == p.t_h
    return slice_


# ---------------------------------------------------------------------------
# samplers


def _rng_vector(rng: random.Random, length: int, bound: int) -> list[int]:
    return [rng.randint(-bound, bound) for _ in range(length)]


def random_subspace(rng: random.Random, ambient: int, dim: int, bound: int) -> Subspace:
    while True:
        S = Subspace.from_vectors(ambient, [_rng_vector(rng, ambient, bound) for _ in range(dim)])
        if S.dim == dim:
            return S


def random_element(rng: random.Random, S: Subspace, bound: int) -> list[Fraction]:
    coeffs = _rng_vector(rng, S.dim, bound)
    v = [Fraction(0)] * S.ambient_dim
    for c, row in zip(coeffs, S.basis):
        if c:
            for j, x in enumerate(row):
                if x:
                    v[j] += c * x
    return v


def derive_seed(master: int, index: int) -> int:
    return (master * 1_000_003 + index) % (2**63)


def sample_no_syz(
    p: TwoStepProfile,
    seed: int,
    coeff_bound: int = DEFAULT_COEFF_BOUND,
    retries: int = DEFAULT_RETRIES,
) -> GradedIdeal:
    """Generic ideal without linear syzygies (or degenerate 1-step)."""
    regime = classify(p)
    if regime not in (SyzygyRegime.NO_SYZYGIES, SyzygyRegime.DEGENERATE_1STEP):
        raise ValueError(f"profile is in regime {regime}, not no-syzygies")
    if p.h_k == 0:
        raise ValueError("h_k = 0 cannot be realized at order k; use the next order")
    n, k = p.n, p.k
    rng = random.Random(seed)
    r_k, r_k1 = p.r_k, p.r_k1
    for _ in range(retries):
        vs = [_rng_vector(rng, r_k, coeff_bound) for _ in range(p.h_k)]
        V = Subspace.from_vectors(r_k, vs)
        if V.dim != p.h_k:
            continue
        if p.h_k1 == r_k1:
            return GradedIdeal(n, k, V, Subspace.full(r_k1), short_gens={k: vs})
        grown = mul_by_linear(V, n, k)
        if grown.dim != n * p.h_k:
            continue
        extra = [_rng_vector(rng, r_k1, coeff_bound) for _ in range(p.s_h)]
        W = grown.sum(Subspace.from_vectors(r_k1, extra)) if extra else grown
        if W.dim == p.h_k1:
            return GradedIdeal(n, k, V, W, short_gens={k: vs, k + 1: extra})
    raise SamplerExhausted(f"no-syzygies sampler failed for {p} after {retries} tries")


@lru_cache(maxsize=None)
def _koszul_kernel(n: int, k: int) -> Subspace:
    """Kernel of [x_1 ... x_n]: R_k^n -> R_{k+1} (source of one-syzygy blocks)."""
    blocks = _multiplication_blocks(n, k)
    r_k, r_k1 = dim_forms(n, k), dim_forms(n, k + 1)
    rows = []
    for i in range(r_k1):
        row = []
        for b in blocks:
            row.extend(b.rows[i])
        rows.append(row)
    return kernel((rows, n * r_k))


def sample_very_few(
    p: TwoStepProfile,
    seed: int,
    coeff_bound: int = DEFAULT_COEFF_BOUND,
    retries: int = DEFAULT_RETRIES,
) -> GradedIdeal:
    """Generic ideal with very few linear syzygies: -s_h Koszul-kernel blocks of n
    degree-k forms each, plus h_k - n(-s_h) further independent forms."""
    if classify(p) != SyzygyRegime.VERY_FEW:
        raise ValueError(f"profile is in regime {classify(p)}, not very-few")
    n, k = p.n, p.k
    m = -p.s_h
    rng = random.Random(seed)
    K = _koszul_kernel(n, k)
    r_k = p.r_k
    for _ in range(retries):
        vectors: list[list[Fraction]] = []
        for _ in range(m):
            tup = random_element(rng, K, coeff_bound)
            for block in range(n):
                vectors.append(tup[block * r_k : (block + 1) * r_k])
        for _ in range(p.h_k - n * m):
            vectors.append([Fraction(c) for c in _rng_vector(rng, r_k, coeff_bound)])
        V = Subspace.from_vectors(r_k, vectors)
        if V.dim != p.h_k:
            continue
        W = mul_by_linear(V, n, k)
        if W.dim == p.h_k1:
            return GradedIdeal(n, k, V, W, short_gens={k: vectors, k + 1: []})
    raise SamplerExhausted(f"very-few sampler failed for {p} after {retries} tries")


def _syzygy_pair_kernel(
    n: int,
    k: int,
    h: int,
    m: int,
    rng: random.Random,
    coeff_bound: int,
    ambient: Subspace | None,
) -> list[list[Fraction]]:
    """Kernel basis of a random maximal-rank matrix of linear forms
    phi: S^h -> R_{k+1}^m, where S is R_k or a prescribed subspace of it
    (nested sampling).  Sparse {-1,0,1} matrix coefficients keep the kernel
    entries moderate; the certified multi-modular kernel does the exact work."""
    from ._modp import kernel_dim_certified

    r_k1 = dim_forms(n, k + 1)
    blocks = _multiplication_blocks(n, k)
    amb_rows = ambient.basis if ambient is not None else None
    width = ambient.dim if ambient is not None else dim_forms(n, k)
    src_dim = h * width
    rows: list[list[Fraction]] = [[Fraction(0)] * src_dim for _ in range(m * r_k1)]
    for t in range(m):
        for i in range(h):
            coeffs = [rng.choice((-1, 0, 1)) for _ in range(n)]
            if not any(coeffs):
                coeffs[rng.randrange(n)] = 1
            # block (t, i) of the big matrix: sum_j a_j * (x_j multiplication)
            col0 = i * width
            for j, a in enumerate(coeffs):
                if not a:
                    continue
                B = blocks[j]
                if amb_rows is None:
                    for rr in range(r_k1):
                        row = rows[t * r_k1 + rr]
                        for cc, x in enumerate(B.rows[rr]):
                            if x:
                                row[col0 + cc] += a * x
                else:
                    for cc, amb in enumerate(amb_rows):
                        img = B.matvec(amb)
                        row_base = t * r_k1
                        for rr, x in enumerate(img):
                            if x:
                                rows[row_base + rr][col0 + cc] += a * x
    from .exactla import _to_int_rows
    from ._modp import saturated_kernel_basis

    int_rows = _to_int_rows(rows)
    sat = saturated_kernel_basis(int_rows, src_dim)
    if sat is not None:
        return _size_reduce(sat)
    _, basis = kernel_dim_certified(int_rows, src_dim, need_basis=True, force_modular=True)
    if basis is None:
        return []
    return _size_reduce(_to_int_rows(basis))


def _size_reduce(vectors: list[list[int]], passes: int = 8) -> list[list[Fraction]]:
    """Cheap pairwise lattice size reduction (no LLL): repeatedly subtract the
    nearest integer multiple of shorter vectors from longer ones."""
    vecs = [list(v) for v in vectors]
    if vecs and len(vecs) * len(vecs) * len(vecs[0]) > 300_000:
        passes = 1

    def norm2(v):
        return sum(x * x for x in v)

    for _ in range(passes):
        changed = False
        norms = [norm2(v) for v in vecs]
        order = sorted(range(len(vecs)), key=lambda i: norms[i])
        for ai in range(len(order)):
            for bi in range(len(order)):
                if ai == bi:
                    continue
                a, b = vecs[order[ai]], vecs[order[bi]]
                na = norms[order[ai]]
                if na == 0:
                    continue
                dot = sum(x * y for x, y in zip(a, b))
                q = (2 * dot + na) // (2 * na) if dot >= 0 else -((-2 * dot + na) // (2 * na))
                if q:
                    nb = [y - q * x for x, y in zip(a, b)]
                    if norm2(nb) < norms[order[bi]]:
                        vecs[order[bi]] = nb
                        norms[order[bi]] = norm2(nb)
                        changed = True
        if not changed:
            break
    return [[Fraction(x) for x in v] for v in vecs]


def _combo(rng: random.Random, basis: list[list[Fraction]], length: int, bound: int) -> list[Fraction]:
    v = [Fraction(0)] * length
    for row in basis:
        c = rng.randint(-bound, bound)
        if c:
            for j, x in enumerate(row):
                if x:
                    v[j] += c * x
    return v


def sample_few(
    p: TwoStepProfile,
    seed: int,
    coeff_bound: int = DEFAULT_COEFF_BOUND,
    retries: int = DEFAULT_RETRIES,
) -> GradedIdeal:
    """Generic ideal with few linear syzygies.

    A random kernel element of a random maximal-rank syzygy matrix supplies
    all h_k generators at once; a saturated-integer kernel basis keeps the
    coefficients small.  Profiles whose generic syzygy morphism is injective
    are refused (no generic construction is known there)."""
    if classify(p) != SyzygyRegime.FEW:
        raise ValueError(f"profile is in regime {classify(p)}, not few")
    n, k = p.n, p.k
    m = -p.s_h
    if p.h_k * p.r_k - m * p.r_k1 <= 0:
        raise ValueError(
            "generic syzygy morphism is injective for this profile; no generic sample"
        )
    rng = random.Random(seed)
    expected = p.h_k * p.r_k - m * p.r_k1
    for _ in range(retries):
        ker = _syzygy_pair_kernel(n, k, p.h_k, m, rng, coeff_bound, None)
        if len(ker) != expected:
            continue
        tup = _combo(rng, ker, p.h_k * p.r_k, 1)
        vectors = [tup[i * p.r_k : (i + 1) * p.r_k] for i in range(p.h_k)]
        V = Subspace.from_vectors(p.r_k, vectors)
        if V.dim != p.h_k:
            continue
        W = mul_by_linear(V, n, k)
        if W.dim == p.h_k1:
            return GradedIdeal(n, k, V, W, short_gens={k: vectors, k + 1: []})
    raise SamplerExhausted(f"few sampler failed for {p} after {retries} tries")


def sample_profile(
    p: TwoStepProfile,
    seed: int,
    coeff_bound: int = DEFAULT_COEFF_BOUND,
    retries: int = DEFAULT_RETRIES,
) -> GradedIdeal:
    """Dispatch to the regime-appropriate generic sampler."""
    regime = classify(p)
    if regime in (SyzygyRegime.NO_SYZYGIES, SyzygyRegime.DEGENERATE_1STEP):
        return sample_no_syz(p, seed, coeff_bound, retries)
    if regime == SyzygyRegime.VERY_FEW:
        return sample_very_few(p, seed, coeff_bound, retries)
    if regime == SyzygyRegime.FEW:
        return sample_few(p, seed, coeff_bound, retries)
    raise ValueError(f"no sampler for regime {regime}")


# ---------------------------------------------------------------------------
# nestings


@dataclass(frozen=True)
class Nesting:
    """Chain I^(1) >= I^(2) >= ... >= I^(r) of graded 2-step ideals."""

    ideals: tuple[GradedIdeal, ...]

    @property
    def r(self) -> int:
        return len(self.ideals)

    @property
    def n(self) -> int:
        return self.ideals[0].n

    def colengths(self) -> tuple[int, ...]:
        return tuple(hilbert_function(I).colength() for I in self.ideals)

    def hilbert_vector(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(hilbert_function(I).values) for I in self.ideals)


def make_nesting(ideals) -> Nesting:
    """Validate degreewise containment I^(i) >= I^(i+1) and wrap."""
    ideals = tuple(ideals)
    if not ideals:
        raise ValueError("empty nesting")
    n = ideals[0].n
    for idx in range(1, len(ideals)):
        big, small = ideals[idx - 1], ideals[idx]
        if small.n != n:
            raise ValueError("mixed ambient rings")
        if small.k < big.k:
            raise ValueError(f"orders must be non-decreasing at position {idx}")
        for d in range(small.k, small.k + 2):
            if not big.piece(d).contains(small.piece(d)):
                raise ValueError(f"containment fails at level {idx} in degree {d}")
    return Nesting(ideals)


def _sample_level_inside(
    p: TwoStepProfile,
    ambient_piece: Subspace,
    rng: random.Random,
    coeff_bound: int,
    retries: int,
) -> GradedIdeal:
    """One nested level: the degree-k piece is drawn inside ambient_piece."""
    n, k = p.n, p.k
    if p.h_k == 0:
        return _sample_degenerate_tail(p, rng, coeff_bound, retries)
    if ambient_piece.dim < p.h_k:
        raise InfeasibleIntersection(f"ambient piece too small for {p}")
    for _ in range(retries):
        if p.s_h >= 0 or p.h_k1 == p.r_k1:
            vectors = [random_element(rng, ambient_piece, coeff_bound) for _ in range(p.h_k)]
            V = Subspace.from_vectors(p.r_k, vectors)
            if V.dim != p.h_k:
                continue
            if p.h_k1 == p.r_k1:
                return GradedIdeal(n, k, V, Subspace.full(p.r_k1), short_gens={k: vectors})
            grown = mul_by_linear(V, n, k)
            if grown.dim != n * p.h_k:
                continue  # keep the natural first anti-diagonal: no linear syzygies
            extra = [
                [Fraction(c) for c in _rng_vector(rng, p.r_k1, coeff_bound)]
                for _ in range(p.s_h)
            ]
            W = grown.sum(Subspace.from_vectors(p.r_k1, extra)) if extra else grown
            if W.dim == p.h_k1:
                return GradedIdeal(n, k, V, W, short_gens={k: vectors, k + 1: extra})
            continue
        if classify(p) != SyzygyRegime.VERY_FEW:
            raise ValueError(f"nested level in regime {classify(p)} is not supported")
        m = -p.s_h
        ker = _syzygy_pair_kernel(n, k, p.h_k, m, rng, coeff_bound, ambient_piece)
        if not ker:
            raise InfeasibleIntersection(
                f"kernel meets the ambient piece trivially for {p}"
            )
        a = ambient_piece.dim
        tup = _combo(rng, ker, p.h_k * a, coeff_bound)
        vectors = []
        for i in range(p.h_k):
            coords = tup[i * a : (i + 1) * a]
            v = [Fraction(0)] * p.r_k
            for c, row in zip(coords, ambient_piece.basis):
                if c:
                    for j, x in enumerate(row):
                        if x:
                            v[j] += c * x
            vectors.append(v)
        V = Subspace.from_vectors(p.r_k, vectors)
        if V.dim != p.h_k:
            continue
        W = mul_by_linear(V, n, k)
        if W.dim == p.h_k1:
            return GradedIdeal(n, k, V, W, short_gens={k: vectors, k + 1: []})
    raise SamplerExhausted(f"nested level sampler failed for {p} after {retries} tries")


def _sample_degenerate_tail(
    p: TwoStepProfile, rng: random.Random, coeff_bound: int, retries: int
) -> GradedIdeal:
    """Level with h_k = 0: realize it at its effective (larger) order."""
    n, k = p.n, p.k
    if p.h_k1 == 0:
        full = Subspace.full(dim_forms(n, k + 2))
        return GradedIdeal(n, k + 2, full, Subspace.full(dim_forms(n, k + 3)))
    eff = TwoStepProfile(n, k + 1, p.h_k1, dim_forms(n, k + 2))
    return sample_no_syz(eff, rng.randrange(2**63), coeff_bound, retries)


def sample_nested(
    np_: NestedProfile,
    seed: int,
    coeff_bound: int = DEFAULT_COEFF_BOUND,
    retries: int = DEFAULT_RETRIES,
) -> Nesting:
    """Generic nesting realizing the profile: each level sampled inside the
    degree-(k+i) piece of the previous one."""
    ideals: list[GradedIdeal] = []
    for i, p in enumerate(np_.profiles):
        rng = random.Random(derive_seed(seed, i))
        if i == 0:
            if p.h_k == 0:
                ideals.append(_sample_degenerate_tail(p, rng, coeff_bound, retries))
            else:
                ideals.append(sample_profile(p, rng.randrange(2**63), coeff_bound, retries))
            continue
        ambient = ideals[-1].piece(p.k)
        ideals.append(_sample_level_inside(p, ambient, rng, coeff_bound, retries))
    nesting = make_nesting(ideals)
    for I, p in zip(nesting.ideals, np_.profiles):
        if I.h(p.k) != p.h_k or I.h(p.k + 1) != p.h_k1:
            raise SamplerExhausted(
                f"level realizes ({I.h(p.k)}, {I.h(p.k + 1)}) instead of ({p.h_k}, {p.h_k1})"
            )
    return nesting


def _substituted_monomial(n: int, m: tuple[int, ...], A) -> dict[tuple[int, ...], Fraction]:
    """Expansion of prod_i (sum_j A[i][j] x_j)^{e_i} as a sparse form."""
    acc: dict[tuple[int, ...], Fraction] = {(0,) * n: Fraction(1)}
    for i, e in enumerate(m):
        for _ in range(e):
            nxt: dict[tuple[int, ...], Fraction] = {}
            for mono, c in acc.items():
                for j, a in enumerate(A[i]):
                    if a:
                        key = tuple(x + (1 if t == j else 0) for t, x in enumerate(mono))
                        nxt[key] = nxt.get(key, Fraction(0)) + c * a
            acc = nxt
    return acc


def apply_linear_change(I: GradedIdeal, A) -> GradedIdeal:
    """Image of the ideal under the substitution x_i -> sum_j A[i][j] x_j."""
    n = I.n
    if Mat([list(map(Fraction, r)) for r in A], n).det() == 0:
        raise ValueError("substitution matrix must be invertible")
    new_pieces = []
    for d in (I.k, I.k + 1):
        src = monomials(n, d)
        tgt = monomial_index(n, d)
        vecs = []
        for row in I.piece(d).basis:
            w = [Fraction(0)] * dim_forms(n, d)
            for pos, c in enumerate(row):
                if c:
                    for mono, cc in _substituted_monomial(n, src[pos], A).items():
                        w[tgt[mono]] += c * cc
            vecs.append(w)
        new_pieces.append(Subspace.from_vectors(dim_forms(n, d), vecs))
    return GradedIdeal(n, I.k, new_pieces[0], new_pieces[1])
