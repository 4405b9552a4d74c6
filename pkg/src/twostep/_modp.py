"""Certified fast kernels for large or dense integer matrices.

Strategy: modular elimination (numpy, int64, a fixed deterministic list of
31-bit primes) discovers the pivot structure; every conclusion is then
certified exactly over Z/Q:

* rank over Q is at least the rank mod any prime, so a full-row-rank or
  full-column-rank modular image certifies the kernel dimension outright;
* otherwise candidate kernel vectors are reconstructed from the CRT of the
  modular RREFs by rational reconstruction and verified exactly (A v == 0
  over Z); ncols - r verified vectors in free-column-identity form certify
  rank <= r.

Unlucky primes can only lower the modular rank or shift pivots right, which
the verification step detects; the routine escalates with more primes and
finally falls back to exact fraction-free elimination.  No floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

import numpy as np

from . import exactla


def _is_prime(x: int) -> bool:
    if x < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if x % p == 0:
            return x == p
    d, s = x - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        y = pow(a, d, x)
        if y in (1, x - 1):
            continue
        for _ in range(s - 1):
            y = y * y % x
            if y == x - 1:
                break
        else:
            return False
    return True


def _prime_list(count: int) -> tuple[int, ...]:
    out = []
    x = 2**31 - 1
    while len(out) < count:
        if _is_prime(x):
            out.append(x)
        x -= 2
    return tuple(out)


PRIMES = _prime_list(96)

# Reconstruction is attempted once the CRT modulus reaches these prime counts.
_ATTEMPT_AT = (1, 2, 3, 4, 6, 8, 11, 15, 20, 27, 36, 48, 64, 80, 96)

# Below this many cells plain exact elimination is fast enough for the
# structured, small-entry systems this package produces.
EXACT_CELL_LIMIT = 6_000

# Entries longer than this (bits) push even small systems to the modular path.
_BIG_ENTRY_BITS = 96
_BIG_ENTRY_CELLS = 1_500


def _rref_modp(rows: list[list[int]], ncols: int, p: int):
    """Reduced row echelon form mod p.  Returns (rank, pivot cols, R as numpy)."""
    if not rows:
        return 0, [], np.zeros((0, ncols), dtype=np.int64)
    A = np.array([[x % p for x in r] for r in rows], dtype=np.int64)
    m = len(rows)
    rank = 0
    pivots = []
    for col in range(ncols):
        nz = np.nonzero(A[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            A[[rank, piv]] = A[[piv, rank]]
        inv = pow(int(A[rank, col]), p - 2, p)
        A[rank] = (A[rank] * inv) % p
        idx = np.nonzero(A[rank + 1 :, col])[0]
        if idx.size:
            tgt = rank + 1 + idx
            A[tgt] = (A[tgt] - np.outer(A[tgt, col], A[rank])) % p
        pivots.append(col)
        rank += 1
        if rank == m:
            break
    for kk in range(rank - 1, -1, -1):
        col = pivots[kk]
        idx = np.nonzero(A[:kk, col])[0]
        if idx.size:
            A[idx] = (A[idx] - np.outer(A[idx, col], A[kk])) % p
    return rank, pivots, A[:rank]


def _rational_reconstruct(u: int, m: int):
    """p/q with p = u*q mod m and |p|, q <= sqrt(m/2), or None."""
    bound = isqrt(m // 2)
    r0, r1 = m, u % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def _verify_kernel_vector(rows: list[list[int]], vec: list[int]) -> bool:
    for r in rows:
        if sum(a * b for a, b in zip(r, vec) if a):
            return False
    return True


class _CrtState:
    """Incremental CRT of modular RREFs sharing one pivot pattern."""

    __slots__ = ("pivots", "free", "crt", "modulus")

    def __init__(self, pivots: list[int], ncols: int):
        self.pivots = pivots
        pivset = set(pivots)
        self.free = [j for j in range(ncols) if j not in pivset]
        self.crt: list[list[int]] = [[0] * len(self.free) for _ in pivots]
        self.modulus = 1

    def absorb(self, R: np.ndarray, p: int):
        free = self.free
        if self.modulus == 1:
            self.crt = [[int(R[i, f]) for f in free] for i in range(len(self.pivots))]
        else:
            inv = pow(self.modulus, -1, p)
            m = self.modulus
            for i in range(len(self.pivots)):
                Ri = R[i]
                ci = self.crt[i]
                for jj, f in enumerate(free):
                    t = ((int(Ri[f]) - ci[jj]) * inv) % p
                    ci[jj] = ci[jj] + m * t
        self.modulus *= p

    def reconstruct(self, rows: list[list[int]], ncols: int):
        """Verified exact kernel basis in free-column-identity form, or None."""
        if not self.free:
            return []
        basis = []
        for jj, f in enumerate(self.free):
            vals: dict[int, Fraction] = {}
            for i, pc in enumerate(self.pivots):
                u = self.crt[i][jj]
                if u == 0:
                    continue
                rec = _rational_reconstruct(u, self.modulus)
                if rec is None:
                    return None
                vals[pc] = -rec
            den = 1
            for x in vals.values():
                den = den * x.denominator // gcd(den, x.denominator)
            vec = [0] * ncols
            vec[f] = den
            for pc, x in vals.items():
                vec[pc] = int(x * den)
            if not _verify_kernel_vector(rows, vec):
                return None
            basis.append([Fraction(v, den) for v in vec])
        return basis


def kernel_dim_certified(
    rows: list[list[int]],
    ncols: int,
    need_basis: bool = False,
    force_modular: bool = False,
    known_kernel: list[list[int]] | None = None,
    known_left: list[list[int]] | None = None,
    left_provider=None,
):
    """Exact kernel dimension of an integer matrix, certified.

    Returns (dim, basis); basis is a list of Fraction vectors in
    free-column-identity form, or None when only the dimension was certified
    (full-row-rank / left-kernel / known-kernel shortcuts with need_basis left
    False).

    known_kernel: optional exact kernel vectors already in hand (they are
    re-verified here); when the modular rank meets their span the dimension is
    certified without any lifting.  known_left: optional left-kernel vectors
    (aligned to the input rows, before zero-row filtering); a verified span of
    L of them certifies rank <= nrows - L.  left_provider: lazy variant of
    known_left, only invoked once the cheap certificates have failed.
    """
    keep = [i for i, r in enumerate(rows) if any(r)]
    dropped = len(keep) != len(rows)
    if known_left and dropped:
        known_left = [[v[i] for i in keep] for v in known_left]
    rows = [rows[i] for i in keep]
    nrows = len(rows)
    if ncols == 0:
        return 0, []
    if nrows == 0:
        sub = exactla.Subspace.full(ncols)
        return ncols, [list(r) for r in sub.basis]
    known_rank = 0
    if known_kernel and not need_basis:
        verified = [v for v in known_kernel if _verify_kernel_vector(rows, v)]
        if verified:
            known_rank = exactla.rank(verified, ncols)
    def _left_rank_of(cands):
        if not cands:
            return 0
        cols_view = list(zip(*rows))
        good = []
        for v in cands:
            if all(sum(a * b for a, b in zip(col, v) if b) == 0 for col in cols_view):
                good.append(list(v))
        return exactla.rank(good, nrows) if good else 0

    left_rank = _left_rank_of(known_left) if (known_left and not need_basis) else 0
    left_tried = left_provider is None
    cells = nrows * ncols
    use_exact = not force_modular and cells <= EXACT_CELL_LIMIT
    if use_exact and cells > _BIG_ENTRY_CELLS:
        if any(abs(x).bit_length() > _BIG_ENTRY_BITS for r in rows for x in r):
            use_exact = False
    if use_exact:
        sub = exactla.kernel((rows, ncols))
        return sub.dim, [list(r) for r in sub.basis]

    cols_t: list[list[int]] | None = None
    best_rank = -1
    state: _CrtState | None = None
    state_t: _CrtState | None = None
    for count, p in enumerate(PRIMES, start=1):
        r, pivots, R = _rref_modp(rows, ncols, p)
        if r > best_rank or (state is not None and r == best_rank and pivots < state.pivots):
            best_rank = r
            state = _CrtState(pivots, ncols)
            state_t = None
        if (r == nrows or r == ncols) and not need_basis:
            # rank_Q >= rank_p meets the unconditional bound rank_Q <= min side
            return ncols - r, ([] if r == ncols else None)
        if known_rank and ncols - r == known_rank:
            # modular upper bound meets the verified explicit kernel vectors
            return known_rank, None
        if left_rank and r == nrows - left_rank:
            # modular lower bound meets the verified left-kernel certificates
            return ncols - r, None
        if not left_tried and not need_basis and count >= 2:
            left_tried = True
            cands = left_provider() or []
            if dropped:
                cands = [[v[i] for i in keep] for v in cands]
            left_rank = max(left_rank, _left_rank_of(cands))
            if left_rank and best_rank == nrows - left_rank:
                return ncols - best_rank, None
        use_left = (not need_basis) and (nrows - best_rank) < (ncols - best_rank)
        if use_left:
            # Few redundant rows: certify rank <= r via exact left-kernel vectors.
            if cols_t is None:
                cols_t = [list(col) for col in zip(*rows)]
            rt, pivots_t, Rt = _rref_modp(cols_t, nrows, p)
            if rt != best_rank:
                continue
            if state_t is None or pivots_t < state_t.pivots:
                state_t = _CrtState(pivots_t, nrows)
            if pivots_t == state_t.pivots:
                state_t.absorb(Rt, p)
            if count in _ATTEMPT_AT and state_t.reconstruct(cols_t, nrows) is not None:
                return ncols - best_rank, None
        else:
            if pivots == state.pivots:
                state.absorb(R, p)
            if count in _ATTEMPT_AT:
                basis = state.reconstruct(rows, ncols)
                if basis is not None:
                    return len(basis), basis
    sub = exactla.kernel((rows, ncols))
    return sub.dim, [list(r) for r in sub.basis]


def rank_certified(rows: list[list[int]], ncols: int) -> int:
    dim, _ = kernel_dim_certified(rows, ncols)
    return ncols - dim


def rank_lower_bound(rows: list[list[int]], ncols: int, tries: int = 3) -> int:
    """Best modular rank over a few primes: a certified lower bound for rank_Q."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    best = 0
    for p in PRIMES[:tries]:
        r, _, _ = _rref_modp(rows, ncols, p)
        best = max(best, r)
        if best == min(len(rows), ncols):
            break
    return best


def select_spanning_rows(base_rows, pool_rows, ncols: int, p: int | None = None):
    """Indices S into pool_rows with span(base + pool[S]) = span(base + pool).

    Pivot selection runs mod p; the selection certainly spans whenever the
    certified dimensions of the two spans agree, which the caller checks via
    rank_certified when the count matters.
    """
    p = p or PRIMES[0]
    all_rows = list(base_rows) + list(pool_rows)
    if not all_rows:
        return []
    A = np.array([[int(x) % p for x in r] for r in all_rows], dtype=np.int64)
    m = len(all_rows)
    order = list(range(m))
    rank = 0
    chosen = []
    for col in range(ncols):
        nz = np.nonzero(A[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            A[[rank, piv]] = A[[piv, rank]]
            order[rank], order[piv] = order[piv], order[rank]
        if order[rank] >= len(base_rows):
            chosen.append(order[rank] - len(base_rows))
        inv = pow(int(A[rank, col]), p - 2, p)
        A[rank] = (A[rank] * inv) % p
        idx = np.nonzero(A[rank + 1 :, col])[0]
        if idx.size:
            tgt = rank + 1 + idx
            A[tgt] = (A[tgt] - np.outer(A[tgt, col], A[rank])) % p
        rank += 1
        if rank == m:
            break
    return sorted(chosen)


def saturated_kernel_basis(rows: list[list[int]], ncols: int, bit_guard: int = 4096):
    """Basis of ker(A) intersected with Z^ncols, by unimodular column elimination.

    Returns integer vectors spanning the saturated kernel lattice (good for
    finding small kernel elements), or None if entries blow past the guard.
    The result is verified exactly (A v == 0) before returning.
    """
    nrows = len(rows)
    cols = [[rows[r][c] for r in range(nrows)] for c in range(ncols)]
    U = [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]

    def iround(a: int, b: int) -> int:
        q, rem = divmod(a, b)
        if 2 * abs(rem) > abs(b):
            q += 1
        return q

    lead = 0
    for r in range(nrows):
        while True:
            nz = [c for c in range(lead, ncols) if cols[c][r]]
            if not nz:
                break
            piv = min(nz, key=lambda c: abs(cols[c][r]))
            pval = cols[piv][r]
            done = True
            for c in nz:
                if c == piv:
                    continue
                q = iround(cols[c][r], pval)
                if q:
                    cc, cp = cols[c], cols[piv]
                    for i in range(r, nrows):
                        cc[i] -= q * cp[i]
                    uc, up = U[c], U[piv]
                    for i in range(ncols):
                        uc[i] -= q * up[i]
                if cols[c][r]:
                    done = False
            if done:
                cols[lead], cols[piv] = cols[piv], cols[lead]
                U[lead], U[piv] = U[piv], U[lead]
                lead += 1
                break
            if max(abs(cols[c][r]) for c in nz).bit_length() > bit_guard:
                return None
        if lead == ncols:
            break
    kernel = [U[c] for c in range(lead, ncols)]
    for v in kernel:
        if not _verify_kernel_vector(rows, v):
            return None
    return kernel
