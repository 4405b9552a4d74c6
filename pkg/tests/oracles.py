"""Independent brute-force tangent oracle: one unknown linear map per degree.

Solves the full R-linearity system with unknowns phi_d: I_d -> (R/I)_{d+t}
for every degree k <= d <= k+1-t (I_d = R_d from k+2 on) and constraints
phi_{d+1}(x_j f) = x_j phi_d(f) on a basis of each I_d.  Deliberately naive;
small instances only.
"""

from fractions import Fraction

from twostep.combinat import dim_forms, monomial_index, monomials
from twostep.exactla import kernel


def _piece_basis(I, d):
    piece = I.piece(d)
    return [list(r) for r in piece.basis]


def _quotient_free(I, d):
    piece = I.piece(d)
    pivset = set(piece.pivots)
    return [j for j in range(dim_forms(I.n, d)) if j not in pivset]


def _reduce(I, d, vec):
    piece = I.piece(d)
    w = piece.reduce(vec) if piece.dim else list(vec)
    return [Fraction(w[j]) for j in _quotient_free(I, d)]


def hom_dim_oracle(I, t: int) -> int:
    n, k = I.n, I.k
    degrees = list(range(k, max(k, k + 1 - t) + 1))
    # unknown phi_d is a (q_{d+t} x h_d) matrix, column-major blocks per degree
    offsets = {}
    total = 0
    for d in degrees:
        h_d = I.h(d)
        q_dt = len(_quotient_free(I, d + t)) if d + t >= 0 else 0
        offsets[d] = (total, h_d, q_dt)
        total += h_d * q_dt
    rows = []
    for d in degrees:
        off_d, h_d, q_dt = offsets[d]
        if d + 1 not in offsets:
            continue
        off_d1, h_d1, q_d1t = offsets[d + 1]
        basis_d = _piece_basis(I, d)
        basis_d1 = _piece_basis(I, d + 1)
        if h_d == 0 or q_d1t == 0:
            continue
        src_mons = monomials(n, d)
        tgt_idx = monomial_index(n, d + 1)
        piv1 = I.piece(d + 1).pivots
        for f_idx, f in enumerate(basis_d):
            for j in range(n):
                # x_j * f inside I_{d+1}: coefficients over basis_d1
                w = [Fraction(0)] * dim_forms(n, d + 1)
                for pos, c in enumerate(f):
                    if c:
                        e = list(src_mons[pos])
                        e[j] += 1
                        w[tgt_idx[tuple(e)]] += c
                # the basis is RREF: coefficients are the pivot coordinates
                coeffs = [w[p] for p in piv1]
                check = list(w)
                for cidx, cf in enumerate(coeffs):
                    if cf:
                        row1 = basis_d1[cidx]
                        for pos2, val in enumerate(row1):
                            if val:
                                check[pos2] -= cf * val
                assert not any(check), "ideal not closed under multiplication"
                # row block: phi_{d+1}(x_j f) - x_j phi_d(f) = 0 in (R/I)_{d+1+t}
                block = [[Fraction(0)] * total for _ in range(q_d1t)]
                for g_idx, c in enumerate(coeffs):
                    if c:
                        for r in range(q_d1t):
                            block[r][off_d1 + g_idx * q_d1t + r] += c
                # x_j phi_d(f): multiply each quotient basis monomial of (R/I)_{d+t}
                if q_dt:
                    free_cols = _quotient_free(I, d + t)
                    dmons = monomials(n, d + t)
                    tgt2 = monomial_index(n, d + t + 1)
                    for col_pos, mono_col in enumerate(free_cols):
                        e = list(dmons[mono_col])
                        e[j] += 1
                        w2 = [Fraction(0)] * dim_forms(n, d + t + 1)
                        w2[tgt2[tuple(e)]] = Fraction(1)
                        red = _reduce(I, d + t + 1, w2)
                        for r in range(q_d1t):
                            if red[r]:
                                block[r][off_d + f_idx * q_dt + col_pos] -= red[r]
                rows.extend(block)
    if total == 0:
        return 0
    if not rows:
        return total
    return kernel((rows, total)).dim
