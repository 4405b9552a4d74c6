"""The quadratic landscape: Delta and Theta evaluation, Hessian analysis,
rational critical points, and the potential TNT area."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .combinat import (
    HilbertFunction,
    binomial,
    dim_forms,
    ek_betti,
    lex_ideal,
    macaulay_growth,
)
from .exactla import Mat, solve_exact


def delta(n: int, r: int, k: int, point) -> Fraction:
    """Expected excess of the nested Hilbert stratum over the smoothable dimension.

    Coordinates: (h_k^(0), h_{k+1}^(0), ..., h_{k+r-1}^(r-1), h_{k+r}^(r-1)).
    """
    x = [Fraction(c) for c in point]
    if len(x) != 2 * r:
        raise ValueError(f"need {2 * r} coordinates, got {len(x)}")
    total = x[0] * (dim_forms(n, k) - x[0])
    for i in range(1, r):
        total += x[2 * i] * (x[2 * i - 1] - x[2 * i])
    for i in range(r):
        total += (x[2 * i + 1] - (n - 1) * x[2 * i]) * (
            dim_forms(n, k + i + 1) - x[2 * i + 1]
        )
    total += n - n * (binomial(k + r + n, n) - x[2 * r - 2] - x[2 * r - 1])
    return total


def theta(n: int, k: int, b: int, h_k, h_k1) -> Fraction:
    """Non-positivity of Theta (for some admissible b) defines the potential TNT area."""
    if b < 0:
        raise ValueError("b must be non-negative")
    h, h1 = Fraction(h_k), Fraction(h_k1)
    s = h1 - n * h
    t = dim_forms(n, k + 2) - n * h1 + binomial(n, 2) * h
    return (
        h * dim_forms(n, k - 1)
        + s * (dim_forms(n, k) - h)
        + (t - b) * (dim_forms(n, k + 1) - h1)
        - n
    )


def hessian(n: int, r: int) -> Mat:
    """Tridiagonal Hessian of Delta: diagonal -2, off-diagonals n-1, 1, n-1, ..."""
    m = 2 * r
    rows = [[0] * m for _ in range(m)]
    for i in range(m):
        rows[i][i] = -2
    for i in range(m - 1):
        off = n - 1 if i % 2 == 0 else 1
        rows[i][i + 1] = off
        rows[i + 1][i] = off
    return Mat(rows, m)


def continuant_det(n: int, r: int) -> int:
    """det(hessian(n, r)) via the continuant recurrence; returns f_{2r}."""
    if r < 1:
        raise ValueError("need r >= 1")
    return leading_minors(n, r)[2 * r - 1]


def leading_minors(n: int, r: int) -> list[int]:
    """The continuant sequence f_1..f_{2r} (leading principal minors of the Hessian)."""
    fs = [-2, 4 - (n - 1) ** 2]
    for i in range(3, 2 * r + 1):
        if i % 2 == 1:
            fs.append(-2 * fs[-1] - fs[-2])
        else:
            fs.append(-2 * fs[-1] - (n - 1) ** 2 * fs[-2])
    return fs


def delta_gradient_at_zero(n: int, r: int, k: int) -> list[Fraction]:
    """Exact gradient of Delta at 0, from unit finite differences (Delta is quadratic)."""
    m = 2 * r
    H = hessian(n, r)
    zero = [0] * m
    f0 = delta(n, r, k, zero)
    g = []
    for i in range(m):
        e = zero.copy()
        e[i] = 1
        g.append(delta(n, r, k, e) - f0 - Fraction(H.rows[i][i], 2))
    return g


@dataclass(frozen=True)
class CriticalReport:
    n: int
    r: int
    k: int
    point: tuple[Fraction, ...] | None
    value: Fraction | None
    hessian_det: int
    nature: str

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "k": self.k,
            "point": None if self.point is None else [str(c) for c in self.point],
            "value": None if self.value is None else str(self.value),
            "hessian_det": self.hessian_det,
            "nature": self.nature,
        }


def critical_point(n: int, r: int, k: int) -> CriticalReport:
    """Unique rational critical point of Delta with its exact value and nature.

    Nature comes from the signs of the leading principal minors (never from
    irrational eigenvalues): alternating from negative means negative definite
    (max), all positive means positive definite (min), anything else with a
    non-zero determinant is a saddle.
    """
    det = continuant_det(n, r)
    if det == 0:
        return CriticalReport(n, r, k, None, None, 0, "degenerate")
    H = hessian(n, r)
    g = delta_gradient_at_zero(n, r, k)
    x = solve_exact(H, [-gi for gi in g])
    assert x is not None
    value = delta(n, r, k, x)
    fs = leading_minors(n, r)
    if all((fi > 0) == (i % 2 == 1) and fi != 0 for i, fi in enumerate(fs)):
        nature = "max"
    elif all(fi > 0 for fi in fs):
        nature = "min"
    else:
        nature = "saddle"
    return CriticalReport(n, r, k, tuple(x), value, det, nature)


def tnt_b_bound(n: int, k: int, h_k: int, h_k1: int) -> int:
    """Largest admissible b: beta_{2,k+2} of the lex ideal of the pair."""
    vals = [0] * k + [h_k, h_k1]
    L = lex_ideal(n, HilbertFunction(n, vals, "ideal"))
    return ek_betti(L, 2, k + 2)


def potential_tnt_area(n: int, k: int, threads: int = 1) -> list[tuple[int, int]]:
    """Macaulay-admissible pairs where Theta_{n,k,b} <= 0 for some admissible b.

    Theta is non-increasing in b, so the largest admissible b is tested first
    and decides membership.
    """
    if n < 2 or k < 1:
        raise ValueError("need n >= 2 and k >= 1")
    r_k = dim_forms(n, k)
    r_k1 = dim_forms(n, k + 1)

    def column(h: int) -> list[tuple[int, int]]:
        out = []
        lo = macaulay_growth(n, k, h)
        for h1 in range(lo, r_k1 + 1):
            # theta is non-increasing in b, so the largest admissible b decides
            b = tnt_b_bound(n, k, h, h1)
            if theta(n, k, b, h, h1) <= 0:
                out.append((h, h1))
        return out

    cols = range(r_k + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(column, cols))
    else:
        results = [column(h) for h in cols]
    merged: list[tuple[int, int]] = []
    for res in results:
        merged.extend(res)
    return sorted(merged)
