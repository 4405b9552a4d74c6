"""Lattice search over the admissible nested domain: certificates with
non-negative excess, and minimal colength sequences."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

from .combinat import dim_forms, macaulay_growth
from .landscape import CriticalReport, critical_point, delta
from .profiles import (
    NestedProfile,
    SyzygyRegime,
    TwoStepProfile,
    classify,
    smoothable_dim,
    stratum_dim_bound,
)

DEFAULT_SHELL_CAP = 6


@dataclass(frozen=True)
class Domain:
    """Integer points of the nested admissible region for (n, r, k).

    Coordinates (h_k^(0), h_{k+1}^(0), ..., h_{k+r-1}^(r-1), h_{k+r}^(r-1));
    optional box clamps restrict each coordinate (used for chunked and
    shell-wise enumeration).
    """

    n: int
    r: int
    k: int
    lo: tuple | None = None
    hi: tuple | None = None

    def clamp(self, lo, hi) -> "Domain":
        return Domain(self.n, self.r, self.k, tuple(lo), tuple(hi))

    def _bounds(self, idx: int, prefix: tuple[int, ...]) -> tuple[int, int]:
        """Inclusive bounds for coordinate idx given the previous coordinates."""
        n, k = self.n, self.k
        level, which = divmod(idx, 2)
        if which == 0:
            lo = 0
            hi = dim_forms(n, k + level)
            if level > 0:
                hi = min(hi, prefix[2 * level - 1])
        else:
            h = prefix[2 * level]
            r_up = dim_forms(n, k + level + 1)
            bound = Fraction(n * n - 1, n) * h
            if level > 0:
                prev = prefix[2 * level - 1]
                bound = max(bound, (n - Fraction(prev, r_up)) * h)
            lo = max(ceil(bound), macaulay_growth(n, k + level, h))
            hi = r_up
        if self.lo is not None:
            lo = max(lo, self.lo[idx])
        if self.hi is not None:
            hi = min(hi, self.hi[idx])
        return lo, hi

    def __contains__(self, point) -> bool:
        pt = tuple(point)
        if len(pt) != 2 * self.r:
            return False
        for idx in range(2 * self.r):
            lo, hi = self._bounds(idx, pt[:idx])
            if not lo <= pt[idx] <= hi:
                return False
        return True

    def __iter__(self):
        return self.enumerate()

    def enumerate(self, prefix: tuple[int, ...] = ()):
        """All integer points, lexicographically ascending, DFS with pruning."""
        idx = len(prefix)
        if idx == 2 * self.r:
            yield prefix
            return
        lo, hi = self._bounds(idx, prefix)
        for v in range(lo, hi + 1):
            yield from self.enumerate(prefix + (v,))


def enumerate_domain(dom: Domain):
    """Stream of lattice points of the domain (admissibility enforced per level)."""
    yield from dom.enumerate()


@dataclass(frozen=True)
class Certificate:
    """A lattice point whose stratum meets or exceeds the smoothable dimension."""

    n: int
    r: int
    k: int
    point: tuple
    delta_value: Fraction
    dim_bound: int
    colengths: tuple
    regimes: tuple

    def __post_init__(self):
        assert self.delta_value >= 0
        assert self.dim_bound + self.n >= smoothable_dim(self.n, self.colengths[-1])

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "k": self.k,
            "point": list(self.point),
            "delta": str(self.delta_value),
            "dim_bound": self.dim_bound,
            "colengths": list(self.colengths),
            "regimes": [str(x) for x in self.regimes],
        }

    def csv_row(self) -> list[str]:
        return [
            str(self.n),
            str(self.r),
            str(self.k),
            " ".join(map(str, self.point)),
            str(self.delta_value),
            str(self.dim_bound),
            " ".join(map(str, self.colengths)),
        ]


CSV_COLUMNS = ["n", "r", "k", "point", "delta", "dim_bound", "colengths"]


def certificate_at(n: int, r: int, k: int, point) -> Certificate | None:
    """Certificate for the point, or None when the excess is negative."""
    value = delta(n, r, k, point)
    if value < 0:
        return None
    np_ = NestedProfile.from_lattice_point(n, k, point)
    return Certificate(
        n,
        r,
        k,
        tuple(point),
        value,
        stratum_dim_bound(np_),
        np_.colengths,
        tuple(classify(p) for p in np_.profiles),
    )


def _sort_key(c: Certificate):
    return (tuple(reversed(c.colengths)), c.point)


@dataclass(frozen=True)
class SearchResult:
    certificates: tuple
    strategy: str
    region: str
    cap_bound: bool = False


class _ConcavePruner:
    """Exact prefix upper bounds for a concave excess form (negative-definite
    Hessian: always the case for n = 2).

    For a fixed prefix p of length m the unconstrained maximum over the free
    coordinates is c(p) - (q0 + 2*delta*q1 + delta^2*q2)/2 where delta =
    H[m][m-1] * p[m-1]; the q's only involve the fixed trailing block of the
    tridiagonal Hessian and are precomputed per m."""

    def __init__(self, n: int, r: int, k: int):
        from .exactla import Mat, solve_exact
        from .landscape import delta_gradient_at_zero, hessian, leading_minors

        m = 2 * r
        self.H = [[Fraction(x) for x in row] for row in hessian(n, r).rows]
        self.g = delta_gradient_at_zero(n, r, k)
        self.c0 = delta(n, r, k, [0] * m)
        fs = leading_minors(n, r)
        self.negative_definite = all(
            fi != 0 and (fi > 0) == (i % 2 == 1) for i, fi in enumerate(fs)
        )
        self.q: list[tuple[Fraction, Fraction, Fraction]] = []
        if not self.negative_definite:
            return
        for start in range(m):
            block = [row[start:] for row in self.H[start:]]
            gf = self.g[start:]
            f = m - start
            cols = []
            for j in range(f):
                e = [Fraction(0)] * f
                e[j] = Fraction(1)
                cols.append(solve_exact(Mat(block, f), e))
            hinv_g = [sum(cols[j][i] * gf[j] for j in range(f)) for i in range(f)]
            q0 = sum(gf[i] * hinv_g[i] for i in range(f))
            q1 = hinv_g[0]
            q2 = cols[0][0]
            self.q.append((q0, q1, q2))

    def upper_bound(self, prefix, c_val) -> Fraction:
        """Max of the form over real completions of the prefix."""
        m = len(prefix)
        if m == len(self.H):
            return c_val
        q0, q1, q2 = self.q[m]
        delta_shift = self.H[m][m - 1] * prefix[m - 1] if m else Fraction(0)
        return c_val - (q0 + 2 * delta_shift * q1 + delta_shift * delta_shift * q2) / 2

    def extend_value(self, prefix, c_val, x) -> Fraction:
        """Value bookkeeping: c(prefix + (x,)) from c(prefix), incremental."""
        m = len(prefix)
        out = c_val + self.g[m] * x + self.H[m][m] * x * x / 2
        if m:
            out += self.H[m][m - 1] * prefix[m - 1] * x
        return out


def _collect(dom: Domain, threads: int = 1) -> list[Certificate]:
    n, r, k = dom.n, dom.r, dom.k
    pruner = _ConcavePruner(n, r, k)

    def walk(prefix, c_val, out):
        idx = len(prefix)
        if idx == 2 * r:
            if c_val >= 0:
                cert = certificate_at(n, r, k, prefix)
                assert cert is not None and cert.delta_value == c_val
                out.append(cert)
            return
        lo, hi = dom._bounds(idx, prefix)
        for v in range(lo, hi + 1):
            nxt = prefix + (v,)
            c_nxt = pruner.extend_value(prefix, c_val, v)
            if pruner.negative_definite and pruner.upper_bound(nxt, c_nxt) < 0:
                continue
            walk(nxt, c_nxt, out)

    def chunk(first: int) -> list[Certificate]:
        out: list[Certificate] = []
        c1 = pruner.extend_value((), pruner.c0, first)
        if not pruner.negative_definite or pruner.upper_bound((first,), c1) >= 0:
            walk((first,), c1, out)
        return out

    lo, hi = dom._bounds(0, ())
    firsts = range(lo, hi + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            chunks = list(ex.map(chunk, firsts))
    else:
        chunks = [chunk(f) for f in firsts]
    certs: list[Certificate] = []
    for ch in chunks:
        certs.extend(ch)
    certs.sort(key=_sort_key)
    return certs


def find_certificates(
    n: int,
    r: int,
    k: int,
    strategy: str = "exhaustive",
    shell_cap: int = DEFAULT_SHELL_CAP,
    threads: int = 1,
) -> SearchResult:
    """Certificates with non-negative excess.

    exhaustive: every point of the admissible domain.
    hypercube: unit cell around the critical point, grown by unit shells while
    new certificates appear (cap reported when it binds)."""
    dom = Domain(n, r, k)
    if strategy == "exhaustive":
        return SearchResult(tuple(_collect(dom, threads)), strategy, "full domain")
    if strategy != "hypercube":
        raise ValueError(f"unknown strategy {strategy!r}")
    crit: CriticalReport = critical_point(n, r, k)
    if crit.point is None:
        raise ValueError(
            "degenerate critical point (n=3, r=1): use the exhaustive strategy"
        )
    base_lo = [floor(c) for c in crit.point]
    base_hi = [floor(c) + 1 for c in crit.point]
    found: dict[tuple, Certificate] = {}
    cap_bound = False
    last_region = ""
    shell = 0
    while True:
        lo = [b - shell for b in base_lo]
        hi = [b + shell for b in base_hi]
        last_region = f"box {lo}..{hi}"
        certs = _collect(dom.clamp(lo, hi), threads)
        new = [c for c in certs if c.point not in found]
        for c in new:
            found[c.point] = c
        if shell > 0 and not new:
            break
        if shell == shell_cap:
            cap_bound = bool(new)
            break
        shell += 1
    out = sorted(found.values(), key=_sort_key)
    return SearchResult(tuple(out), "hypercube", last_region, cap_bound)


def seq_compare(d, e) -> int:
    """Lexicographic comparison from the last entry: -1, 0 or 1."""
    d, e = tuple(d), tuple(e)
    if len(d) != len(e):
        raise ValueError("sequences must have equal length")
    for a, b in zip(reversed(d), reversed(e)):
        if a != b:
            return -1 if a < b else 1
    return 0


def dominates(d, e) -> bool:
    """e is reachable from d by suffix-increment covering moves (d != e)."""
    d, e = tuple(d), tuple(e)
    if len(d) != len(e) or d == e:
        return False
    diff = [b - a for a, b in zip(d, e)]
    if any(x < 0 for x in diff):
        return False
    return all(diff[i] <= diff[i + 1] for i in range(len(diff) - 1))


def minimal_sequences(certs) -> list[Certificate]:
    """Certificates whose colength sequence no other retained one reaches."""
    certs = list(certs)
    if not certs:
        return []
    keyed = {(c.n, c.r) for c in certs}
    if len(keyed) != 1:
        raise ValueError("minimal_sequences needs certificates sharing (n, r)")
    seqs = {c.colengths for c in certs}
    out = [
        c
        for c in certs
        if not any(dominates(other, c.colengths) for other in seqs if other != c.colengths)
    ]
    return sorted(out, key=_sort_key)


def _insertion_descendants(d: tuple, target_len: int, limit: tuple):
    """Pure-insertion descendants of d up to target_len, bounded by limit."""
    if len(d) == target_len:
        yield d
        return
    for i in range(len(d)):
        ins = d[:i + 1] + (d[i] + 1,) + d[i + 1 :]
        if all(a <= b for a, b in zip(sorted(ins), sorted(limit))):
            yield from _insertion_descendants(ins, target_len, limit)


def reachable(d, e) -> bool:
    """e is reachable from d by covering moves (suffix increments and
    insertions of d_i + 1); insertions commute to the front."""
    d, e = tuple(d), tuple(e)
    if len(e) < len(d):
        return False
    if len(e) == len(d):
        return d == e or dominates(d, e)
    seen = set()
    for f in _insertion_descendants(d, len(e), e):
        if f in seen:
            continue
        seen.add(f)
        if f == e or dominates(f, e):
            return True
    return False


def cross_r_minimal(certs) -> list[Certificate]:
    """Cross-length filtering: drop certificates reachable from a shorter
    (or equal-length) retained sequence."""
    certs = sorted(certs, key=lambda c: (c.r,) + _sort_key(c))
    out: list[Certificate] = []
    for c in certs:
        if not any(reachable(o.colengths, c.colengths) for o in out):
            out.append(c)
    return out


def certificates_to_jsonl(certs) -> str:
    return "\n".join(json.dumps(c.to_json_dict(), sort_keys=True) for c in certs)
