"""2-step Hilbert-function calculus: profiles, invariants, regimes, dimension bounds."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .combinat import (
    HilbertFunction,
    binomial,
    dim_forms,
    ek_betti,
    lex_ideal,
    macaulay_growth,
)


class SyzygyRegime(enum.Enum):
    DEGENERATE_1STEP = "1-step"
    NO_SYZYGIES = "no syz"
    VERY_FEW = "very few"
    FEW = "few"
    LOTS = "lots"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TwoStepProfile:
    """The pair (h_k, h_{k+1}) of a 2-step Hilbert function of order k in n variables."""

    n: int
    k: int
    h_k: int
    h_k1: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need n >= 2")
        if self.k < 1:
            raise ValueError("order k must be positive")
        if not 0 <= self.h_k <= self.r_k:
            raise ValueError(f"h_k={self.h_k} out of range [0, {self.r_k}]")
        lo = macaulay_growth(self.n, self.k, self.h_k)
        if not lo <= self.h_k1 <= self.r_k1:
            raise ValueError(
                f"h_k1={self.h_k1} violates Macaulay bounds [{lo}, {self.r_k1}]"
            )

    @property
    def r_k(self) -> int:
        return dim_forms(self.n, self.k)

    @property
    def r_k1(self) -> int:
        return dim_forms(self.n, self.k + 1)

    @property
    def q_k(self) -> int:
        return self.r_k - self.h_k

    @property
    def q_k1(self) -> int:
        return self.r_k1 - self.h_k1

    @property
    def s_h(self) -> int:
        return self.h_k1 - self.n * self.h_k

    @property
    def t_h(self) -> int:
        return (
            dim_forms(self.n, self.k + 2)
            - self.n * self.h_k1
            + binomial(self.n, 2) * self.h_k
        )

    @property
    def colength(self) -> int:
        return binomial(self.k + self.n + 1, self.n) - self.h_k - self.h_k1

    def ideal_hf(self) -> HilbertFunction:
        vals = [0] * self.k + [self.h_k, self.h_k1]
        return HilbertFunction(self.n, vals, "ideal")

    def quotient_hf(self) -> HilbertFunction:
        return self.ideal_hf().to_quotient()

    @classmethod
    def from_quotient_values(cls, n: int, values) -> "TwoStepProfile":
        """Profile from a quotient Hilbert function like (1, n, r_2, ..., q_k, q_k1)."""
        vals = tuple(values)
        k = None
        for d, v in enumerate(vals):
            if v != dim_forms(n, d):
                k = d
                break
        if k is None or k == 0:
            raise ValueError(f"{vals} is not the quotient function of a 2-step ideal")
        if len(vals) > k + 2 and any(vals[k + 2 :]):
            raise ValueError(f"{vals} does not vanish from degree {k + 2} on")
        q_k = vals[k]
        q_k1 = vals[k + 1] if len(vals) > k + 1 else 0
        return cls(n, k, dim_forms(n, k) - q_k, dim_forms(n, k + 1) - q_k1)


def classify(p: TwoStepProfile) -> SyzygyRegime:
    """Syzygy regime from the sign and size of s_h; checked in the spec'd order."""
    if p.h_k == 0 or p.h_k1 == p.r_k1:
        return SyzygyRegime.DEGENERATE_1STEP
    if p.s_h >= 0:
        return SyzygyRegime.NO_SYZYGIES
    m = -p.s_h
    if p.n * m <= p.h_k:
        return SyzygyRegime.VERY_FEW
    if m < p.h_k:
        return SyzygyRegime.FEW
    return SyzygyRegime.LOTS


@dataclass(frozen=True)
class ExpectedTangents:
    t1: int
    t0_lower: int
    profile: TwoStepProfile

    @cached_property
    def b_max(self) -> int:
        L = lex_ideal(self.profile.n, self.profile.ideal_hf())
        return ek_betti(L, 2, self.profile.k + 2)

    def tneg1_lower(self, b: int) -> int:
        if not 0 <= b <= self.b_max:
            raise ValueError(f"b={b} outside [0, {self.b_max}]")
        p = self.profile
        raw = p.h_k * dim_forms(p.n, p.k - 1) + p.s_h * p.q_k + (p.t_h - b) * p.q_k1
        return max(0, raw)


def expected_tangent_dims(p: TwoStepProfile) -> ExpectedTangents:
    """Exact dim T^{=1} and the lower bounds for T^{=0} and T^{=-1}(b)."""
    t1 = p.h_k * p.q_k1
    t0 = max(0, p.h_k * p.q_k + p.s_h * p.q_k1)
    return ExpectedTangents(t1, t0, p)


@dataclass(frozen=True)
class NestedProfile:
    """Consecutive-order 2-step profiles h^(0), ..., h^(r-1) of orders k, ..., k+r-1."""

    profiles: tuple[TwoStepProfile, ...]

    def __post_init__(self):
        ps = self.profiles
        if not ps:
            raise ValueError("need at least one profile")
        n, k = ps[0].n, ps[0].k
        for i, p in enumerate(ps):
            if p.n != n:
                raise ValueError("mixed numbers of variables")
            if p.k != k + i:
                raise ValueError("orders must be consecutive k, k+1, ...")
        for i in range(1, len(ps)):
            if ps[i].h_k > ps[i - 1].h_k1:
                raise ValueError(
                    f"containment fails at level {i}: "
                    f"{ps[i].h_k} > {ps[i - 1].h_k1}"
                )
        d = self.colengths
        if any(d[i] > d[i + 1] for i in range(len(d) - 1)):
            raise ValueError("colength sequence must be non-decreasing")

    @property
    def n(self) -> int:
        return self.profiles[0].n

    @property
    def k(self) -> int:
        return self.profiles[0].k

    @property
    def r(self) -> int:
        return len(self.profiles)

    @property
    def colengths(self) -> tuple[int, ...]:
        return tuple(p.colength for p in self.profiles)

    def lattice_point(self) -> tuple[int, ...]:
        out = []
        for p in self.profiles:
            out.extend((p.h_k, p.h_k1))
        return tuple(out)

    @classmethod
    def from_lattice_point(cls, n: int, k: int, point) -> "NestedProfile":
        pt = tuple(point)
        if len(pt) % 2:
            raise ValueError("lattice point needs an even number of coordinates")
        ps = []
        for i in range(len(pt) // 2):
            ps.append(TwoStepProfile(n, k + i, pt[2 * i], pt[2 * i + 1]))
        return cls(tuple(ps))

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "pairs": [[p.h_k, p.h_k1] for p in self.profiles],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "NestedProfile":
        ps = tuple(
            TwoStepProfile(d["n"], d["k"] + i, int(h), int(h1))
            for i, (h, h1) in enumerate(d["pairs"])
        )
        return cls(ps)


def nested_inequalities_ok(np_: NestedProfile) -> bool:
    """Exact-rational check of the domain inequalities behind the dimension bound."""
    n = np_.n
    p0 = np_.profiles[0]
    if Fraction(n * n - 1, n) * p0.h_k > p0.h_k1:
        return False
    for i in range(1, np_.r):
        p = np_.profiles[i]
        prev = np_.profiles[i - 1]
        r_up = dim_forms(n, p.k + 1)
        bound = max(Fraction(n * n - 1, n), n - Fraction(prev.h_k1, r_up))
        if bound * p.h_k > p.h_k1:
            return False
    return True


class RegimeError(ValueError):
    def __init__(self, level: int, regime: SyzygyRegime, reason: str):
        self.level = level
        self.regime = regime
        super().__init__(f"level {level} ({regime}): {reason}")


_BOUND_REGIMES = (
    SyzygyRegime.NO_SYZYGIES,
    SyzygyRegime.VERY_FEW,
    SyzygyRegime.DEGENERATE_1STEP,
)


def stratum_dim_bound(np_: NestedProfile) -> int:
    """Lower bound for the dimension of the Hilbert stratum of the nesting.

    Valid for levels with no or very few linear syzygies (degenerate 1-step
    boundary points included) under the exact nested inequalities.
    """
    for i, p in enumerate(np_.profiles):
        reg = classify(p)
        if reg not in _BOUND_REGIMES:
            raise RegimeError(i, reg, "dimension bound needs no/very-few syzygies")
    if not nested_inequalities_ok(np_):
        raise ValueError("nested domain inequalities fail")
    ps = np_.profiles
    n = np_.n
    total = ps[0].h_k * (ps[0].r_k - ps[0].h_k)
    for i in range(1, len(ps)):
        total += ps[i].h_k * (ps[i - 1].h_k1 - ps[i].h_k)
    for p in ps:
        total += (p.h_k1 - (n - 1) * p.h_k) * (p.r_k1 - p.h_k1)
    return total


def smoothable_dim(n: int, d_r: int) -> int:
    """Dimension n*d of the smoothable component."""
    return n * d_r
