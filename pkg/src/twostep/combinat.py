"""Exact combinatorics of monomials, Hilbert functions and lexicographic ideals.

Monomials in n variables are exponent tuples of length n.  The global order
used everywhere in the package is degree first, then lexicographic with
x1 > x2 > ... > xn (within a fixed degree this is descending order on the
exponent tuples).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


def binomial(a: int, b: int) -> int:
    """Exact binomial coefficient C(a, b); zero when b > a or b < 0."""
    if b < 0 or b > a:
        return 0
    b = min(b, a - b)
    num = 1
    den = 1
    for i in range(b):
        num *= a - i
        den *= i + 1
    assert num % den == 0
    return num // den


def dim_forms(n: int, d: int) -> int:
    """Dimension of the space of degree-d forms in n variables: C(d+n-1, n-1)."""
    if n < 1:
        raise ValueError("need at least one variable")
    if d < 0:
        return 0
    return binomial(d + n - 1, n - 1)


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """All degree-d monomials in n variables, greatest first (lex, x1 > ... > xn)."""
    if n < 1:
        raise ValueError("need at least one variable")
    if d < 0:
        return ()
    if n == 1:
        return ((d,),)
    out = []
    for e1 in range(d, -1, -1):
        for rest in monomials(n - 1, d - e1):
            out.append((e1,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> dict[tuple[int, ...], int]:
    """Position of each degree-d monomial in the fixed basis order."""
    return {m: i for i, m in enumerate(monomials(n, d))}


def monomial_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def max_var_index(m: tuple[int, ...]) -> int:
    """Largest 1-based variable index dividing the monomial (0 for the constant)."""
    for i in range(len(m) - 1, -1, -1):
        if m[i]:
            return i + 1
    return 0


def lex_segment(n: int, d: int, h: int) -> tuple[tuple[int, ...], ...]:
    """The h greatest monomials of degree d."""
    r = dim_forms(n, d)
    if not 0 <= h <= r:
        raise ValueError(f"segment size {h} out of range [0, {r}]")
    return monomials(n, d)[:h]


@lru_cache(maxsize=None)
def macaulay_growth(n: int, d: int, h: int) -> int:
    """Macaulay growth h^<d+1>: dimension in degree d+1 of the ideal generated
    by the lex segment of size h in degree d, by explicit multiple enumeration."""
    seg = lex_segment(n, d, h)
    multiples = set()
    for m in seg:
        for j in range(n):
            e = list(m)
            e[j] += 1
            multiples.add(tuple(e))
    return len(multiples)


@dataclass(frozen=True)
class HilbertFunction:
    """Dense Hilbert function over [0, support_end].

    Values past the end are implicitly dim_forms(n, i) for side='ideal' and 0
    for side='quotient'.
    """

    n: int
    values: tuple[int, ...]
    side: str = "ideal"

    def __post_init__(self):
        if self.side not in ("ideal", "quotient"):
            raise ValueError("side must be 'ideal' or 'quotient'")
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    @property
    def support_end(self) -> int:
        return len(self.values) - 1

    def __call__(self, d: int) -> int:
        if d < 0:
            return 0
        if d <= self.support_end:
            return self.values[d]
        return dim_forms(self.n, d) if self.side == "ideal" else 0

    def to_ideal(self) -> "HilbertFunction":
        if self.side == "ideal":
            return self
        vals = tuple(dim_forms(self.n, d) - v for d, v in enumerate(self.values))
        return HilbertFunction(self.n, vals, "ideal")

    def to_quotient(self) -> "HilbertFunction":
        if self.side == "quotient":
            return self
        vals = tuple(dim_forms(self.n, d) - v for d, v in enumerate(self.values))
        return HilbertFunction(self.n, vals, "quotient")

    def colength(self) -> int:
        q = self.to_quotient()
        return sum(q.values)


def is_admissible(h: HilbertFunction, n: int) -> bool:
    """Macaulay's criterion for h to be the Hilbert function of an ideal."""
    hi = h.to_ideal()
    if hi.n != n:
        return False
    for d in range(hi.support_end + 1):
        v = hi(d)
        if not 0 <= v <= dim_forms(n, d):
            return False
        if hi(d + 1) < macaulay_growth(n, d, v):
            return False
    return True


@dataclass(frozen=True)
class LexIdeal:
    """Lexicographic ideal: minimal monomial generators by degree."""

    n: int
    generators: tuple[tuple[int, tuple[tuple[int, ...], ...]], ...]

    def gens_in_degree(self, d: int) -> tuple[tuple[int, ...], ...]:
        for deg, gens in self.generators:
            if deg == d:
                return gens
        return ()

    def all_generators(self):
        for deg, gens in self.generators:
            for g in gens:
                yield deg, g

    def piece(self, d: int, h: HilbertFunction) -> tuple[tuple[int, ...], ...]:
        return lex_segment(self.n, d, h.to_ideal()(d))


def lex_ideal(n: int, h: HilbertFunction) -> LexIdeal:
    """The lex ideal with Hilbert function h; raises on inadmissible input."""
    hi = h.to_ideal()
    if not is_admissible(hi, n):
        raise ValueError("Hilbert function fails Macaulay's bound")
    gens = []
    # One degree past the window suffices: beyond that the piece is all of R_d
    # and the previous full piece already generates it.
    prev: set[tuple[int, ...]] = set()
    for d in range(hi.support_end + 2):
        seg = set(lex_segment(n, d, hi(d)))
        multiples = set()
        for m in prev:
            for j in range(n):
                e = list(m)
                e[j] += 1
                multiples.add(tuple(e))
        assert multiples <= seg
        new = seg - multiples
        if new:
            order = monomial_index(n, d)
            gens.append((d, tuple(sorted(new, key=lambda m: order[m]))))
        prev = seg
        if len(seg) == dim_forms(n, d):
            break
    return LexIdeal(n, tuple(gens))


def ek_betti(L: LexIdeal, i: int, j: int) -> int:
    """Graded Betti number beta_{i,j} of a lex (stable) monomial ideal.

    Standard stable-ideal formula: beta_{i, i+deg u} = sum over minimal
    generators u of C(max(u) - 1, i).
    """
    total = 0
    for deg, g in L.all_generators():
        if i + deg == j:
            total += binomial(max_var_index(g) - 1, i)
    return total
