"""Sparse homogeneous forms and the plain-text polynomial format.

The text format: terms `c*x1^a1*...*xn^an` joined by `+`/`-`, e.g.
`x1*x2^4*x3 + x1^3*x2*x3^2`.  Coefficients are integers or rationals p/q.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .combinat import dim_forms, monomial_index

_TERM_RE = re.compile(r"[+-]?[^+-]+")
_FACTOR_RE = re.compile(r"^x(\d+)(?:\^(\d+))?$")


@dataclass(frozen=True)
class Form:
    """Homogeneous form: sparse monomial -> coefficient map."""

    n: int
    degree: int
    coeffs: tuple[tuple[tuple[int, ...], Fraction], ...]

    def __post_init__(self):
        for m, c in self.coeffs:
            if len(m) != self.n or sum(m) != self.degree:
                raise ValueError(f"monomial {m} is not of degree {self.degree} in {self.n} variables")
            if c == 0:
                raise ValueError("zero coefficient stored")

    def to_vector(self) -> list[Fraction]:
        idx = monomial_index(self.n, self.degree)
        v = [Fraction(0)] * dim_forms(self.n, self.degree)
        for m, c in self.coeffs:
            v[idx[m]] = c
        return v

    @classmethod
    def from_vector(cls, n: int, degree: int, vec) -> "Form":
        from .combinat import monomials

        mons = monomials(n, degree)
        coeffs = tuple((m, Fraction(c)) for m, c in zip(mons, vec) if c)
        return cls(n, degree, coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for m, c in self.coeffs:
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(f"x{i + 1}")
                elif e > 1:
                    factors.append(f"x{i + 1}^{e}")
            body = "*".join(factors) if factors else "1"
            if c == 1 and factors:
                term = body
            elif c == -1 and factors:
                term = f"-{body}"
            else:
                term = f"{c}*{body}" if factors else str(c)
            parts.append(term)
        out = parts[0]
        for t in parts[1:]:
            out += t if t.startswith("-") else "+" + t
        return out


def parse_form(text: str, n: int) -> Form:
    """Parse a homogeneous polynomial in variables x1..xn."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    acc: dict[tuple[int, ...], Fraction] = {}
    degree = None
    for term in _TERM_RE.findall(s):
        sign = Fraction(1)
        body = term
        if body.startswith("+"):
            body = body[1:]
        elif body.startswith("-"):
            sign = Fraction(-1)
            body = body[1:]
        coeff = sign
        expo = [0] * n
        for factor in body.split("*"):
            m = _FACTOR_RE.match(factor)
            if m:
                i = int(m.group(1))
                if not 1 <= i <= n:
                    raise ValueError(f"variable x{i} out of range for n={n}")
                expo[i - 1] += int(m.group(2) or 1)
            else:
                coeff *= Fraction(factor)
        d = sum(expo)
        if degree is None:
            degree = d
        elif degree != d:
            raise ValueError(f"inhomogeneous polynomial: degrees {degree} and {d}")
        key = tuple(expo)
        acc[key] = acc.get(key, Fraction(0)) + coeff
    coeffs = tuple((m, c) for m, c in acc.items() if c)
    if not coeffs:
        raise ValueError("polynomial is zero")
    return Form(n, degree, coeffs)
