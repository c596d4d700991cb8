"""Explicit multivariate polynomials with exact rational coefficients.

Used internally wherever symmetry is not available (shifted arguments,
cleared denominators, divided differences).  Terms are stored as
``{exponent tuple: Fraction}`` with zero coefficients dropped.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Dict, Iterable, Sequence, Tuple

Exps = Tuple[int, ...]


class Poly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Exps, Fraction] | None = None):
        self.nvars = nvars
        self.terms: Dict[Exps, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if c:
                    self.terms[tuple(e)] = Fraction(c)

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def linear(cls, nvars: int, coeffs: Sequence, const=0) -> "Poly":
        terms = {(0,) * nvars: Fraction(const)}
        for i, c in enumerate(coeffs):
            e = [0] * nvars
            e[i] = 1
            terms[tuple(e)] = Fraction(c)
        return cls(nvars, terms)

    def copy(self) -> "Poly":
        p = Poly(self.nvars)
        p.terms = dict(self.terms)
        return p

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("mismatched number of variables")
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        p = Poly(self.nvars)
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Poly(self.nvars)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = Fraction(other)
            p = Poly(self.nvars)
            if c:
                p.terms = {e: v * c for e, v in self.terms.items()}
            return p
        other = self._coerce(other)
        out: Dict[Exps, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Poly.const(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        parts = [f"{c}*x^{e}" for e, c in sorted(self.terms.items(), reverse=True)]
        return "Poly(" + " + ".join(parts) + ")"

    def truncate(self, cap: int) -> "Poly":
        return Poly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) <= cap})

    def coeff(self, e: Exps) -> Fraction:
        return self.terms.get(tuple(e), Fraction(0))

    def diff(self, i: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return Poly(self.nvars, out)

    def mul_var(self, i: int, power: int = 1) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            e2 = list(e)
            e2[i] += power
            out[tuple(e2)] = c
        return Poly(self.nvars, out)

    def shift(self, offsets: Sequence) -> "Poly":
        """Substitute ``x_i -> x_i + offsets[i]``."""
        offsets = [Fraction(o) for o in offsets]
        out: Dict[Exps, Fraction] = {}
        for e, c in self.terms.items():
            # Expand prod_i (x_i + o_i)^{e_i}.
            partial = {(): c}
            for i, k in enumerate(e):
                o = offsets[i]
                nxt = {}
                for pre, v in partial.items():
                    if o == 0 or k == 0:
                        key = pre + (k,)
                        nxt[key] = nxt.get(key, 0) + v
                        continue
                    for j in range(k + 1):
                        key = pre + (j,)
                        nxt[key] = nxt.get(key, 0) + v * comb(k, j) * o ** (k - j)
                partial = nxt
            for key, v in partial.items():
                out[key] = out.get(key, 0) + v
        return Poly(self.nvars, out)

    def scale_vars(self, factors: Sequence) -> "Poly":
        """Substitute ``x_i -> factors[i] * x_i``."""
        factors = [Fraction(f) for f in factors]
        out = {}
        for e, c in self.terms.items():
            v = c
            for f, k in zip(factors, e):
                v *= f**k
            out[e] = v
        return Poly(self.nvars, out)

    def __call__(self, point: Sequence):
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * x**k
            total = total + v
        return total

    def divide_linear_difference(self, i: int, j: int) -> "Poly":
        """Exact quotient by ``(x_i - x_j)``; raises if not divisible."""
        rem = dict(self.terms)
        quot: Dict[Exps, Fraction] = {}
        while True:
            lead = [e for e in rem if e[i] > 0]
            if not lead:
                break
            e = max(lead, key=lambda t: t[i])
            c = rem.pop(e)
            q = list(e)
            q[i] -= 1
            q = tuple(q)
            quot[q] = quot.get(q, 0) + c
            # rem -= c * x^q * (x_i - x_j) ; the x_i part cancels the popped term.
            e2 = list(q)
            e2[j] += 1
            e2 = tuple(e2)
            v = rem.get(e2, 0) + c
            if v:
                rem[e2] = v
            else:
                rem.pop(e2, None)
        if any(rem.values()):
            raise ArithmeticError("polynomial is not divisible by x_i - x_j")
        return Poly(self.nvars, quot)


def prod(items: Iterable, start=1):
    acc = start
    for it in items:
        acc = acc * it
    return acc
