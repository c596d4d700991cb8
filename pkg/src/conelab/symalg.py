"""Exact symmetric polynomials in the monomial basis and Jack polynomials.

A :class:`SymPoly` in ``r`` variables is stored as ``{partition: Fraction}``
over the monomial symmetric functions ``m_kappa``.  The spherical polynomials
``psi_m`` are Jack polynomials with parameter ``alpha = 2/a``, normalized to
take the value 1 at ``(1, ..., 1)``.  They are built as eigenfunctions of the
Laplace-Beltrami type operator

    D = (alpha/2) sum_i x_i^2 d_i^2 + sum_{i<j} (x_i^2 d_i - x_j^2 d_j) / (x_i - x_j)

which is triangular in dominance order on the monomial basis.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .params import (
    DomainParams,
    Partition,
    as_fraction,
    dominates,
    fmt_fraction,
    fmt_partition,
    parse_partition,
    partitions_of,
    partitions_up_to,
)
from .poly import Poly

# Largest |m| for which jack_psi is built when r >= 2.
JACK_WEIGHT_BUDGET = 14


class ResourceLimitError(RuntimeError):
    pass


def _normalize_key(kappa: Sequence[int], r: int) -> Partition:
    k = tuple(sorted((int(x) for x in kappa), reverse=True))
    if len(k) > r:
        if any(k[r:]):
            raise ValueError(f"{kappa} has more than {r} parts")
        k = k[:r]
    return k + (0,) * (r - len(k))


class SymPoly:
    """Symmetric polynomial (or truncated series) in the monomial basis."""

    __slots__ = ("num_vars", "coeffs", "degree_cap")

    def __init__(
        self,
        num_vars: int,
        coeffs: Mapping[Sequence[int], object] | None = None,
        degree_cap: Optional[int] = None,
    ):
        self.num_vars = num_vars
        self.degree_cap = degree_cap
        out: Dict[Partition, Fraction] = {}
        for k, c in (coeffs or {}).items():
            c = Fraction(c)
            if not c:
                continue
            key = _normalize_key(k, num_vars)
            if degree_cap is not None and sum(key) > degree_cap:
                continue
            out[key] = out.get(key, 0) + c
        self.coeffs = {k: v for k, v in out.items() if v}

    # construction -----------------------------------------------------
    @classmethod
    def one(cls, r: int, cap: Optional[int] = None) -> "SymPoly":
        return cls(r, {(0,) * r: 1}, cap)

    @classmethod
    def monomial(cls, kappa: Sequence[int], r: int) -> "SymPoly":
        return cls(r, {tuple(kappa): 1})

    @classmethod
    def from_poly(cls, poly: Poly, cap: Optional[int] = None, check: bool = False) -> "SymPoly":
        """Read off monomial-basis coefficients of a symmetric explicit polynomial."""
        r = poly.nvars
        coeffs = {}
        for e, c in poly.terms.items():
            if all(e[i] >= e[i + 1] for i in range(r - 1)):
                coeffs[e] = c
        sp = cls(r, coeffs, cap)
        if check and sp.to_poly() != (poly.truncate(cap) if cap is not None else poly):
            raise ValueError("polynomial is not symmetric")
        return sp

    def to_poly(self) -> Poly:
        terms: Dict[Tuple[int, ...], Fraction] = {}
        for kappa, c in self.coeffs.items():
            for e in _orbit(kappa):
                terms[e] = terms.get(e, 0) + c
        return Poly(self.num_vars, terms)

    # arithmetic -------------------------------------------------------
    def _cap_with(self, other: "SymPoly") -> Optional[int]:
        caps = [c for c in (self.degree_cap, other.degree_cap) if c is not None]
        return min(caps) if caps else None

    def _check(self, other: "SymPoly"):
        if not isinstance(other, SymPoly):
            raise TypeError("expected a SymPoly")
        if other.num_vars != self.num_vars:
            raise ValueError(
                f"mismatched num_vars: {self.num_vars} vs {other.num_vars}"
            )

    def __add__(self, other):
        if not isinstance(other, SymPoly):
            other = SymPoly(self.num_vars, {(0,) * self.num_vars: other})
        self._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return SymPoly(self.num_vars, out, self._cap_with(other))

    __radd__ = __add__

    def __neg__(self):
        return SymPoly(self.num_vars, {k: -c for k, c in self.coeffs.items()}, self.degree_cap)

    def __sub__(self, other):
        if not isinstance(other, SymPoly):
            other = SymPoly(self.num_vars, {(0,) * self.num_vars: other})
        return self + (-other)

    def scale(self, c) -> "SymPoly":
        c = Fraction(c)
        return SymPoly(self.num_vars, {k: v * c for k, v in self.coeffs.items()}, self.degree_cap)

    def __mul__(self, other):
        if isinstance(other, SymPoly):
            return mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SymPoly):
            return NotImplemented
        return self.num_vars == other.num_vars and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.num_vars, frozenset(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return "SymPoly(0)"
        body = " + ".join(
            f"{fmt_fraction(c)}*m[{fmt_partition(k)}]" for k, c in sorted_terms(self.coeffs)
        )
        cap = f", cap={self.degree_cap}" if self.degree_cap is not None else ""
        return f"SymPoly({body}{cap})"

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return max((sum(k) for k in self.coeffs), default=-1)

    def coeff(self, kappa: Sequence[int]) -> Fraction:
        return self.coeffs.get(_normalize_key(kappa, self.num_vars), Fraction(0))

    def truncate(self, cap: int) -> "SymPoly":
        return SymPoly(self.num_vars, self.coeffs, cap)

    def homogeneous_part(self, deg: int) -> "SymPoly":
        return SymPoly(self.num_vars, {k: c for k, c in self.coeffs.items() if sum(k) == deg})

    def sign_flip(self) -> "SymPoly":
        """``x -> -x``."""
        return SymPoly(
            self.num_vars,
            {k: (-c if sum(k) % 2 else c) for k, c in self.coeffs.items()},
            self.degree_cap,
        )

    def dilate(self, t) -> "SymPoly":
        """``x -> t x``."""
        t = Fraction(t)
        return SymPoly(
            self.num_vars, {k: c * t ** sum(k) for k, c in self.coeffs.items()}, self.degree_cap
        )

    def __call__(self, point: Sequence):
        return evaluate(self, point)

    # serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "num_vars": self.num_vars,
            "terms": [
                {"partition": fmt_partition(k), "coeff": fmt_fraction(c)}
                for k, c in sorted_terms(self.coeffs)
            ],
            **({"degree_cap": self.degree_cap} if self.degree_cap is not None else {}),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "SymPoly":
        r = int(obj["num_vars"])
        coeffs = {
            parse_partition(t["partition"], r): as_fraction(t["coeff"]) for t in obj["terms"]
        }
        return cls(r, coeffs, obj.get("degree_cap"))


def sorted_terms(coeffs: Mapping[Partition, Fraction]):
    """Terms in (weight, reverse-lex) order."""
    return sorted(coeffs.items(), key=lambda kv: (sum(kv[0]), tuple(-x for x in kv[0])))


@lru_cache(maxsize=None)
def _orbit(kappa: Partition) -> Tuple[Tuple[int, ...], ...]:
    return tuple(sorted(set(permutations(kappa)), reverse=True))


def orbit_size(kappa: Partition) -> int:
    return len(_orbit(tuple(kappa)))


def mul(p: SymPoly, q: SymPoly) -> SymPoly:
    p._check(q)
    cap = p._cap_with(q)
    pp = p.to_poly()
    out: Dict[Tuple[int, ...], Fraction] = {}
    r = p.num_vars
    # Only sorted exponents are needed on the product side.
    for e1, c1 in pp.terms.items():
        for k2, c2 in q.coeffs.items():
            if cap is not None and sum(e1) + sum(k2) > cap:
                continue
            for e2 in _orbit(k2):
                e = tuple(x + y for x, y in zip(e1, e2))
                if all(e[i] >= e[i + 1] for i in range(r - 1)):
                    out[e] = out.get(e, 0) + c1 * c2
    return SymPoly(r, out, cap)


def evaluate(p: SymPoly, point: Sequence):
    """Exact for rational points, floating for float/complex points."""
    if len(point) != p.num_vars:
        raise ValueError(f"point has {len(point)} coordinates, expected {p.num_vars}")
    exact = all(isinstance(x, (int, Fraction)) for x in point)
    pt = [Fraction(x) for x in point] if exact else list(point)
    total = Fraction(0) if exact else 0.0
    for kappa, c in p.coeffs.items():
        s = 0
        for e in _orbit(kappa):
            v = 1
            for x, k in zip(pt, e):
                if k:
                    v = v * x**k
            s = s + v
        total = total + (c * s if exact else float(c) * s)
    return total


# --- Jack polynomials ----------------------------------------------------

_jack_lock = threading.RLock()


@lru_cache(maxsize=None)
def _operator_column(mu: Partition, alpha: Fraction) -> Dict[Partition, Fraction]:
    """Monomial-basis expansion of D applied to m_mu."""
    r = len(mu)
    f = SymPoly.monomial(mu, r).to_poly()
    out = Poly(r)
    for i in range(r):
        out = out + f.diff(i).diff(i).mul_var(i, 2) * (alpha / 2)
    for i in range(r):
        for j in range(i + 1, r):
            g = f.diff(i).mul_var(i, 2) - f.diff(j).mul_var(j, 2)
            out = out + g.divide_linear_difference(i, j)
    return SymPoly.from_poly(out).coeffs


def _operator_entry(col_of: Partition, row: Partition, alpha: Fraction) -> Fraction:
    return _operator_column(col_of, alpha).get(row, Fraction(0))


@lru_cache(maxsize=None)
def _jack_unnormalized(kappa: Partition, alpha: Fraction) -> Dict[Partition, Fraction]:
    r = len(kappa)
    below = [mu for mu in partitions_of(sum(kappa), r) if dominates(kappa, mu)]
    # partitions_of is lex-decreasing, a linear extension of dominance.
    eig = _operator_entry(kappa, kappa, alpha)
    coeffs: Dict[Partition, Fraction] = {kappa: Fraction(1)}
    for mu in below:
        if mu == kappa:
            continue
        rhs = Fraction(0)
        for lam, c in coeffs.items():
            rhs += _operator_entry(lam, mu, alpha) * c
        gap = eig - _operator_entry(mu, mu, alpha)
        if gap == 0:
            if rhs:
                raise ArithmeticError(f"degenerate eigenvalue building Jack {kappa}")
            continue
        val = rhs / gap
        if val:
            coeffs[mu] = val
    return coeffs


@lru_cache(maxsize=None)
def _jack_psi_cached(m: Partition, a: Fraction) -> SymPoly:
    r = len(m)
    if r == 1:
        return SymPoly(1, {m: 1})
    raw = _jack_unnormalized(m, 2 / a)
    at_one = sum(c * orbit_size(k) for k, c in raw.items())
    return SymPoly(r, {k: c / at_one for k, c in raw.items()})


def jack_psi(m: Sequence[int], params: DomainParams) -> SymPoly:
    """Spherical polynomial ``psi_m``: Jack with ``alpha = 2/a``, value 1 at e."""
    m = _normalize_key(m, params.r)
    if list(m) != sorted(m, reverse=True):
        raise ValueError(f"{m} is not a partition")
    if params.r >= 2 and sum(m) > JACK_WEIGHT_BUDGET:
        raise ResourceLimitError(
            f"|m|={sum(m)} exceeds the Jack degree budget {JACK_WEIGHT_BUDGET}"
        )
    with _jack_lock:
        return _jack_psi_cached(m, params.a)


def to_jack_basis(p: SymPoly, params: DomainParams) -> Dict[Partition, Fraction]:
    """Coefficients ``c_n`` with ``p = sum_n c_n psi_n`` (exact, up to the cap)."""
    if p.num_vars != params.r:
        raise ValueError(f"mismatched num_vars: {p.num_vars} vs r={params.r}")
    res = dict(p.coeffs)
    out: Dict[Partition, Fraction] = {}
    degrees = sorted({sum(k) for k in res}, reverse=True)
    for w in degrees:
        for n in partitions_of(w, params.r):
            c = res.get(n)
            if not c:
                continue
            psi = jack_psi(n, params)
            lead = psi.coeffs[n]
            coef = c / lead
            out[n] = coef
            for k, v in psi.coeffs.items():
                nv = res.get(k, 0) - coef * v
                if nv:
                    res[k] = nv
                else:
                    res.pop(k, None)
        if any(res.get(k) for k in partitions_of(w, params.r)):
            raise ArithmeticError("triangular back-substitution left a residual")
    return dict(sorted(out.items(), key=lambda kv: (sum(kv[0]), tuple(-x for x in kv[0]))))


def from_jack_basis(coeffs: Mapping[Partition, Fraction], params: DomainParams) -> SymPoly:
    total = SymPoly(params.r)
    for n, c in coeffs.items():
        total = total + jack_psi(n, params).scale(c)
    return total


# --- Cayley-factor series ----------------------------------------------------


@dataclass(frozen=True)
class CayleyFactor:
    """Descriptor of a truncated series in the bounded-picture variable x.

    ``kind`` is one of

    * ``"binomial"``: prod_i (1 - x_i)^(-nu)
    * ``"orbit"``: sum over distinct permutations b of ``exps`` of
      prod_i (1 + x_i)^(b_i) (1 - x_i)^(-b_i - nu)
    * ``"psi"``: prod_i (1 - x_i)^(-nu) * psi_m(y) with y_i = (1 + x_i)/(1 - x_i)
    """

    kind: str
    nu: Fraction = Fraction(0)
    exps: Optional[Tuple[int, ...]] = None

    @classmethod
    def binomial(cls, nu) -> "CayleyFactor":
        return cls("binomial", as_fraction(nu))

    @classmethod
    def orbit(cls, exps: Sequence[int], nu) -> "CayleyFactor":
        return cls("orbit", as_fraction(nu), tuple(int(e) for e in exps))

    @classmethod
    def psi(cls, m: Sequence[int], nu) -> "CayleyFactor":
        return cls("psi", as_fraction(nu), tuple(int(e) for e in m))


@lru_cache(maxsize=None)
def _univariate_series(k: int, nu: Fraction, cap: int) -> Tuple[Fraction, ...]:
    # (1 + x)^k (1 - x)^(-k - nu) up to x^cap.
    beta = k + nu
    neg = [Fraction(1)]
    for n in range(1, cap + 1):
        neg.append(neg[-1] * (beta + n - 1) / n)
    pos = [Fraction(0)] * (cap + 1)
    binom = Fraction(1)
    for j in range(min(k, cap) + 1):
        pos[j] = binom
        binom = binom * (k - j) / (j + 1)
    return tuple(sum(pos[j] * neg[n - j] for j in range(n + 1)) for n in range(cap + 1))


def _orbit_series(exps: Tuple[int, ...], nu: Fraction, r: int, cap: int) -> Dict[Partition, Fraction]:
    exps = _normalize_key(exps, r)
    out: Dict[Partition, Fraction] = {}
    series = {k: _univariate_series(k, nu, cap) for k in set(exps)}
    for mu in partitions_up_to(r, cap):
        total = Fraction(0)
        for b in _orbit(exps):
            v = Fraction(1)
            for bi, mi in zip(b, mu):
                v *= series[bi][mi]
                if not v:
                    break
            total += v
        if total:
            out[mu] = total
    return out


def expand_cayley_factor(factor: CayleyFactor, params: DomainParams, cap: int) -> SymPoly:
    """Exact truncated symmetric series of a Cayley-type factor to total degree ``cap``."""
    if cap < 0:
        raise ValueError("cap must be >= 0")
    r = params.r
    if factor.kind == "binomial":
        return SymPoly(r, _orbit_series((0,) * r, factor.nu, r, cap), cap)
    if factor.kind == "orbit":
        if factor.exps is None or any(e < 0 for e in factor.exps):
            raise ValueError("orbit factor needs non-negative exponents")
        return SymPoly(r, _orbit_series(factor.exps, factor.nu, r, cap), cap)
    if factor.kind == "psi":
        if factor.exps is None:
            raise ValueError("psi factor needs a partition")
        psi = jack_psi(factor.exps, params)
        out: Dict[Partition, Fraction] = {}
        for kappa, c in psi.coeffs.items():
            for mu, v in _orbit_series(kappa, factor.nu, r, cap).items():
                out[mu] = out.get(mu, 0) + c * v
        return SymPoly(r, out, cap)
    raise ValueError(f"unknown Cayley factor kind {factor.kind!r}")


def power_sum_one(r: int) -> SymPoly:
    """``m_(1) = x_1 + ... + x_r``."""
    return SymPoly.monomial((1,) + (0,) * (r - 1), r)


def jack_table(params: DomainParams, max_weight: int) -> Dict[Partition, SymPoly]:
    return {m: jack_psi(m, params) for m in partitions_up_to(params.r, max_weight)}

