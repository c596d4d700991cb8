"""Branching polynomials p_{nu,m} in the rotated spectral variable s = i*lambda.

Values at lattice nodes come from the Cayley-series expansion

    prod_i (1 - x_i)^(-nu) psi_m(y),  y_i = (1 + x_i)/(1 - x_i),

whose Jack coefficients are p_{nu,n} evaluated at the node attached to m.
Polynomials are then recovered by exact interpolation over the nodes of
bounded weight and checked at held-out nodes.

Node convention: s(m) = m + nu/2 + RHO_SIGN * rho with rho decreasing.  With
RHO_SIGN = +1 the node coordinates are strictly decreasing and the held-out
check passes; the opposite sign is kept selectable so tests can show it fails.
"""
from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from .coefficients import binom_step, binom_step_parts, c_coeff, c_coeff_parts
from .linalg import SingularSystemError, solve_exact
from .params import (
    DomainParams,
    Partition,
    as_fraction,
    fmt_fraction,
    fmt_partition,
    partition,
    partitions_of,
    partitions_up_to,
    rho,
    step,
)
from .poly import Poly, prod
from .report import (
    EXACT_ZERO,
    FAILED,
    VerificationFailure,
    VerificationReport,
    exact_residual_terms,
)
from .symalg import CayleyFactor, SymPoly, evaluate, expand_cayley_factor, power_sum_one, to_jack_basis

RHO_SIGN = 1


class InterpolationError(ArithmeticError):
    pass


class CoefficientUndefined(ArithmeticError):
    pass


@dataclass(frozen=True)
class BranchingContext:
    params: DomainParams
    nu: Fraction
    degree_cap: int
    rho_sign: int = RHO_SIGN

    def __post_init__(self):
        nu = as_fraction(self.nu)
        object.__setattr__(self, "nu", nu)
        bound = (self.params.r - 1) * self.params.a / 2
        if nu <= bound:
            raise ValueError(f"nu={nu} must exceed (r-1)a/2 = {bound}")
        if self.degree_cap < 0:
            raise ValueError("degree_cap must be >= 0")
        if self.rho_sign not in (1, -1):
            raise ValueError("rho_sign must be +1 or -1")

    def with_cap(self, cap: int) -> "BranchingContext":
        return BranchingContext(self.params, self.nu, cap, self.rho_sign)

    def to_json(self) -> dict:
        return {**self.params.to_json(), "nu": fmt_fraction(self.nu)}


@dataclass(frozen=True)
class LatticeNode:
    m: Partition
    s: Tuple[Fraction, ...]


@dataclass(frozen=True)
class SpectralPoly:
    """W-invariant polynomial in s, stored over monomial-symmetric functions m_kappa(s)."""

    num_vars: int
    coeffs: Tuple[Tuple[Partition, Fraction], ...]

    @classmethod
    def from_sympoly(cls, p: SymPoly) -> "SpectralPoly":
        items = tuple(sorted(p.coeffs.items(), key=lambda kv: (sum(kv[0]), tuple(-x for x in kv[0]))))
        return cls(p.num_vars, items)

    def sympoly(self) -> SymPoly:
        return SymPoly(self.num_vars, dict(self.coeffs))

    def to_poly(self) -> Poly:
        return self.sympoly().to_poly()

    @property
    def degree(self) -> int:
        return max((sum(k) for k, _ in self.coeffs), default=-1)

    def __call__(self, s: Sequence):
        return evaluate(self.sympoly(), list(s))

    def to_json(self) -> dict:
        return {
            "num_vars": self.num_vars,
            "basis": "monomial-symmetric in s = i*lambda",
            "terms": [{"partition": fmt_partition(k), "coeff": fmt_fraction(c)} for k, c in self.coeffs],
        }


def lattice_node(m: Sequence[int], ctx: BranchingContext) -> LatticeNode:
    m = partition(m, ctx.params.r)
    half = ctx.nu / 2
    s = tuple(mi + half + ctx.rho_sign * rj for mi, rj in zip(m, rho(ctx.params)))
    return LatticeNode(m, s)


_lock = threading.RLock()


@lru_cache(maxsize=None)
def _node_values(m: Partition, ctx: BranchingContext) -> Dict[Partition, Fraction]:
    series = expand_cayley_factor(CayleyFactor.psi(m, ctx.nu), ctx.params, ctx.degree_cap)
    return to_jack_basis(series, ctx.params)


def branching_at_node(source: Sequence[int], ctx: BranchingContext) -> Dict[Partition, Fraction]:
    """``{n: p_{nu,n}(node(source))}`` for all ``|n| <= ctx.degree_cap``."""
    m = partition(source, ctx.params.r)
    with _lock:
        vals = _node_values(m, ctx)
    return {n: vals.get(n, Fraction(0)) for n in partitions_up_to(ctx.params.r, ctx.degree_cap)}


def _value_at(source: Partition, n: Partition, ctx: BranchingContext) -> Fraction:
    with _lock:
        return _node_values(source, ctx.with_cap(max(ctx.degree_cap, sum(n)))).get(n, Fraction(0))


@lru_cache(maxsize=None)
def _interpolate_weight(k: int, params: DomainParams, nu: Fraction, rho_sign: int) -> Dict[Partition, SpectralPoly]:
    ctx = BranchingContext(params, nu, k, rho_sign)
    r = params.r
    nodes = partitions_up_to(r, k)
    basis = nodes
    points = [lattice_node(m, ctx).s for m in nodes]
    matrix = [[evaluate(SymPoly.monomial(kappa, r), list(pt)) for kappa in basis] for pt in points]
    targets = partitions_of(k, r)
    rhs = [[_value_at(m, n, ctx) for m in nodes] for n in targets]
    try:
        sols = solve_exact(matrix, rhs)
    except SingularSystemError as exc:
        raise InterpolationError(f"interpolation system singular at weight {k}: {exc}") from exc
    out = {}
    for n, sol in zip(targets, sols):
        out[n] = SpectralPoly.from_sympoly(SymPoly(r, dict(zip(basis, sol))))
    return out


def held_out_mismatches(n: Partition, poly: SpectralPoly, ctx: BranchingContext, extra: int = 1) -> List[Partition]:
    """Nodes of weight |n|+1 .. |n|+extra where the polynomial disagrees with the series."""
    bad = []
    k = sum(n)
    for w in range(k + 1, k + extra + 1):
        for m in partitions_of(w, ctx.params.r):
            if poly(lattice_node(m, ctx).s) != _value_at(m, n, ctx):
                bad.append(m)
    return bad


@lru_cache(maxsize=None)
def _branching_poly_checked(n: Partition, params: DomainParams, nu: Fraction, rho_sign: int) -> SpectralPoly:
    with _lock:
        poly = _interpolate_weight(sum(n), params, nu, rho_sign)[n]
    ctx = BranchingContext(params, nu, sum(n), rho_sign)
    bad = held_out_mismatches(n, poly, ctx)
    if bad:
        raise VerificationFailure(
            f"p_{{nu,{fmt_partition(n)}}} disagrees with the series at held-out nodes "
            + "; ".join(fmt_partition(m) for m in bad)
        )
    return poly


def branching_poly(n: Sequence[int], ctx: BranchingContext) -> SpectralPoly:
    n = partition(n, ctx.params.r)
    return _branching_poly_checked(n, ctx.params, ctx.nu, ctx.rho_sign)


def mp_poly(n: int, nu) -> SpectralPoly:
    """Coefficient of x^n in (1-x)^(-nu/2-s) (1+x)^(-nu/2+s) as a polynomial in s."""
    nu = as_fraction(nu)
    if n < 0:
        raise ValueError("n must be >= 0")
    s = Poly.var(1, 0)
    half = Poly.const(1, nu / 2)

    def rising(base: Poly, k: int) -> Poly:
        out = Poly.const(1, 1)
        for i in range(k):
            out = out * (base + i) * Fraction(1, i + 1)
        return out

    total = Poly(1)
    for k in range(n + 1):
        term = rising(half + s, k) * rising(half - s, n - k)
        total = total + (term if (n - k) % 2 == 0 else -term)
    return SpectralPoly.from_sympoly(SymPoly.from_poly(total))


# --- identity checks ------------------------------------------------------


def _report(identity: str, ctx: BranchingContext, n: Partition, residual: Poly, start: float, **details) -> VerificationReport:
    status = EXACT_ZERO if residual.is_zero() else FAILED
    return VerificationReport(
        identity=identity,
        params=ctx.to_json(),
        status=status,
        n=n,
        residual_terms=exact_residual_terms(residual.terms),
        details=details,
        runtime_ms=(time.perf_counter() - start) * 1000,
    )


def recurrence_residual(n: Sequence[int], ctx: BranchingContext, mutate: bool = False) -> Poly:
    """Residual of 2(sum_j s_j) p_n = sum_j up-terms - sum_j down-terms."""
    params = ctx.params
    r, h = params.r, params.a / 2
    n = partition(n, r)
    lhs = branching_poly(n, ctx).sympoly()
    lhs = SymPoly.__mul__(power_sum_one(r).scale(2), lhs).to_poly()
    lhs = lhs + branching_poly(n, ctx).to_poly() * (2 * sum(rho(params)))
    rhs = Poly(r)
    for j in range(1, r + 1):
        up = step(n, j, "up")
        if up is not None:
            coef = binom_step(up, j, params)
            if not coef.defined_at:
                raise CoefficientUndefined(f"binom_step({fmt_partition(up)}, {j}) undefined")
            rhs = rhs + branching_poly(up, ctx).to_poly() * coef.value
        down = step(n, j, "down")
        if down is not None:
            coef = c_coeff(down, j, params)
            if not coef.defined_at:
                raise CoefficientUndefined(f"c_coeff({fmt_partition(down)}, {j}) undefined")
            lin = ctx.nu + n[j - 1] - 1 - h * (j - 1)
            term = branching_poly(down, ctx).to_poly() * (lin * coef.value)
            rhs = rhs + term if mutate else rhs - term
    return lhs - rhs


def verify_recurrence(n: Sequence[int], ctx: BranchingContext, mutate: bool = False) -> VerificationReport:
    start = time.perf_counter()
    n = partition(n, ctx.params.r)
    res = recurrence_residual(n, ctx, mutate=mutate)
    extra = {"mutated": True} if mutate else {}
    return _report("recurrence", ctx, n, res, start, **extra)


def _clear_against(den: List[Poly], common: List[Poly]) -> Tuple[int, List[Poly]]:
    """Return (sign, rest) with prod(den) * sign * prod(rest) = prod(common)."""
    remaining = list(common)
    sign = 1
    for f in den:
        for idx, g in enumerate(remaining):
            if f == g:
                break
            if f == -g:
                sign = -sign
                break
        else:
            raise CoefficientUndefined("denominator factor outside the common denominator")
        remaining.pop(idx)
    return sign, remaining


def difference_residual(n: Sequence[int], ctx: BranchingContext) -> Poly:
    """Cleared-denominator residual of the difference equation in s.

    -(r nu + 2|n|) P(s) = sum_j B_j(s) P(s - gamma_j) - sum_j C_j(s) P(s + gamma_j)
    with B_j = binom_step(u, j), C_j = (nu/2 + t_j - (a/2)(j-1)) c_coeff(u, j),
    t = s - RHO_SIGN * rho and u = t - nu/2 (u equals the node index at nodes).
    """
    params = ctx.params
    r, h = params.r, params.a / 2
    n = partition(n, r)
    P = branching_poly(n, ctx).to_poly()
    rh = rho(params)
    t = [Poly.var(r, j) - ctx.rho_sign * rh[j] for j in range(r)]
    u = [tj - ctx.nu / 2 for tj in t]
    common = [u[j] - u[k] + h * (k - j) for j in range(r) for k in range(j + 1, r)]
    D = prod(common, Poly.const(r, 1))

    def shifted(j: int, delta: int) -> Poly:
        off = [0] * r
        off[j - 1] = delta
        return P.shift(off)

    residual = P * D * (r * ctx.nu + 2 * sum(n))
    for j in range(1, r + 1):
        num, den = binom_step_parts(u, j, params)
        sign, rest = _clear_against(den, common)
        residual = residual + prod(num, Poly.const(r, sign)) * prod(rest, Poly.const(r, 1)) * shifted(j, -1)
        num, den = c_coeff_parts(u, j, params)
        sign, rest = _clear_against(den, common)
        lin = t[j - 1] + (ctx.nu / 2 - h * (j - 1))
        residual = residual - prod(num, lin * sign) * prod(rest, Poly.const(r, 1)) * shifted(j, 1)
    return residual


def verify_difference(n: Sequence[int], ctx: BranchingContext) -> VerificationReport:
    start = time.perf_counter()
    n = partition(n, ctx.params.r)
    return _report("difference", ctx, n, difference_residual(n, ctx), start)


def example_rank1_difference_residual(n: int, nu) -> Poly:
    """Rank-1 check -(2n+nu)P(s) = (s - nu/2)P(s-1) - (s + nu/2)P(s+1) on mp_poly."""
    nu = as_fraction(nu)
    P = mp_poly(n, nu).to_poly()
    s = Poly.var(1, 0)
    lhs = P * (-(2 * n + nu))
    rhs = (s - nu / 2) * P.shift([-1]) - (s + nu / 2) * P.shift([1])
    return lhs - rhs
