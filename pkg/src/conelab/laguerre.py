"""Generalized Laguerre polynomials and functions, and the Euler recursion check."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Sequence

from .coefficients import binom_step, binomial_row, c_coeff
from .gammacone import PoleError, pochhammer
from .params import DomainParams, Partition, as_fraction, fmt_fraction, partition, step
from .report import EXACT_ZERO, FAILED, VerificationReport, exact_residual_terms
from .symalg import SymPoly, evaluate, jack_psi, power_sum_one

VARIANTS = {"a-half", "d-half"}
PLACEMENTS = {"down", "up"}


@dataclass(frozen=True)
class ExpPoly:
    """``exp(-exp_scale * sum(x)) * poly(x)``."""

    poly: SymPoly
    exp_scale: Fraction = Fraction(0)

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        if self.exp_scale != other.exp_scale:
            raise ValueError("cannot add ExpPolys with different exponential scales")
        return ExpPoly(self.poly + other.poly, self.exp_scale)

    def __sub__(self, other: "ExpPoly") -> "ExpPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "ExpPoly":
        return ExpPoly(self.poly.scale(c), self.exp_scale)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __call__(self, x: Sequence[float]) -> float:
        x = [float(v) for v in x]
        return math.exp(-float(self.exp_scale) * sum(x)) * evaluate(self.poly, x)

    def to_json(self) -> dict:
        return {"exp_scale": fmt_fraction(self.exp_scale), "poly": self.poly.to_json()}


def laguerre_poly(m: Sequence[int], nu, params: DomainParams) -> SymPoly:
    """``L^nu_m(x) = (nu)_m sum_n binom(m, n) psi_n(-x) / (nu)_n``."""
    m = partition(m, params.r)
    nu = as_fraction(nu)
    lead = pochhammer(nu, m, params)
    total = SymPoly(params.r)
    for n, b in binomial_row(m, params).items():
        pn = pochhammer(nu, n, params)
        if pn == 0:
            raise PoleError(f"(nu)_n vanishes at n={n}, nu={nu}")
        sign = -1 if sum(n) % 2 else 1
        total = total + jack_psi(n, params).scale(sign * lead * b / pn)
    return total


def laguerre_fn(m: Sequence[int], nu, params: DomainParams) -> ExpPoly:
    """``l^nu_m(x) = exp(-tr x) L^nu_m(2x)``."""
    return ExpPoly(laguerre_poly(m, nu, params).dilate(2), Fraction(1))


def q_fn_eval(m: Sequence[int], nu, z_eigen: Sequence[float], params: DomainParams) -> float:
    """``Delta(z+e)^(-nu) psi_m((z-e)(z+e)^(-1))`` at a diagonal point."""
    z = [float(v) for v in z_eigen]
    if len(z) != params.r:
        raise ValueError(f"expected {params.r} eigenvalues, got {len(z)}")
    if any(v <= 0 for v in z):
        raise ValueError("z must lie in the open cone")
    nu_f = float(as_fraction(nu))
    pref = math.prod((v + 1) ** (-nu_f) for v in z)
    y = [(v - 1) / (v + 1) for v in z]
    return pref * evaluate(jack_psi(m, params), y)


def _euler_sym(p: SymPoly) -> SymPoly:
    return SymPoly(p.num_vars, {k: c * sum(k) for k, c in p.coeffs.items()}, p.degree_cap)


def euler_apply(f: ExpPoly) -> ExpPoly:
    """``E(e^{-s sum x} q) = e^{-s sum x} (E q - s (sum x) q)``."""
    out = _euler_sym(f.poly)
    if f.exp_scale:
        out = out - (power_sum_one(f.poly.num_vars) * f.poly).scale(f.exp_scale)
    return ExpPoly(out, f.exp_scale)


def fock_bergman_ratio(m: Sequence[int], nu, params: DomainParams) -> Fraction:
    val = pochhammer(as_fraction(nu), partition(m, params.r), params)
    if val == 0:
        raise PoleError("(nu)_m vanishes")
    return val


def euler_residual(
    m: Sequence[int], nu, params: DomainParams, variant: str = "a-half", placement: str = "down"
) -> ExpPoly:
    """LHS - RHS of 2 E l_m = -nu r l_m - sum_j binom(m, m-g_j) k_j l_{m-g_j} + sum_j c_m(j) l_{m+g_j}.

    ``k_j = m_j - 1 + nu - (j-1) kappa`` with kappa = a/2 or d/2.  The "up"
    placement moves ``k_j`` from the down-step onto the up-step term.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {sorted(VARIANTS)}")
    if placement not in PLACEMENTS:
        raise ValueError(f"placement must be one of {sorted(PLACEMENTS)}")
    m = partition(m, params.r)
    nu = as_fraction(nu)
    kappa = params.a / 2 if variant == "a-half" else params.d / 2
    lm = laguerre_fn(m, nu, params)
    lhs = euler_apply(lm).scale(2)
    rhs = lm.scale(-nu * params.r)
    for j in range(1, params.r + 1):
        k_j = m[j - 1] - 1 + nu - (j - 1) * kappa
        down = step(m, j, "down")
        if down is not None:
            b = binom_step(m, j, params).value
            factor = b * k_j if placement == "down" else b
            rhs = rhs - laguerre_fn(down, nu, params).scale(factor)
        up = step(m, j, "up")
        if up is not None:
            c = c_coeff(m, j, params)
            if not c.defined_at:
                raise ArithmeticError(f"c_m({j}) undefined at m={m}")
            factor = c.value if placement == "down" else c.value * k_j
            rhs = rhs + laguerre_fn(up, nu, params).scale(factor)
    return lhs - rhs


def verify_euler_recursion(
    m: Sequence[int], nu, params: DomainParams, coeff_variant: str = "a-half", placement: str = "down"
) -> VerificationReport:
    start = time.perf_counter()
    m = partition(m, params.r)
    res = euler_residual(m, nu, params, coeff_variant, placement)
    terms = exact_residual_terms(res.poly.coeffs, label="partition")
    return VerificationReport(
        identity="euler",
        params={**params.to_json(), "nu": fmt_fraction(as_fraction(nu))},
        status=EXACT_ZERO if res.is_zero() else FAILED,
        n=m,
        residual_terms=terms,
        details={"variant": coeff_variant, "placement": placement},
        runtime_ms=(time.perf_counter() - start) * 1000,
    )


def classical_laguerre_scaled(n: int, nu) -> Dict[int, Fraction]:
    """``n! L_n^{(nu-1)}(x)`` as ``{power: coeff}`` from the classical closed sum."""
    nu = as_fraction(nu)
    alpha = nu - 1
    out = {}
    for k in range(n + 1):
        # C(n + alpha, n - k) for rational alpha.
        binom = Fraction(1)
        for i in range(n - k):
            binom = binom * (alpha + k + 1 + i) / (i + 1)
        out[k] = math.factorial(n) * binom * Fraction((-1) ** k, math.factorial(k))
    return out
