"""Step binomials, the c_n(k) products and generalized binomial coefficients.

The closed forms are kept as numerator/denominator factor lists so the same
formula serves exact rationals, complex numbers and polynomial arguments
(the latter when clearing denominators in the difference equation).
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Sequence, Tuple

from .params import DomainParams, Partition, partition
from .poly import prod
from .symalg import SymPoly, jack_psi, to_jack_basis

Factors = Tuple[List[Any], List[Any]]


@dataclass(frozen=True)
class StepCoeff:
    value: Any
    defined_at: bool

    def __bool__(self):
        return self.defined_at and bool(self.value)


def _check_k(k: int, r: int):
    if not 1 <= k <= r:
        raise ValueError(f"k={k} outside 1..{r}")


def binom_step_parts(n: Sequence, k: int, params: DomainParams) -> Factors:
    """Factors of ``(n_k + (a/2)(r-k)) prod_{j!=k} (n_k-n_j+(a/2)(j-k-1)) / (n_k-n_j+(a/2)(j-k))``."""
    r, h = params.r, params.a / 2
    _check_k(k, r)
    nk = n[k - 1]
    num = [nk + h * (r - k)]
    den = []
    for j in range(1, r + 1):
        if j == k:
            continue
        nj = n[j - 1]
        num.append(nk - nj + h * (j - k - 1))
        den.append(nk - nj + h * (j - k))
    return num, den


def c_coeff_parts(n: Sequence, k: int, params: DomainParams) -> Factors:
    """Factors of ``prod_{j!=k} (n_j-n_k-(a/2)(j+1-k)) / (n_j-n_k-(a/2)(j-k))``."""
    r, h = params.r, params.a / 2
    _check_k(k, r)
    nk = n[k - 1]
    num, den = [], []
    for j in range(1, r + 1):
        if j == k:
            continue
        nj = n[j - 1]
        num.append(nj - nk - h * (j + 1 - k))
        den.append(nj - nk - h * (j - k))
    return num, den


def _evaluate(parts: Factors) -> StepCoeff:
    num, den = parts
    d = prod(den)
    if d == 0:
        return StepCoeff(None, False)
    n = prod(num)
    if isinstance(d, Fraction) or isinstance(d, int):
        return StepCoeff(Fraction(n) / d, True)
    return StepCoeff(n / d, True)


def _coerce_vector(n: Sequence) -> list:
    out = []
    for x in n:
        if isinstance(x, (int, Fraction)):
            out.append(Fraction(x))
        else:
            out.append(complex(x))
    return out


def binom_step(n: Sequence, k: int, params: DomainParams) -> StepCoeff:
    return _evaluate(binom_step_parts(_coerce_vector(n), k, params))


def c_coeff(n: Sequence, k: int, params: DomainParams) -> StepCoeff:
    return _evaluate(c_coeff_parts(_coerce_vector(n), k, params))


# --- generalized binomials ----------------------------------------------

_binom_lock = threading.RLock()


@lru_cache(maxsize=None)
def _shifted_expansion(m: Partition, r: int, a: Fraction) -> Dict[Partition, Fraction]:
    params = DomainParams(r, a)
    psi = jack_psi(m, params)
    shifted = SymPoly.from_poly(psi.to_poly().shift([1] * r))
    return to_jack_basis(shifted, params)


def binomial_row(m: Sequence[int], params: DomainParams) -> Dict[Partition, Fraction]:
    """All nonzero ``binom(m, n)``: ``psi_m(e + x) = sum_n binom(m, n) psi_n(x)``."""
    m = partition(m, params.r)
    with _binom_lock:
        return dict(_shifted_expansion(m, params.r, params.a))


def gen_binom(m: Sequence[int], n: Sequence[int], params: DomainParams) -> Fraction:
    m = partition(m, params.r)
    n = partition(n, params.r)
    if sum(n) > sum(m):
        raise ValueError("gen_binom needs |n| <= |m|")
    return binomial_row(m, params).get(n, Fraction(0))
