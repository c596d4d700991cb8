"""Gamma calculus on the cone: Gindikin Gamma, Pochhammer symbols, Beta, c-density."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Sequence, Union

import numpy as np
from scipy.special import loggamma

from .params import DomainParams, rho

Scalar = Union[int, Fraction, float, complex]


class DomainError(ValueError):
    pass


class PoleError(ArithmeticError):
    pass


@dataclass(frozen=True)
class GammaValue:
    log_modulus: float
    phase: float
    is_pole: bool = False

    @classmethod
    def pole(cls) -> "GammaValue":
        return cls(math.inf, 0.0, True)

    @property
    def value(self) -> complex:
        if self.is_pole:
            raise PoleError("Gamma pole")
        return cmath.exp(complex(self.log_modulus, self.phase))

    def __mul__(self, other: "GammaValue") -> "GammaValue":
        if self.is_pole or other.is_pole:
            return GammaValue.pole()
        return GammaValue(self.log_modulus + other.log_modulus, _wrap(self.phase + other.phase))

    def __truediv__(self, other: "GammaValue") -> "GammaValue":
        if other.is_pole:
            raise PoleError("division by a Gamma pole")
        if self.is_pole:
            return GammaValue.pole()
        return GammaValue(self.log_modulus - other.log_modulus, _wrap(self.phase - other.phase))

    def to_json(self):
        if self.is_pole:
            return "pole"
        out = {"log_modulus": self.log_modulus, "phase": self.phase}
        if self.log_modulus < 700:
            v = self.value
            out.update(real=v.real, imag=v.imag)
        return out


def _wrap(phi: float) -> float:
    return math.atan2(math.sin(phi), math.cos(phi))


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0 and z.real <= 0 and float(z.real).is_integer()


def _as_vector(lam, params: DomainParams) -> list:
    if isinstance(lam, Number):
        return [lam] * params.r
    lam = list(lam)
    if len(lam) != params.r:
        raise ValueError(f"spectral vector has length {len(lam)}, expected r={params.r}")
    return lam


def log_gamma_scalar(z: Scalar) -> GammaValue:
    zc = complex(z)
    if _is_nonpositive_integer(zc):
        return GammaValue.pole()
    lg = complex(loggamma(zc))
    return GammaValue(lg.real, _wrap(lg.imag))


def gindikin_gamma(lam, params: DomainParams) -> GammaValue:
    """``Gamma_Omega(lam) = (2 pi)^((d-r)/2) prod_j Gamma(lam_j - (j-1) a/2)``.

    A scalar ``lam`` stands for ``(lam, ..., lam)``.
    """
    lam = _as_vector(lam, params)
    half_a = params.a / 2
    total = GammaValue(float(params.d - params.r) / 2 * math.log(2 * math.pi), 0.0)
    for j, lj in enumerate(lam):
        arg = lj - j * half_a if not isinstance(lj, (float, complex)) else lj - j * float(half_a)
        total = total * log_gamma_scalar(arg)
    return total


def pochhammer(lam, m: Sequence[int], params: DomainParams):
    """``(lam)_m = prod_j (lam_j - (j-1) a/2)_{m_j}``; exact for rational input."""
    lam = _as_vector(lam, params)
    m = list(m) + [0] * (params.r - len(m))
    exact = all(isinstance(x, (int, Fraction)) for x in lam)
    half_a = params.a / 2 if exact else float(params.a) / 2
    out = Fraction(1) if exact else 1.0
    for j, (lj, mj) in enumerate(zip(lam, m)):
        base = (Fraction(lj) if exact else lj) - j * half_a
        for k in range(mj):
            out = out * (base + k)
    return out


def beta_cone(nu, mu, params: DomainParams) -> float:
    """``B_Omega(nu, mu) = Gamma_Omega(nu) Gamma_Omega(mu) / Gamma_Omega(nu + mu)``."""
    bound = (params.r - 1) * params.a / 2
    for name, v in (("nu", nu), ("mu", mu)):
        if complex(v).real <= bound:
            raise DomainError(f"{name}={v} must exceed (r-1)a/2 = {bound}")
    g = gindikin_gamma(nu, params) * gindikin_gamma(mu, params) / gindikin_gamma(nu + mu, params)
    return g.value.real


def _log_abs_gamma_pair(z: complex, half_a: float) -> float:
    # log |Gamma(z) Gamma(a/2 + z)|
    return float(np.real(loggamma(z)) + np.real(loggamma(half_a + z)))


def c_density(lam: Sequence[float], params: DomainParams) -> float:
    """``|c(lam)|^(-2)`` with the global constant set to 1."""
    lam = [float(x) for x in lam]
    if len(lam) != params.r:
        raise ValueError(f"spectral vector has length {len(lam)}, expected r={params.r}")
    rh = [float(x) for x in rho(params)]
    half_a = float(params.a) / 2
    log_total = 0.0
    for j in range(params.r):
        for k in range(j + 1, params.r):
            diff = lam[j] - lam[k]
            if diff == 0.0:
                return 0.0
            log_total += 2 * _log_abs_gamma_pair(complex(rh[j] - rh[k]), half_a)
            log_total -= 2 * _log_abs_gamma_pair(complex(0.0, diff), half_a)
    return math.exp(log_total)
