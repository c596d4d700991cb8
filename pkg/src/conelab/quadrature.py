"""Radial integration on the cone, Laplace transforms, the rank-1 Berezin symbol
and Gram matrices.

Radial integrals of L-invariant functions are written in eigenvalue
coordinates with weight

    exp(-sigma sum x) prod_j x_j^(nu - d/r + det_power) prod_{i<j} |x_i - x_j|^a

times a constant kappa fixed by calibration against Gamma_Omega(nu).

Schemes
-------
polar-jacobi
    r <= 2.  At rank 2, x = (t w, t (1 - w)).  The t-direction is generalized
    Gauss-Laguerre and the folded w-direction (v = (2w - 1)^2) is Gauss-Jacobi,
    so symmetric polynomial integrands are integrated exactly.
gauss-laguerre-tensor
    Any r.  Tensor generalized Gauss-Laguerre with the Vandermonde factor
    evaluated at the nodes; exact only for even a.
adaptive-1d
    r = 1 only, scipy.integrate.quad.
compactified-tanh
    Used by the rank-1 Berezin symbol (x = tanh t); not a cone scheme.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate
from scipy.special import loggamma, roots_genlaguerre, roots_jacobi

from .gammacone import DomainError, gindikin_gamma
from .laguerre import ExpPoly, laguerre_fn, q_fn_eval
from .params import DomainParams, Partition, as_fraction, fmt_partition, partitions_up_to
from .symalg import SymPoly, _orbit, jack_psi

CONE_KINDS = ("polar-jacobi", "gauss-laguerre-tensor", "adaptive-1d")
KINDS = CONE_KINDS + ("compactified-tanh",)

Integrand = Union[SymPoly, Callable[[np.ndarray], np.ndarray]]


class QuadratureFailure(ArithmeticError):
    pass


@dataclass(frozen=True)
class RadialScheme:
    kind: str = "polar-jacobi"
    nodes_per_dim: int = 32
    calibration: Optional[float] = None
    calibrated_for: Optional[Tuple[int, Fraction, Fraction]] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scheme kind {self.kind!r}; expected one of {KINDS}")
        if self.nodes_per_dim < 2:
            raise ValueError("nodes_per_dim must be >= 2")
        if self.calibration is not None and not self.calibration > 0:
            raise ValueError("calibration must be positive")

    def doubled(self) -> "RadialScheme":
        return RadialScheme(self.kind, 2 * self.nodes_per_dim)


def default_scheme(params: DomainParams, nodes: int = 32) -> RadialScheme:
    return RadialScheme("polar-jacobi" if params.r <= 2 else "gauss-laguerre-tensor", nodes)


# --- rules ------------------------------------------------------------------


@lru_cache(maxsize=256)
def _gen_laguerre(n: int, alpha: float, sigma: float):
    # int_0^inf x^alpha e^{-sigma x} g(x) dx ~ sum w g(x).
    y, w = roots_genlaguerre(n, alpha)
    return y / sigma, w * sigma ** (-alpha - 1)


@lru_cache(maxsize=256)
def _jacobi01(n: int, alpha: float, beta: float):
    # int_0^1 (1-v)^alpha v^beta g(v) dv ~ sum w g(v).
    y, w = roots_jacobi(n, alpha, beta)
    return (1 + y) / 2, w / 2 ** (alpha + beta + 1)


@lru_cache(maxsize=256)
def _rule(kind: str, n: int, r: int, a: float, alpha: float, sigma: float):
    """Nodes (N, r) and weights (N,) for the uncalibrated radial weight."""
    if alpha <= -1:
        raise DomainError(f"exponent {alpha} makes the radial weight non-integrable")
    if sigma <= 0:
        raise DomainError("exponential scale must be positive")
    if kind == "polar-jacobi":
        if r == 1:
            x, w = _gen_laguerre(n, alpha, sigma)
            return x[:, None], w
        if r != 2:
            raise ValueError("polar-jacobi supports r <= 2")
        t, wt = _gen_laguerre(n, 2 * alpha + a + 1, sigma)
        v, wv = _jacobi01(n, alpha, (a - 1) / 2)
        # Folding u -> v = u^2 and w = (1+u)/2 contributes 2^{-2 alpha - 1}.
        u = np.sqrt(v)
        w1 = (1 + u) / 2
        scale = 2.0 ** (-2 * alpha - 1) / 2  # also divide by r! = 2
        T, W1 = np.meshgrid(t, w1, indexing="ij")
        WT, WV = np.meshgrid(wt, wv, indexing="ij")
        nodes = np.stack([(T * W1).ravel(), (T * (1 - W1)).ravel()], axis=1)
        return nodes, (WT * WV).ravel() * scale
    if kind == "gauss-laguerre-tensor":
        x, w = _gen_laguerre(n, alpha, sigma)
        grids = np.meshgrid(*([x] * r), indexing="ij")
        wgrids = np.meshgrid(*([w] * r), indexing="ij")
        nodes = np.stack([g.ravel() for g in grids], axis=1)
        weights = np.prod(np.stack([g.ravel() for g in wgrids], axis=1), axis=1)
        vand = np.ones(len(nodes))
        for i in range(r):
            for j in range(i + 1, r):
                vand = vand * np.abs(nodes[:, i] - nodes[:, j]) ** a
        return nodes, weights * vand / math.factorial(r)
    raise ValueError(f"scheme {kind!r} has no node rule")


def eval_sym_array(p: SymPoly, nodes: np.ndarray) -> np.ndarray:
    """Vectorized float evaluation of a SymPoly at rows of ``nodes``."""
    out = np.zeros(nodes.shape[0])
    for kappa, c in p.coeffs.items():
        acc = np.zeros(nodes.shape[0])
        for e in _orbit(kappa):
            term = np.ones(nodes.shape[0])
            for j, k in enumerate(e):
                if k:
                    term = term * nodes[:, j] ** k
            acc += term
        out += float(c) * acc
    return out


def _apply(g: Integrand, nodes: np.ndarray) -> np.ndarray:
    if isinstance(g, SymPoly):
        return eval_sym_array(g, nodes)
    return np.asarray(g(nodes), dtype=float)


def _pairwise_sum(v: np.ndarray) -> float:
    # numpy's sum is pairwise for contiguous float arrays.
    return float(np.sum(np.ascontiguousarray(v)))


def _raw_integral(g: Integrand, params: DomainParams, nu: Fraction, scheme: RadialScheme, sigma: float, det_power: float) -> float:
    r, a = params.r, float(params.a)
    alpha = float(nu - params.d / r) + det_power
    if scheme.kind == "adaptive-1d":
        if r != 1:
            raise ValueError("adaptive-1d supports r = 1 only")

        def f(x):
            return float(_apply(g, np.array([[x]]))[0]) * x**alpha * math.exp(-sigma * x)

        val, _ = integrate.quad(f, 0, np.inf, limit=200, epsabs=0, epsrel=1e-12)
        return val
    nodes, weights = _rule(scheme.kind, scheme.nodes_per_dim, r, a, alpha, sigma)
    return _pairwise_sum(weights * _apply(g, nodes))


def calibrate(params: DomainParams, nu, scheme: RadialScheme) -> RadialScheme:
    """Fix kappa so the rule reproduces Gamma_Omega(nu) for exp(-tr x)."""
    nu = as_fraction(nu)
    bound = (params.r - 1) * params.a / 2
    if nu <= bound:
        raise DomainError(f"nu={nu} must exceed (r-1)a/2 = {bound}")
    if scheme.kind not in CONE_KINDS:
        raise ValueError(f"{scheme.kind} is not a cone scheme")
    raw = _raw_integral(SymPoly.one(params.r), params, nu, scheme, 1.0, 0.0)
    if not math.isfinite(raw) or raw <= 0:
        raise QuadratureFailure(f"uncalibrated estimate is {raw}")
    kappa = gindikin_gamma(nu, params).value.real / raw
    return replace(scheme, calibration=kappa, calibrated_for=(params.r, params.a, nu))


def _require_calibrated(scheme: RadialScheme, params: DomainParams, nu: Fraction) -> float:
    if scheme.calibration is None or scheme.calibrated_for != (params.r, params.a, nu):
        raise ValueError("scheme must be calibrated for these (r, a, nu); call calibrate first")
    return scheme.calibration


def radial_integral_cone(
    g: Integrand,
    nu,
    params: DomainParams,
    scheme: RadialScheme,
    exp_scale: float = 1.0,
    det_power: float = 0.0,
) -> float:
    """``int_Omega exp(-exp_scale tr x) g(x) Delta(x)^det_power d mu_nu(x)``.

    ``g`` is a SymPoly or a vectorized function of eigenvalue rows.
    """
    nu = as_fraction(nu)
    kappa = _require_calibrated(scheme, params, nu)
    val = kappa * _raw_integral(g, params, nu, scheme, float(exp_scale), float(det_power))
    if not math.isfinite(val):
        raise QuadratureFailure("non-finite radial integral")
    return val


def gamma_via_quadrature(lam: Sequence, params: DomainParams, scheme: RadialScheme, nu=None) -> float:
    """``int e^{-tr x} Delta_lam(x) Delta(x)^{-d/r} dx`` for lam with partition differences.

    Writing lam = m + lam_r (m a partition), the L-average of Delta_lam is
    psi_m Delta^{lam_r}, so the integral is radial.
    """
    lam = [as_fraction(x) for x in lam]
    base = lam[-1]
    m = tuple(int(x - base) for x in lam)
    if any(x - base != int(x - base) for x in lam) or any(m[i] < m[i + 1] for i in range(len(m) - 1)):
        raise ValueError("lam must be a partition shifted by a scalar")
    nu = as_fraction(nu) if nu is not None else scheme.calibrated_for[2]
    return radial_integral_cone(jack_psi(m, params), nu, params, scheme, 1.0, float(base - nu))


def laplace_at_scalar(f: ExpPoly, s: float, nu, params: DomainParams, scheme: RadialScheme) -> float:
    """``L_nu(f)(s e) = int exp(-s tr x) f(x) d mu_nu(x)``."""
    if s <= 0:
        raise DomainError("s must be positive")
    return radial_integral_cone(f.poly, nu, params, scheme, exp_scale=s + float(f.exp_scale))


def laguerre_transform_reference(m: Sequence[int], s: float, nu, params: DomainParams) -> float:
    """``Gamma_Omega(m + nu) q_{m,nu}(s e)``."""
    nu = as_fraction(nu)
    lam = [nu + mi for mi in m]
    return gindikin_gamma(lam, params).value.real * q_fn_eval(m, nu, [s] * params.r, params)


# --- Gram matrices ----------------------------------------------------------


@dataclass
class GramMatrix:
    labels: List[Partition]
    entries: np.ndarray
    normalized: bool = False
    details: Dict[str, float] = field(default_factory=dict)

    def normalize(self) -> "GramMatrix":
        d = np.sqrt(np.abs(np.diag(self.entries)))
        ent = self.entries / np.outer(d, d)
        return GramMatrix(self.labels, ent, True, dict(self.details))

    def max_offdiag(self) -> float:
        e = self.entries - np.diag(np.diag(self.entries))
        return float(np.max(np.abs(e))) if e.size else 0.0

    def to_csv(self) -> str:
        head = ",".join(["label"] + [f'"{fmt_partition(m)}"' for m in self.labels])
        rows = [head]
        for m, row in zip(self.labels, self.entries):
            rows.append(",".join([f'"{fmt_partition(m)}"'] + [f"{float(np.real(v)):.12e}" for v in row]))
        return "\n".join(rows) + "\n"


def gram_laguerre(nu, params: DomainParams, max_weight: int, scheme: RadialScheme) -> GramMatrix:
    """``<l_m, l_n>`` in L^2(mu_nu), |m|, |n| <= max_weight."""
    nu = as_fraction(nu)
    if scheme.calibrated_for != (params.r, params.a, nu):
        scheme = calibrate(params, nu, scheme)
    labels = partitions_up_to(params.r, max_weight)
    fns = [laguerre_fn(m, nu, params).poly for m in labels]
    r, a = params.r, float(params.a)
    alpha = float(nu - params.d / r)
    if scheme.kind == "adaptive-1d":
        vals = None
    else:
        nodes, weights = _rule(scheme.kind, scheme.nodes_per_dim, r, a, alpha, 2.0)
        vals = np.stack([eval_sym_array(p, nodes) for p in fns])
    k = len(labels)
    G = np.zeros((k, k))
    for i in range(k):
        for j in range(i, k):
            if vals is None:
                prod = fns[i] * fns[j]
                G[i, j] = radial_integral_cone(prod, nu, params, scheme, exp_scale=2.0)
            else:
                G[i, j] = scheme.calibration * _pairwise_sum(weights * vals[i] * vals[j])
            G[j, i] = G[i, j]
    return GramMatrix(labels, G)


# --- rank-1 Berezin symbol ---------------------------------------------------


def _contour_height(lam: float, nu: float) -> float:
    # Shifting t -> t + i y (|y| < pi/2, sech analytic there) multiplies the
    # oscillatory factor by e^{-2 lam y}; y = pi/2 - nu/(2 lam) removes the
    # cancellation that would otherwise cost ~ e^{pi lam} in relative accuracy.
    if lam <= nu / math.pi:
        return 0.0
    return math.pi / 2 - nu / (2 * lam)


def _log_cosh(z: complex) -> complex:
    # Valid for Re z >= 0 on the principal branch continued from the real axis.
    return z + cmath.log(1 + cmath.exp(-2 * z)) - math.log(2.0)


def _shifted_amplitude(t: float, lam: float, nu: float, y: float) -> complex:
    z = complex(abs(t), y)
    h = cmath.exp(-nu * _log_cosh(z) - 2 * lam * y)
    return h if t >= 0 else h.conjugate()


@lru_cache(maxsize=None)
def _sech_fourier(lam: float, nu: float) -> float:
    """``int_R sech(t)^nu e^{2 i lam t} dt`` (real), via a shifted contour."""
    y = _contour_height(lam, nu)
    cutoff = (745.0 + nu * math.log(2.0)) / nu
    re = lambda t: _shifted_amplitude(t, lam, nu, y).real
    im = lambda t: _shifted_amplitude(t, lam, nu, y).imag
    opts = dict(epsabs=0.0, epsrel=1e-13, limit=800)
    if lam == 0.0:
        val, _ = integrate.quad(re, 0, cutoff, **opts)
        return 2 * val
    c, _ = integrate.quad(re, 0, cutoff, weight="cos", wvar=2 * lam, **opts)
    s, _ = integrate.quad(im, 0, cutoff, weight="sin", wvar=2 * lam, **opts)
    # Re(h e^{2 i lam t}) = Re h cos - Im h sin; the t < 0 half is the conjugate.
    return 2 * (c - s)


def _sech_fourier_imag(lam: float, nu: float) -> float:
    y = _contour_height(lam, nu)
    cutoff = (745.0 + nu * math.log(2.0)) / nu

    def f(t):
        return (_shifted_amplitude(t, lam, nu, y) * cmath.exp(2j * lam * t)).imag

    val, _ = integrate.quad(f, -cutoff, cutoff, limit=800, points=[0.0])
    return val


def berezin_symbol_rank1(lam: float, nu, scheme: Optional[RadialScheme] = None, check_imag: bool = False) -> float:
    """Normalized rank-1 Berezin symbol b_nu(lam), computed in tanh coordinates.

    With x = tanh t the defining integral over (-1, 1) becomes
    int sech(t)^nu exp(2 i lam t) dt, normalized by its value at lam = 0.
    """
    if scheme is not None and scheme.kind != "compactified-tanh":
        raise ValueError("the Berezin symbol uses the compactified-tanh scheme")
    nu_f = float(as_fraction(nu))
    if nu_f <= 0:
        raise DomainError("nu must be positive")
    lam = abs(float(lam))
    norm = _sech_fourier(0.0, nu_f)
    val = _sech_fourier(lam, nu_f) / norm
    if check_imag:
        imag = _sech_fourier_imag(lam, nu_f)
        if abs(imag) > 1e-10 * norm:
            raise QuadratureFailure(f"imaginary residue {imag} too large")
    if not math.isfinite(val):
        raise QuadratureFailure("non-finite Berezin symbol")
    return val


def berezin_closed_form_rank1(lam: float, nu) -> float:
    """|Gamma(nu/2 + i lam)|^2 / Gamma(nu/2)^2 (test oracle)."""
    h = float(as_fraction(nu)) / 2
    return math.exp(2 * (float(np.real(loggamma(complex(h, lam)))) - float(np.real(loggamma(h)))))


def gram_branching_rank1(nu, max_n: int, scheme: Optional[RadialScheme] = None, tail_ratio: float = 1e-3) -> GramMatrix:
    """``int_R b_nu(lam) P_m(i lam) conj(P_n(i lam)) d lam`` for Meixner-Pollaczek P_n.

    The lambda-range is truncated at L, doubled until the tail integral of
    b_nu times the largest |P_m P_n| is below ``tail_ratio`` times the smallest
    diagonal entry.
    """
    from .branching import mp_poly

    nu = as_fraction(nu)
    if nu <= 1:
        raise DomainError("nu must exceed 1")
    polys = [mp_poly(n, nu).to_poly() for n in range(max_n + 1)]
    coeffs = [[complex(p.coeff((k,))) for k in range(p.degree() + 1)] for p in polys]

    def pv(i: int, lam: float) -> complex:
        s = 1j * lam
        return sum(c * s**k for k, c in enumerate(coeffs[i]))

    def b(lam: float) -> float:
        return berezin_symbol_rank1(lam, nu)

    def entry(i: int, j: int, lo: float, hi: float, scale: float = 0.0) -> float:
        # Real part is even in lam and the imaginary part odd, so fold onto [0, L].
        re, _ = integrate.quad(
            lambda x: b(x) * (pv(i, x) * pv(j, x).conjugate()).real,
            lo, hi, limit=400, epsabs=1e-12 * scale, epsrel=1e-10,
        )
        return 2 * re

    def envelope(x: float) -> float:
        return b(x) * max(abs(pv(i, x) * pv(j, x)) for i in range(max_n + 1) for j in range(max_n + 1))

    L = 8.0
    while True:
        diag = [entry(i, i, 0.0, L) for i in range(max_n + 1)]
        tail, _ = integrate.quad(envelope, L, L + 40.0, limit=200)
        tail *= 2
        if tail < tail_ratio * min(diag) or L > 200:
            break
        L *= 2
    if tail >= tail_ratio * min(diag):
        raise QuadratureFailure(f"tail {tail} not below {tail_ratio} x smallest diagonal")
    k = max_n + 1
    G = np.zeros((k, k))
    for i in range(k):
        G[i, i] = diag[i]
        for j in range(i + 1, k):
            G[i, j] = G[j, i] = entry(i, j, 0.0, L, math.sqrt(diag[i] * diag[j]))
    return GramMatrix(
        [(n,) for n in range(k)],
        G,
        details={"cutoff": L, "tail_bound": tail, "tail_over_min_diag": tail / min(diag)},
    )
