from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from conelab.gammacone import DomainError, gindikin_gamma, pochhammer
from conelab.laguerre import ExpPoly, laguerre_fn
from conelab.params import make_params
from conelab.quadrature import (
    RadialScheme,
    berezin_closed_form_rank1,
    berezin_symbol_rank1,
    calibrate,
    default_scheme,
    gamma_via_quadrature,
    gram_branching_rank1,
    gram_laguerre,
    laguerre_transform_reference,
    laplace_at_scalar,
    radial_integral_cone,
)
from conelab.symalg import SymPoly, jack_psi

F = Fraction


def rel(x, y):
    return abs(x - y) / max(abs(x), abs(y), 1e-12)


def test_scheme_validation():
    with pytest.raises(ValueError):
        RadialScheme("bogus")
    with pytest.raises(ValueError):
        RadialScheme("polar-jacobi", 1)
    with pytest.raises(ValueError):
        calibrate(make_params(1, 1), 2, RadialScheme("compactified-tanh"))
    with pytest.raises(DomainError):
        calibrate(make_params(2, 1), F(1, 2), RadialScheme())


def test_uncalibrated_scheme_is_rejected():
    with pytest.raises(ValueError):
        radial_integral_cone(SymPoly.one(1), 2, make_params(1, 1), RadialScheme())


@pytest.mark.parametrize("kind", ["polar-jacobi", "gauss-laguerre-tensor", "adaptive-1d"])
def test_calibrate_rank1_kappa_is_one(kind):
    sch = calibrate(make_params(1, 1), F(5, 2), RadialScheme(kind, 24))
    assert sch.calibration == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("r,a", [(1, 1), (2, 1), (2, 2), (3, 1)])
def test_calibration_idempotent(r, a):
    params = make_params(r, a)
    nu = F(4)
    once = calibrate(params, nu, default_scheme(params))
    twice = calibrate(params, nu, once)
    assert twice.calibration == pytest.approx(once.calibration, rel=1e-12)


@pytest.mark.parametrize("lam", [(3, 2), (4, 2), (5, 5)])
def test_gamma_reproduced_at_several_lambdas(lam):
    params = make_params(2, 1)
    sch = calibrate(params, 2, default_scheme(params))
    assert rel(gamma_via_quadrature(lam, params, sch), gindikin_gamma(lam, params).value.real) < 1e-6


def test_gamma_rank3_tensor_scheme():
    # The tensor rule with odd a is only approximately exact; a loose check.
    params = make_params(3, 2)
    sch = calibrate(params, 4, RadialScheme("gauss-laguerre-tensor", 24))
    assert rel(gamma_via_quadrature((6, 5, 4), params, sch), gindikin_gamma((6, 5, 4), params).value.real) < 1e-8


def test_psi_one_ratio_is_pochhammer():
    params = make_params(2, 1)
    nu = F(2)
    sch = calibrate(params, nu, default_scheme(params))
    val = radial_integral_cone(jack_psi((1, 0), params), nu, params, sch)
    ratio = val / gindikin_gamma(nu, params).value.real
    assert rel(ratio, float(pochhammer(nu, (1, 0), params))) < 1e-10


@pytest.mark.parametrize("r", [1, 2])
@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
def test_laplace_of_measure(r, s):
    params = make_params(r, 1)
    for nu in (F(2), F(4)):
        sch = calibrate(params, nu, default_scheme(params))
        got = laplace_at_scalar(ExpPoly(SymPoly.one(r)), s, nu, params, sch)
        expected = gindikin_gamma(nu, params).value.real * s ** (-r * float(nu))
        assert rel(got, expected) < 1e-6


def test_laplace_rank1_unit():
    p1 = make_params(1, 1)
    sch = calibrate(p1, 2, default_scheme(p1))
    assert laplace_at_scalar(ExpPoly(SymPoly.one(1)), 1.0, 2, p1, sch) == pytest.approx(1.0, rel=1e-12)


def test_laplace_rejects_nonpositive_s():
    p1 = make_params(1, 1)
    sch = calibrate(p1, 2, default_scheme(p1))
    with pytest.raises(DomainError):
        laplace_at_scalar(ExpPoly(SymPoly.one(1)), 0.0, 2, p1, sch)


@pytest.mark.parametrize("r,a", [(1, 1), (2, 1), (2, 2)])
def test_laguerre_laplace_transform(r, a):
    params = make_params(r, a)
    nu = F(4)
    sch = calibrate(params, nu, default_scheme(params))
    from conelab.params import partitions_up_to

    for m in partitions_up_to(r, 2):
        for s in (1.5, 2.0, 3.0):
            got = laplace_at_scalar(laguerre_fn(m, nu, params), s, nu, params, sch)
            ref = laguerre_transform_reference(m, s, nu, params)
            expected = gindikin_gamma([nu + mi for mi in m], params).value.real * (s + 1) ** (-r * 4) * (
                ((s - 1) / (s + 1)) ** sum(m)
            )
            assert rel(ref, expected) < 1e-12
            assert rel(got, ref) < 1e-5


def test_gram_laguerre_rank1_classical():
    p1 = make_params(1, 1)
    g = gram_laguerre(2, p1, 3, RadialScheme("polar-jacobi", 16)).normalize()
    assert np.allclose(np.diag(g.entries), 1.0)
    assert g.max_offdiag() < 1e-8


def test_gram_laguerre_rank2_and_doubling():
    params = make_params(2, 1)
    sch = RadialScheme("polar-jacobi", 16)
    g = gram_laguerre(4, params, 3, sch)
    gd = gram_laguerre(4, params, 3, sch.doubled())
    assert g.normalize().max_offdiag() < 1e-6
    assert np.max(np.abs(g.entries - gd.entries) / np.abs(gd.entries).max()) < 1e-6


def test_gram_csv_header():
    g = gram_laguerre(4, make_params(2, 1), 1, RadialScheme("polar-jacobi", 8))
    lines = g.to_csv().splitlines()
    assert lines[0] == 'label,"","1"'
    assert len(lines) == 3


def test_berezin_examples():
    assert berezin_symbol_rank1(0.0, 4) == pytest.approx(1.0, abs=1e-15)
    for lam in (0.3, 2.0, 7.5):
        assert berezin_symbol_rank1(lam, 4) == berezin_symbol_rank1(-lam, 4)


def test_berezin_monotone_decay():
    grid = np.linspace(0, 20, 81)
    vals = [berezin_symbol_rank1(x, 4) for x in grid]
    assert all(b > a for a, b in zip(vals[1:], vals[:-1]))


@pytest.mark.parametrize("nu", [F(2), F(4), F(7, 2)])
def test_berezin_matches_closed_form(nu):
    # Independent oracle: Fourier transform of sech^nu in Gamma form.
    for lam in (0.1, 1.0, 3.0, 10.0, 25.0):
        got = berezin_symbol_rank1(lam, nu, check_imag=True)
        assert rel(got, berezin_closed_form_rank1(lam, nu)) < 1e-10


def test_berezin_rejects_other_schemes():
    with pytest.raises(ValueError):
        berezin_symbol_rank1(1.0, 4, RadialScheme("polar-jacobi"))


def test_gram_branching_parity_and_orthogonality():
    g = gram_branching_rank1(4, 3)
    n = g.normalize()
    assert np.allclose(np.diag(n.entries), 1.0)
    assert abs(n.entries[0, 1]) < 1e-10
    assert n.max_offdiag() < 1e-4
    assert g.details["tail_over_min_diag"] < 1e-3


def test_gram_branching_diagonal_closed_form():
    # Squared norms of Meixner-Pollaczek polynomials with this weight are
    # proportional to (nu)_n / n!; check ratios.
    g = gram_branching_rank1(4, 3)
    d = np.diag(g.entries)
    expected = [math.gamma(4 + k) / math.gamma(4) / math.factorial(k) for k in range(4)]
    assert np.allclose(d / d[0], expected, rtol=1e-8)
