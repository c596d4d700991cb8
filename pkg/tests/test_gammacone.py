from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import beta as classical_beta
from scipy.special import gamma as G

from conelab.gammacone import DomainError, PoleError, beta_cone, c_density, gindikin_gamma, pochhammer
from conelab.params import make_params, partitions_up_to, step
from conelab.quadrature import RadialScheme, calibrate

F = Fraction


def test_gamma_rank1():
    assert gindikin_gamma(3, make_params(1, 1)).value.real == pytest.approx(2.0, rel=1e-14)


def test_gamma_rank2_value():
    val = gindikin_gamma((2, 2), make_params(2, 1)).value.real
    expected = math.sqrt(2 * math.pi) * G(2) * G(1.5)
    assert val == pytest.approx(expected, rel=1e-13)
    assert val == pytest.approx(2.2214, abs=1e-4)


def test_gamma_pole():
    g = gindikin_gamma((2, F(1, 2)), make_params(2, 1))
    assert g.is_pole and g.to_json() == "pole"
    with pytest.raises(PoleError):
        g.value


def test_gamma_complex_argument_and_phase():
    params = make_params(2, 2)
    lam = (complex(3, 0.7), complex(2.5, -0.4))
    expected = (2 * math.pi) ** 1 * complex(G(lam[0])) * complex(G(lam[1] - 1))
    got = gindikin_gamma(lam, params).value
    assert abs(got - expected) <= 1e-12 * abs(expected)


def test_gamma_scalar_means_constant_vector():
    params = make_params(3, 1)
    assert gindikin_gamma(F(7, 2), params) == gindikin_gamma([F(7, 2)] * 3, params)


@pytest.mark.parametrize("r,a", [(2, 1), (3, 2), (2, F(1, 2))])
def test_gamma_functional_equation(r, a):
    params = make_params(r, a)
    lam = [F(9, 2) + F(k, 3) for k in range(r)]
    shifted = [x + 1 for x in lam]
    ratio = (gindikin_gamma(shifted, params) / gindikin_gamma(lam, params)).value.real
    expected = math.prod(float(lam[j] - j * params.a / 2) for j in range(r))
    assert ratio == pytest.approx(expected, rel=1e-12)


def test_pochhammer_examples():
    params = make_params(2, 1)
    assert pochhammer(F(5, 3), (0, 0), params) == 1
    assert pochhammer(F(7, 2), (3,), make_params(1, 1)) == F(7, 2) * F(9, 2) * F(11, 2)
    assert pochhammer(2, (1, 1), params) == 3
    assert isinstance(pochhammer(2, (1, 1), params), Fraction)


def test_pochhammer_matches_gamma_ratio():
    params = make_params(2, 1)
    m = (3, 1)
    lam = [F(5, 2), F(5, 2)]
    via_gamma = (gindikin_gamma([x + mi for x, mi in zip(lam, m)], params) / gindikin_gamma(lam, params)).value.real
    assert float(pochhammer(lam, m, params)) == pytest.approx(via_gamma, rel=1e-12)


@pytest.mark.parametrize("r,a", [(1, 1), (2, 1), (2, 2), (3, 1), (3, F(3, 2))])
def test_pochhammer_step_ratio(r, a):
    params = make_params(r, a)
    lam = [F(11, 3) - F(k, 5) for k in range(r)]
    for m in partitions_up_to(r, 6):
        for j in range(1, r + 1):
            up = step(m, j, "up")
            if up is None:
                continue
            ratio = pochhammer(lam, up, params) / pochhammer(lam, m, params)
            assert ratio == lam[j - 1] - (j - 1) * params.a / 2 + m[j - 1]


def test_beta_classical():
    p1 = make_params(1, 1)
    assert beta_cone(2, 2, p1) == pytest.approx(1 / 6, rel=1e-13)
    assert beta_cone(F(1, 4), 2, p1) == pytest.approx(classical_beta(0.25, 2), rel=1e-13)
    assert beta_cone(F(1, 4), 2, p1) == pytest.approx(G(0.25) * G(2) / G(2.25), rel=1e-13)


def test_beta_domain():
    with pytest.raises(DomainError):
        beta_cone(F(1, 2), 2, make_params(2, 1))


@pytest.mark.parametrize("nu,mu", [(F(2), F(2)), (F(5, 2), F(3))])
def test_beta_rank2_matches_radial_integral(nu, mu):
    # Oracle: int_Omega Delta(x+e)^(-nu-mu) Delta(x)^(nu-d/r) dx by nested
    # adaptive quadrature in eigenvalue coordinates, mapped to [0,1]^2 by
    # x = u/(1-u); the radial constant comes from the Gamma calibration.
    params = make_params(2, 1)
    kappa = calibrate(params, nu, RadialScheme("polar-jacobi", 40)).calibration
    alpha = float(nu - params.d / params.r)
    s = float(nu + mu)

    def integrand(u2, u1):
        x1, x2 = u1 / (1 - u1), u2 / (1 - u2)
        jac = 1 / (1 - u1) ** 2 / (1 - u2) ** 2
        return ((1 + x1) * (1 + x2)) ** (-s) * (x1 * x2) ** alpha * abs(x1 - x2) * jac

    # Integrate the ordered region x1 > x2 (the radial rule counts each orbit once).
    val, err = integrate.dblquad(integrand, 0, 1, 0, lambda u1: u1, epsabs=0, epsrel=1e-10)
    assert kappa * val == pytest.approx(beta_cone(nu, mu, params), rel=1e-6)


def test_c_density_examples():
    assert c_density([0.3], make_params(1, 1)) == 1.0
    assert c_density([0.7, 0.7], make_params(2, 1)) == 0.0
    val = c_density([1.0, 0.0], make_params(2, 1))
    expected = abs(G(0.5) * G(1.0)) ** 2 / abs(complex(G(1j)) * complex(G(0.5 + 1j))) ** 2
    assert val == pytest.approx(expected, rel=1e-12)


lam3 = st.lists(st.floats(-5, 5, allow_nan=False), min_size=3, max_size=3)


@given(lam3)
def test_c_density_symmetric_and_even(lam):
    params = make_params(3, 1)
    base = c_density(lam, params)
    assert base >= 0
    perm = [lam[2], lam[0], lam[1]]
    assert c_density(perm, params) == pytest.approx(base, rel=1e-10, abs=1e-300)
    assert c_density([-x for x in lam], params) == pytest.approx(base, rel=1e-10, abs=1e-300)
