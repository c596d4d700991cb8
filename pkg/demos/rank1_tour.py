"""Rank one, end to end.

At rank one the cone is the half line, psi_m(x) = x^m, and every object in the
package has a classical counterpart.  This script walks through them:

  1. the branching polynomials are the Meixner-Pollaczek polynomials,
  2. they satisfy a three-term recurrence and a difference equation,
  3. they are orthogonal against the Berezin weight b_nu(lambda),
  4. the Laguerre functions are orthogonal for the Riesz measure.

Run with ``python3 demos/rank1_tour.py``.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from conelab.branching import BranchingContext, branching_at_node, branching_poly, mp_poly, recurrence_residual
from conelab.params import make_params
from conelab.quadrature import berezin_closed_form_rank1, berezin_symbol_rank1, gram_branching_rank1, gram_laguerre, default_scheme

nu = Fraction(4)
params = make_params(1, 1)
ctx = BranchingContext(params, nu, degree_cap=6)

print("== values at a lattice node ==")
# Expanding (1-x)^(-nu) ((1+x)/(1-x))^m in powers of x gives p_n at s = m + nu/2.
vals = branching_at_node((1,), ctx)
print("source m=1:", [str(vals[(n,)]) for n in range(7)])

print("\n== interpolated polynomials in s = i*lambda ==")
for n in range(4):
    p = branching_poly((n,), ctx)
    same = p == mp_poly(n, nu)
    print(f"p_{n}(s) = {p.to_poly()}   equals Meixner-Pollaczek: {same}")

print("\n== exact identities ==")
print("recurrence residual zero for n <= 6:", all(recurrence_residual((n,), ctx).is_zero() for n in range(7)))

print("\n== Berezin weight ==")
for lam in (0.0, 1.0, 5.0, 20.0):
    b = berezin_symbol_rank1(lam, nu)
    print(f"b_nu({lam:>4}) = {b:.6e}   closed form {berezin_closed_form_rank1(lam, nu):.6e}")

print("\n== orthogonality ==")
g = gram_branching_rank1(nu, 6)
print(f"branching Gram: max normalized off-diagonal {g.normalize().max_offdiag():.2e}, cutoff L = {g.details['cutoff']}")
lg = gram_laguerre(nu, params, 5, default_scheme(params, 24)).normalize()
print(f"Laguerre Gram:  max normalized off-diagonal {lg.max_offdiag():.2e}")
np.set_printoptions(precision=2, suppress=True)
print(g.normalize().entries)
