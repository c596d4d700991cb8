"""Which coefficient makes the Euler-operator recursion an identity?

The recursion for the Laguerre functions l_m has a down-step factor
(m_j - 1 + nu - (j-1) kappa).  Two readings of kappa are plausible, a/2 and
d/2, and the linear factor could sit on the down-step or up-step term.  At
rank one none of this matters.  From rank two on, the exact residual decides.

Run with ``python3 demos/euler_variants.py``.
"""
from __future__ import annotations

from fractions import Fraction

from conelab.laguerre import euler_residual
from conelab.params import make_params, partitions_up_to

F = Fraction
cases = [(1, 1), (2, 1), (2, 2), (3, 1)]
variants = [(v, p) for p in ("down", "up") for v in ("a-half", "d-half")]

print(f"{'(r,a)':<8}" + "".join(f"{v + '/' + p:>18}" for v, p in variants))
for r, a in cases:
    params = make_params(r, a)
    row = []
    for variant, placement in variants:
        bad = [
            m
            for nu in (F(3), F(4), F(9, 2))
            for m in partitions_up_to(r, 3)
            if not euler_residual(m, nu, params, variant, placement).is_zero()
        ]
        row.append("identity" if not bad else f"fails ({len(bad)})")
    print(f"{str((r, a)):<8}" + "".join(f"{x:>18}" for x in row))

# m = (1, 0) never takes a j = 2 down-step, so it cannot tell the variants apart.
params = make_params(2, 1)
print("\nm=(1,0), r=2:", {v: euler_residual((1, 0), 4, params, v).is_zero() for v in ("a-half", "d-half")})
