"""Spherical polynomials as Haar averages.

psi_m(x) is the average of the conical function Delta_m over the orbit
{u x u*}.  The exact Jack construction and a Monte-Carlo average over Haar
orthogonal or unitary matrices should agree within sampling error.  All rows at one point share the same Haar samples,
so their z-scores move together.

Run with ``python3 demos/haar_check.py``.
"""
from __future__ import annotations

import numpy as np

from conelab.jordan import backend_for, jack_at, psi_mc, random_cone_point
from conelab.params import fmt_partition, make_params, partitions_up_to

rng = np.random.default_rng(7)
for r, a in [(2, 1), (2, 2), (3, 1)]:
    params = make_params(r, a)
    x = random_cone_point(rng, r, backend_for(a))
    print(f"r={r} a={a} eigenvalues {np.round(x.eigenvalues, 3)}")
    for m in partitions_up_to(r, 3)[1:]:
        est = psi_mc(m, x, 50_000, seed=1)
        exact = jack_at(m, x, params)
        z = (est.mean - exact) / est.std_error if est.std_error > 1e-12 else 0.0
        print(f"  m=({fmt_partition(m):>5})  exact {exact:10.5f}  mc {est.mean:10.5f} +- {est.std_error:.1e}  z={z:+.2f}")
