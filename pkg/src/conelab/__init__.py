"""Special functions and exact identities on type-A symmetric cones."""
from .params import DomainParams, make_params, partition, partitions_up_to, rho, step
from .symalg import CayleyFactor, SymPoly, expand_cayley_factor, jack_psi, mul, to_jack_basis
from .gammacone import beta_cone, c_density, gindikin_gamma, pochhammer
from .coefficients import binom_step, c_coeff, gen_binom
from .branching import (
    BranchingContext,
    branching_at_node,
    branching_poly,
    mp_poly,
    verify_difference,
    verify_recurrence,
)
from .laguerre import ExpPoly, euler_apply, laguerre_fn, laguerre_poly, q_fn_eval, verify_euler_recursion

__version__ = "0.1.0"

__all__ = [
    "DomainParams", "make_params", "partition", "partitions_up_to", "rho", "step",
    "CayleyFactor", "SymPoly", "expand_cayley_factor", "jack_psi", "mul", "to_jack_basis",
    "beta_cone", "c_density", "gindikin_gamma", "pochhammer",
    "binom_step", "c_coeff", "gen_binom",
    "BranchingContext", "branching_at_node", "branching_poly", "mp_poly",
    "verify_difference", "verify_recurrence",
    "ExpPoly", "euler_apply", "laguerre_fn", "laguerre_poly", "q_fn_eval", "verify_euler_recursion",
]
