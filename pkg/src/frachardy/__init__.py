"""Numerical verification of a fractional Hardy inequality on convex sets.

The package computes every explicit constant of the bound, certifies the
pointwise inequalities behind it on millions of random tuples, estimates
the hypersingular integrals by importance-sampled Monte Carlo (with a
deterministic one-dimensional quadrature path), and runs end-to-end
verification campaigns of the main inequality, superharmonicity of the
distance function, the two seminorm limits, and the eigenvalue corollaries.
"""

from .constants import ConstantBundle, compute_bundle
from .functions import DistanceProfile, RadialBump, TensorBump
from .geometry import (Ball, Box, ConvexBody, HalfSpace, Params, Polytope, Slab,
                       body_from_json, contains, distance_to_boundary, inradius,
                       nearest_boundary_point)
from .quadrature import (IntegralEstimate, QuadratureSpec, expedient_lhs,
                         gagliardo_seminorm_p, grad_lp_norm_p, hardy_weighted_norm,
                         local_seminorm_p, lp_norm_p, truncated_nonlocal_operator)
from .verify import (BumpFamily, VerificationReport, eigenvalue_lower_bound,
                     eigenvalue_upper_bound, estimate_sharp_constant, hardy_quotient,
                     verify_asymptotics_s_to_0, verify_asymptotics_s_to_1,
                     verify_expedient, verify_hardy_campaign,
                     verify_halfspace_harmonicity, verify_superharmonicity)

__version__ = "0.1.0"
