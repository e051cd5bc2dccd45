"""How the curvature-dependent eigenvalue bound is put together.

For a closed embedded minimal hypersurface in S^(n+1) with max ||A||
below `lam`, the first nonzero Laplace eigenvalue satisfies

    lambda_1 >= n/2 + a_n / (lam**6 + b_n).

This script walks the whole constant chain for n = 2: the slack
parameters (eps, beta), the derived collar widths, the guaranteed
constants (a_n, b_n) with their closed-form floors, and finally the
bound as a function of the curvature level.
"""

import math

import numpy as np

from sphere_spectra import (
    arctan_cubed_factor, build_parameter_chain, compute_bound_constants,
    default_slack, eigenvalue_lower_bound,
)

n = 2
bc = compute_bound_constants(n)
print(f"dimension n = {n}")
print(f"  a_n = {bc.a_n:.8e}   (floor  (n-1) n^2 / 32000 = {bc.a_floor:.4e})")
print(f"  b_n = {bc.b_n:.8e}   (ceiling     5 n^2 / 216 = {bc.b_ceiling:.4e})")
print(f"  shared factor n^(3/2) atan(1/(3 sqrt n))^3 = "
      f"{arctan_cubed_factor(n):.8f}  (window [0.035, {1 / 27:.6f}])")

eps, beta = default_slack(n)
print(f"\nslack parameters: eps = sqrt(n)/3 = {eps:.6f}, "
      f"beta = sqrt(n)/20 = {beta:.6f}")

print("\nparameter chain along a curvature grid (lam = max ||A||):")
print(f"{'lam':>8s} {'eps~':>10s} {'gamma':>10s} {'delta':>10s} "
      f"{'T':>10s} {'D_eps':>10s} {'bound':>12s}")
for lam in [math.sqrt(2.0), 2.0, 3.0, 5.0, 10.0]:
    chain = build_parameter_chain(n, lam)
    bound = eigenvalue_lower_bound(n, lam)
    print(f"{lam:8.4f} {chain.eps_tilde:10.6f} {chain.gamma:10.6f} "
          f"{chain.delta:10.6f} {chain.t_collar:10.6f} {chain.d_eps:10.6f} "
          f"{bound:12.9f}")

print("\nbelow lam = sqrt(n) only the totally geodesic equator survives, "
      "so the bound snaps to n:")
for lam in [0.0, 1.0, 1.41]:
    print(f"  lam = {lam:5.2f}  ->  bound = {eigenvalue_lower_bound(n, lam)}")

print("\nthe improvement over n/2 decays like lam^-6 but never vanishes:")
for lam in np.logspace(0.2, 3, 6):
    gain = bc.a_n / (float(lam) ** 6 + bc.b_n)
    print(f"  lam = {lam:9.2f}  ->  bound - n/2 = {gain:.3e}")
