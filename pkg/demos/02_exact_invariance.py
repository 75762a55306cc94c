"""Exact finite-torus facts: invariant measures, irreducibility, expectations.

Everything here is an exhaustive enumeration on small rings, so the printed
residuals are zero up to rounding.
"""

from powergas.binom import truncated_diffusion
from powergas.exactgen import (ProductMeasure, check_irreducibility,
                               check_stationarity, expect_interp_constraint_exact)
from powergas.kernels import RateKernel

print("stationarity of Bernoulli product measures on the 8-torus")
for m in (0.5, 1.5):
    for rho in (0.3, 0.7):
        res = check_stationarity(ProductMeasure(rho, 8), RateKernel(m, 4),
                                 n_random=20, seed=0)
        print(f"  m={m}  rho={rho}: max residual {res:.2e}")

print("\nirreducibility of the fixed-particle-number hyperplanes (N=9, 3 particles)")
print("  interpolating rates:", check_irreducibility(9, 3, kernel=RateKernel(1.5, 4)))
print("  bare order-1 rates :", check_irreducibility(9, 3, pmm_order=1),
      " (False = frozen states exist, e.g. particles at 0, 3, 6)")

print("\nexpected constraint under density 0.4 equals the truncated diffusivity")
kern = RateKernel(1.5, 6)
enum = expect_interp_constraint_exact(12, 0.4, kern)
closed = truncated_diffusion(1.5, 6, 0.4)
print(f"  enumeration over 2^12 states: {enum:.12f}")
print(f"  closed form                 : {closed:.12f}")
