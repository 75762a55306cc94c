"""How the jump rates deform with the diffusion exponent.

The rate across an edge depends only on how far the nearest particles sit on
either side.  This script prints the corner of that gap-indexed table for a
few exponents, checks the two endpoint models, and shows the negative value
that appears once the exponent passes 2.
"""

import numpy as np

from powergas import Configuration, RateKernel, build_gap_table, interp_constraint

np.set_printoptions(precision=4, suppress=True)

for m in (0.5, 1.0, 1.5, 2.0):
    table = build_gap_table(m, ell=40)
    print(f"m = {m}: rate table corner (gap distances 1..6 each side)")
    print(table[1:7, 1:7])
    print()

print("At m = 1 every entry is 1 (free exclusion); at m = 2 only edges with an")
print("adjacent particle move, fastest with particles on both sides.")
print("Below m = 1 the rates grow as the neighbourhood empties out:")
table = build_gap_table(0.5, ell=40)
print("  m = 0.5 rate at gaps (1,1) vs (20,20):",
      table[1, 1].round(4), "vs", table[20, 20].round(4))

# beyond the supported exponent range the combination stops being a rate
occ = np.ones(16, dtype=np.uint8)
occ[0], occ[1], occ[2], occ[15] = 0, 1, 0, 0
value = interp_constraint(Configuration(occ), 0, RateKernel(2.5, 8))
print(f"\nm = 2.5 with both edge neighbours empty, rest full: constraint = {value}")
print("negative, so the construction is only a Markov generator for m <= 2")
