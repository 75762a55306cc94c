"""Exclusion process with binomial-weighted kinetic constraints.

The jump rate across an edge combines neighbourhood constraints of every
order with generalized binomial weights, so a single exponent m in (0, 2]
deforms the simple exclusion process (m = 1) continuously into slow (m > 1)
or fast (m < 1) diffusion; the rescaled particle density approaches the
solution of d_t rho = d_uu rho**m.  The package bundles the rate kernels,
exact small-torus oracles, an event-driven simulator and a matching PDE
reference solver.
"""

__version__ = "0.1.0"

from .binom import (BinomialTable, build_table, gen_binom, truncated_diffusion,
                    truncated_flux)
from .kernels import (RateKernel, build_gap_table, c_k, c_k_from_gaps, h_interp,
                      h_k, interp_constraint, interp_rate, s_j)
from .kmc import EmpiricalMeasure, SimState, default_ell, init, run, step
from .lattice import Configuration, GapPair, exchange, flip, scan_gaps, translate
from .pde import PdeGrid, make_grid, solve, step_pde, weak_residual

__all__ = [
    "__version__",
    "BinomialTable", "build_table", "gen_binom", "truncated_diffusion",
    "truncated_flux",
    "RateKernel", "build_gap_table", "c_k", "c_k_from_gaps", "h_interp", "h_k",
    "interp_constraint", "interp_rate", "s_j",
    "EmpiricalMeasure", "SimState", "default_ell", "init", "run", "step",
    "Configuration", "GapPair", "exchange", "flip", "scan_gaps", "translate",
    "PdeGrid", "make_grid", "solve", "step_pde", "weak_residual",
]
