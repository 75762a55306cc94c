"""Exact small-torus oracles: generator application, stationarity, expectations.

Everything here enumerates the full configuration space (2**n states), so it
is the ground truth against which the fast paths are validated.  Configurations
are encoded as integers with bit x holding the occupation of site x.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .binom import binom_coeffs, truncated_diffusion
from .kernels import RateKernel, a_factor, c_k, interp_rate
from .lattice import Configuration, flip

__all__ = [
    "ProductMeasure",
    "all_configurations",
    "transition_list",
    "apply_generator",
    "check_stationarity",
    "random_function_suite",
    "check_irreducibility",
    "expect_constraint",
    "expect_constraint_exact",
    "expect_interp_constraint",
    "expect_interp_constraint_exact",
    "sample_constraint_mc",
]

_MAX_ENUM = 20


def _config_from_bits(bits: int, n: int) -> Configuration:
    return Configuration([(bits >> x) & 1 for x in range(n)])


def all_configurations(n: int) -> list[Configuration]:
    if n > _MAX_ENUM:
        raise ValueError(f"refusing to enumerate 2**{n} configurations")
    return [_config_from_bits(b, n) for b in range(1 << n)]


@dataclass(frozen=True)
class ProductMeasure:
    """Bernoulli product measure with a constant or site-indexed density."""

    profile: float | np.ndarray
    n: int

    def site_probs(self) -> np.ndarray:
        p = np.asarray(self.profile, dtype=float)
        if p.ndim == 0:
            p = np.full(self.n, float(p))
        if p.size != self.n or np.any(p < 0) or np.any(p > 1):
            raise ValueError("profile must give one probability in [0,1] per site")
        return p

    def weights(self) -> np.ndarray:
        """Probability of every configuration, indexed by its bit encoding."""
        if self.n > _MAX_ENUM:
            raise ValueError("weights() is for exhaustive use only")
        p = self.site_probs()
        idx = np.arange(1 << self.n)
        out = np.ones(1 << self.n)
        for x in range(self.n):
            bit = (idx >> x) & 1
            out *= np.where(bit, p[x], 1 - p[x])
        return out


def transition_list(kernel: RateKernel, n: int):
    """All positive-rate transitions (state, target, rate) of the generator.

    The rate excludes the diffusive speed-up; it is the bare edge rate.
    """
    sources, targets, rates = [], [], []
    for bits in range(1 << n):
        cfg = _config_from_bits(bits, n)
        for x in range(n):
            if cfg[x] == cfg[x + 1]:
                continue
            r = interp_rate(cfg, x, kernel)
            if r != 0.0:
                swapped = bits ^ ((1 << x) | (1 << ((x + 1) % n)))
                sources.append(bits)
                targets.append(swapped)
                rates.append(r)
    return np.array(sources), np.array(targets), np.array(rates)


def apply_generator(f: Callable[[Configuration], float], cfg: Configuration,
                    kernel: RateKernel) -> float:
    """(L f)(eta) for a single configuration, rate function from the kernel."""
    total = 0.0
    for x in range(cfg.n):
        r = interp_rate(cfg, x, kernel)
        if r:
            swapped = cfg.occ.copy()
            swapped[x], swapped[(x + 1) % cfg.n] = swapped[(x + 1) % cfg.n], swapped[x]
            total += r * (f(Configuration(swapped)) - f(cfg))
    return total


def random_function_suite(n: int, count: int, seed: int = 0) -> list[np.ndarray]:
    """Test functions as vectors over configuration bit-codes.

    Random multilinear polynomials in at most 4 occupation variables, plus
    every two-site product; enough structure to expose sign and windowing
    errors while keeping exhaustive sums fast.
    """
    rng = np.random.default_rng(seed)
    idx = np.arange(1 << n)
    fs = []
    for _ in range(count):
        f = np.zeros(1 << n)
        for _ in range(rng.integers(2, 6)):
            support = rng.choice(n, size=rng.integers(1, 5), replace=False)
            term = np.ones(1 << n)
            for x in support:
                term = term * ((idx >> int(x)) & 1)
            f += rng.standard_normal() * term
        fs.append(f)
    for x in range(n):
        for y in range(x + 1, n):
            fs.append(((idx >> x) & 1) * ((idx >> y) & 1) * 1.0)
    return fs


def check_stationarity(measure: ProductMeasure, kernel: RateKernel,
                       functions: Sequence[np.ndarray] | None = None,
                       n_random: int = 20, seed: int = 0) -> float:
    """Max over the f-suite of |sum_eta nu(eta) (Lf)(eta)|.

    Zero (to rounding) certifies invariance of the product measure for the
    enumerated torus.
    """
    n = measure.n
    if functions is None:
        functions = random_function_suite(n, n_random, seed)
    nu = measure.weights()
    src, tgt, rate = transition_list(kernel, n)
    flow = nu[src] * rate
    worst = 0.0
    for f in functions:
        residual = float(np.sum(flow * (f[tgt] - f[src])))
        worst = max(worst, abs(residual))
    return worst


def check_irreducibility(n: int, particles: int, kernel: RateKernel | None = None,
                         pmm_order: int | None = None) -> bool:
    """BFS over the fixed-particle-number hyperplane using positive-rate edges.

    With a kernel, edges follow the interpolating rates; with ``pmm_order=k``
    the bare order-k rates are used instead (that family has frozen states,
    which is exactly the contrast worth demonstrating).
    """
    if kernel is None and pmm_order is None:
        raise ValueError("provide a kernel or a pmm_order")
    states = [b for b in range(1 << n) if bin(b).count("1") == particles]
    if not states:
        return True
    start = states[0]
    seen = {start}
    stack = [start]
    while stack:
        bits = stack.pop()
        cfg = _config_from_bits(bits, n)
        for x in range(n):
            if cfg[x] == cfg[x + 1]:
                continue
            if pmm_order is not None:
                r = float(c_k(cfg, x, pmm_order) * a_factor(cfg, x))
            else:
                r = interp_rate(cfg, x, kernel)
            if r > 0:
                nxt = bits ^ ((1 << x) | (1 << ((x + 1) % n)))
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    return len(seen) == len(states)


def expect_constraint(rho: float, k: int) -> float:
    """Closed-form expectation of the order-k constraint under density rho."""
    return (k + 1) * rho**k


def expect_constraint_exact(n: int, rho: float, k: int) -> float:
    """Same expectation by exhaustive enumeration of the n-torus."""
    measure = ProductMeasure(rho, n)
    nu = measure.weights()
    return float(sum(w * c_k(_config_from_bits(b, n), 0, k)
                     for b, w in enumerate(nu)))


def expect_interp_constraint(rho: float, kernel: RateKernel) -> float:
    """Expectation of the interpolating constraint: the truncated diffusivity."""
    return float(truncated_diffusion(kernel.m, kernel.ell, rho))


def expect_interp_constraint_exact(n: int, rho: float, kernel: RateKernel) -> float:
    measure = ProductMeasure(rho, n)
    nu = measure.weights()
    coeffs = kernel.table.coeffs
    total = 0.0
    for b, w in enumerate(nu):
        cfg = flip(_config_from_bits(b, n))
        total += w * sum(coeffs[k] * (-1.0) ** (k - 1) * c_k(cfg, 0, k - 1)
                         for k in range(1, kernel.ell + 1))
    return float(total)


def sample_constraint_mc(rho: float, k: int, samples: int, seed: int = 0):
    """Monte Carlo estimate (mean, stderr) of E[c_k] from i.i.d. windows."""
    rng = np.random.default_rng(seed)
    width = 2 * (k + 1) + 1
    occ = (rng.random((samples, width)) < rho).astype(np.int64)
    centre = k + 1  # column of site 0
    vals = np.zeros(samples, dtype=np.int64)
    for j in range(1, k + 2):
        prod = np.ones(samples, dtype=np.int64)
        for i in range(-(k + 1) + j, j + 1):
            if i in (0, 1):
                continue
            prod *= occ[:, centre + i]
        vals += prod
    mean = float(vals.mean())
    stderr = float(vals.std(ddof=1) / np.sqrt(samples))
    return mean, stderr
