"""Constraint, rate and gradient kernels for the interpolating exclusion process.

The building blocks are the order-k neighbourhood constraints

    s_j(eta, k) = prod_{i in [-(k+1)+j, j], i not in {0,1}} eta(i),   1 <= j <= k+1,
    c_k(eta)    = sum_j s_j(eta, k),                  c_0 == 1,

evaluated edge-locally (the edge is {0, 1}).  The interpolating constraint
combines them on the flipped configuration,

    C_m(eta) = sum_{k=1}^{ell} binom(m, k) (-1)**(k-1) c_{k-1}(flip(eta)),

and the jump rate is ``C_m`` times the exclusion factor ``a`` (one particle on
the edge).  ``C_m`` only depends on the positions of the first particles
flanking the edge, which is what makes the O(1) gap-table lookup possible:
``interp_constraint`` goes through the table, while ``interp_constraint_direct``
re-derives the value from the k-sum and stays available as an independent
cross-check.

Gap-pair bookkeeping.  Scans return flanking-particle *positions* (-x0 and
x1), as produced by :func:`powergas.lattice.scan_gaps`.  The rate table is
stored against the symmetric *distance* pair (x0, x1 - 1): reflecting the
lattice through the edge centre swaps the two distances and leaves the
constraint invariant, so the stored table is exactly symmetric.
"""

from __future__ import annotations

import numpy as np

from .binom import BinomialTable, binom_coeffs, build_table
from .errors import NegativeRate, WindowTooSmall
from .lattice import Configuration, GapPair, flip, scan_gaps, translate

__all__ = [
    "s_j",
    "c_k",
    "a_factor",
    "c_k_from_gaps",
    "h_k",
    "RateKernel",
    "build_gap_table",
    "interp_constraint",
    "interp_constraint_direct",
    "interp_rate",
    "h_interp",
    "check_up_speed",
    "check_r_seq",
    "check_m_mono",
    "check_m_mono2",
    "check_bounds",
]


# ---------------------------------------------------------------------------
# integer kernels of the order-k family
# ---------------------------------------------------------------------------

def s_j(cfg: Configuration, edge: int, k: int, j: int) -> int:
    """Single window product of order k, edge-local around {edge, edge+1}."""
    if not 1 <= j <= k + 1:
        raise ValueError(f"j must be in [1, {k + 1}], got {j}")
    if cfg.n < 4:
        raise WindowTooSmall("need at least 4 sites")
    occ = cfg.occ
    n = cfg.n
    p = 1
    for i in range(-(k + 1) + j, j + 1):
        if i == 0 or i == 1:
            continue
        p *= occ[(edge + i) % n]
        if not p:
            return 0
    return int(p)


def c_k(cfg: Configuration, edge: int, k: int) -> int:
    """Order-k constraint: number of admissible windows, in [0, k+1].

    Windows wider than the torus wrap around; repeated sites multiply
    idempotently, so the value still counts windows of fully occupied sites.
    """
    if k == 0:
        return 1
    return sum(s_j(cfg, edge, k, j) for j in range(1, k + 2))


def a_factor(cfg: Configuration, edge: int) -> int:
    """Exclusion factor: 1 iff exactly one of the edge sites is occupied."""
    return cfg[edge] ^ cfg[edge + 1]


def c_k_from_gaps(k: int, gaps: GapPair) -> int:
    """Order-k constraint of the *flipped* configuration from particle gaps.

    For a configuration whose first flanking particles sit at -x0 and x1, the
    flipped configuration is fully occupied strictly between them, and the
    number of admissible windows has the closed form below.  Saturated gaps
    (at cap >= k+2) give the same count as any larger gap.
    """
    if k == 0:
        return 1
    return max(0, min(k + 1, gaps.x1 - 1) - max(1, k + 2 - gaps.x0) + 1)


def h_k(cfg: Configuration, edge: int, k: int, form: str = "telescoped") -> int:
    """Gradient potential of the order-k family, anchored at the edge.

    ``form='sum'`` evaluates the two-sum expression; ``form='telescoped'``
    evaluates the rearranged expression whose terms are localized window
    products.  The two agree identically; both are exposed so tests can pit
    them against each other.  Satisfies c_k(eta) (eta(1)-eta(0)) =
    h_k(translate(eta,1)) - h_k(eta).
    """
    occ = cfg.occ
    n = cfg.n

    def site(i):
        return int(occ[(edge + i) % n])

    if form == "sum":
        t1 = 0
        for j in range(1, k + 2):
            p = 1
            for i in range(j - (k + 1), j):
                p *= site(i)
                if not p:
                    break
            t1 += p
        t2 = 0
        for j in range(1, k + 1):
            p = 1
            for i in range(-(k + 1) + j, j + 1):
                if i == 0:
                    continue
                p *= site(i)
                if not p:
                    break
            t2 += p
        return t1 - t2
    if form == "telescoped":
        p = 1
        for i in range(0, k + 1):
            p *= site(i)
            if not p:
                break
        total = p
        for i in range(0, k):
            d = site(i) - site(i + 1)
            if d:
                total += d * sum(_s_j_shift(cfg, edge + i, k, j) for j in range(1, k - i + 1))
        return total
    raise ValueError(f"unknown form {form!r}")


def _s_j_shift(cfg: Configuration, edge: int, k: int, j: int) -> int:
    # s_j evaluated at a shifted anchor without building a translated copy
    occ = cfg.occ
    n = cfg.n
    p = 1
    for i in range(-(k + 1) + j, j + 1):
        if i == 0 or i == 1:
            continue
        p *= occ[(edge + i) % n]
        if not p:
            return 0
    return int(p)


# ---------------------------------------------------------------------------
# interpolating kernel
# ---------------------------------------------------------------------------

def build_gap_table(m: float, ell: int, size: int | None = None) -> np.ndarray:
    """Rate-constraint table indexed by flanking-particle distances.

    ``table[d0, d1]`` is the interpolating constraint on the class of
    configurations whose nearest particles sit ``d0`` sites left of site 0 and
    ``d1`` sites right of site 1 (positions -d0 and 1+d1).  Valid indices are
    1..size (default ``ell+1``); row/column 0 are NaN.  The table is symmetric
    because reflecting through the edge centre swaps the distances.
    """
    if size is None:
        size = ell + 1
    coeffs = binom_coeffs(m, ell)
    x0 = np.arange(0, size + 1).reshape(-1, 1)  # left distance == left position
    x1 = np.arange(0, size + 1).reshape(1, -1) + 1  # right position = distance + 1
    table = np.full((size + 1, size + 1), coeffs[1])  # order-0 constraint is 1
    for k in range(2, ell + 1):
        kk = k - 1
        cnt = np.minimum(kk + 1, x1 - 1) - np.maximum(1, kk + 2 - x0) + 1
        np.maximum(cnt, 0, out=cnt)
        table += coeffs[k] * (-1.0) ** (k - 1) * cnt
    table[0, :] = np.nan
    table[:, 0] = np.nan
    return table


class RateKernel:
    """Immutable evaluator bundle for one (m, ell) pair.

    Exponents m in (0, 2] give nonnegative rates; m in (2, 3) is accepted in
    diagnostic mode, where negative constraint values are reported instead of
    raised.
    """

    def __init__(self, m: float, ell: int):
        if not 0 < m <= 3:
            raise ValueError(f"exponent must lie in (0, 3], got {m}")
        self.m = float(m)
        self.ell = int(ell)
        self.diagnostic = m > 2
        self.table: BinomialTable = build_table(m, ell)
        self.gap_rate = build_gap_table(m, ell)
        self.gap_rate.setflags(write=False)
        self.cap = ell + 1

    def lookup(self, gaps: GapPair) -> float:
        d0 = min(gaps.x0, self.ell + 1)
        d1 = min(gaps.x1 - 1, self.ell + 1)
        if d1 < 1:  # right scan saturated below reach; treat as full gap
            d1 = self.ell + 1
        return float(self.gap_rate[d0, d1])

    def __repr__(self):
        return f"RateKernel(m={self.m}, ell={self.ell})"


def interp_constraint(cfg: Configuration, edge: int, kernel: RateKernel) -> float:
    """Interpolating constraint at the edge, via the gap-table lookup."""
    gaps = scan_gaps(cfg, edge, kernel.cap)
    value = kernel.lookup(gaps)
    if value < 0 and not kernel.diagnostic:
        raise NegativeRate(f"constraint {value} < 0 at edge {edge} (m={kernel.m})")
    return value


def interp_constraint_direct(cfg: Configuration, edge: int, m: float, ell: int) -> float:
    """Interpolating constraint via the explicit k-sum on the flipped config.

    Independent of the gap table; kept as the slow cross-checking route.
    """
    flipped = flip(cfg)
    coeffs = binom_coeffs(m, ell)
    return float(
        sum(coeffs[k] * (-1.0) ** (k - 1) * c_k(flipped, edge, k - 1) for k in range(1, ell + 1))
    )


def interp_rate(cfg: Configuration, edge: int, kernel: RateKernel) -> float:
    """Jump rate across the edge: constraint times the exclusion factor."""
    if not a_factor(cfg, edge):
        return 0.0
    return interp_constraint(cfg, edge, kernel)


def h_interp(cfg: Configuration, edge: int, kernel: RateKernel) -> float:
    """Gradient potential of the interpolating model at the edge.

    Combines the order-k potentials of the flipped configuration so that
    ``C_m(eta) (eta(1)-eta(0)) = h(translate(eta,1)) - h(eta)`` holds exactly.
    """
    flipped = flip(cfg)
    total = 0.0
    for k in range(1, kernel.ell + 1):
        total += kernel.table.coeffs[k] * (-1.0) ** k * h_k(flipped, edge, k - 1)
    return total


# ---------------------------------------------------------------------------
# validators for the stated bounds and monotonicity properties
# ---------------------------------------------------------------------------

def check_up_speed(cfg: Configuration, k: int, ell: int):
    """Window-sum bound: sum_{n=1}^{ell} c_k a (tau_n eta) <= 2 (ell + k)."""
    if ell < k:
        raise ValueError("bound requires ell >= k")
    total = sum(c_k(cfg, x, k) * a_factor(cfg, x) for x in range(1, ell + 1))
    ok = total <= 2 * (ell + k)
    return ok, None if ok else {"sum": total, "bound": 2 * (ell + k)}


def check_r_seq(cfg: Configuration, edge: int, kmax: int):
    """c_{k-1}/k is non-increasing in k."""
    prev = c_k(cfg, edge, 0) / 1.0
    for k in range(2, kmax + 1):
        cur = c_k(cfg, edge, k - 1) / k
        if cur > prev + 1e-12:
            return False, {"k": k, "prev": prev, "cur": cur}
        prev = cur
    return True, None


def check_m_mono(cfg: Configuration, edge: int, m: float, kmax: int):
    """|binom(m,k)| c_{k-1}(flip) decreases until the constraint dies."""
    flipped = flip(cfg)
    coeffs = binom_coeffs(m, kmax)
    prev = None
    for k in range(2, kmax + 1):
        ck = c_k(flipped, edge, k - 1)
        val = abs(coeffs[k]) * ck
        if prev is not None:
            if ck > 0 and not val < prev + 1e-12:
                return False, {"k": k, "prev": prev, "cur": val}
            if ck == 0:
                break
        prev = val
    return True, None


def check_m_mono2(cfg: Configuration, edge: int, m_grid, ell: int):
    """C_m / m is non-increasing along an increasing m grid in (0, 2]."""
    values = [
        interp_constraint_direct(cfg, edge, m, ell) / m for m in m_grid
    ]
    for i in range(1, len(values)):
        if values[i] > values[i - 1] + 1e-12:
            return False, {"index": i, "m": m_grid[i], "prev": values[i - 1], "cur": values[i]}
    return True, None


def check_bounds(cfg: Configuration, edge: int, kernel: RateKernel):
    """Regime-dependent rate bracket for m in (0, 2) away from 1."""
    m, ell = kernel.m, kernel.ell
    a = a_factor(cfg, edge)
    rate = interp_rate(cfg, edge, kernel)
    coeffs = kernel.table.coeffs
    if m < 1:
        lower = m * a
        upper = sum(abs(coeffs[k]) * k for k in range(1, ell + 1))
    elif m < 2:
        c1 = c_k(cfg, edge, 1)
        lower = m * kernel.table.delta * a + coeffs[2] * c1 * a
        upper = m * a
    else:
        return True, None
    ok = lower - 1e-12 <= rate <= upper + 1e-12
    return ok, None if ok else {"rate": rate, "lower": lower, "upper": upper}
