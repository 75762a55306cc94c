"""Generalized binomial coefficients and the series they generate.

Everything downstream is driven by the weights ``binom(m, k) = (m)_k / k!``
with a real exponent ``m``: they combine the constraint kernels into jump
rates, and the same alternating series

    m * rho**(m-1) = sum_{k>=1} binom(m, k) (-1)**(k-1) k (1-rho)**(k-1)

is the diffusivity the lattice dynamics is built to reproduce.  Coefficients
are evaluated with the multiplicative recurrence ``b_{k+1} = b_k (m-k)/(k+1)``,
which is stable, overflow-free and returns exact zeros once ``k`` passes an
integer exponent.  The Gamma-function representation appears only in
:func:`gamma_sandwich`, used to bound magnitudes in validation code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidTruncation

__all__ = [
    "gen_binom",
    "binom_coeffs",
    "BinomialTable",
    "build_table",
    "truncated_diffusion",
    "truncated_flux",
    "gamma_sandwich",
    "abs_tail_mass",
]


def gen_binom(m: float, k: int) -> float:
    """Generalized binomial coefficient binom(m, k) for real m, integer k >= 0."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    value = 1.0
    for j in range(k):
        value *= (m - j) / (j + 1)
    return value


def binom_coeffs(m: float, kmax: int) -> np.ndarray:
    """Array of binom(m, k) for k = 0..kmax via the multiplicative recurrence."""
    out = np.empty(kmax + 1)
    out[0] = 1.0
    for k in range(kmax):
        out[k + 1] = out[k] * (m - k) / (k + 1)
    return out


@dataclass(frozen=True)
class BinomialTable:
    """Frozen coefficient table for one (m, ell) pair.

    ``coeffs[k]`` holds binom(m, k) for k = 0..ell.  ``delta`` is the absolute
    tail mass ``sum_{k>=ell} |binom(m-1, k)|``: a number in (0, 1) for
    m in (1, 2), exactly 0 for integer m in {1, 2}, and ``inf`` for m in (0, 1)
    where the tail diverges.  Slow-regime rate bounds consume ``delta``;
    fast-regime code must never read it.
    """

    m: float
    ell: int
    coeffs: np.ndarray
    delta: float

    def __post_init__(self):
        self.coeffs.setflags(write=False)

    def signed_weight(self, k: int) -> float:
        """The combination weight binom(m, k) * (-1)**(k-1) for k >= 1."""
        return self.coeffs[k] * (-1.0) ** (k - 1)


def _tail_mass(m: float, ell: int) -> float:
    if m <= 0:
        raise ValueError(f"m must be positive, got {m}")
    if m == math.floor(m):
        # binom(m-1, k) vanishes for k > m-1, so the tail is exactly zero
        # once ell exceeds the integer exponent (ell >= 2 covers m in {1, 2}).
        return 0.0 if ell > m - 1 else math.inf
    if m < 1:
        return math.inf
    if m < 2:
        # sum_{k>=1} |binom(m-1, k)| = 1 for m-1 in (0, 1), so the tail is a
        # complement of a finite partial sum.
        partial = 0.0
        b = 1.0
        for k in range(1, ell):
            b *= ((m - 1) - (k - 1)) / k
            partial += abs(b)
        return 1.0 - partial
    # Diagnostic exponents m > 2: no closed form, sum the tail directly
    # (terms decay like k**-m with m > 2, so this converges quickly).
    b = gen_binom(m - 1, ell)
    total = abs(b)
    k = ell
    while abs(b) > 1e-18:
        b *= ((m - 1) - k) / (k + 1)
        total += abs(b)
        k += 1
    return total


def build_table(m: float, ell: int) -> BinomialTable:
    """Build the coefficient table used by rate kernels and bounds."""
    if ell < 2:
        raise InvalidTruncation(f"truncation order must be >= 2, got {ell}")
    return BinomialTable(m=m, ell=ell, coeffs=binom_coeffs(m, ell), delta=_tail_mass(m, ell))


def abs_tail_mass(m: float, ell: int) -> float:
    """Tail mass sum_{k>=ell} |binom(m-1, k)| (inf when divergent)."""
    return _tail_mass(m, ell)


def truncated_diffusion(m: float, ell: int, rho):
    """Partial sum sum_{k=1}^{ell} binom(m,k) (-1)**(k-1) k (1-rho)**(k-1).

    Converges to m * rho**(m-1) as ell grows, for rho in (0, 1].  Accepts a
    scalar or an array for rho.
    """
    if ell < 1:
        raise InvalidTruncation(f"need ell >= 1, got {ell}")
    q = np.asarray(1.0 - np.asarray(rho, dtype=float))
    total = np.zeros_like(q)
    qpow = np.ones_like(q)  # (1-rho)**(k-1)
    b = 1.0
    for k in range(1, ell + 1):
        b *= (m - (k - 1)) / k  # binom(m, k)
        total = total + b * (-1.0) ** (k - 1) * k * qpow
        qpow = qpow * q
    return total if total.ndim else float(total)


def truncated_flux(m: float, ell: int, rho):
    """Antiderivative of :func:`truncated_diffusion` vanishing at rho = 0.

    Equals sum_{k=1}^{ell} binom(m,k) (-1)**(k-1) (1 - (1-rho)**k) and tends
    to rho**m as ell grows.  This is the flux the truncated dynamics
    transports, hence the nonlinearity of the matching reference equation.
    """
    q = np.asarray(1.0 - np.asarray(rho, dtype=float))
    total = np.zeros_like(q)
    qpow = q.copy()  # (1-rho)**k
    b = 1.0
    for k in range(1, ell + 1):
        b *= (m - (k - 1)) / k
        total = total + b * (-1.0) ** (k - 1) * (1.0 - qpow)
        qpow = qpow * q
    return total if total.ndim else float(total)


def gamma_sandwich(m: float, k: int) -> tuple[float, float]:
    """Strict lower/upper bounds for |binom(m-1, k)|, valid for k >= 2, m > 0.

    Derived from the Gamma/Beta representation: the bracket is
    ``G(m)|sin(pi(k-m))| / (pi (k+1)**m)  <  |binom(m-1,k)|  <
    G(m)|sin(pi(k-m))| / (pi (k-m)**m)``.
    """
    if k < 2:
        raise ValueError("bounds hold for k >= 2 only")
    if k - m <= 0:
        raise ValueError("upper bound needs k > m")
    s = abs(math.sin(math.pi * (k - m)))
    g = math.gamma(m)
    lower = g * s / (math.pi * (k + 1) ** m)
    upper = g * s / (math.pi * (k - m) ** m)
    return lower, upper
