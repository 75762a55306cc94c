"""Event-driven continuous-time simulation under the diffusive time scale.

The chain fires edge exchanges with the kernel rates sped up by N**2; clocks
are kept in macroscopic units throughout (waiting times are divided by N**2 at
accumulation, so large N never eats the significand).  Per-edge rates live in
a float array mirrored by a Fenwick tree for O(log N) categorical sampling;
an exchange refreshes every edge within ell+1 of the event, the reach of the
constraint windows.

Reproducibility contract: a ``SimState`` seeded with the same integer produces
bit-identical trajectories and snapshots.  Replica ensembles should derive
per-replica seeds by spawning a ``numpy.random.SeedSequence``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _core
from .errors import InvalidProfile
from .kernels import RateKernel, interp_rate
from .lattice import Configuration

__all__ = ["SimState", "EmpiricalMeasure", "default_ell", "init", "step", "run"]


def default_ell(n: int) -> int:
    """Truncation order grown slowly with N: max(2, ceil(log2 N)).

    The tail mass then vanishes as N grows while the refresh window stays
    narrow; any 2 <= ell <= N may be passed explicitly instead.
    """
    return max(2, int(np.ceil(np.log2(n))))


@dataclass
class EmpiricalMeasure:
    """Box-averaged density profile at one sample time."""

    n: int
    box: int
    t: float
    values: np.ndarray

    @classmethod
    def from_occupations(cls, occ: np.ndarray, box: int, t: float) -> "EmpiricalMeasure":
        n = occ.size
        if box < 1 or n % box:
            raise ValueError(f"box width {box} must divide the lattice size {n}")
        values = occ.reshape(-1, box).mean(axis=1)
        return cls(n=n, box=box, t=t, values=values)

    @property
    def density(self) -> float:
        return float(self.values.mean())


@dataclass
class SimState:
    """Live simulator state; mutate only through :func:`step` and :func:`run`."""

    cfg: Configuration
    kernel: RateKernel
    rates: np.ndarray
    tree: np.ndarray
    t: float
    seed: int
    events: int = 0
    max_refresh_err: float = -1.0
    _event_seq: np.random.SeedSequence = field(repr=False, default=None)
    _py_rng: np.random.Generator = field(repr=False, default=None)

    @property
    def n(self) -> int:
        return self.cfg.n

    @property
    def total_rate(self) -> float:
        """Total macroscopic event rate, including the N**2 speed-up."""
        return float(self.rates.sum()) * self.n**2


def _profile_values(profile, n: int) -> np.ndarray:
    if callable(profile):
        vals = np.array([profile(x / n) for x in range(n)], dtype=float)
    else:
        vals = np.asarray(profile, dtype=float)
        if vals.ndim == 0:
            vals = np.full(n, float(vals))
    if vals.size != n:
        raise InvalidProfile(f"profile gave {vals.size} values for {n} sites")
    if np.any(vals < 0) or np.any(vals > 1):
        raise InvalidProfile("profile values must lie in [0, 1]")
    return vals


def init(profile, n: int, kernel: RateKernel, seed: int) -> SimState:
    """Draw a product-measure initial state and prepare all rate structures.

    ``profile`` is a density on [0,1) given as a callable, a scalar or an
    array of n site values; site x is occupied with probability
    profile(x / n), independently.
    """
    seq = np.random.SeedSequence(seed)
    init_seq, event_seq, py_seq = seq.spawn(3)
    rng = np.random.default_rng(init_seq)
    vals = _profile_values(profile, n)
    occ = (rng.random(n) < vals).astype(np.uint8)
    cfg = Configuration(occ)
    rates = np.zeros(n)
    _core.recompute_rates(cfg.occ, kernel.gap_rate, kernel.ell, rates)
    tree = np.zeros(n + 1)
    _core.fenwick_build(rates, tree)
    return SimState(cfg=cfg, kernel=kernel, rates=rates, tree=tree, t=0.0,
                    seed=seed, _event_seq=event_seq,
                    _py_rng=np.random.default_rng(py_seq))


def step(state: SimState):
    """Fire a single event (reference implementation, plain Python).

    Returns (edge, waiting time in macroscopic units), or None when the chain
    is frozen (total rate zero); the clock does not advance in that case.
    """
    rates = state.rates
    total = float(rates.sum())
    if total <= 0.0:
        return None
    n = state.n
    rng = state._py_rng
    dt = rng.exponential(1.0 / total) / n**2
    u = rng.random() * total
    edge = int(np.searchsorted(np.cumsum(rates), u, side="right"))
    edge = min(edge, n - 1)
    occ = state.cfg.occ
    xp = (edge + 1) % n
    occ[edge], occ[xp] = occ[xp], occ[edge]
    ell = state.kernel.ell
    span = min(2 * ell + 3, n)
    for off in range(span):
        y = (edge - (ell + 1) + off) % n
        rates[y] = interp_rate(state.cfg, y, state.kernel)
    _core.fenwick_build(rates, state.tree)
    state.t += dt
    state.events += 1
    return edge, dt


def run(state: SimState, sample_times, eps: float, debug_every: int = 0):
    """Advance to each macroscopic sample time and box-average the density.

    ``eps`` is the box fraction: boxes have width floor(eps * n) sites and
    tile the torus.  With ``debug_every > 0`` the compiled loop recomputes all
    rates from scratch every that many events and records the worst deviation
    from the incrementally maintained values in ``state.max_refresh_err``.
    Deterministic given the state's seed.  A frozen chain simply holds its
    configuration through the remaining sample times.
    """
    times = np.asarray(sample_times, dtype=float)
    if times.size == 0:
        return []
    if np.any(np.diff(times) < 0) or times[0] < state.t:
        raise ValueError("sample times must ascend and not precede the clock")
    box = int(eps * state.n)
    if box < 1:
        raise ValueError("eps * n must be at least one site")
    snaps = np.empty((times.size, state.n), dtype=np.uint8)
    seed32 = int(state._event_seq.spawn(1)[0].generate_state(1, np.uint32)[0])
    t, ev, err = _core.run_core(
        state.cfg.occ, state.rates, state.tree, state.kernel.gap_rate,
        state.kernel.ell, state.t, times, snaps, seed32, debug_every,
        1.0 / state.n**2,
    )
    state.t = float(t)
    state.events += int(ev)
    state.max_refresh_err = max(state.max_refresh_err, float(err))
    return [EmpiricalMeasure.from_occupations(snaps[i], box, float(times[i]))
            for i in range(times.size)]
