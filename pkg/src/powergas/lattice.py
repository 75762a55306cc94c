"""Occupation configurations on the discrete torus and their elementary moves.

Sites live on Z/NZ with values in {0, 1}.  All formulas elsewhere are written
edge-locally: an edge ``x`` means the pair of sites {x, x+1}, and scans
re-center so the edge under consideration sits at {0, 1}.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

__all__ = [
    "Configuration",
    "GapPair",
    "exchange",
    "flip",
    "translate",
    "scan_gaps",
]


class Configuration:
    """Binary occupation array on the torus of size n (value semantics)."""

    __slots__ = ("n", "occ")

    def __init__(self, occ):
        arr = np.ascontiguousarray(occ, dtype=np.uint8)
        if arr.ndim != 1 or arr.size < 4:
            raise ValueError("configuration must be a 1-D array with at least 4 sites")
        if not np.all((arr == 0) | (arr == 1)):
            raise ValueError("occupations must be 0 or 1")
        self.occ = arr
        self.n = arr.size

    @classmethod
    def from_string(cls, s: str) -> "Configuration":
        return cls(np.frombuffer(s.encode(), dtype=np.uint8) - ord("0"))

    def to_string(self) -> str:
        return "".join("1" if v else "0" for v in self.occ)

    def copy(self) -> "Configuration":
        return Configuration(self.occ.copy())

    @property
    def particle_count(self) -> int:
        return int(self.occ.sum())

    def __getitem__(self, x: int) -> int:
        return int(self.occ[x % self.n])

    def __eq__(self, other) -> bool:
        return isinstance(other, Configuration) and np.array_equal(self.occ, other.occ)

    def __hash__(self):
        return hash(self.occ.tobytes())

    def __repr__(self):
        return f"Configuration('{self.to_string()}')"


class GapPair(NamedTuple):
    """Positions of the first particles flanking the edge {0, 1}.

    ``x0``: the nearest occupied site strictly left of site 0 sits at ``-x0``.
    ``x1``: the nearest occupied site strictly right of site 1 sits at ``x1``
    (so ``x1 >= 2`` whenever unsaturated).  Both saturate at ``cap``;
    saturated values mean "at least this far", which constraint kernels of
    window radius below ``cap`` cannot distinguish from any larger gap.
    """

    x0: int
    x1: int
    cap: int


def exchange(cfg: Configuration, x: int) -> Configuration:
    """Swap the occupations across edge {x, x+1}; involutive, conserves mass."""
    out = cfg.occ.copy()
    n = cfg.n
    out[x % n], out[(x + 1) % n] = out[(x + 1) % n], out[x % n]
    return Configuration(out)


def flip(cfg: Configuration) -> Configuration:
    """Exchange particles and holes everywhere."""
    return Configuration(1 - cfg.occ)


def translate(cfg: Configuration, x: int) -> Configuration:
    """Shift the origin: the new configuration reads eta(x + y) at site y."""
    return Configuration(np.roll(cfg.occ, -x))


def scan_gaps(cfg: Configuration, edge: int, cap: int) -> GapPair:
    """Locate the first particles flanking edge {edge, edge+1}.

    Walks at most ``cap`` sites in each direction.  An empty window on either
    side returns the saturated value ``cap`` for that side (on a fully empty
    lattice both sides saturate; that is reported through saturation rather
    than as a failure).
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    occ = cfg.occ
    n = cfg.n
    x0 = cap
    for d in range(1, cap):
        if occ[(edge - d) % n]:
            x0 = d
            break
    x1 = cap
    for p in range(2, cap):
        if occ[(edge + p) % n]:
            x1 = p
            break
    return GapPair(x0, x1, cap)
