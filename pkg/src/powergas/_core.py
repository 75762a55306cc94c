"""Compiled inner loops for the event-driven simulator.

Plain-array functions only; no objects cross into numba.  The Fenwick tree is
1-based with tree[0] unused.  Edge rates exclude the diffusive N**2 speed-up,
which re-enters through the time conversion factor in ``run_core``.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def fenwick_build(rates, tree):
    n = rates.shape[0]
    tree[:] = 0.0
    for i in range(1, n + 1):
        tree[i] += rates[i - 1]
        j = i + (i & (-i))
        if j <= n:
            tree[j] += tree[i]


@njit(cache=True)
def fenwick_add(tree, idx, delta):
    i = idx + 1
    n = tree.shape[0] - 1
    while i <= n:
        tree[i] += delta
        i += i & (-i)


@njit(cache=True)
def fenwick_total(tree):
    i = tree.shape[0] - 1
    s = 0.0
    while i > 0:
        s += tree[i]
        i -= i & (-i)
    return s


@njit(cache=True)
def fenwick_find(tree, top_bit, u):
    """Largest index with prefix sum <= u; returns the 0-based edge to fire."""
    idx = 0
    bit = top_bit
    n = tree.shape[0] - 1
    while bit:
        nxt = idx + bit
        if nxt <= n and tree[nxt] <= u:
            u -= tree[nxt]
            idx = nxt
        bit >>= 1
    return idx  # prefix(idx) <= u, so edge idx (0-based) covers u


@njit(cache=True, inline="always")
def edge_rate(occ, x, table, ell):
    """Bare jump rate across edge {x, x+1}: gap-table value times exclusion."""
    n = occ.shape[0]
    xp = x + 1
    if xp == n:
        xp = 0
    if occ[x] == occ[xp]:
        return 0.0
    cap = ell + 1
    d0 = cap
    s = x
    for d in range(1, cap):
        s -= 1
        if s < 0:
            s += n
        if occ[s]:
            d0 = d
            break
    d1 = cap
    s = xp
    for d in range(1, cap):
        s += 1
        if s >= n:
            s -= n
        if occ[s]:
            d1 = d
            break
    return table[d0, d1]


@njit(cache=True)
def recompute_rates(occ, table, ell, out):
    for y in range(occ.shape[0]):
        out[y] = edge_rate(occ, y, table, ell)


@njit(cache=True)
def run_core(occ, rates, tree, table, ell, t0, sample_times, out_snaps, seed,
             debug_every, tfactor):
    """Advance the chain until every sample time is snapshotted.

    Returns (final time, events fired, max refresh discrepancy seen by the
    periodic full-recompute check; -1.0 when the check never ran).
    """
    np.random.seed(seed)
    n = occ.shape[0]
    top_bit = 1
    while top_bit * 2 <= n:
        top_bit *= 2
    fenwick_build(rates, tree)
    t = t0
    events = 0
    max_err = -1.0
    si = 0
    n_samples = sample_times.shape[0]
    while si < n_samples:
        total = fenwick_total(tree)
        if total <= 0.0:
            # frozen chain: the state never changes again, so remaining
            # snapshots are all the current configuration
            while si < n_samples:
                out_snaps[si] = occ
                si += 1
            break
        dt = np.random.exponential(1.0 / total) * tfactor
        tnext = t + dt
        while si < n_samples and sample_times[si] <= tnext:
            out_snaps[si] = occ
            si += 1
        t = tnext
        if si >= n_samples:
            break
        u = np.random.random() * total
        x = fenwick_find(tree, top_bit, u)
        if x >= n or rates[x] <= 0.0:
            # stale tree from float drift; resync and redraw once
            fenwick_build(rates, tree)
            total = fenwick_total(tree)
            if total <= 0.0:
                continue
            u = np.random.random() * total
            x = fenwick_find(tree, top_bit, u)
            if x >= n or rates[x] <= 0.0:
                continue
        xp = x + 1
        if xp == n:
            xp = 0
        tmp = occ[x]
        occ[x] = occ[xp]
        occ[xp] = tmp
        span = 2 * ell + 3
        if span > n:
            span = n
        lo = x - (ell + 1)
        for off in range(span):
            y = (lo + off) % n
            new = edge_rate(occ, y, table, ell)
            if new != rates[y]:
                fenwick_add(tree, y, new - rates[y])
                rates[y] = new
        events += 1
        if debug_every > 0 and events % debug_every == 0:
            err = 0.0
            for y in range(n):
                e = abs(edge_rate(occ, y, table, ell) - rates[y])
                if e > err:
                    err = e
            if err > max_err:
                max_err = err
            fenwick_build(rates, tree)
        elif (events & 0xFFFFF) == 0:
            fenwick_build(rates, tree)
    return t, events, max_err
