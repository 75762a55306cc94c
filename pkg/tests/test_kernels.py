"""Constraint/rate/gradient kernels against brute-force and closed-form oracles."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from powergas.binom import binom_coeffs
from powergas.errors import NegativeRate
from powergas.kernels import (RateKernel, a_factor, build_gap_table, c_k,
                              c_k_from_gaps, check_bounds, check_m_mono,
                              check_m_mono2, check_r_seq, check_up_speed,
                              h_interp, h_k, interp_constraint,
                              interp_constraint_direct, interp_rate, s_j)
from powergas.lattice import Configuration, GapPair, exchange, flip, scan_gaps, translate


def cfg_with(n, ones):
    occ = np.zeros(n, dtype=np.uint8)
    for x in ones:
        occ[x % n] = 1
    return Configuration(occ)


def brute_c_k(cfg, edge, k):
    # independent j-window product sum, written from the definition
    total = 0
    for j in range(1, k + 2):
        p = 1
        for i in range(-(k + 1) + j, j + 1):
            if i in (0, 1):
                continue
            p *= cfg[edge + i]
        total += p
    return total


# ---------------------------------------------------------------------------
# s_j / c_k
# ---------------------------------------------------------------------------

def test_s_j_small_orders():
    cfg = cfg_with(10, [9, 2, 5])  # eta(-1) = 1, eta(2) = 1
    assert s_j(cfg, 0, 1, 1) == cfg[-1]
    assert s_j(cfg, 0, 1, 2) == cfg[2]
    assert s_j(cfg, 0, 2, 2) == cfg[-1] * cfg[2]
    with pytest.raises(ValueError):
        s_j(cfg, 0, 1, 3)


def test_c_k_examples():
    cfg = cfg_with(10, [9, 2])
    assert c_k(cfg, 0, 1) == 2
    assert c_k(cfg, 0, 0) == 1
    rng = np.random.default_rng(3)
    for _ in range(300):
        cfg = Configuration(rng.integers(0, 2, 12).astype(np.uint8))
        edge = int(rng.integers(0, 12))
        assert c_k(cfg, edge, 3) == brute_c_k(cfg, edge, 3)


@settings(max_examples=200)
@given(st.lists(st.integers(0, 1), min_size=8, max_size=20), st.integers(0, 19),
       st.integers(0, 4))
def test_c_k_matches_brute_force(bits, edge, k):
    cfg = Configuration(bits + [0] * max(0, 8 - len(bits)))
    assert c_k(cfg, edge, k) == brute_c_k(cfg, edge, k)


# ---------------------------------------------------------------------------
# gaps -> constraint count
# ---------------------------------------------------------------------------

def representative(n, x0, x1, rng=None):
    """A member of the gap class: particles at -x0 and x1, empty strictly
    between (edge sites arbitrary), random far field."""
    occ = np.zeros(n, dtype=np.uint8)
    if rng is not None:
        occ[:] = rng.integers(0, 2, n)
    for x in range(-x0 + 1, x1):
        if x in (0, 1):
            continue
        occ[x % n] = 0
    occ[(-x0) % n] = 1
    occ[x1 % n] = 1
    return Configuration(occ)


def test_c_k_from_gaps_examples():
    assert c_k_from_gaps(1, GapPair(1, 2, 9)) == 0
    assert c_k_from_gaps(1, GapPair(2, 2, 9)) == 1
    assert c_k_from_gaps(0, GapPair(5, 3, 9)) == 1


def test_c_k_from_gaps_exhaustive_small_orders():
    rng = np.random.default_rng(11)
    for k in range(0, 5):
        for x0 in range(1, 7):
            for x1 in range(2, 8):
                cfg = representative(24, x0, x1, rng)
                assert c_k_from_gaps(k, GapPair(x0, x1, 9)) == c_k(flip(cfg), 0, k)


@settings(max_examples=300)
@given(st.lists(st.integers(0, 1), min_size=12, max_size=28), st.integers(0, 27),
       st.integers(0, 5))
def test_c_k_from_gaps_matches_scan_on_random_configs(bits, edge, k):
    bits = bits + [0] * max(0, 12 - len(bits))
    cfg = Configuration(bits)
    gaps = scan_gaps(cfg, edge, k + 2)
    assert c_k_from_gaps(k, gaps) == c_k(flip(cfg), edge, k)


# ---------------------------------------------------------------------------
# gradient potentials
# ---------------------------------------------------------------------------

def test_h_k_order_zero_is_the_origin_occupation():
    rng = np.random.default_rng(5)
    for _ in range(50):
        cfg = Configuration(rng.integers(0, 2, 9).astype(np.uint8))
        e = int(rng.integers(0, 9))
        assert h_k(cfg, e, 0, "sum") == cfg[e]
        assert h_k(cfg, e, 0, "telescoped") == cfg[e]


@pytest.mark.parametrize("k", range(0, 7))
def test_h_forms_agree_exhaustively(k):
    n = max(4, 2 * k + 3)
    for bits in itertools.product((0, 1), repeat=n):
        cfg = Configuration(np.array(bits, dtype=np.uint8))
        a = h_k(cfg, 0, k, "sum")
        b = h_k(cfg, 0, k, "telescoped")
        assert a == b
        assert abs(a) <= k + 1


@pytest.mark.parametrize("k", range(0, 7))
def test_gradient_identity_exhaustive(k):
    n = max(4, 2 * k + 4)
    for bits in itertools.product((0, 1), repeat=n):
        cfg = Configuration(np.array(bits, dtype=np.uint8))
        lhs = c_k(cfg, 0, k) * (cfg[1] - cfg[0])
        rhs = h_k(translate(cfg, 1), 0, k, "sum") - h_k(cfg, 0, k, "sum")
        assert lhs == rhs


def test_h_interp_gradient_identity_exhaustive():
    for ell in (2, 3, 4):
        kern = RateKernel(1.5, ell)
        for bits in range(1 << 12):
            cfg = Configuration([(bits >> x) & 1 for x in range(12)])
            lhs = interp_constraint(cfg, 0, kern) * (cfg[1] - cfg[0])
            rhs = h_interp(translate(cfg, 1), 0, kern) - h_interp(cfg, 0, kern)
            assert lhs == pytest.approx(rhs, abs=1e-12)


def test_h_interp_reduces_to_density_gradient_at_m_one():
    kern = RateKernel(1.0, 6)
    rng = np.random.default_rng(2)
    for _ in range(100):
        cfg = Configuration(rng.integers(0, 2, 16).astype(np.uint8))
        x = int(rng.integers(0, 16))
        lhs = h_interp(translate(cfg, 1), x, kern) - h_interp(cfg, x, kern)
        assert lhs == pytest.approx(cfg[x + 1] - cfg[x], abs=1e-12)


def test_h_interp_bounded_by_weighted_tail():
    kern = RateKernel(1.5, 10)
    bound = sum(abs(kern.table.coeffs[k]) * k for k in range(1, 11))
    rng = np.random.default_rng(4)
    for _ in range(200):
        cfg = Configuration(rng.integers(0, 2, 32).astype(np.uint8))
        assert abs(h_interp(cfg, int(rng.integers(0, 32)), kern)) <= bound + 1e-12


# ---------------------------------------------------------------------------
# interpolating constraint and rate
# ---------------------------------------------------------------------------

def test_interp_constraint_m1_is_one():
    kern = RateKernel(1.0, 12)
    rng = np.random.default_rng(0)
    for _ in range(200):
        cfg = Configuration(rng.integers(0, 2, 40).astype(np.uint8))
        assert interp_constraint(cfg, int(rng.integers(0, 40)), kern) == pytest.approx(
            1.0, abs=1e-12)


def test_interp_constraint_m2_is_neighbour_count():
    kern = RateKernel(2.0, 12)
    rng = np.random.default_rng(1)
    for _ in range(200):
        cfg = Configuration(rng.integers(0, 2, 40).astype(np.uint8))
        x = int(rng.integers(0, 40))
        assert interp_constraint(cfg, x, kern) == pytest.approx(
            cfg[x - 1] + cfg[x + 2], abs=1e-12)


def test_negative_constraint_diagnostic_above_two():
    # one edge particle, both flanking sites empty, everything else occupied
    occ = np.ones(16, dtype=np.uint8)
    occ[0], occ[1] = 0, 1
    occ[15] = 0
    occ[2] = 0
    cfg = Configuration(occ)
    kern = RateKernel(2.5, 8)
    value = interp_constraint(cfg, 0, kern)
    assert value == pytest.approx(-0.9375, abs=1e-12)
    assert interp_rate(cfg, 0, kern) == pytest.approx(-0.9375, abs=1e-12)


def test_negative_rate_raises_outside_diagnostic_mode():
    kern = RateKernel(1.5, 4)
    poisoned = kern.gap_rate.copy()
    poisoned[2, 2] = -0.25
    kern.gap_rate = poisoned
    cfg = representative(16, 2, 3)
    with pytest.raises(NegativeRate):
        interp_constraint(cfg, 0, kern)


def test_rate_zero_on_flat_edges():
    kern = RateKernel(1.5, 6)
    cfg = cfg_with(12, [0, 1, 5])
    assert interp_rate(cfg, 0, kern) == 0.0
    cfg = cfg_with(12, [5])
    assert interp_rate(cfg, 2, kern) == 0.0


def test_fast_regime_maximum_on_empty_window():
    # lone particle on one edge site, nothing else: every window term fires
    for m in (0.25, 0.5, 0.75):
        for ell in (4, 8):
            kern = RateKernel(m, ell)
            cfg = cfg_with(4 * ell, [0])
            expected = sum(abs(kern.table.coeffs[k]) * k for k in range(1, ell + 1))
            assert interp_rate(cfg, 0, kern) == pytest.approx(expected, abs=1e-12)
            assert np.nanmax(kern.gap_rate) == pytest.approx(expected, abs=1e-12)


def test_table_agrees_with_direct_evaluation_exhaustively():
    for n, ell, m in ((8, 2, 1.5), (8, 4, 0.5), (8, 8, 1.25), (6, 6, 0.75),
                      (10, 4, 1.75)):
        kern = RateKernel(m, ell)
        for bits in range(1 << n):
            cfg = Configuration([(bits >> x) & 1 for x in range(n)])
            for edge in range(n):
                direct = interp_constraint_direct(cfg, edge, m, ell)
                assert interp_constraint(cfg, edge, kern) == pytest.approx(
                    direct, abs=1e-12)


def test_table_agrees_with_direct_evaluation_random_large():
    rng = np.random.default_rng(42)
    for m in (0.5, 1.5):
        kern = RateKernel(m, 10)
        for _ in range(5000):
            cfg = Configuration(rng.integers(0, 2, 256).astype(np.uint8))
            x = int(rng.integers(0, 256))
            assert interp_constraint(cfg, x, kern) == pytest.approx(
                interp_constraint_direct(cfg, x, m, 10), abs=1e-12)


def test_rate_symmetric_under_edge_exchange():
    rng = np.random.default_rng(9)
    kern = RateKernel(1.5, 8)
    for _ in range(500):
        cfg = Configuration(rng.integers(0, 2, 64).astype(np.uint8))
        x = int(rng.integers(0, 64))
        assert interp_rate(exchange(cfg, x), x, kern) == interp_rate(cfg, x, kern)


def test_nonnegativity_exhaustive_n12():
    for m in (0.25, 0.75, 1.25, 1.75, 2.0):
        kern = RateKernel(m, 6)
        for bits in range(1 << 12):
            cfg = Configuration([(bits >> x) & 1 for x in range(12)])
            assert interp_constraint(cfg, 0, kern) >= 0.0


# ---------------------------------------------------------------------------
# gap table structure
# ---------------------------------------------------------------------------

def test_gap_table_symmetric():
    for m in (0.25, 0.5, 1.0, 1.5, 2.0):
        t = build_gap_table(m, 12)
        body = t[1:, 1:]
        assert np.allclose(body, body.T, atol=1e-12)


def test_gap_table_m1_constant():
    t = build_gap_table(1.0, 40)
    assert np.allclose(t[1:, 1:], 1.0, atol=1e-15)


def test_gap_table_m2_sparse_pattern():
    t = build_gap_table(2.0, 40)[1:, 1:]  # 41 x 41 body, distances 1..41
    expected = np.zeros_like(t)
    expected[0, 0] = 2.0
    expected[0, 1:] = 1.0
    expected[1:, 0] = 1.0
    assert np.allclose(t, expected, atol=1e-15)


def test_gap_table_fast_regime_monotone_in_both_gaps():
    t = build_gap_table(0.5, 40)[1:, 1:]
    assert np.all(np.diff(t, axis=0) >= -1e-15)
    assert np.all(np.diff(t, axis=1) >= -1e-15)
    # and cross-checked against per-representative direct evaluation
    kern = RateKernel(0.5, 12)
    rng = np.random.default_rng(10)
    for _ in range(50):
        x0 = int(rng.integers(1, 10))
        x1 = int(rng.integers(2, 11))
        cfg = representative(40, x0, x1, rng)
        assert kern.gap_rate[x0, x1 - 1] == pytest.approx(
            interp_constraint_direct(cfg, 0, 0.5, 12), abs=1e-12)


# ---------------------------------------------------------------------------
# interpolation limits
# ---------------------------------------------------------------------------

def _random_cfg_edges(count, n, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        out.append((Configuration(rng.integers(0, 2, n).astype(np.uint8)),
                    int(rng.integers(0, n))))
    return out


def test_interpolation_limits_one_sided():
    samples = _random_cfg_edges(50, 32, 17)
    ell = 8
    for target_m, approach in ((1.0, -1), (1.0, +1), (2.0, -1)):
        if target_m == 1.0:
            targets = [float(a_factor(c, x)) for c, x in samples]
        else:
            targets = [float(c_k(c, x, 1) * a_factor(c, x)) for c, x in samples]
        errs = []
        for dm in (0.08, 0.04, 0.02, 0.01):
            kern = RateKernel(target_m + approach * dm, ell)
            err = max(abs(interp_rate(c, x, kern) - t)
                      for (c, x), t in zip(samples, targets))
            errs.append(err)
        errs = np.array(errs)
        # linear-in-(m - m*) approach: halving the distance roughly halves the
        # error, and the fitted slope bounds every grid point
        ratios = errs[1:] / errs[:-1]
        assert np.all(ratios < 0.75)
        slope = errs[0] / 0.08
        assert np.all(errs <= 1.5 * slope * np.array([0.08, 0.04, 0.02, 0.01]))


def test_interpolation_exact_at_endpoints():
    samples = _random_cfg_edges(200, 48, 23)
    k1, k2 = RateKernel(1.0, 10), RateKernel(2.0, 10)
    for cfg, x in samples:
        assert interp_rate(cfg, x, k1) == pytest.approx(a_factor(cfg, x), abs=1e-12)
        assert interp_rate(cfg, x, k2) == pytest.approx(
            c_k(cfg, x, 1) * a_factor(cfg, x), abs=1e-12)


# ---------------------------------------------------------------------------
# validators
# ---------------------------------------------------------------------------

def test_check_up_speed_random():
    rng = np.random.default_rng(31)
    for _ in range(200):
        cfg = Configuration(rng.integers(0, 2, 64).astype(np.uint8))
        k = int(rng.integers(1, 7))
        ell = int(rng.integers(k, 40))
        ok, detail = check_up_speed(cfg, k, ell)
        assert ok, detail


def test_check_r_seq_exhaustive():
    n = 14
    for bits in range(1 << n):
        cfg = Configuration([(bits >> x) & 1 for x in range(n)])
        ok, detail = check_r_seq(cfg, 0, 6)
        assert ok, detail


def test_check_m_mono_and_m_mono2_random():
    rng = np.random.default_rng(12)
    m_grid = np.linspace(0.01, 2.0, 50)
    for _ in range(50):
        cfg = Configuration(rng.integers(0, 2, 32).astype(np.uint8))
        x = int(rng.integers(0, 32))
        for m in (0.3, 0.9, 1.1, 1.9):
            ok, detail = check_m_mono(cfg, x, m, 10)
            assert ok, detail
        ok, detail = check_m_mono2(cfg, x, m_grid, 6)
        assert ok, detail


def test_check_bounds_random():
    rng = np.random.default_rng(13)
    for m in (0.25, 0.5, 0.75, 1.25, 1.5, 1.75):
        kern = RateKernel(m, 8)
        for _ in range(100):
            cfg = Configuration(rng.integers(0, 2, 48).astype(np.uint8))
            ok, detail = check_bounds(cfg, int(rng.integers(0, 48)), kern)
            assert ok, detail
