"""Generator application, invariance, irreducibility and expectations."""

import numpy as np
import pytest

from powergas.binom import binom_coeffs
from powergas.exactgen import (ProductMeasure, all_configurations, apply_generator,
                               check_irreducibility, check_stationarity,
                               expect_constraint, expect_constraint_exact,
                               expect_interp_constraint,
                               expect_interp_constraint_exact,
                               random_function_suite, sample_constraint_mc,
                               transition_list)
from powergas.kernels import RateKernel, a_factor, c_k, interp_constraint, interp_rate
from powergas.lattice import Configuration, exchange, flip


def test_measure_weights_sum_to_one():
    for profile in (0.3, np.linspace(0.1, 0.9, 10)):
        w = ProductMeasure(profile, 10).weights()
        assert w.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(w >= 0)


def test_particle_count_is_conserved():
    kern = RateKernel(1.5, 4)
    for cfg in all_configurations(6):
        assert apply_generator(lambda c: c.particle_count, cfg, kern) == pytest.approx(
            0.0, abs=1e-12)


def test_generator_on_occupation_is_a_discrete_flux_divergence():
    kern = RateKernel(1.5, 6)
    rng = np.random.default_rng(0)
    for _ in range(50):
        cfg = Configuration(rng.integers(0, 2, 10).astype(np.uint8))
        for x in range(10):
            def f(c, x=x):
                return float(c[x])
            lhs = apply_generator(f, cfg, kern)

            def g(edge):
                return interp_constraint(cfg, edge, kern) * (cfg[edge + 1] - cfg[edge])

            assert lhs == pytest.approx(g(x) - g(x - 1), abs=1e-12)


def test_generator_on_indicator_matches_hand_enumeration():
    kern = RateKernel(1.5, 4)
    target = Configuration([1, 0, 1, 0, 0, 1])
    cfg = Configuration([0, 1, 1, 0, 0, 1])

    def f(c):
        return 1.0 if c == target else 0.0

    # the six edges by hand: only flips that produce `target` or leave `cfg`
    expected = 0.0
    for x in range(6):
        swapped = exchange(cfg, x)
        rate = interp_rate(cfg, x, kern)
        expected += rate * (f(swapped) - f(cfg))
    assert apply_generator(f, cfg, kern) == pytest.approx(expected, abs=1e-15)
    # the target is one exchange away across edge {0,1}, so the sum is
    # exactly that single positive term
    assert f(exchange(cfg, 0)) == 1.0
    assert apply_generator(f, cfg, kern) == pytest.approx(
        interp_rate(cfg, 0, kern), abs=1e-12)


def test_stationarity_small_grid():
    for m in (0.5, 1.5):
        for rho in (0.3, 0.7):
            residual = check_stationarity(ProductMeasure(rho, 8),
                                          RateKernel(m, 4), n_random=20, seed=1)
            assert residual <= 1e-12


def test_stationarity_degenerate_measures():
    kern = RateKernel(1.5, 4)
    for rho in (0.0, 1.0):
        residual = check_stationarity(ProductMeasure(rho, 8), kern,
                                      n_random=10, seed=2)
        assert residual == 0.0


def test_nonconstant_profile_is_not_invariant():
    # a genuinely non-constant product measure must produce a visible residual
    profile = np.linspace(0.2, 0.8, 8)
    residual = check_stationarity(ProductMeasure(profile, 8), RateKernel(1.5, 4),
                                  n_random=20, seed=3)
    assert residual > 1e-6


def test_generator_decomposition_into_plain_and_flipped_parts():
    # the combination equals m * (plain exchange part) minus/plus the
    # flipped-constraint parts with absolute weights, order by order
    n, ell, m = 8, 5, 1.5
    kern = RateKernel(m, ell)
    coeffs = binom_coeffs(m, ell)
    rng = np.random.default_rng(5)
    fvec = rng.standard_normal(1 << n)

    def apply_with_rate(rate_fn, bits):
        cfg = Configuration([(bits >> x) & 1 for x in range(n)])
        total = 0.0
        for x in range(n):
            r = rate_fn(cfg, x)
            if r:
                swapped = bits ^ ((1 << x) | (1 << ((x + 1) % n)))
                total += r * (fvec[swapped] - fvec[bits])
        return total

    sign = 1.0 if m > 1 else -1.0
    for bits in rng.integers(0, 1 << n, 40):
        bits = int(bits)
        full = apply_with_rate(lambda c, x: interp_rate(c, x, kern), bits)
        ssep = apply_with_rate(lambda c, x: float(a_factor(c, x)), bits)
        flipped = [
            apply_with_rate(
                lambda c, x, k=k: c_k(flip(c), x, k - 1) * a_factor(c, x), bits)
            for k in range(2, ell + 1)
        ]
        recombined = m * ssep - sign * sum(
            abs(coeffs[k]) * flipped[k - 2] for k in range(2, ell + 1))
        assert full == pytest.approx(recombined, abs=1e-12)


def test_irreducibility():
    kern = RateKernel(1.5, 4)
    assert check_irreducibility(8, 3, kernel=kern)
    assert check_irreducibility(8, 0, kernel=kern)
    assert check_irreducibility(8, 8, kernel=kern)
    # bare order-1 rates freeze well-separated particles; three cyclic gaps of
    # >= 3 sites need at least 9 sites, so the smallest showcase is (9, 3)
    assert not check_irreducibility(9, 3, pmm_order=1)
    assert not check_irreducibility(8, 2, pmm_order=1)
    # while the interpolating rates keep those hyperplanes connected
    assert check_irreducibility(9, 3, kernel=kern)
    assert check_irreducibility(8, 2, kernel=kern)


def test_expectations_closed_form():
    assert expect_constraint(0.5, 1) == pytest.approx(1.0, abs=1e-15)
    assert expect_constraint(0.123, 0) == 1.0
    for k, rho in ((0, 0.3), (1, 0.5), (2, 0.4), (3, 0.6)):
        assert expect_constraint_exact(12, rho, k) == pytest.approx(
            expect_constraint(rho, k), abs=1e-12)


def test_interp_expectation_equals_truncated_diffusivity():
    kern = RateKernel(1.5, 6)
    assert expect_interp_constraint_exact(12, 0.4, kern) == pytest.approx(
        expect_interp_constraint(0.4, kern), abs=1e-12)


def test_expectation_monte_carlo_within_three_sigma():
    for k, rho in ((1, 0.5), (2, 0.3)):
        mean, stderr = sample_constraint_mc(rho, k, 100_000, seed=7)
        assert abs(mean - expect_constraint(rho, k)) <= 3 * stderr


def test_transition_rates_are_symmetric_in_detail():
    # reversibility of the transition list: each (eta -> eta') has the matching
    # reverse at the same rate
    kern = RateKernel(1.25, 4)
    src, tgt, rate = transition_list(kern, 6)
    table = {(int(s), int(t)): float(r) for s, t, r in zip(src, tgt, rate)}
    for (s, t), r in table.items():
        assert table[(t, s)] == pytest.approx(r, abs=1e-14)


def test_function_suite_covers_pairs():
    fs = random_function_suite(6, 3, seed=0)
    assert len(fs) == 3 + 15
