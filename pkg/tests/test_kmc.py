"""Event-driven simulator: refresh invariants, determinism, equilibrium laws."""

import numpy as np
import pytest

from powergas import _core
from powergas.errors import InvalidProfile
from powergas.kernels import RateKernel, interp_rate
from powergas.kmc import EmpiricalMeasure, default_ell, init, run, step
from powergas.lattice import Configuration


def cosine(u):
    return 0.5 + 0.3 * np.cos(2 * np.pi * u)


@pytest.fixture(scope="module")
def kern():
    return RateKernel(1.5, 6)


def test_default_ell():
    assert default_ell(256) == 8
    assert default_ell(1024) == 10
    assert default_ell(4) == 2


def test_init_rejects_bad_profiles(kern):
    with pytest.raises(InvalidProfile):
        init(lambda u: 1.2, 32, kern, 0)
    with pytest.raises(InvalidProfile):
        init(np.full(16, 0.5), 32, kern, 0)


def test_full_and_empty_lattices_are_frozen(kern):
    for value in (0.0, 1.0):
        state = init(value, 64, kern, 3)
        assert state.total_rate == 0.0
        assert step(state) is None
        measures = run(state, [0.01, 0.02], 1 / 16)
        assert all(m.density == value for m in measures)
        assert state.events == 0


def test_initial_draw_matches_profile_at_clt_scale(kern):
    n = 256
    state = init(cosine, n, kern, seed=12345)
    box = n // 16
    em = EmpiricalMeasure.from_occupations(state.cfg.occ, box, 0.0)
    centres = (np.arange(16) * box + (box - 1) / 2) / n
    target = cosine(centres)
    assert np.max(np.abs(em.values - target)) <= 4 / np.sqrt(n)


def test_init_rates_match_kernel(kern):
    state = init(cosine, 128, kern, 7)
    expected = np.array([interp_rate(state.cfg, x, kern) for x in range(128)])
    assert np.array_equal(state.rates, expected)


def test_empirical_measure_mean_is_exact():
    rng = np.random.default_rng(0)
    occ = rng.integers(0, 2, 256).astype(np.uint8)
    em = EmpiricalMeasure.from_occupations(occ, 8, 0.0)
    assert em.density == occ.sum() / 256
    assert np.all((em.values >= 0) & (em.values <= 1))
    with pytest.raises(ValueError):
        EmpiricalMeasure.from_occupations(occ, 7, 0.0)


def test_single_particle_waiting_time():
    # one particle, unit constraint everywhere: two active edges at rate
    # N^2 each, so waiting times are Exponential(2 N^2)
    kern1 = RateKernel(1.0, 2)
    n = 4
    occ = np.zeros(n, dtype=np.uint8)
    occ[0] = 1
    state = init(0.0, n, kern1, 0)
    state.cfg.occ[:] = occ
    _core.recompute_rates(state.cfg.occ, kern1.gap_rate, kern1.ell, state.rates)
    _core.fenwick_build(state.rates, state.tree)
    assert state.total_rate == pytest.approx(2 * n**2)
    waits = []
    for _ in range(4000):
        edge, dt = step(state)
        waits.append(dt)
    mean = np.mean(waits)
    expectation = 1 / (2 * n**2)
    assert abs(mean - expectation) <= 4 * expectation / np.sqrt(len(waits))


def test_step_refresh_invariant(kern):
    state = init(cosine, 64, kern, 21)
    for _ in range(300):
        step(state)
    expected = np.array([interp_rate(state.cfg, x, kern) for x in range(64)])
    assert np.max(np.abs(state.rates - expected)) <= 1e-12


def test_run_refresh_oracle_and_determinism(kern):
    state = init(cosine, 128, kern, 99)
    out = run(state, [0.02, 0.05], 1 / 32, debug_every=5_000)
    assert state.events > 20_000  # so the oracle fired several times
    assert 0 <= state.max_refresh_err <= 1e-12
    state2 = init(cosine, 128, kern, 99)
    out2 = run(state2, [0.02, 0.05], 1 / 32, debug_every=5_000)
    for a, b in zip(out, out2):
        assert np.array_equal(a.values, b.values)
    assert state2.events == state.events
    assert state2.t == state.t


def test_run_seed_changes_trajectory(kern):
    a = run(init(cosine, 128, kern, 1), [0.005], 1 / 32)[0]
    b = run(init(cosine, 128, kern, 2), [0.005], 1 / 32)[0]
    assert not np.array_equal(a.values, b.values)


def test_run_empty_sample_times(kern):
    state = init(cosine, 64, kern, 5)
    assert run(state, [], 1 / 16) == []


def test_particle_count_conserved_along_trajectory(kern):
    state = init(cosine, 128, kern, 31)
    before = state.cfg.particle_count
    run(state, [0.02], 1 / 32)
    assert state.cfg.particle_count == before


def test_equilibrium_stays_flat():
    # from the invariant measure at rho = 1/2, box densities keep fluctuating
    # at the hypergeometric scale around the conserved global density
    kern1 = RateKernel(1.0, 4)
    n, box = 512, 32
    state = init(0.5, n, kern1, 8)
    rho = state.cfg.particle_count / n
    measures = run(state, np.linspace(0.05, 0.25, 5), box / n)
    sigma = np.sqrt(rho * (1 - rho) / box * (1 - box / n))
    for em in measures:
        assert em.density == pytest.approx(rho, abs=1e-12)
        assert np.max(np.abs(em.values - rho)) <= 5 * sigma


def test_event_count_tracks_integrated_rate():
    # symmetric exclusion at density 1/2: the stationary active-edge count is
    # 2 K (n - K) / (n - 1), so the event total over [0, t] sits near
    # n^2 t times that; the window is loose because the active-edge count
    # carries slow density modes
    kern1 = RateKernel(1.0, 4)
    n, t = 256, 0.05
    state = init(0.5, n, kern1, 77)
    particles = state.cfg.particle_count
    run(state, [t], 1 / 32)
    expected = n**2 * t * 2 * particles * (n - particles) / (n - 1)
    assert abs(state.events - expected) <= 0.1 * expected


def test_single_particle_diffuses_at_the_rescaled_rate():
    # one tracer on an otherwise empty ring moves as a rate-n^2 symmetric
    # walk, so its displacement variance after macroscopic time t is 2 n^2 t
    kern1 = RateKernel(1.0, 2)
    n, t, reps = 64, 0.001, 300
    displacements = []
    for r in range(reps):
        state = init(0.0, n, kern1, 1000 + r)
        state.cfg.occ[0] = 1
        _core.recompute_rates(state.cfg.occ, kern1.gap_rate, kern1.ell,
                              state.rates)
        run(state, [t], 1 / 16)
        pos = int(np.flatnonzero(state.cfg.occ)[0])
        displacements.append((pos + n // 2) % n - n // 2)
    var = np.var(displacements)
    expected = 2 * n**2 * t
    # variance of the sample variance for ~Gaussian data: var^2 * 2/(reps-1)
    assert abs(var - expected) <= 5 * expected * np.sqrt(2 / (reps - 1))


def test_total_rate_respects_window_sum_bound():
    # aggregated window-sum bound: sum_x rate_x <= 2 sum_k |w_k| (n + k - 1)
    for m in (0.5, 1.5):
        kern = RateKernel(m, 8)
        n = 128
        bound = 2 * sum(abs(kern.table.coeffs[k]) * (n + k - 1)
                        for k in range(1, 9))
        state = init(cosine, n, kern, 13)
        assert state.rates.sum() <= bound
        run(state, [0.01], 1 / 32)
        assert state.rates.sum() <= bound


def test_fast_regime_peak_rate_grows_with_truncation_order():
    # the largest table entry is the fully empty window value, which grows
    # like the weighted coefficient sum as the truncation order increases
    peaks = []
    for ell in (4, 8, 16, 32):
        kern = RateKernel(0.5, ell)
        peaks.append(np.nanmax(kern.gap_rate))
        expected = sum(abs(kern.table.coeffs[k]) * k for k in range(1, ell + 1))
        assert peaks[-1] == pytest.approx(expected, abs=1e-12)
    assert np.all(np.diff(peaks) > 0)
    ratios = np.array(peaks[1:]) / np.array(peaks[:-1])
    # ell**(1 - m) growth at m = 1/2 means doubling ell scales peaks by ~2**0.5
    assert np.all(ratios > 1.2) and np.all(ratios < 1.6)
