import io
import os

import numpy as np
import pytest
from scipy import stats as sp_stats

from omqm import (DomainError, NumericError, StepSizeError, ThermoParams,
                  empirical_transition_check, ensemble_stationary_stats, noise_amplitude,
                  simulate_ou)


def test_noise_amplitude_pins_stationary_variance():
    tp = ThermoParams(R=4.0, s=2.0, k_B=3.0)
    sigma = noise_amplitude(tp)
    assert sigma == pytest.approx(np.sqrt(2 * 3.0 / 4.0))
    # sigma^2 / (2 gamma) = k_B / s, the variance of the fluctuation law
    assert sigma ** 2 / (2 * tp.gamma()) == pytest.approx(tp.stationary_variance())


def test_noiseless_path_reproduces_relaxation(unit_tp):
    path = simulate_ou(unit_tp, x0=1.0, tau_end=1.0, dt=1e-4, seed=0, sigma=0.0)
    assert path.values[-1] == pytest.approx(np.exp(-1.0), abs=1e-3)
    assert path.values[0] == 1.0
    # exact one-step law has no discretization error at all
    path = simulate_ou(unit_tp, x0=1.0, tau_end=1.0, dt=5e-3, seed=0, sigma=0.0,
                       method="exact")
    assert path.values[-1] == pytest.approx(np.exp(-1.0), rel=1e-12)


def test_path_starts_at_origin(unit_tp):
    for seed in (0, 1, 99):
        assert simulate_ou(unit_tp, 0.0, 0.5, 1e-3, seed).values[0] == 0.0


def test_seed_determinism(unit_tp):
    a = simulate_ou(unit_tp, 0.3, 1.0, 1e-3, seed=42)
    b = simulate_ou(unit_tp, 0.3, 1.0, 1e-3, seed=42)
    assert np.array_equal(a.values, b.values) and np.array_equal(a.times, b.times)
    c = simulate_ou(unit_tp, 0.3, 1.0, 1e-3, seed=43)
    assert not np.array_equal(a.values, c.values)


def test_stationary_variance_unit_curvature(unit_tp):
    n = 20_000
    stats = ensemble_stationary_stats(unit_tp, n, burn_in=10.0, seed=11, dt=5e-3)
    se = np.sqrt(2.0 / (n - 1)) * unit_tp.stationary_variance()
    assert abs(stats.variance - 1.0) < 3 * se
    assert abs(stats.mean) < 3 * np.sqrt(1.0 / n)
    assert stats.count == n


def test_stationary_variance_stiffer_curvature():
    tp = ThermoParams(R=1.0, s=4.0, k_B=1.0)
    n = 20_000
    stats = ensemble_stationary_stats(tp, n, burn_in=2.5, seed=12, dt=2e-3)
    se = np.sqrt(2.0 / (n - 1)) * tp.stationary_variance()
    assert abs(stats.variance - 0.25) < 3 * se


def test_degenerate_ensemble(unit_tp):
    stats = ensemble_stationary_stats(unit_tp, 1, burn_in=10.0, seed=0, dt=5e-3)
    assert stats.count == 1
    assert stats.variance == 0.0
    assert stats.histogram.counts.sum() == 1


def test_histogram_shape_and_mass(unit_tp):
    stats = ensemble_stationary_stats(unit_tp, 5000, burn_in=10.0, seed=5, dt=5e-3)
    h = stats.histogram
    assert h.counts.size == 101
    assert h.bin_edges[0] == pytest.approx(-6.0) and h.bin_edges[-1] == pytest.approx(6.0)
    assert h.counts.sum() == 5000


def test_thread_count_independence(unit_tp):
    before = os.environ.get("OM_QM_THREADS")
    try:
        os.environ["OM_QM_THREADS"] = "1"
        a = ensemble_stationary_stats(unit_tp, 40_000, 10.0, seed=3, dt=5e-3)
        os.environ["OM_QM_THREADS"] = "3"
        b = ensemble_stationary_stats(unit_tp, 40_000, 10.0, seed=3, dt=5e-3)
    finally:
        if before is None:
            os.environ.pop("OM_QM_THREADS", None)
        else:
            os.environ["OM_QM_THREADS"] = before
    assert a.mean == b.mean and a.variance == b.variance
    assert np.array_equal(a.histogram.counts, b.histogram.counts)


def test_weak_convergence_sanity(unit_tp):
    # halving dt moves the variance estimate by less than one MC standard error
    n = 20_000
    v1 = ensemble_stationary_stats(unit_tp, n, 10.0, seed=2, dt=4e-3).variance
    v2 = ensemble_stationary_stats(unit_tp, n, 10.0, seed=2, dt=2e-3).variance
    assert abs(v1 - v2) < np.sqrt(2.0 / (n - 1))


def test_transition_mean_at_log2_lag(unit_tp):
    n = 20_000
    chk = empirical_transition_check(unit_tp, x1=1.0, lag=np.log(2.0), n_paths=n,
                                     seed=21, dt=1e-3)
    se = np.sqrt(chk.exact_variance / n)
    assert chk.exact_mean == pytest.approx(0.5, abs=1e-3)
    assert abs(chk.empirical_mean - chk.exact_mean) < 3 * se
    assert chk.passed and chk.ks_pvalue > 0.01


def test_transition_long_lag_matches_stationary(unit_tp):
    n = 20_000
    chk = empirical_transition_check(unit_tp, x1=1.5, lag=20.0, n_paths=n, seed=22, dt=5e-3)
    assert chk.passed
    # after 20 relaxation times the terminal law is the stationary law
    finals_cdf = sp_stats.norm(loc=0.0, scale=1.0).cdf
    assert abs(chk.exact_mean) < 1e-8
    assert chk.exact_variance == pytest.approx(1.0, abs=1e-8)
    assert chk.ks_statistic == pytest.approx(
        sp_stats.kstest(_refinals(unit_tp, 1.5, 20.0, n, 22), finals_cdf).statistic, abs=1e-3)


def _refinals(tp, x1, lag, n, seed):
    from omqm.stochastic import _terminal_ensemble

    return _terminal_ensemble(tp, x1, lag, 5e-3, n, seed)


def test_exact_method_agrees_with_euler(unit_tp):
    n = 20_000
    a = ensemble_stationary_stats(unit_tp, n, 10.0, seed=7, dt=5e-3, method="exact")
    se = np.sqrt(2.0 / (n - 1))
    assert abs(a.variance - 1.0) < 3 * se


def test_csv_exports(unit_tp):
    path = simulate_ou(unit_tp, 0.5, 0.1, 1e-2, seed=1)
    buf = io.StringIO()
    path.to_csv(buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "tau,x"
    assert len(lines) == path.times.size + 1
    assert float(lines[1].split(",")[1]) == 0.5

    stats = ensemble_stationary_stats(unit_tp, 500, 10.0, seed=2, dt=5e-3)
    buf = io.StringIO()
    stats.histogram.to_csv(buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "bin_left,bin_right,count"
    assert len(lines) == 102


def test_error_conditions(unit_tp):
    with pytest.raises(StepSizeError):
        simulate_ou(unit_tp, 0.0, 1.0, dt=0.2, seed=0)  # dt >= 0.1/gamma
    with pytest.raises(StepSizeError):
        simulate_ou(unit_tp, 0.0, 1.0, dt=-1e-3, seed=0)
    with pytest.raises(DomainError):
        ensemble_stationary_stats(unit_tp, 0, burn_in=10.0, seed=0)
    with pytest.raises(DomainError):
        ensemble_stationary_stats(unit_tp, 10, burn_in=5.0, seed=0)  # < 10/gamma
    with pytest.raises(DomainError):
        empirical_transition_check(unit_tp, 1.0, lag=1.0, n_paths=0, seed=0)
    with pytest.raises(StepSizeError):
        empirical_transition_check(unit_tp, 1.0, lag=1e-6, n_paths=10, seed=0, dt=1e-2)
    with pytest.raises(NumericError) as err:
        simulate_ou(unit_tp, 0.0, 1.0, dt=1e-3, seed=0, sigma=float("inf"))
    assert "step" in str(err.value)
