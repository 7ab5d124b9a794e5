import numpy as np
import pytest

from brownresnick import (
    EstimateWithError,
    ResourceLimitError,
    VariogramModel,
    box_grid,
    cluster_count_stats,
    extremal_index_estimate,
    gumbel_cdf,
    gumbel_quantile,
    ks_critical,
    ks_statistic,
    ks_two_sample,
    pickands_coupled,
    pickands_estimate,
    qq_data,
)

M1 = VariogramModel(alpha=1.0)


def test_ks_statistic_exact_quantile_sample():
    n = 100
    x = gumbel_quantile((np.arange(1, n + 1) - 0.5) / n)
    d = ks_statistic(x, gumbel_cdf)
    assert d == pytest.approx(0.5 / n, abs=1e-12)


def test_ks_statistic_single_observation():
    median = gumbel_quantile(0.5)
    assert ks_statistic([median], gumbel_cdf) == pytest.approx(0.5, abs=1e-12)


def test_ks_statistic_empty_rejected():
    with pytest.raises(ValueError):
        ks_statistic([], gumbel_cdf)
    with pytest.raises(ValueError):
        ks_two_sample([], [1.0])


def test_ks_statistic_calibration_at_one_percent():
    # 50 independent batches of 10^4 true Gumbel draws: the 1%-level
    # threshold 0.0163 should reject at most a couple of them.
    rng = np.random.default_rng(2718)
    u = rng.uniform(size=(50, 10_000))
    fails = sum(
        ks_statistic(gumbel_quantile(row), gumbel_cdf) > 0.0163 for row in u)
    assert fails <= 2


def test_ks_two_sample_known_values():
    assert ks_two_sample([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert ks_two_sample([0.0, 1.0], [2.0, 3.0]) == 1.0
    assert ks_two_sample([1.0, 2.0], [1.5]) == pytest.approx(0.5, abs=1e-15)


def test_ks_two_sample_detects_location_shift():
    rng = np.random.default_rng(9)
    a = gumbel_quantile(rng.uniform(size=2000))
    b = gumbel_quantile(rng.uniform(size=2000)) + 1.0
    assert ks_two_sample(a, b) > ks_critical(2000, m=2000)


def test_ks_critical_values():
    assert ks_critical(10_000) == pytest.approx(0.016276, rel=1e-3)
    c = np.sqrt(-0.5 * np.log(0.005))
    assert ks_critical(100, m=400) == pytest.approx(
        c * np.sqrt(500 / 40_000), rel=1e-12)
    assert ks_critical(50, alpha=0.05) == pytest.approx(
        np.sqrt(-0.5 * np.log(0.025)) / np.sqrt(50), rel=1e-12)


def test_qq_data_single_point_and_diagonal():
    pairs = qq_data([3.0], gumbel_quantile)
    assert pairs == [(gumbel_quantile(0.5), 3.0)]
    n = 64
    x = gumbel_quantile((np.arange(1, n + 1) - 0.5) / n)
    pairs = np.array(qq_data(x, gumbel_quantile))
    np.testing.assert_allclose(pairs[:, 0], pairs[:, 1], atol=1e-12)
    with pytest.raises(ValueError):
        qq_data([], gumbel_quantile)


def test_pickands_at_origin_is_exactly_one():
    # Z is pinned at the origin, so f({0}) carries no Monte Carlo error.
    est = pickands_estimate(M1, 0.0, 1.0, reps=500, seed=3)
    assert est.value == 1.0
    assert est.std_error == 0.0


def test_pickands_single_offsite_point_is_one_in_mean():
    # E e^{Z(t)} = 1 for every single t (lognormal with mean -gamma,
    # variance 2 gamma).
    est = pickands_estimate(M1, 0.5, 1.0, reps=20_000, seed=4)
    assert abs(est.value - 1.0) <= 3.0 * est.std_error
    assert est.std_error > 0.0


def test_pickands_monotone_under_grid_refinement():
    fine = box_grid(0.0, 1.0, 0.125)
    coarse = fine[::2]
    (est_f, est_c), samples = pickands_coupled(
        M1, [fine, coarse], reps=2000, seed=5, return_samples=True)
    # Shared draws make the inclusion deterministic, draw by draw.
    assert np.all(samples[0] >= samples[1])
    assert est_f.value >= est_c.value - 1e-12


def test_pickands_subadditive_on_shared_draws():
    mesh = 0.125
    a = box_grid(0.0, 1.0, mesh)
    b = box_grid(1.0, 2.0, mesh)
    u = box_grid(0.0, 2.0, mesh)
    (est_a, est_b, est_u), samples = pickands_coupled(
        M1, [a, b, u], reps=5000, seed=6, return_samples=True)
    np.testing.assert_array_equal(
        samples[2], np.maximum(samples[0], samples[1]))
    assert est_u.value <= est_a.value + est_b.value + 1e-12
    # Statistical two-interval form via translation invariance.
    slack = 3.0 * np.sqrt(est_u.std_error ** 2 + 4.0 * est_a.std_error ** 2)
    assert est_u.value <= 2.0 * est_a.value + slack


def test_pickands_translation_invariance():
    a = pickands_estimate(M1, (0.0, 1.0), 0.0625, reps=20_000, seed=7)
    b = pickands_estimate(M1, (3.0, 4.0), 0.0625, reps=20_000, seed=8)
    assert abs(a.value - b.value) <= 3.0 * np.hypot(a.std_error, b.std_error)


def test_pickands_region_forms():
    est_pair = pickands_estimate(M1, (0.0, 0.5), 0.25, reps=100, seed=1)
    assert est_pair.reps == 100
    m2 = VariogramModel(alpha=1.0, dim=2)
    est_box = pickands_estimate(
        m2, np.array([[0.0, 0.0], [0.5, 1.0]]), 0.25, reps=100, seed=1)
    assert est_box.value >= 1.0 - 1e-12 or est_box.std_error > 0.0
    with pytest.raises(ValueError):
        pickands_estimate(M1, np.zeros((3, 2)), 0.25, reps=100, seed=1)


def test_pickands_grid_budget():
    with pytest.raises(ResourceLimitError):
        pickands_estimate(M1, (0.0, 1.0), 1.0 / 8192, reps=10, seed=0)
    with pytest.raises(ValueError):
        pickands_coupled(M1, [], reps=10, seed=0)
    with pytest.raises(ValueError):
        pickands_estimate(M1, (0.0, 1.0), 0.5, reps=0, seed=0)


def test_extremal_index_single_site():
    est = extremal_index_estimate(M1, 1, reps=20_000, seed=11)
    assert abs(est.value - 1.0) <= 3.0 * est.std_error


def test_extremal_index_nonincreasing_in_n():
    prev = None
    for n, seed in ((8, 12), (16, 13), (32, 14)):
        est = extremal_index_estimate(M1, n, reps=20_000, seed=seed)
        assert est.value > 0.0
        if prev is not None:
            assert est.value <= prev.value + 3.0 * np.hypot(
                est.std_error, prev.std_error)
        prev = est


def test_extremal_index_bounded_by_one():
    est = extremal_index_estimate(M1, 64, reps=20_000, seed=15)
    assert 0.0 < est.value <= 1.0 + 3.0 * est.std_error


def test_extremal_index_validation():
    with pytest.raises(ValueError):
        extremal_index_estimate(M1, 0, reps=10, seed=0)
    with pytest.raises(ValueError):
        extremal_index_estimate(M1, 4, reps=0, seed=0)
    with pytest.raises(ResourceLimitError):
        extremal_index_estimate(M1, 100_000, reps=10, seed=0)


def test_cluster_count_stats_constant_input():
    stats = cluster_count_stats([2] * 50)
    assert stats["quartiles"] == [2.0, 2.0, 2.0]
    assert stats["mean"] == 2.0
    assert sum(stats["histogram"]["counts"]) == 50


def test_cluster_count_stats_interpolated_quartiles():
    stats = cluster_count_stats([1, 2, 3, 4])
    assert stats["quartiles"] == [1.75, 2.5, 3.25]
    assert stats["mean"] == 2.5
    # Unit-width bins centered on the integers.
    np.testing.assert_allclose(stats["histogram"]["edges"],
                               [0.5, 1.5, 2.5, 3.5, 4.5])
    assert stats["histogram"]["counts"] == [1, 1, 1, 1]


def test_cluster_count_stats_wide_range_uses_twenty_bins():
    stats = cluster_count_stats(np.arange(2, 200))
    assert len(stats["histogram"]["counts"]) == 20
    assert sum(stats["histogram"]["counts"]) == 198


def test_cluster_count_stats_empty_rejected():
    with pytest.raises(ValueError):
        cluster_count_stats([])


def test_estimate_dataclass_fields():
    est = EstimateWithError(1.0, 0.1, 100)
    assert (est.value, est.std_error, est.reps) == (1.0, 0.1, 100)
