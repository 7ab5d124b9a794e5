"""Estimators and test statistics for the validation experiments.

Kolmogorov-Smirnov distances and Q-Q pairs check the simulated marginals;
the Pickands set function f(A) = E exp(sup_{t in A} Z(t)) and the discrete
extremal index theta(n) = n^{-1} E max_{i<=n} e^{Z(i)} reproduce the
classical constants attached to the field Z.  Estimators are plain Monte
Carlo means over a fixed grid; a coupled mode shares the Gaussian draws
across several grids so that set inclusions become exact inequalities
between the estimates rather than statistical ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import SiteSet, box_grid, build_sampler
from .streams import RandomStream, mask64
from .variogram import VariogramModel, as_points, gamma

_CHUNK = 1 << 14
MAX_GRID = 4096


class ResourceLimitError(RuntimeError):
    """Requested grid exceeds the factorization budget."""


@dataclass(frozen=True)
class EstimateWithError:
    """Monte Carlo estimate, its standard error, and the replication count."""

    value: float
    std_error: float
    reps: int


def ks_statistic(samples, cdf) -> float:
    """Sup distance between the empirical CDF of ``samples`` and ``cdf``."""
    x = np.sort(np.asarray(samples, dtype=np.float64).reshape(-1))
    n = x.size
    if n == 0:
        raise ValueError("empty sample")
    f = np.asarray(cdf(x), dtype=np.float64)
    steps = np.arange(n + 1, dtype=np.float64) / n
    return float(max(np.max(steps[1:] - f), np.max(f - steps[:-1])))


def ks_two_sample(a, b) -> float:
    """Sup distance between the empirical CDFs of two samples."""
    a = np.sort(np.asarray(a, dtype=np.float64).reshape(-1))
    b = np.sort(np.asarray(b, dtype=np.float64).reshape(-1))
    if a.size == 0 or b.size == 0:
        raise ValueError("empty sample")
    pooled = np.concatenate([a, b])
    fa = np.searchsorted(a, pooled, side="right") / a.size
    fb = np.searchsorted(b, pooled, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def ks_critical(n: int, alpha: float = 0.01, m: int | None = None) -> float:
    """Asymptotic KS critical value; two-sample form when ``m`` is given.

    c(alpha) = sqrt(-ln(alpha/2)/2), about 1.63 at the 1% level.
    """
    c = np.sqrt(-0.5 * np.log(alpha / 2.0))
    if m is None:
        return float(c / np.sqrt(n))
    return float(c * np.sqrt((n + m) / (n * m)))


def qq_data(samples, quantile_fn):
    """Sorted samples paired with quantiles at (k - 0.5)/N."""
    x = np.sort(np.asarray(samples, dtype=np.float64).reshape(-1))
    if x.size == 0:
        raise ValueError("empty sample")
    p = (np.arange(1, x.size + 1) - 0.5) / x.size
    t = np.asarray(quantile_fn(p), dtype=np.float64).reshape(-1)
    return list(zip(t.tolist(), x.tolist()))


def _region_grid(model: VariogramModel, region, mesh: float) -> np.ndarray:
    """Grid over a box region given as a (low, high) pair.

    ``low``/``high`` may be scalars (broadcast across dimensions) or
    length-dim vectors; low == high yields a single point.
    """
    arr = np.asarray(region, dtype=np.float64)
    if arr.ndim == 0:
        arr = np.array([float(arr), float(arr)])
    if arr.ndim == 1 and arr.shape[0] == 2:
        low = np.full(model.dim, arr[0])
        high = np.full(model.dim, arr[1])
    elif arr.ndim == 2 and arr.shape == (2, model.dim):
        low, high = arr[0], arr[1]
    else:
        raise ValueError("region must be a (low, high) pair")
    return box_grid(low, high, mesh)


def pickands_coupled(model: VariogramModel, grids, reps: int, seed: int,
                     *, max_grid: int = MAX_GRID, return_samples: bool = False):
    """Estimates of f over several grids from shared Z draws.

    Z is drawn once per replication on the union of the grids; each grid's
    sample is exp(max of Z over that grid's points).  Because the draws are
    shared, inclusions between grids yield deterministic inequalities of
    the estimates: a grid's estimate never exceeds that of a supergrid.

    Returns a list of :class:`EstimateWithError`, plus the per-draw sample
    matrix of shape (len(grids), reps) when ``return_samples`` is set.
    """
    grids = [as_points(model, g) for g in grids]
    if not grids:
        raise ValueError("need at least one grid")
    reps = int(reps)
    if reps < 1:
        raise ValueError("reps must be >= 1")
    stacked = np.vstack(grids)
    union, inverse = np.unique(stacked, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    if union.shape[0] > max_grid:
        raise ResourceLimitError(
            f"grid of {union.shape[0]} points exceeds the budget of {max_grid}")
    row_sets = []
    pos = 0
    for g in grids:
        row_sets.append(np.unique(inverse[pos:pos + g.shape[0]]))
        pos += g.shape[0]

    fg = build_sampler(SiteSet(union), model)
    mean_z = -np.atleast_1d(gamma(model, union)).reshape(-1, 1)
    stream = RandomStream(mask64(seed), 0)
    total = np.zeros(len(grids))
    total_sq = np.zeros(len(grids))
    samples = np.empty((len(grids), reps)) if return_samples else None
    done = 0
    while done < reps:
        k = min(_CHUNK, reps - done)
        z = fg.correlated_normals(stream, k) + mean_z
        for i, rows in enumerate(row_sets):
            s = np.exp(z[rows].max(axis=0))
            total[i] += s.sum()
            total_sq[i] += (s * s).sum()
            if samples is not None:
                samples[i, done:done + k] = s
        done += k

    estimates = []
    for i in range(len(grids)):
        mean = total[i] / reps
        se = 0.0
        if reps > 1:
            var = max(total_sq[i] - reps * mean * mean, 0.0) / (reps - 1)
            se = float(np.sqrt(var / reps))
        estimates.append(EstimateWithError(float(mean), se, reps))
    if return_samples:
        return estimates, samples
    return estimates


def pickands_estimate(model: VariogramModel, region, mesh: float, reps: int,
                      seed: int, *, max_grid: int = MAX_GRID) -> EstimateWithError:
    """f(region) = E exp(sup of Z over the meshed region), by Monte Carlo.

    The estimate is of the raw set function; dividing f([0, N]^d) by N^d
    gives the usual Pickands-constant approximant.
    """
    grid = _region_grid(model, region, mesh)
    return pickands_coupled(model, [grid], reps, seed, max_grid=max_grid)[0]


def extremal_index_estimate(model: VariogramModel, n: int, reps: int,
                            seed: int, *, max_grid: int = MAX_GRID
                            ) -> EstimateWithError:
    """theta(n) = n^{-1} E max_{i=1..n} e^{Z(i)} over integer sites."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > max_grid:
        raise ResourceLimitError(f"n={n} exceeds the budget of {max_grid}")
    reps = int(reps)
    if reps < 1:
        raise ValueError("reps must be >= 1")
    points = np.zeros((n, model.dim))
    points[:, 0] = np.arange(1, n + 1)
    fg = build_sampler(SiteSet(points), model)
    mean_z = -np.atleast_1d(gamma(model, points)).reshape(-1, 1)
    stream = RandomStream(mask64(seed), 0)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < reps:
        k = min(_CHUNK, reps - done)
        z = fg.correlated_normals(stream, k) + mean_z
        s = np.exp(z.max(axis=0)) / n
        total += float(s.sum())
        total_sq += float((s * s).sum())
        done += k
    mean = total / reps
    se = 0.0
    if reps > 1:
        var = max(total_sq - reps * mean * mean, 0.0) / (reps - 1)
        se = float(np.sqrt(var / reps))
    return EstimateWithError(float(mean), se, reps)


def cluster_count_stats(counts) -> dict:
    """Quartiles, mean, and a fixed-width histogram of cluster counts.

    Quartiles use linear interpolation.  Bins are unit-width and centered
    on integers while the range allows, otherwise 20 equal-width bins.
    """
    c = np.asarray(counts, dtype=np.float64).reshape(-1)
    if c.size == 0:
        raise ValueError("empty input")
    q25, q50, q75 = np.percentile(c, [25.0, 50.0, 75.0])
    lo = float(c.min())
    hi = float(c.max())
    if hi - lo <= 40.0:
        edges = np.arange(np.floor(lo) - 0.5, np.floor(hi) + 1.5)
    else:
        edges = np.linspace(lo - 0.5, hi + 0.5, 21)
    hist, edges = np.histogram(c, bins=edges)
    return {
        "quartiles": [float(q25), float(q50), float(q75)],
        "mean": float(c.mean()),
        "histogram": {
            "edges": [float(e) for e in edges],
            "counts": [int(h) for h in hist],
        },
    }
