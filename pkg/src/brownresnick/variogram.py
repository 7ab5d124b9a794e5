"""Fractional variogram models and the Gaussian kernels they induce.

The variogram ``gamma(t) = scale * |t|**alpha / 2`` fully parameterizes the
max-stable field simulated by this package.  Two Gaussian fields derive
from it:

* ``W``: centered, stationary increments, variance ``2*gamma`` (the
  convention ``Var W(t) / 2 = gamma(t)`` is used throughout), so
  ``Cov(W(s), W(t)) = gamma(s) + gamma(t) - gamma(s - t)``.
* ``Z``: same covariance kernel, mean ``-gamma``, pinned to zero at the
  origin.  ``Z`` drives the distributional oracles and the Pickands /
  extremal-index estimators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist


@dataclass(frozen=True)
class VariogramModel:
    """Fractional variogram ``gamma(t) = scale * |t|**alpha / 2``.

    Parameters
    ----------
    alpha : float
        Roughness exponent, in (0, 2].  Smaller values give rougher paths;
        ``alpha == 2`` yields a degenerate rank-``dim`` field of random
        paraboloids.
    scale : float
        Positive multiplier.
    dim : int
        Dimension of the index space, >= 1.
    """

    alpha: float
    scale: float = 1.0
    dim: int = 1
    family: str = "fractional"

    def __post_init__(self):
        if self.family != "fractional":
            raise ValueError(f"unknown variogram family {self.family!r}")
        if not 0.0 < self.alpha <= 2.0:
            raise ValueError(f"alpha must lie in (0, 2], got {self.alpha}")
        if not self.scale > 0.0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        if int(self.dim) < 1 or self.dim != int(self.dim):
            raise ValueError(f"dim must be a positive integer, got {self.dim}")


def as_points(model: VariogramModel, t) -> np.ndarray:
    """Coerce ``t`` to a (k, dim) float array, validating the dimension.

    Accepts a scalar (dim 1 only), a single point of shape (dim,), a list
    of scalar sites when dim is 1, or a batch of shape (k, dim).
    """
    arr = np.asarray(t, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1) if model.dim == 1 else arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != model.dim:
        raise ValueError(
            f"point has dimension {arr.shape[-1]}, model has dim {model.dim}"
        )
    return arr


def _gamma_points(model: VariogramModel, pts: np.ndarray) -> np.ndarray:
    sq = np.sum(pts * pts, axis=1)
    return model.scale * sq ** (model.alpha / 2.0) / 2.0


def gamma(model: VariogramModel, t):
    """Variogram value ``scale * ||t||**alpha / 2`` (vectorized over points)."""
    out = _gamma_points(model, as_points(model, t))
    return out[0] if out.shape[0] == 1 else out


def cov_w(model: VariogramModel, s, t):
    """Covariance of W: ``gamma(s) + gamma(t) - gamma(s - t)``."""
    ps, pt = np.broadcast_arrays(as_points(model, s), as_points(model, t))
    out = _gamma_points(model, ps) + _gamma_points(model, pt) - _gamma_points(model, ps - pt)
    return out[0] if out.shape[0] == 1 else out


def mean_z(model: VariogramModel, t):
    """Mean of Z: ``-gamma(t)``."""
    return -gamma(model, t)


def cov_z(model: VariogramModel, s, t):
    """Covariance of Z; identical kernel to :func:`cov_w`."""
    return cov_w(model, s, t)


def covariance_matrix(model: VariogramModel, points) -> np.ndarray:
    """Assemble the (n, n) covariance matrix of W over ``points``."""
    pts = as_points(model, points)
    g = _gamma_points(model, pts)
    cross = model.scale * cdist(pts, pts) ** model.alpha / 2.0
    return g[:, None] + g[None, :] - cross
