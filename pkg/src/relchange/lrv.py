"""Long-run variance and covariance estimation.

Every test variance in this package is a weighted quadratic form in the
long-run covariances of the (possibly transformed) series before and after
the estimated break.  This module provides the Bartlett-kernel HAC estimator
with the data-adaptive AR(1) plug-in bandwidth

    gamma = 1.1477 * (4 rho^2 m / (1 - rho^2)^2)^(1/3),

applied separately to the two subsamples, plus the simpler segment-mean based
covariance estimators used when serial independence is assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cusum import ChangePointEstimate, as_sample
from .errors import InsufficientDataError, InvalidInputError

__all__ = [
    "SegmentMeans",
    "LrvEstimate",
    "segment_means",
    "pooled_centered_covariance",
    "difference_based_covariance",
    "ar1_coefficient",
    "andrews_bandwidth",
    "bartlett_lrv",
    "split_lrv",
]

BANDWIDTH_CONSTANT = 1.1477
RHO_CLAMP = 0.99


@dataclass(frozen=True)
class SegmentMeans:
    """Mean vectors before and after the break index."""

    mu1: np.ndarray
    mu2: np.ndarray


@dataclass(frozen=True)
class LrvEstimate:
    """Per-segment long-run covariance matrices and the bandwidths used."""

    v1: np.ndarray
    v2: np.ndarray
    bandwidth1: float
    bandwidth2: float


def _split(arr: np.ndarray, cp: ChangePointEstimate) -> tuple[np.ndarray, np.ndarray]:
    k = cp.index
    if not 1 <= k <= arr.shape[0] - 1:
        raise InvalidInputError(f"break index {k} outside 1..{arr.shape[0] - 1}")
    return arr[:k], arr[k:]


def segment_means(sample, cp: ChangePointEstimate) -> SegmentMeans:
    """Averages of the rows before and after the break index."""
    arr = as_sample(sample)
    seg1, seg2 = _split(arr, cp)
    return SegmentMeans(mu1=seg1.mean(axis=0), mu2=seg2.mean(axis=0))


def pooled_centered_covariance(sample, cp: ChangePointEstimate) -> np.ndarray:
    """Covariance pooled over both segments, each centered at its own mean.

    Equals (1/n) of the residual sum of squares (outer products) of the
    two-segment mean fit; coincides with the ordinary covariance when the
    segment means agree.
    """
    arr = as_sample(sample)
    seg1, seg2 = _split(arr, cp)
    n = arr.shape[0]
    r1 = seg1 - seg1.mean(axis=0)
    r2 = seg2 - seg2.mean(axis=0)
    return (r1.T @ r1 + r2.T @ r2) / n


def difference_based_covariance(sample, cp: ChangePointEstimate) -> np.ndarray:
    """Sum of outer products of within-segment first differences, over n.

    For i.i.d. data this estimates twice the covariance; callers wanting a
    covariance estimate must halve it.  The raw sum is exposed unmodified.
    """
    arr = as_sample(sample)
    seg1, seg2 = _split(arr, cp)
    if seg1.shape[0] < 2 or seg2.shape[0] < 2:
        raise InsufficientDataError("both segments need length >= 2 for differencing")
    d1 = np.diff(seg1, axis=0)
    d2 = np.diff(seg2, axis=0)
    n = arr.shape[0]
    return (d1.T @ d1 + d2.T @ d2) / n


def ar1_coefficient(series) -> float:
    """Lag-1 least-squares slope (with intercept), clamped to [-0.99, 0.99].

    A zero-variance predictor window returns 0.
    """
    x = np.asarray(series, dtype=float).ravel()
    m = x.shape[0]
    if m < 3:
        raise InvalidInputError(f"need at least 3 observations, got {m}")
    lagged = x[:-1] - x[:-1].mean()
    lead = x[1:] - x[1:].mean()
    denom = lagged @ lagged
    if denom == 0.0:
        return 0.0
    rho = float(lagged @ lead / denom)
    return float(np.clip(rho, -RHO_CLAMP, RHO_CLAMP))


def andrews_bandwidth(rho_hat: float, m: int) -> float:
    """Data-adaptive Bartlett bandwidth for an AR(1) plug-in with ``m`` points."""
    if not abs(rho_hat) < 1:
        raise InvalidInputError("|rho_hat| must be < 1")
    if m < 1:
        raise InvalidInputError("m must be >= 1")
    return BANDWIDTH_CONSTANT * (4.0 * rho_hat**2 * m / (1.0 - rho_hat**2) ** 2) ** (1.0 / 3.0)


def _bartlett_weights(m: int, gamma: float) -> np.ndarray:
    """Kernel weights k(j/gamma) for the lags j = 1, ..  (empty when gamma <= 1).

    k(x) = (1 - |x|) on |x| <= 1, so only lags j < gamma contribute.
    """
    if gamma <= 1.0:
        return np.empty(0)
    jmax = min(m - 1, int(np.ceil(gamma)) - 1)
    j = np.arange(1, jmax + 1, dtype=float)
    return np.maximum(0.0, 1.0 - j / gamma)


def _bartlett_lrv_matrix(segment: np.ndarray, center: np.ndarray, gamma: float) -> np.ndarray:
    """Bartlett-weighted long-run covariance matrix of one segment.

    V = (1/m) sum_i y_i y_i^T
        + (1/m) sum_{j>=1} k(j/gamma) sum_i (y_i y_{i+j}^T + y_{i+j} y_i^T)

    with y = segment - center.  The Bartlett weights make the result
    positive semidefinite for any gamma >= 0.
    """
    y = segment - center
    m = y.shape[0]
    v = y.T @ y / m
    for j, w in enumerate(_bartlett_weights(m, gamma), start=1):
        cross = y[:-j].T @ y[j:] / m
        v = v + w * (cross + cross.T)
    return v


def bartlett_lrv(series, center: float, gamma: float) -> float:
    """Scalar Bartlett (triangular-kernel) long-run variance estimate.

    ``gamma`` is the bandwidth; gamma <= 1 reduces to the plain mean squared
    deviation about ``center``.  The output is clipped at zero to absorb
    floating-point round-off (the exact value is nonnegative).
    """
    x = np.asarray(series, dtype=float).ravel()
    if x.shape[0] < 2:
        raise InvalidInputError("need at least 2 observations")
    if gamma < 0:
        raise InvalidInputError("gamma must be >= 0")
    v = _bartlett_lrv_matrix(x[:, None], np.asarray([float(center)]), gamma)
    return max(float(v[0, 0]), 0.0)


def split_lrv(transformed, cp: ChangePointEstimate) -> LrvEstimate:
    """HAC long-run covariances of the two subsamples around the break.

    Each segment gets its own AR(1) coefficient (from its first coordinate)
    and bandwidth; cross-coordinate terms share the segment bandwidth.
    Segments shorter than 3 observations raise :class:`InsufficientDataError`.
    """
    arr = as_sample(transformed)
    seg1, seg2 = _split(arr, cp)
    if seg1.shape[0] < 3 or seg2.shape[0] < 3:
        raise InsufficientDataError("both segments need length >= 3 for HAC estimation")
    out = []
    for seg in (seg1, seg2):
        rho = ar1_coefficient(seg[:, 0])
        gamma = andrews_bandwidth(rho, seg.shape[0])
        out.append((_bartlett_lrv_matrix(seg, seg.mean(axis=0), gamma), gamma))
    (v1, g1), (v2, g2) = out
    return LrvEstimate(v1=v1, v2=v2, bandwidth1=g1, bandwidth2=g2)
