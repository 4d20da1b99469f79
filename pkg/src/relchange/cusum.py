"""Partial-sum (CUSUM) machinery shared by all change tests.

For observations ``z_1, ..., z_n`` (vectors of dimension ``d``) the CUSUM
contrast evaluated on the grid ``s = i/n`` is

    T(i) = (1/n) * sum_{j<=i} z_j  -  (i/n^2) * sum_{j<=n} z_j,

which compares the partial sum up to ``i`` with its proportional share of the
total.  A single break in the mean of size ``mu_1 - mu_2`` at fraction ``t``
gives ``E[T(i)] ~ (s ∧ t - s t)(mu_1 - mu_2)``, so the squared norm of the
process integrates to ``(t(1-t))^2 / 3 * ||mu_1 - mu_2||^2`` plus noise.  The
rescaled Riemann sum in :func:`mhat_squared` therefore estimates the squared
size of the break.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

__all__ = [
    "CusumProcess",
    "ChangePointEstimate",
    "as_sample",
    "cusum_process",
    "estimate_changepoint",
    "integrated_squared_cusum",
    "mhat_squared",
]


def as_sample(data, min_n: int = 2) -> np.ndarray:
    """Validate and coerce observations to an (n, d) float array.

    ``data`` may be a 1-D sequence (d = 1) or an (n, d) matrix whose rows are
    observations in temporal order.  Raises :class:`InvalidInputError` when
    fewer than ``min_n`` rows, zero columns, or non-finite entries are found.
    """
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise InvalidInputError(f"expected 1-D or 2-D data, got ndim={arr.ndim}")
    n, d = arr.shape
    if d == 0:
        raise InvalidInputError("sample has dimension 0")
    if n < min_n:
        raise InvalidInputError(f"need at least {min_n} observations, got {n}")
    if not np.isfinite(arr).all():
        raise InvalidInputError("sample contains non-finite entries")
    return arr


@dataclass(frozen=True)
class CusumProcess:
    """CUSUM values on the grid s = i/n; ``values[i-1]`` holds T(i).

    ``values[n-1]`` is exactly zero by telescoping.
    """

    values: np.ndarray  # shape (n, d)
    n: int
    d: int

    def norms(self) -> np.ndarray:
        """Euclidean norm of T(i) for i = 1..n."""
        if self.d == 1:
            return np.abs(self.values[:, 0])
        return np.sqrt(np.einsum("ij,ij->i", self.values, self.values))


@dataclass(frozen=True)
class ChangePointEstimate:
    """Argmax break estimate: ``t_hat = index / n`` with index in 1..n-1."""

    t_hat: float
    index: int


def cusum_process(sample) -> CusumProcess:
    """Evaluate the CUSUM contrast of ``sample`` at the grid points s = i/n.

    The formulation ``T(i) = (S_i - (i/n) S_n) / n`` guarantees the terminal
    value T(n) = 0 exactly in floating point, and makes the process invariant
    under constant shifts of the sample at the grid points.
    """
    arr = as_sample(sample)
    n, d = arr.shape
    cum = np.cumsum(arr, axis=0)
    frac = np.arange(1, n + 1, dtype=float)[:, None] / n
    values = (cum - frac * cum[-1]) / n
    return CusumProcess(values=values, n=n, d=d)


def _argmax_index(norms: np.ndarray) -> int:
    """Smallest 1-based index in {1, .., n-1} maximising ``norms``.

    The terminal grid point is excluded: T(n) = 0 always, and allowing
    t_hat = 1 would divide by zero downstream.  np.argmax returns the first
    maximiser, which implements the smallest-index tie rule.
    """
    n = norms.shape[0]
    return int(np.argmax(norms[: n - 1])) + 1


def estimate_changepoint(process: CusumProcess) -> ChangePointEstimate:
    """Break location by the argmax principle on ``||T(i)||``, i in 1..n-1.

    Ties (including the all-zero process) resolve to the smallest index.
    """
    index = _argmax_index(process.norms())
    return ChangePointEstimate(t_hat=index / process.n, index=index)


def integrated_squared_cusum(process: CusumProcess) -> float:
    """Riemann sum (1/n) * sum_i ||T(i)||^2 of the squared process."""
    return float(np.mean(np.einsum("ij,ij->i", process.values, process.values)))


def mhat_squared(integral: float, cp: ChangePointEstimate, bias_correction: float | None = None) -> float:
    """Rescale the integrated squared CUSUM into a break-size estimate.

    Returns ``3 / (t_hat (1 - t_hat))^2 * integral`` minus the optional
    ``bias_correction`` term (the caller supplies the full term, e.g.
    ``sigma_hat^2 / (6 n)``).  With the correction the result may be
    negative; it is reported as-is.
    """
    if integral < 0:
        raise InvalidInputError("integrated squared CUSUM must be nonnegative")
    t = cp.t_hat
    value = 3.0 / (t * (1.0 - t)) ** 2 * integral
    if bias_correction is not None:
        value -= bias_correction
    return float(value)
