"""Kernel evaluation and implicit-feature-space centering.

The Gaussian kernel ``k(x, y) = exp(-||x - y||^2 / (2 sigma^2))`` is the
working kernel of the pipeline; an inner-product ("linear") kernel is kept
alongside it so kernel-space results can be cross-checked against ordinary
input-space PCA.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigError,
    EmptyInputError,
    NonFiniteError,
    NotSymmetricError,
    ShapeMismatchError,
)

#: Kernel width used throughout unless overridden. Raw (unnormalized)
#: backbone features sit at pairwise distances of a few tens of units, and
#: this width is matched to that scale.
DEFAULT_SIGMA = 16.0

_KINDS = ("gaussian", "linear")


@dataclass(frozen=True)
class KernelConfig:
    """Kernel choice and width.

    ``sigma`` is in feature-space distance units and must be positive and
    finite. ``kind`` is "gaussian" for normal operation; "linear" selects the
    inner-product kernel (sigma is ignored) and exists for oracle checks.
    """

    sigma: float = DEFAULT_SIGMA
    kind: str = "gaussian"

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ConfigError(f"unknown kernel kind {self.kind!r}; expected one of {_KINDS}")
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise ConfigError(f"kernel width sigma must be positive and finite, got {self.sigma}")


@dataclass(frozen=True)
class CenteredKernel:
    """A kernel matrix together with its mean-centered form.

    ``row_means[i]`` is the mean of row i of ``raw`` and ``grand_mean`` the
    mean of all entries; both reappear in the projection formula for new
    points, so they are kept explicitly.
    """

    raw: np.ndarray
    centered: np.ndarray
    row_means: np.ndarray
    grand_mean: float


def _as_points(x, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if not np.isfinite(x).all():
        raise NonFiniteError(f"{name} contains NaN or Inf")
    return x


def pairwise_sq_dists(a: np.ndarray, b: np.ndarray, chunk: int = 256) -> np.ndarray:
    """Exact squared Euclidean distances between rows of ``a`` and rows of ``b``.

    Uses explicit squared differences (not the expanded dot-product form) so
    the values are exactly symmetric and safe to use in argmin tie-breaking;
    chunked over rows of ``a`` to bound memory.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if a.shape[1] != b.shape[1]:
        raise ShapeMismatchError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]}")
    out = np.empty((a.shape[0], b.shape[0]))
    for start in range(0, a.shape[0], chunk):
        stop = min(start + chunk, a.shape[0])
        diff = a[start:stop, None, :] - b[None, :, :]
        out[start:stop] = np.einsum("ijk,ijk->ij", diff, diff)
    return out


def kernel_values(z: np.ndarray, points: np.ndarray, cfg: KernelConfig) -> np.ndarray:
    """Kernel row ``k(z_i, x_j)`` for query rows ``z`` against ``points``."""
    z = np.atleast_2d(_as_points(z, "query"))
    points = np.atleast_2d(_as_points(points, "points"))
    if cfg.kind == "linear":
        return z @ points.T
    return np.exp(-pairwise_sq_dists(z, points) / (2.0 * cfg.sigma**2))


def gaussian_kernel(x, y, cfg: KernelConfig = KernelConfig()) -> float:
    """Gaussian kernel between two feature vectors.

    Returns ``exp(-||x - y||^2 / (2 sigma^2))``, in (0, 1], symmetric in its
    arguments, and exactly 1 when ``x == y``. Always Gaussian regardless of
    ``cfg.kind``; the kind switch only affects the matrix-level helpers.
    """
    x = _as_points(x, "x").ravel()
    y = _as_points(y, "y").ravel()
    if x.shape != y.shape:
        raise ShapeMismatchError(f"dimension mismatch: {x.shape[0]} vs {y.shape[0]}")
    return float(np.exp(-np.sum((x - y) ** 2) / (2.0 * cfg.sigma**2)))


def kernel_matrix(points, cfg: KernelConfig = KernelConfig()) -> np.ndarray:
    """Symmetric kernel matrix ``K[i, j] = k(x_i, x_j)`` over point rows.

    Gaussian kind guarantees an exactly-unit diagonal and exact symmetry.
    """
    points = np.atleast_2d(_as_points(points, "points"))
    n = points.shape[0]
    if n == 0:
        raise EmptyInputError("kernel matrix of an empty point set")
    if cfg.kind == "linear":
        k = points @ points.T
        return 0.5 * (k + k.T)
    sq = pairwise_sq_dists(points, points)
    k = np.exp(-sq / (2.0 * cfg.sigma**2))
    k = 0.5 * (k + k.T)
    np.fill_diagonal(k, 1.0)
    return k


def center_kernel_matrix(k: np.ndarray) -> CenteredKernel:
    """Mean-center a kernel matrix in implicit feature space.

    Returns ``K - 1n K - K 1n + 1n K 1n`` (``1n`` the n-by-n matrix of 1/n),
    i.e. the Gram matrix of the mapped points after subtracting their mean.
    The result is positive semidefinite up to round-off whenever ``k`` is.
    """
    k = np.asarray(k, dtype=float)
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise ShapeMismatchError(f"kernel matrix must be square, got shape {k.shape}")
    if k.shape[0] == 0:
        raise EmptyInputError("cannot center an empty kernel matrix")
    if not np.isfinite(k).all():
        raise NonFiniteError("kernel matrix contains NaN or Inf")
    if np.abs(k - k.T).max() > 1e-9 * max(1.0, float(np.abs(k).max())):
        raise NotSymmetricError("kernel matrix is not symmetric")
    row_means = k.mean(axis=1)
    grand_mean = float(k.mean())
    centered = k - row_means[None, :] - row_means[:, None] + grand_mean
    centered = 0.5 * (centered + centered.T)
    return CenteredKernel(raw=k, centered=centered, row_means=row_means, grand_mean=grand_mean)
