"""Per-class kernel PCA and reconstruction-error scoring.

A class is represented by its labeled feature points. Fitting extracts the
leading eigenpairs of the mean-centered kernel matrix; scoring a query
measures the squared distance, in the implicit kernel feature space, between
the query and its projection onto those components. Level sets of that score
hug the shape of the point distribution, which is what makes it usable as a
per-class decision function.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, EmptyInputError, ShapeMismatchError
from .kernels import KernelConfig, center_kernel_matrix, kernel_matrix, kernel_values
from .numerics import eigh_symmetric

#: Eigenvalues at or below ``1e-10 * max(1, trace)`` are treated as numerical
#: zeros and never become components (protects the 1/sqrt(eigenvalue) scaling).
_COMPONENT_CUTOFF_REL = 1e-10

_EIGVEC_SOURCES = ("centered", "raw")


@dataclass(frozen=True)
class KpcaModel:
    """Fitted kernel PCA for one point set.

    ``alphas`` holds one dual coefficient vector per retained component
    (rows), scaled so that ``eigenvalue * ||alpha||^2 == 1``; with that
    scaling the implicit-space components are orthonormal. ``q_effective``
    of them are actually used when projecting, which can be fewer than
    ``q_requested`` when the point set has low rank (a 1-shot class has rank
    zero, for instance).
    """

    train_points: np.ndarray
    cfg: KernelConfig
    alphas: np.ndarray
    eigenvalues: np.ndarray
    q_requested: int
    q_effective: int
    row_means: np.ndarray
    grand_mean: float
    eigvec_source: str = "centered"

    @property
    def n_points(self) -> int:
        return self.train_points.shape[0]

    @property
    def dim(self) -> int:
        return self.train_points.shape[1]


def fit_kpca(
    points,
    cfg: KernelConfig = KernelConfig(),
    q: int = 1,
    eigvec_source: str = "centered",
) -> KpcaModel:
    """Fit kernel PCA on a point set.

    Parameters
    ----------
    points : (n, d) array_like
        Training points, n >= 1.
    cfg : KernelConfig
        Kernel choice and width.
    q : int
        Number of principal components requested; the effective count is
        clamped to the numerically nonzero spectrum.
    eigvec_source : {"centered", "raw"}
        Where the dual coefficients come from. "centered" (default) uses the
        mean-centered kernel matrix, under which the projection formula is
        exact; "raw" takes eigenvectors of the uncentered matrix instead and
        exists only as a diagnostic for comparing the two conventions.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[0] == 0:
        raise EmptyInputError("cannot fit kernel PCA on an empty point set")
    if q < 0:
        raise ConfigError(f"component count q must be >= 0, got {q}")
    if eigvec_source not in _EIGVEC_SOURCES:
        raise ConfigError(f"eigvec_source must be one of {_EIGVEC_SOURCES}, got {eigvec_source!r}")

    k = kernel_matrix(points, cfg)
    ck = center_kernel_matrix(k)
    target = ck.centered if eigvec_source == "centered" else ck.raw
    eig = eigh_symmetric(target)

    cutoff = _COMPONENT_CUTOFF_REL * max(1.0, float(np.trace(target)))
    retained = eig.eigenvalues > cutoff
    vals = eig.eigenvalues[retained]
    vecs = eig.eigenvectors[:, retained]
    # Scale so eigenvalue * ||alpha||^2 == 1 (orthonormal implicit components).
    alphas = (vecs / np.sqrt(vals)[None, :]).T if vals.size else np.zeros((0, points.shape[0]))

    return KpcaModel(
        train_points=points.copy(),
        cfg=cfg,
        alphas=alphas,
        eigenvalues=vals,
        q_requested=int(q),
        q_effective=int(min(q, vals.size)),
        row_means=ck.row_means,
        grand_mean=ck.grand_mean,
        eigvec_source=eigvec_source,
    )


def _check_query_dim(model: KpcaModel, z: np.ndarray) -> None:
    if z.shape[-1] != model.dim:
        raise ShapeMismatchError(
            f"query dimension {z.shape[-1]} does not match model dimension {model.dim}"
        )


def project_many(model: KpcaModel, z) -> np.ndarray:
    """Principal-component projections for each query row.

    Returns an ``(m, q_effective)`` array; column l is the projection onto
    component l, computed with the stored row means and grand mean so a new
    point is centered consistently with the training set.
    """
    z = np.atleast_2d(np.asarray(z, dtype=float))
    _check_query_dim(model, z)
    if model.q_effective == 0:
        return np.zeros((z.shape[0], 0))
    kz = kernel_values(z, model.train_points, model.cfg)  # (m, n)
    centered = kz - model.row_means[None, :] - kz.mean(axis=1, keepdims=True) + model.grand_mean
    return centered @ model.alphas[: model.q_effective].T


def project(model: KpcaModel, z) -> np.ndarray:
    """Projections of a single query vector; shape ``(q_effective,)``."""
    z = np.asarray(z, dtype=float)
    if z.ndim != 1:
        raise ShapeMismatchError(f"expected a single feature vector, got shape {z.shape}")
    return project_many(model, z[None, :])[0]


def reconstruction_errors(model: KpcaModel, z, clamp: bool = True) -> np.ndarray:
    """Reconstruction error of each query row; shape ``(m,)``.

    The score is ``k(z,z) - (2/n) sum_i k(z,x_i) + grand_mean`` minus the sum
    of squared projections over the ``q_effective`` leading components. It is
    non-negative up to round-off; ``clamp`` zeroes the tiny negatives that
    round-off produces.
    """
    z = np.atleast_2d(np.asarray(z, dtype=float))
    _check_query_dim(model, z)
    kz = kernel_values(z, model.train_points, model.cfg)  # (m, n)
    if model.cfg.kind == "linear":
        kzz = np.einsum("ij,ij->i", z, z)
    else:
        kzz = np.ones(z.shape[0])
    errs = kzz - 2.0 * kz.mean(axis=1) + model.grand_mean
    if model.q_effective > 0:
        centered = kz - model.row_means[None, :] - kz.mean(axis=1, keepdims=True) + model.grand_mean
        f = centered @ model.alphas[: model.q_effective].T
        errs = errs - np.einsum("ij,ij->i", f, f)
    if clamp:
        errs = np.maximum(errs, 0.0)
    return errs


def reconstruction_error(model: KpcaModel, z, clamp: bool = True) -> float:
    """Reconstruction error of a single query vector."""
    z = np.asarray(z, dtype=float)
    if z.ndim != 1:
        raise ShapeMismatchError(f"expected a single feature vector, got shape {z.shape}")
    return float(reconstruction_errors(model, z[None, :], clamp=clamp)[0])
