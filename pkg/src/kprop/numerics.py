"""Dense linear algebra for small symmetric matrices.

The whole pipeline only ever needs the spectrum of kernel matrices with at
most a few dozen rows (a class's labeled set after propagation), so the
eigensolver is a plain cyclic Jacobi iteration: slow asymptotically, very
hard to break, and bit-reproducible for identical input.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInputError, NonFiniteError, NotSymmetricError, ShapeMismatchError

# Convergence: off-diagonal Frobenius norm below this times (1 + ||A||_F).
_JACOBI_REL_TOL = 1e-12
_JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class EigenDecomposition:
    """Full spectrum of a symmetric matrix.

    Attributes
    ----------
    eigenvalues : (n,) ndarray
        Sorted in descending order.
    eigenvectors : (n, n) ndarray
        Orthonormal columns; column ``l`` pairs with ``eigenvalues[l]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _check_square_symmetric(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeMismatchError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        raise EmptyInputError("matrix order must be >= 1")
    if not np.isfinite(m).all():
        raise NonFiniteError("matrix contains NaN or Inf")
    asym = np.abs(m - m.T).max() if m.size else 0.0
    if asym > _JACOBI_REL_TOL * max(1.0, float(np.abs(m).max())):
        raise NotSymmetricError(f"matrix is not symmetric (max asymmetry {asym:.3e})")
    return m


def eigh_symmetric(m: np.ndarray) -> EigenDecomposition:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    m : (n, n) array_like
        Symmetric, finite. Asymmetry beyond 1e-12 (relative to the largest
        entry) is rejected; smaller asymmetry is averaged away.

    Returns
    -------
    EigenDecomposition
        Descending eigenvalues with matching orthonormal eigenvector columns.
        Equal eigenvalues keep the order the rotation loop produced, so
        repeated calls on the same input give bit-identical output.
    """
    m = _check_square_symmetric(m)
    n = m.shape[0]
    a = 0.5 * (m + m.T)
    v = np.eye(n)
    if n == 1:
        return EigenDecomposition(a[0].copy(), v)

    threshold = _JACOBI_REL_TOL * (1.0 + float(np.linalg.norm(m, "fro")))
    iu = np.triu_indices(n, k=1)
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = float(np.sqrt(2.0 * np.sum(a[iu] ** 2)))
        if off < threshold:
            break
        # threshold variant: only entries above the sweep gate are rotated;
        # the largest entry always is (off <= n * max), so sweeps still converge
        gate = off / (n * n)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= gate:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(tau) > 1e150:  # avoid overflow in tau*tau
                    t = 1.0 / (2.0 * tau)
                else:
                    t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0.0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # A <- J^T A J with J the (p,q) plane rotation.
                ap = c * a[p, :] - s * a[q, :]
                aq = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = ap, aq
                ap = c * a[:, p] - s * a[:, q]
                aq = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = ap, aq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = c * v[:, p] - s * v[:, q]
                vq = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = vp, vq

    vals = np.diag(a).copy()
    order = np.argsort(-vals, kind="stable")  # ties keep Jacobi output order
    return EigenDecomposition(vals[order], v[:, order])


def _complete_orthonormal(basis: np.ndarray, count: int) -> np.ndarray:
    """Append ``count`` orthonormal columns to ``basis`` (may have 0 columns)."""
    dim = basis.shape[0]
    cols = [basis[:, j] for j in range(basis.shape[1])]
    added = []
    for cand in range(dim):
        if len(added) == count:
            break
        w = np.zeros(dim)
        w[cand] = 1.0
        for u in cols:
            w -= (u @ w) * u
        nw = np.linalg.norm(w)
        if nw > 1e-8:
            w /= nw
            cols.append(w)
            added.append(w)
    if len(added) < count:
        raise RuntimeError("orthonormal completion failed")  # unreachable for count <= dim - rank
    return np.column_stack(added) if added else np.zeros((dim, 0))


def thin_svd(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin singular value decomposition ``a = U @ diag(s) @ V.T``.

    Computed from :func:`eigh_symmetric` on the smaller of the two Gram
    matrices. Returns ``(U, s, V)`` with ``r = min(n, d)`` columns each and
    ``s`` descending, non-negative. Null directions are filled with an
    orthonormal completion so both factors always have orthonormal columns.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise ShapeMismatchError(f"expected a 2-D matrix, got shape {a.shape}")
    n, d = a.shape
    if n == 0 or d == 0:
        raise EmptyInputError("matrix must have at least one row and column")
    if not np.isfinite(a).all():
        raise NonFiniteError("matrix contains NaN or Inf")

    if n <= d:
        gram = a @ a.T
        eig = eigh_symmetric(0.5 * (gram + gram.T))
        u = eig.eigenvectors
        s = np.sqrt(np.clip(eig.eigenvalues, 0.0, None))
        cutoff = max(n, d) * np.finfo(float).eps * (s[0] if s.size else 0.0)
        nonzero = s > cutoff
        v_cols = np.zeros((d, n))
        if nonzero.any():
            v_cols[:, nonzero] = (a.T @ u[:, nonzero]) / s[nonzero]
        k = int(np.count_nonzero(~nonzero))
        if k:
            v_cols[:, ~nonzero] = _complete_orthonormal(v_cols[:, nonzero], k)
        return u, s, v_cols

    gram = a.T @ a
    eig = eigh_symmetric(0.5 * (gram + gram.T))
    v = eig.eigenvectors
    s = np.sqrt(np.clip(eig.eigenvalues, 0.0, None))
    cutoff = max(n, d) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    nonzero = s > cutoff
    u_cols = np.zeros((n, d))
    if nonzero.any():
        u_cols[:, nonzero] = (a @ v[:, nonzero]) / s[nonzero]
    k = int(np.count_nonzero(~nonzero))
    if k:
        u_cols[:, ~nonzero] = _complete_orthonormal(u_cols[:, nonzero], k)
    return u_cols, s, v
