"""Dense real linear algebra for the snapshot PCA path.

Vectors are 1-D float64 arrays and matrices 2-D float64 arrays of shape
(rows, cols). Columns are the natural unit (one image or eigenface per
column), so anything that serializes a matrix writes it column-major.

The symmetric eigensolver is a cyclic Jacobi method. It is slow compared to
LAPACK but deterministic and accurate to working precision on the small
M x M Gram matrices the pipeline produces.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionError, NonFiniteError, NotSymmetricError

DEFAULT_TOL = 1e-10
DEFAULT_MAX_SWEEPS = 100
SYMMETRY_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Eigenvalues sorted descending; eigenvectors[:, i] pairs with eigenvalues[i]."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0


def _finite(x, what="input"):
    if not np.all(np.isfinite(x)):
        raise NonFiniteError(f"{what} contains NaN or Inf")
    return x


def as_vec(v):
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionError(f"expected a vector, got shape {v.shape}")
    return _finite(v, "vector")


def as_mat(m):
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {m.shape}")
    return _finite(m, "matrix")


def dot(u, v):
    """Inner product, summed in ascending index order."""
    u, v = as_vec(u), as_vec(v)
    if u.shape != v.shape:
        raise DimensionError(f"dot: length {u.size} vs {v.size}")
    total = 0.0
    for a, b in zip(u.tolist(), v.tolist()):
        total += a * b
    return total


def norm2(v):
    v = as_vec(v)
    return float(np.sqrt(dot(v, v)))


def axpy(alpha, u, v):
    """alpha * u + v."""
    u, v = as_vec(u), as_vec(v)
    if u.shape != v.shape:
        raise DimensionError(f"axpy: length {u.size} vs {v.size}")
    return _finite(float(alpha) * u + v, "axpy result")


def matvec(a, v):
    a, v = as_mat(a), as_vec(v)
    if a.shape[1] != v.size:
        raise DimensionError(f"matvec: matrix has {a.shape[1]} columns, vector length {v.size}")
    return _finite(a @ v, "matvec result")


def gram(a):
    """a^T a, symmetric by construction: the upper triangle is mirrored."""
    a = as_mat(a)
    if a.shape[1] < 1:
        raise DimensionError("gram: matrix has no columns")
    g = a.T @ a
    upper = np.triu(g)
    return _finite(upper + np.triu(g, 1).T, "gram result")


def off_diagonal_norm(m):
    return float(np.sqrt(2.0 * np.sum(np.triu(m, 1) ** 2)))


def _check_symmetric(m):
    if m.shape[0] != m.shape[1]:
        raise NotSymmetricError(f"matrix is not square: {m.shape}")
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    asym = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if asym > SYMMETRY_RTOL * scale:
        raise NotSymmetricError(f"matrix is not symmetric (max |m - m^T| = {asym:.3e})")


def _fix_signs(vecs):
    # largest-magnitude entry positive; argmax returns the lowest index on ties
    for i in range(vecs.shape[1]):
        col = vecs[:, i]
        j = int(np.argmax(np.abs(col)))
        if col[j] < 0:
            vecs[:, i] = -col
    return vecs


def sym_eigen(m, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS):
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi sweeps.

    Sweeps visit pairs (p, q), p < q, in row order and stop once the
    off-diagonal Frobenius norm falls to ``tol * ||m||_F``. Eigenvectors are
    sign-normalized so their largest-magnitude entry is positive.

    Raises NotSymmetricError for non-square or asymmetric input and
    ConvergenceError if ``max_sweeps`` is exhausted.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = np.array(as_mat(m), dtype=np.float64, copy=True)
    _check_symmetric(a)
    n = a.shape[0]
    # work on the exactly symmetric part so rotations stay symmetric
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    threshold = tol * float(np.sqrt(np.sum(a * a)))

    sweeps = 0
    off = off_diagonal_norm(a)
    while off > threshold:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {off:.3e} > {threshold:.3e})",
                off,
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app, aqq = a[p, p], a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
        sweeps += 1
        off = off_diagonal_norm(a)

    vals = np.diag(a).copy()
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    vecs = _fix_signs(v[:, order].copy())
    return EigenDecomposition(_finite(vals), _finite(vecs), sweeps)
