"""Dense complex matrix primitives: spectral norms, block assembly, hermitian calculus.

All matrices are numpy complex128 arrays. Shapes are never implicit: every
public function validates and raises InvalidInputError on mismatch.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError

HERMITICITY_TOL = 1e-9
EIG_CLAMP = 1e-9


def as_cmat(m) -> np.ndarray:
    """Coerce to a 2-d complex128 array without copying when possible."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise InvalidInputError(f"expected a 2-d matrix, got ndim={a.ndim}")
    return a


def adjoint(m: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(m)).swapaxes(-1, -2)


def spectral_norm(m) -> float:
    """Largest singular value of a nonempty complex matrix."""
    a = as_cmat(m)
    if a.size == 0:
        raise InvalidInputError("spectral_norm of a dimension-zero matrix")
    return float(np.linalg.norm(a, ord=2))


def batched_spectral_norm(a: np.ndarray) -> np.ndarray:
    """Largest singular value along the last two axes of a (..., r, c) stack.

    Rows/columns of length one and 2-row/2-column stacks use closed forms
    (a Gram eigenvalue formula) so that large batches of small matrices do
    not pay a per-matrix LAPACK call.
    """
    a = np.asarray(a, dtype=np.complex128)
    r, c = a.shape[-2:]
    if r == 1 or c == 1:
        return np.sqrt(np.sum(np.abs(a) ** 2, axis=(-2, -1)))
    if min(r, c) == 2:
        # Gram matrix on the short side is 2x2: top eigenvalue in closed form.
        g = a @ adjoint(a) if r <= c else adjoint(a) @ a
        tr = np.real(g[..., 0, 0] + g[..., 1, 1])
        # det of a 2x2 psd matrix, clipped against tiny negative float noise
        det = np.real(g[..., 0, 0] * g[..., 1, 1]) - np.abs(g[..., 0, 1]) ** 2
        disc = np.maximum(tr * tr - 4.0 * det, 0.0)
        top = 0.5 * (tr + np.sqrt(disc))
        return np.sqrt(np.maximum(top, 0.0))
    return np.linalg.svd(a, compute_uv=False)[..., 0]


def top_singular_triple(m: np.ndarray) -> tuple[float, np.ndarray, np.ndarray, float]:
    """(sigma_1, left vector, right vector, gap) for a single matrix.

    gap is sigma_1 - sigma_2 (sigma_1 itself for rank-one shapes), the
    quantity callers compare against the smoothness threshold before
    trusting the gradient built from this pair.
    """
    a = as_cmat(m)
    u, s, vh = np.linalg.svd(a)
    gap = s[0] if s.size == 1 else s[0] - s[1]
    return float(s[0]), u[:, 0], np.conj(vh[0, :]), float(gap)


def block2x2(a, b, c, d) -> np.ndarray:
    """Concatenate four blocks [[a, b], [c, d]] with shape validation."""
    a, b, c, d = map(as_cmat, (a, b, c, d))
    if a.shape[0] != b.shape[0] or c.shape[0] != d.shape[0]:
        raise InvalidInputError("block rows disagree")
    if a.shape[1] != c.shape[1] or b.shape[1] != d.shape[1]:
        raise InvalidInputError("block columns disagree")
    return np.block([[a, b], [c, d]])


def herm_eigen(m) -> np.ndarray:
    """Ascending real eigenvalues; rejects matrices that are not hermitian."""
    a = as_cmat(m)
    if a.shape[0] != a.shape[1]:
        raise InvalidInputError("herm_eigen needs a square matrix")
    scale = max(spectral_norm(a), 1.0) if a.size else 1.0
    if spectral_norm(a - adjoint(a)) > HERMITICITY_TOL * scale:
        raise InvalidInputError("matrix is not hermitian within tolerance")
    return np.linalg.eigvalsh(a)


def psd_sqrt(m) -> np.ndarray:
    """Hermitian square root; eigenvalues in [-tol, 0) are clamped to 0."""
    a = as_cmat(m)
    if a.shape[0] != a.shape[1]:
        raise InvalidInputError("psd_sqrt needs a square matrix")
    scale = max(spectral_norm(a), 1.0)
    if spectral_norm(a - adjoint(a)) > HERMITICITY_TOL * scale:
        raise InvalidInputError("matrix is not hermitian within tolerance")
    w, v = np.linalg.eigh(a)
    if w[0] < -EIG_CLAMP * scale:
        raise InvalidInputError(f"matrix has a negative eigenvalue {w[0]:g}")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ adjoint(v)


def real_kernel(columns: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Real kernel of a complex-valued real-linear map.

    columns has shape (N, M): column j is the complex constraint vector
    multiplied by the j-th real parameter. Returns a (k, N) orthonormal real
    basis of the parameter vectors r with sum_j r[j]*columns[j] = 0, using
    singular values below tol * sigma_max as the rank cut.
    """
    cols = np.asarray(columns, dtype=np.complex128)
    if cols.ndim != 2:
        raise InvalidInputError("columns must be a (N, M) array")
    stacked = np.vstack([np.real(cols.T), np.imag(cols.T)])
    _, s, vt = np.linalg.svd(stacked, full_matrices=True)
    n = cols.shape[0]
    if s.size == 0 or s[0] == 0.0:
        return np.eye(n)
    rank = int(np.sum(s > tol * s[0]))
    return vt[rank:]
