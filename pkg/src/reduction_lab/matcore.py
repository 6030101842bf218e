"""Dense complex linear algebra kernel.

Everything downstream works on plain ``numpy.ndarray`` matrices with
``complex128`` entries.  Composite systems use the object-first tensor
convention: the object space is the first Kronecker factor, and the
composite index flattens as ``(i_obj, i_app) -> i_obj * dim_app + i_app``.
"""

from __future__ import annotations

import numpy as np

DEFAULT_TOL = 1e-10


def as_complex_matrix(m) -> np.ndarray:
    """Validate and coerce to a square complex128 matrix with finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise ValueError("matrix dimension must be >= 1")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def max_abs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if np.size(m) else 0.0


def spectral_norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(m, 2))


def is_hermitian(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    scale = max(frobenius(m), 1.0)
    return frobenius(m - dagger(m)) <= tol * scale


def tensor(a, b) -> np.ndarray:
    """Kronecker product, object space first."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def partial_trace_apparatus(m, dim_s: int, dim_a: int) -> np.ndarray:
    """Trace out the second (apparatus) tensor factor of a composite matrix."""
    m = as_complex_matrix(m)
    if dim_s < 1 or dim_a < 1:
        raise ValueError("dimensions must be positive")
    if m.shape[0] != dim_s * dim_a:
        raise ValueError(
            f"matrix dim {m.shape[0]} != dim_s * dim_a = {dim_s * dim_a}"
        )
    m4 = m.reshape(dim_s, dim_a, dim_s, dim_a)
    return np.einsum("ikjk->ij", m4)


def hermitian_eig(m, tol: float = DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvectors as orthonormal columns.  Raises ``ValueError`` on input
    that is not Hermitian within ``tol * ||m||``.
    """
    m = as_complex_matrix(m)
    if not is_hermitian(m, tol):
        raise ValueError(
            f"matrix is not Hermitian within tolerance "
            f"(||m - m^dag|| = {frobenius(m - dagger(m)):.3e})"
        )
    w, v = np.linalg.eigh((m + dagger(m)) / 2)
    return w, v


def trace_norm(m) -> float:
    """Sum of singular values."""
    m = as_complex_matrix(m)
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def trace_distance(a, b) -> float:
    """Half the trace norm of the difference."""
    return 0.5 * trace_norm(as_complex_matrix(a) - as_complex_matrix(b))


def min_eigenvalue(m) -> float:
    """Smallest eigenvalue of the Hermitian part of ``m``."""
    m = as_complex_matrix(m)
    h = (m + dagger(m)) / 2
    return float(np.linalg.eigvalsh(h)[0])


def is_psd(m, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``m`` is Hermitian (within tol) with min eigenvalue >= -tol."""
    m = as_complex_matrix(m)
    if not is_hermitian(m, tol):
        return False
    return min_eigenvalue(m) >= -tol
