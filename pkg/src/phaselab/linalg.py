"""Small dense complex linear algebra: matrix exponentials, Hermitian
eigendecomposition with a deterministic phase convention, and structure
diagnostics.

The matrix exponential is a fixed-order Taylor kernel under scaling and
squaring.  It is branch-free apart from the scaling power, batches over
leading axes, and reproduces bit-identical results run to run, which the
golden tests rely on.
"""
from __future__ import annotations

import numpy as np

from .exceptions import ContractError, DimensionError, NumericError

_TAYLOR_ORDER = 20
_SCALING_THRESHOLD = 0.5


def _as_square(M, name: str = "matrix") -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim < 2 or M.shape[-1] != M.shape[-2]:
        raise DimensionError(f"{name} must be square, got shape {M.shape}")
    return M


def frobenius_norm(M: np.ndarray) -> float:
    """Frobenius norm over the trailing matrix axes (max over any batch axes)."""
    M = np.asarray(M)
    norms = np.sqrt((np.abs(M) ** 2).sum(axis=(-2, -1)))
    return float(np.max(norms))


def hermiticity_defect(M) -> float:
    """||M - M^dagger||_F, maximized over batch axes."""
    M = _as_square(M)
    return frobenius_norm(M - np.conj(np.swapaxes(M, -2, -1)))


def unitarity_defect(U) -> float:
    """||U^dagger U - I||_F, maximized over batch axes."""
    U = _as_square(U)
    eye = np.eye(U.shape[-1])
    return frobenius_norm(np.conj(np.swapaxes(U, -2, -1)) @ U - eye)


def require_hermitian(M, tol: float = 1e-12, name: str = "matrix") -> np.ndarray:
    """Validate the relative Hermiticity invariant and return the input."""
    M = _as_square(M, name)
    scale = max(frobenius_norm(M), 1e-300)
    defect = hermiticity_defect(M)
    if defect > tol * max(scale, 1.0):
        raise ContractError(
            f"{name} is not Hermitian: ||M - M^H||_F = {defect:.3e} "
            f"exceeds {tol:.1e} * max(||M||_F, 1)"
        )
    return M


def mat_exp(M) -> np.ndarray:
    """exp(M) by scaling-and-squaring around a fixed-order Taylor kernel.

    Accepts a single (d, d) matrix or a batch (..., d, d); the scaling power
    is chosen from the largest Frobenius norm in the batch so the whole batch
    follows one deterministic code path.
    """
    M = _as_square(M)
    if not (np.all(np.isfinite(M.real)) and np.all(np.isfinite(M.imag))):
        raise NumericError("matrix exponential of non-finite entries")
    norm = frobenius_norm(M)
    squarings = 0
    if norm > _SCALING_THRESHOLD:
        squarings = int(np.ceil(np.log2(norm / _SCALING_THRESHOLD)))
    A = M / (2.0**squarings)
    eye = np.broadcast_to(np.eye(A.shape[-1], dtype=complex), A.shape)
    out = eye.copy()
    term = eye.copy()
    for k in range(1, _TAYLOR_ORDER + 1):
        term = term @ A / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


def hermitian_eigen(H, tol: float = 1e-12):
    """Eigendecomposition of a Hermitian matrix with a fixed gauge.

    Returns (eigenvalues ascending, eigenvectors as columns).  Each column is
    rescaled so that its largest-magnitude entry is real and positive, ties
    broken by the lowest index; this removes the U(1) ambiguity that would
    otherwise break golden tests.
    """
    H = require_hermitian(H, tol=tol, name="eigen input")
    if H.ndim != 2:
        raise DimensionError("hermitian_eigen expects a single matrix, not a batch")
    vals, vecs = np.linalg.eigh(H)
    vecs = fix_eigenvector_phases(vecs)
    return vals, vecs


def fix_eigenvector_phases(vecs: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    vecs = np.array(vecs, dtype=complex)
    idx = np.argmax(np.abs(vecs), axis=0)
    pivots = vecs[idx, np.arange(vecs.shape[1])]
    phases = pivots / np.abs(pivots)
    return vecs * np.conj(phases)[None, :]
