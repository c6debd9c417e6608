"""Dense complex linear-algebra kernels shared by the MPS and oracle layers.

Everything here is a thin, validated layer over LAPACK-backed numpy/scipy
routines.  The truncation rule treats the threshold as *relative* to the
largest singular value, so its meaning is stable while the global norm
drifts under non-unitary evolution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "TruncationPolicy",
    "truncated_svd",
    "matrix_exponential",
    "kron",
    "eigendecompose_hermitian",
]

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class TruncationPolicy:
    """Singular-value truncation rule.

    threshold: relative cutoff; values s_i >= threshold * s_max are kept
        (ties at the boundary are kept).
    max_bond: optional hard cap on the number of retained values.
    """

    threshold: float = 0.0
    max_bond: int | None = None

    def __post_init__(self):
        if self.threshold < 0:
            raise ValueError(f"threshold must be >= 0, got {self.threshold}")
        if self.max_bond is not None and self.max_bond < 1:
            raise ValueError(f"max_bond must be >= 1, got {self.max_bond}")


def _require_finite(M: np.ndarray, name: str) -> np.ndarray:
    M = np.asarray(M)
    if not np.all(np.isfinite(M.real)) or not np.all(np.isfinite(M.imag if np.iscomplexobj(M) else M.real)):
        raise ValueError(f"{name} contains non-finite entries")
    return M


def truncated_svd(
    M: np.ndarray, policy: TruncationPolicy
) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """SVD of M with relative-threshold truncation.

    Returns (U, s, Vh, discarded_weight) where M ~= U @ diag(s) @ Vh,
    s is nonincreasing and strictly positive, and discarded_weight is
    sum(dropped s_i^2) / sum(all s_i^2).
    """
    M = _require_finite(M, "matrix")
    if M.ndim != 2 or M.size == 0:
        raise ValueError(f"expected a nonempty 2-d matrix, got shape {M.shape}")
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    if s[0] == 0.0:
        raise ValueError("matrix has no nonzero entries")
    keep = s >= policy.threshold * s[0]
    keep &= s > 0.0
    k = int(np.count_nonzero(keep))
    if policy.max_bond is not None:
        k = min(k, policy.max_bond)
    k = max(k, 1)
    total = float(np.sum(s**2))
    discarded = float(np.sum(s[k:] ** 2)) / total
    return U[:, :k], s[:k], Vh[:k, :], discarded


def matrix_exponential(M: np.ndarray) -> np.ndarray:
    """exp(M) for a small dense square matrix, non-Hermitian safe.

    Uses scaling-and-squaring with Pade approximation (scipy.linalg.expm).
    """
    M = _require_finite(M, "matrix")
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix exponential needs a square matrix, got shape {M.shape}")
    return scipy.linalg.expm(M)


def kron(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kronecker product with input validation."""
    A = _require_finite(A, "left factor")
    B = _require_finite(B, "right factor")
    return np.kron(A, B)


def eigendecompose_hermitian(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvectors as columns).  Rejects
    matrices whose anti-Hermitian part exceeds HERMITICITY_TOL.
    """
    M = _require_finite(M, "matrix")
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    dev = np.max(np.abs(M - M.conj().T))
    if dev > HERMITICITY_TOL:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    w, V = np.linalg.eigh(M)
    return w, V
