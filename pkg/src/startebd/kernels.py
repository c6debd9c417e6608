"""Hot numerical kernels for MPS gate sweeps and canonicalization.

Each kernel is written once in numba-compatible numpy and compiled with
``@njit(cache=True)`` unless the environment variable ``STARTEBD_NUMBA``
is set to ``0``/``false``/``off`` (or numba is not importable), in which
case the identical pure-numpy function runs uncompiled.  Both paths call
the same LAPACK routines, so results are bit-identical across backends.

Tensor layout convention: a site tensor has shape (left_bond, physical,
right_bond); a two-site gate is a (p*q, p*q) matrix whose row/column index
is the combined physical index with the *left* site's index slowest.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "NUMBA_ENABLED",
    "two_site_update",
    "qr_right_step",
    "svd_left_step",
]

_FLAG = os.environ.get("STARTEBD_NUMBA", "1").strip().lower()
_WANT_NUMBA = _FLAG not in ("0", "false", "off", "no")


def _two_site_update(left, right, gate, is_swap, threshold, max_bond, absorb_right):
    """Contract two neighboring site tensors, apply a gate (or swap the
    physical indices), then SVD-split with relative-threshold truncation.

    left: (cl, p, cm), right: (cm, q, cr), gate: (p*q, p*q) complex.
    ``max_bond == 0`` means uncapped.  ``absorb_right`` selects which side
    keeps the singular values, i.e. where the orthogonality center lands.

    Returns (new_left, new_right, svals, discarded_weight) with svals the
    retained (unnormalized) singular values.
    """
    cl, p, cm = left.shape
    q = right.shape[1]
    cr = right.shape[2]
    lm = np.ascontiguousarray(left).reshape(cl * p, cm)
    rm = np.ascontiguousarray(right).reshape(cm, q * cr)
    theta = lm @ rm
    if is_swap:
        th4 = theta.reshape(cl, p, q, cr)
        theta = np.ascontiguousarray(th4.transpose(0, 2, 1, 3)).reshape(cl * q, p * cr)
        p_out = q
        q_out = p
    else:
        th4 = theta.reshape(cl, p, q, cr)
        tmp = np.ascontiguousarray(th4.transpose(1, 2, 0, 3)).reshape(p * q, cl * cr)
        gth = gate @ tmp
        th4b = gth.reshape(p, q, cl, cr)
        theta = np.ascontiguousarray(th4b.transpose(2, 0, 1, 3)).reshape(cl * p, q * cr)
        p_out = p
        q_out = q
    U, s, Vh = np.linalg.svd(theta, False)
    cut = threshold * s[0]
    k = 0
    for i in range(s.shape[0]):
        if s[i] >= cut and s[i] > 0.0:
            k += 1
        else:
            break
    if max_bond > 0 and k > max_bond:
        k = max_bond
    if k < 1:
        k = 1
    total = 0.0
    dropped = 0.0
    for i in range(s.shape[0]):
        w = s[i] * s[i]
        total += w
        if i >= k:
            dropped += w
    discarded = dropped / total if total > 0.0 else 0.0
    svals = s[:k].copy()
    Uk = np.ascontiguousarray(U[:, :k])
    Vk = np.ascontiguousarray(Vh[:k, :])
    if absorb_right:
        new_left = Uk.reshape(cl, p_out, k)
        new_right = (Vk * svals.reshape(k, 1)).reshape(k, q_out, cr)
    else:
        new_left = (Uk * svals.reshape(1, k)).reshape(cl, p_out, k)
        new_right = Vk.reshape(k, q_out, cr)
    return new_left, new_right, svals, discarded


def _qr_right_step(T):
    """Reduced QR of a site tensor grouped as (left*phys, right).

    Returns (Q reshaped to a left-isometric site tensor, R carry).
    """
    cl, d, cr = T.shape
    M = np.ascontiguousarray(T).reshape(cl * d, cr)
    Q, R = np.linalg.qr(M)
    k = Q.shape[1]
    return np.ascontiguousarray(Q).reshape(cl, d, k), R


def _svd_left_step(T):
    """SVD of a site tensor grouped as (left, phys*right), dropping exact
    zeros.  Returns (carry = U*diag(s), svals, right-isometric tensor).
    """
    cl, d, cr = T.shape
    M = np.ascontiguousarray(T).reshape(cl, d * cr)
    U, s, Vh = np.linalg.svd(M, False)
    k = 0
    for i in range(s.shape[0]):
        if s[i] > 0.0:
            k += 1
        else:
            break
    if k < 1:
        k = 1
    svals = s[:k].copy()
    carry = np.ascontiguousarray(U[:, :k]) * svals.reshape(1, k)
    B = np.ascontiguousarray(Vh[:k, :]).reshape(k, d, cr)
    return carry, svals, B


NUMBA_ENABLED = False
if _WANT_NUMBA:
    try:
        from numba import njit

        two_site_update = njit(cache=True)(_two_site_update)
        qr_right_step = njit(cache=True)(_qr_right_step)
        svd_left_step = njit(cache=True)(_svd_left_step)
        NUMBA_ENABLED = True
    except ImportError:
        pass
if not NUMBA_ENABLED:
    two_site_update = _two_site_update
    qr_right_step = _qr_right_step
    svd_left_step = _svd_left_step


def warmup():
    """Trigger JIT compilation (a no-op on the numpy path)."""
    a = np.eye(2, dtype=np.complex128).reshape(1, 2, 2)
    b = np.eye(2, dtype=np.complex128).reshape(2, 2, 1)
    g = np.eye(4, dtype=np.complex128)
    two_site_update(a, b, g, False, 0.0, 0, True)
    two_site_update(a, b, g, True, 0.0, 0, False)
    qr_right_step(a)
    svd_left_step(b)
