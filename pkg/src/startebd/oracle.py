"""Brute-force references for small instances: dense Hamiltonian assembly,
state-vector propagation, Schmidt/entropy computation, and the closed-form
entanglement of the partially transformed GHZ state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import InstanceTooLargeError
from .linalg import matrix_exponential, kron
from .model import DiscretizedBath, ModelConfig, SimilarityGenerator, boson_ops, transform_operator, transform_spin_term

__all__ = [
    "DenseInstance",
    "dense_hamiltonian",
    "propagate_exact",
    "dense_schmidt",
    "schmidt_entropy",
    "partial_trace_site",
    "apply_two_site_gate_dense",
    "apply_single_site_gate_dense",
    "swap_sites_dense",
    "ghz_seff_closed_form",
]

_MAX_MODES = 6
_MAX_FOCK = 6
_MAX_DIM = 2**20


@dataclass(frozen=True)
class DenseInstance:
    """Full Hamiltonian on spin (x) modes, with the spin as the slowest
    index and the modes in bath order."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _embed(ops_by_site: dict[int, np.ndarray], dims: list[int]) -> np.ndarray:
    factors = [
        ops_by_site.get(i, np.eye(d, dtype=np.complex128)) for i, d in enumerate(dims)
    ]
    return reduce(kron, factors)


def _check_guard(n_modes: int, fock_dim: int):
    dim = 2 * fock_dim**n_modes
    if n_modes > _MAX_MODES or fock_dim > _MAX_FOCK or dim > _MAX_DIM:
        raise InstanceTooLargeError(
            f"dense oracle limited to N <= {_MAX_MODES}, d <= {_MAX_FOCK} "
            f"(requested N = {n_modes}, d = {fock_dim}, dimension {dim})"
        )


def dense_hamiltonian(
    cfg: ModelConfig, bath: DiscretizedBath, gen: SimilarityGenerator
) -> DenseInstance:
    """Assemble the transformed Hamiltonian densely via Kronecker embedding."""
    _check_guard(bath.n_modes, bath.fock_dim)
    d = bath.fock_dim
    dims = [2] + [d] * bath.n_modes
    _, x, num = boson_ops(d)
    H = _embed({0: transform_spin_term(cfg.delta, gen)}, dims)
    coupling_op = transform_operator(np.array([[1, 0], [0, -1]], dtype=np.complex128), gen)
    for n, (w, c) in enumerate(zip(bath.omegas, bath.couplings)):
        H = H + c * _embed({0: coupling_op, n + 1: x}, dims)
        H = H + w * _embed({n + 1: num}, dims)
    return DenseInstance(matrix=H, dims=tuple(dims))


def propagate_exact(
    instance: DenseInstance, psi0: np.ndarray, t_grid: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """States exp(-i H t_k) |psi0>, each renormalized with the stripped norm
    factor reported alongside (mirrors the MPS engine's norm policy).

    Uses one dense matrix exponential per distinct grid interval.
    """
    psi0 = np.asarray(psi0, dtype=np.complex128)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-10:
        raise ValueError("psi0 must be normalized")
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    states = np.empty((len(t_grid), instance.dim), dtype=np.complex128)
    factors = np.empty(len(t_grid))
    propagators: dict[float, np.ndarray] = {}
    psi = psi0.copy()
    t_prev = 0.0
    for k, t in enumerate(t_grid):
        dt = t - t_prev
        if dt > 0:
            key = round(dt, 12)
            if key not in propagators:
                propagators[key] = matrix_exponential(-1j * dt * instance.matrix)
            psi = propagators[key] @ psi
        nrm = float(np.linalg.norm(psi))
        if not np.isfinite(nrm) or nrm <= 1e-300:
            raise ValueError(f"dense propagation degenerated at t = {t}")
        psi = psi / nrm
        states[k] = psi
        factors[k] = nrm
        t_prev = t
    return states, factors


def dense_schmidt(psi: np.ndarray, cut: int, dims: list[int]) -> np.ndarray:
    """Normalized singular values of the bipartition after `cut` sites."""
    psi = np.asarray(psi, dtype=np.complex128)
    total = int(np.prod(dims))
    if psi.shape != (total,):
        raise ValueError(f"state length {psi.shape} does not match dims {dims}")
    if not 1 <= cut <= len(dims) - 1:
        raise ValueError(f"cut {cut} out of range for {len(dims)} sites")
    left = int(np.prod(dims[:cut]))
    s = np.linalg.svd(psi.reshape(left, total // left), compute_uv=False)
    s = s[s > 0]
    return s / np.linalg.norm(s)


def schmidt_entropy(s: np.ndarray) -> float:
    """Binary-log von Neumann entropy of a normalized Schmidt spectrum."""
    p = np.asarray(s, dtype=float) ** 2
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def partial_trace_site(psi: np.ndarray, dims: list[int], site: int) -> np.ndarray:
    """Unit-trace reduced density matrix of one site of a dense state."""
    psi = np.asarray(psi, dtype=np.complex128).reshape(dims)
    before = int(np.prod(dims[:site], dtype=np.int64))
    after = int(np.prod(dims[site + 1 :], dtype=np.int64))
    block = psi.reshape(before, dims[site], after)
    rho = np.einsum("aib,ajb->ij", block, block.conj())
    return rho / np.trace(rho).real


def apply_single_site_gate_dense(psi: np.ndarray, gate: np.ndarray, site: int, dims: list[int]) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128).reshape(dims)
    out = np.tensordot(gate, psi, axes=(1, site))
    out = np.moveaxis(out, 0, site)
    return out.reshape(-1)


def apply_two_site_gate_dense(psi: np.ndarray, gate: np.ndarray, site: int, dims: list[int]) -> np.ndarray:
    """Apply a (p*q x p*q) gate to adjacent sites (site, site+1)."""
    psi = np.asarray(psi, dtype=np.complex128).reshape(dims)
    before = int(np.prod(dims[:site], dtype=np.int64))
    pq = dims[site] * dims[site + 1]
    after = int(np.prod(dims[site + 2 :], dtype=np.int64))
    block = psi.reshape(before, pq, after)
    out = np.einsum("ab,ibj->iaj", gate, block)
    return out.reshape(-1)


def swap_sites_dense(psi: np.ndarray, site: int, dims: list[int]) -> tuple[np.ndarray, list[int]]:
    """Exchange two adjacent sites of a dense state; returns the permuted
    state and the updated dimension list."""
    psi = np.asarray(psi, dtype=np.complex128).reshape(dims)
    psi = np.swapaxes(psi, site, site + 1)
    new_dims = list(dims)
    new_dims[site], new_dims[site + 1] = new_dims[site + 1], new_dims[site]
    return np.ascontiguousarray(psi).reshape(-1), new_dims


def ghz_seff_closed_form(n_spins: int, k_transformed: int, beta: float) -> float:
    """Effective entanglement of an n-spin GHZ state after exp(beta*sigma_z)
    on its first k spins.

    Every bond carries the Schmidt pair (sqrt(p), sqrt(1-p)) with
    p = e^{2 beta k} / (e^{2 beta k} + e^{-2 beta k}), so S_eff is the
    binary entropy of p plus the (1/3) ln((n-1)/(n-2)) aggregation floor.
    """
    if n_spins < 3:
        raise ValueError(f"S_eff needs at least 2 bonds, got {n_spins} spins")
    if not 0 <= k_transformed <= n_spins:
        raise ValueError(f"k must lie in [0, {n_spins}], got {k_transformed}")
    p = 1.0 / (1.0 + math.exp(-4.0 * beta * k_transformed))
    entropy = 0.0
    for w in (p, 1.0 - p):
        if w > 0:
            entropy -= w * math.log2(w)
    return entropy + math.log((n_spins - 1) / (n_spins - 2)) / 3.0
