"""Matrix-product-state over the spin-plus-modes chain.

State representation: a list of rank-3 site tensors (left_bond, physical,
right_bond) whose plain contraction *is* the normalized state, together
with the singular-value spectrum of every internal bond.  In canonical
form the orthogonality center sits at site 0, every other tensor is
right-isometric, and the stored bond weights are the true Schmidt values
of each bipartition (the same data as the Gamma-lambda gauge, stored
inverse-free).

During a gate sweep the center travels with the active bond, so local SVD
spectra are used for truncation; non-unitary gates leave those spectra
stale elsewhere, which is why ``canonicalize`` recomputes every bond after
each evolution step.  The accumulated global norm is stripped into
``log_norm`` at canonicalization time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .linalg import TruncationPolicy

__all__ = [
    "MpsState",
    "BondSpectrum",
    "from_product_state",
    "ghz_mps",
    "effective_entanglement",
    "seff_from_entropies",
]

_NORM_TOL = 1e-12
_MIN_NORM = 1e-300


@dataclass
class BondSpectrum:
    """Normalized singular values and von Neumann entropy (bits) per bond."""

    singular_values: list[np.ndarray]
    entropies: np.ndarray

    @property
    def n_bonds(self) -> int:
        return len(self.singular_values)


class MpsState:
    """MPS value owned by a single trajectory; operations mutate in place."""

    def __init__(
        self,
        site_tensors: list[np.ndarray],
        bond_weights: list[np.ndarray],
        physical_dims: list[int],
        log_norm: float = 0.0,
        center: int | None = 0,
        canonical: bool = False,
    ):
        self.site_tensors = site_tensors
        self.bond_weights = bond_weights
        self.physical_dims = physical_dims
        self.log_norm = log_norm
        self.center = center
        self.canonical = canonical
        if len(site_tensors) != len(physical_dims):
            raise ValueError("one physical dimension per site tensor required")
        if len(bond_weights) != max(len(site_tensors) - 1, 0):
            raise ValueError("need exactly one bond-weight vector per internal bond")
        if site_tensors and (site_tensors[0].shape[0] != 1 or site_tensors[-1].shape[2] != 1):
            raise ValueError("boundary bond dimensions must be 1")

    @property
    def n_sites(self) -> int:
        return len(self.site_tensors)

    def bond_dims(self) -> list[int]:
        return [t.shape[2] for t in self.site_tensors[:-1]]

    def max_bond_dim(self) -> int:
        return max(self.bond_dims(), default=1)

    def copy(self) -> "MpsState":
        return MpsState(
            list(self.site_tensors),
            list(self.bond_weights),
            list(self.physical_dims),
            self.log_norm,
            self.center,
            self.canonical,
        )

    # -- gauge bookkeeping -------------------------------------------------

    def _establish_center(self):
        """Right-to-left SVD sweep putting the center at site 0 (no
        truncation, no claim about bond-weight freshness)."""
        for i in range(self.n_sites - 1, 0, -1):
            carry, _, B = kernels.svd_left_step(self.site_tensors[i])
            self.site_tensors[i] = B
            self.site_tensors[i - 1] = np.tensordot(self.site_tensors[i - 1], carry, axes=(2, 0))
        self.center = 0

    def _move_center(self, target: int):
        if self.center is None:
            self._establish_center()
        while self.center < target:
            Q, R = kernels.qr_right_step(self.site_tensors[self.center])
            self.site_tensors[self.center] = Q
            self.site_tensors[self.center + 1] = np.tensordot(
                R, self.site_tensors[self.center + 1], axes=(1, 0)
            )
            self.center += 1
        while self.center > target:
            carry, _, B = kernels.svd_left_step(self.site_tensors[self.center])
            self.site_tensors[self.center] = B
            self.site_tensors[self.center - 1] = np.tensordot(
                self.site_tensors[self.center - 1], carry, axes=(2, 0)
            )
            self.center -= 1

    # -- gates ---------------------------------------------------------------

    def apply_single_site_gate(self, site: int, gate: np.ndarray) -> None:
        """Contract a (d x d) operator into one site tensor (no truncation)."""
        d = self.physical_dims[site]
        gate = np.asarray(gate, dtype=np.complex128)
        if gate.shape != (d, d):
            raise ValueError(f"gate shape {gate.shape} does not match site dimension {d}")
        self.site_tensors[site] = np.einsum("ab,ibj->iaj", gate, self.site_tensors[site])
        if self.center != site:
            self.center = None
        self.canonical = False

    def apply_two_site_gate(
        self,
        site: int,
        gate: np.ndarray,
        policy: TruncationPolicy,
        absorb_right: bool = True,
    ) -> float:
        """Apply a (p*q x p*q) gate to sites (site, site+1), SVD-split with
        truncation, and leave the center on the absorbing side.  Returns the
        discarded weight."""
        if not 0 <= site < self.n_sites - 1:
            raise IndexError(f"two-site gate at site {site} out of range")
        p, q = self.physical_dims[site], self.physical_dims[site + 1]
        gate = np.asarray(gate, dtype=np.complex128)
        if gate.shape != (p * q, p * q):
            raise ValueError(
                f"gate shape {gate.shape} does not match physical dims ({p}, {q})"
            )
        return self._two_site_op(site, gate, False, policy, absorb_right)

    def swap_sites(
        self, site: int, policy: TruncationPolicy, absorb_right: bool = True
    ) -> float:
        """Exchange the physical indices of sites (site, site+1)."""
        if not 0 <= site < self.n_sites - 1:
            raise IndexError(f"swap at site {site} out of range")
        dummy = np.eye(1, dtype=np.complex128)
        disc = self._two_site_op(site, dummy, True, policy, absorb_right)
        p = self.physical_dims[site]
        self.physical_dims[site] = self.physical_dims[site + 1]
        self.physical_dims[site + 1] = p
        return disc

    def _two_site_op(self, site, gate, is_swap, policy, absorb_right) -> float:
        if self.center is None or not site <= self.center <= site + 1:
            self._move_center(site)
        max_bond = policy.max_bond if policy.max_bond is not None else 0
        new_left, new_right, svals, discarded = kernels.two_site_update(
            self.site_tensors[site],
            self.site_tensors[site + 1],
            gate,
            is_swap,
            policy.threshold,
            max_bond,
            absorb_right,
        )
        self.site_tensors[site] = new_left
        self.site_tensors[site + 1] = new_right
        self.bond_weights[site] = svals
        self.center = site + 1 if absorb_right else site
        self.canonical = False
        return discarded

    # -- canonical form ------------------------------------------------------

    def canonicalize(self) -> "MpsState":
        """Full orthogonalization: left-to-right QR sweep, norm strip, then
        right-to-left SVD sweep recomputing the true Schmidt values of every
        bond.  Idempotent up to floating-point noise."""
        L = self.n_sites
        start = self.center if self.center is not None else 0
        for i in range(start, L - 1):
            Q, R = kernels.qr_right_step(self.site_tensors[i])
            self.site_tensors[i] = Q
            self.site_tensors[i + 1] = np.tensordot(R, self.site_tensors[i + 1], axes=(1, 0))
        nrm = float(np.linalg.norm(self.site_tensors[L - 1]))
        if not nrm > _MIN_NORM:
            raise ValueError("cannot canonicalize a zero-norm state")
        self.log_norm += math.log(nrm)
        self.site_tensors[L - 1] = self.site_tensors[L - 1] / nrm
        for i in range(L - 1, 0, -1):
            carry, svals, B = kernels.svd_left_step(self.site_tensors[i])
            self.site_tensors[i] = B
            self.bond_weights[i - 1] = svals
            self.site_tensors[i - 1] = np.tensordot(self.site_tensors[i - 1], carry, axes=(2, 0))
        resid = float(np.linalg.norm(self.site_tensors[0]))
        if not resid > _MIN_NORM:
            raise ValueError("cannot canonicalize a zero-norm state")
        self.log_norm += math.log(resid)
        self.site_tensors[0] = self.site_tensors[0] / resid
        self.center = 0
        self.canonical = True
        return self

    def gauge_residual(self) -> float:
        """Deviation of the stored gauge from exact canonical form: max of
        the right-isometry defects and the mismatch between the left
        environments and diag(bond_weights^2)."""
        res = abs(float(np.linalg.norm(self.site_tensors[0])) - 1.0)
        for i in range(1, self.n_sites):
            T = self.site_tensors[i]
            M = T.reshape(T.shape[0], -1)
            res = max(res, float(np.max(np.abs(M @ M.conj().T - np.eye(T.shape[0])))))
        env = np.ones((1, 1), dtype=np.complex128)
        for i in range(self.n_sites - 1):
            T = self.site_tensors[i]
            env = np.einsum("ab,aic,bid->cd", env, T.conj(), T)
            lam2 = np.zeros(T.shape[2])
            w = self.bond_weights[i]
            lam2[: len(w)] = w**2
            res = max(res, float(np.max(np.abs(env - np.diag(lam2)))))
        return res

    # -- measurements ----------------------------------------------------------

    def bond_entropies(self) -> BondSpectrum:
        """Per-bond normalized Schmidt values and binary-log entropies.
        Requires canonical form (stale gauges give wrong spectra)."""
        if not self.canonical:
            raise ValueError("state is not canonical; call canonicalize() first")
        svals = []
        entropies = np.empty(len(self.bond_weights))
        for n, w in enumerate(self.bond_weights):
            s = w / math.sqrt(float(np.sum(w**2)))
            svals.append(s)
            p = s**2
            p = p[p > 0]
            entropies[n] = float(-np.sum(p * np.log2(p)))
        return BondSpectrum(singular_values=svals, entropies=entropies)

    def reduced_site_density(self, site: int = 0) -> np.ndarray:
        """Reduced density matrix of one site, traced over everything else
        and normalized to unit trace.  Requires canonical form."""
        if not self.canonical:
            raise ValueError("state is not canonical; call canonicalize() first")
        T = self.site_tensors[site]
        if site == 0:
            rho = np.einsum("aib,ajb->ij", T, T.conj())
        else:
            w = self.bond_weights[site - 1]
            lam2 = np.zeros(T.shape[0])
            lam2[: len(w)] = w**2
            rho = np.einsum("a,aib,ajb->ij", lam2, T, T.conj())
        rho = rho / np.trace(rho).real
        return rho

    def to_statevector(self, max_size: int = 2**20) -> np.ndarray:
        """Dense state vector (normalized; exp(log_norm) holds the scale).
        Guarded to small instances."""
        total = int(np.prod(self.physical_dims, dtype=np.int64))
        if total > max_size:
            raise ValueError(f"state of dimension {total} exceeds the dense guard {max_size}")
        vec = self.site_tensors[0].reshape(self.physical_dims[0], -1)
        for T in self.site_tensors[1:]:
            vec = np.tensordot(vec, T, axes=(1, 0))
            vec = vec.reshape(-1, T.shape[2])
        return vec.reshape(-1)


def from_product_state(local_states: list[np.ndarray]) -> MpsState:
    """Bond-dimension-1 MPS from normalized local state vectors."""
    tensors = []
    dims = []
    for n, v in enumerate(local_states):
        v = np.asarray(v, dtype=np.complex128).reshape(-1)
        nrm = float(np.linalg.norm(v))
        if abs(nrm - 1.0) > _NORM_TOL:
            raise ValueError(f"local state {n} is not normalized (norm {nrm})")
        tensors.append(v.reshape(1, len(v), 1))
        dims.append(len(v))
    weights = [np.array([1.0]) for _ in range(len(tensors) - 1)]
    return MpsState(tensors, weights, dims, log_norm=0.0, center=0, canonical=True)


def ghz_mps(n_spins: int) -> MpsState:
    """GHZ state as a canonical MPS: every bond carries the two equal
    Schmidt values 1/sqrt(2)."""
    if n_spins < 2:
        raise ValueError(f"GHZ state needs at least 2 spins, got {n_spins}")
    first = np.zeros((1, 2, 2), dtype=np.complex128)
    first[0, 0, 0] = 1 / math.sqrt(2)
    first[0, 1, 1] = 1 / math.sqrt(2)
    middle = np.zeros((2, 2, 2), dtype=np.complex128)
    middle[0, 0, 0] = 1.0
    middle[1, 1, 1] = 1.0
    last = np.zeros((2, 2, 1), dtype=np.complex128)
    last[0, 0, 0] = 1.0
    last[1, 1, 0] = 1.0
    tensors = [first] + [middle.copy() for _ in range(n_spins - 2)] + [last]
    weights = [np.array([1 / math.sqrt(2)] * 2) for _ in range(n_spins - 1)]
    return MpsState(tensors, weights, [2] * n_spins, log_norm=0.0, center=0, canonical=True)


def seff_from_entropies(entropies: np.ndarray) -> float:
    """Aggregate entanglement metric: (1/3) ln[(1/(L-1)) sum_n exp(3 S_n)]
    over the L bond entropies (natural log outside, S_n in bits)."""
    entropies = np.asarray(entropies, dtype=float)
    L = len(entropies)
    if L < 2:
        raise ValueError(f"effective entanglement needs at least 2 bonds, got {L}")
    return float(np.log(np.sum(np.exp(3.0 * entropies)) / (L - 1)) / 3.0)


def effective_entanglement(spectrum: BondSpectrum) -> float:
    """S_eff of a bond spectrum (see ``seff_from_entropies``)."""
    return seff_from_entropies(spectrum.entropies)
