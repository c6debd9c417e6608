"""Second-order Trotter evolution of the star-topology model.

One time step walks the spin rightward through the mode chain with swap
gates, applying each spin-mode gate at dt/2, then mirrors the walk back,
with the local spin gate at dt/2 on both ends.  Swaps are exact
permutations, so the palindromic gate sequence keeps the second-order
error of a symmetric Trotter splitting.  The orthogonality center of the
MPS travels with the active bond; the state is canonicalized and its norm
stripped once per full step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError
from .linalg import TruncationPolicy, matrix_exponential
from .model import SIGMA_Z, HamiltonianTerms, ModelConfig, SimilarityGenerator, bath_from_config, build_star_terms
from .mps import MpsState, from_product_state, seff_from_entropies

__all__ = [
    "EvolutionConfig",
    "PlanOp",
    "TrotterPlan",
    "TrajectoryRecord",
    "StepStats",
    "build_trotter2_plan",
    "step",
    "recover_density",
    "observables",
    "run",
]


@dataclass(frozen=True)
class EvolutionConfig:
    """Time grid, truncation policy, sampling stride, and divergence cap."""

    t_final: float
    dt: float = 0.005
    policy: TruncationPolicy = TruncationPolicy(threshold=1e-5)
    record_stride: int = 10
    hard_bond_cap: int = 512

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.t_final < self.dt:
            raise ValueError(f"t_final must be >= dt, got {self.t_final}")
        if self.record_stride < 1:
            raise ValueError(f"record_stride must be >= 1, got {self.record_stride}")
        if self.hard_bond_cap < 1:
            raise ValueError(f"hard_bond_cap must be >= 1, got {self.hard_bond_cap}")

    @property
    def n_steps(self) -> int:
        return max(int(round(self.t_final / self.dt)), 1)


@dataclass(frozen=True)
class PlanOp:
    """One gate of a Trotter step: kind is 'local', 'two', or 'swap'; the
    absorb direction says where the orthogonality center lands."""

    kind: str
    site: int
    matrix: np.ndarray | None
    absorb_right: bool = True


@dataclass(frozen=True)
class TrotterPlan:
    ops: tuple[PlanOp, ...]
    n_sites: int
    dt: float
    spin_positions: tuple[int, ...]


def build_trotter2_plan(terms: HamiltonianTerms, dt: float) -> TrotterPlan:
    """Palindromic gate sequence for one TEBD2 step on the star."""
    if dt < 0:
        raise ValueError(f"dt must be >= 0, got {dt}")
    n = terms.n_modes
    local = matrix_exponential(-0.5j * dt * terms.spin_local)
    mode_gates = [matrix_exponential(-0.5j * dt * h) for h in terms.mode_matrices]
    ops: list[PlanOp] = [PlanOp("local", 0, local)]
    spin = 0
    positions = [spin]
    for m in range(n):
        ops.append(PlanOp("two", m, mode_gates[m], absorb_right=True))
        positions.append(spin)
        if m < n - 1:
            ops.append(PlanOp("swap", m, None, absorb_right=True))
            spin += 1
            positions.append(spin)
    for m in range(n - 1, -1, -1):
        ops.append(PlanOp("two", m, mode_gates[m], absorb_right=False))
        positions.append(spin)
        if m > 0:
            ops.append(PlanOp("swap", m - 1, None, absorb_right=False))
            spin -= 1
            positions.append(spin)
    ops.append(PlanOp("local", 0, local))
    positions.append(spin)
    assert spin == 0, "spin must return to site 0 after a full step"
    return TrotterPlan(ops=tuple(ops), n_sites=n + 1, dt=dt, spin_positions=tuple(positions))


@dataclass
class StepStats:
    norm_factor: float
    discarded_weight: float
    max_bond: int


def step(state: MpsState, plan: TrotterPlan, policy: TruncationPolicy) -> StepStats:
    """Apply one full Trotter step in place, then canonicalize and strip
    the accumulated norm."""
    if state.n_sites != plan.n_sites:
        raise ValueError(f"state has {state.n_sites} sites, plan expects {plan.n_sites}")
    discarded = 0.0
    for op in plan.ops:
        if op.kind == "local":
            state.apply_single_site_gate(op.site, op.matrix)
        elif op.kind == "two":
            discarded += state.apply_two_site_gate(op.site, op.matrix, policy, op.absorb_right)
        else:
            discarded += state.swap_sites(op.site, policy, op.absorb_right)
    pre_log = state.log_norm
    state.canonicalize()
    return StepStats(
        norm_factor=math.exp(state.log_norm - pre_log),
        discarded_weight=discarded,
        max_bond=state.max_bond_dim(),
    )


def recover_density(rho_f: np.ndarray, gen: SimilarityGenerator) -> np.ndarray:
    """Map a fictitious-frame density matrix back to the physical frame:
    rho = exp(-beta D) rho_f exp(-beta D), renormalized to unit trace."""
    rho_f = np.asarray(rho_f, dtype=np.complex128)
    if rho_f.shape != (2, 2):
        raise ValueError(f"expected a 2x2 density matrix, got shape {rho_f.shape}")
    if abs(np.trace(rho_f).real - 1.0) > 1e-8:
        raise ValueError("fictitious density matrix must have unit trace")
    R = gen.inverse_matrix()
    out = R @ rho_f @ R.conj().T
    tr = np.trace(out).real
    if not np.isfinite(tr) or tr <= 1e-300:
        raise ValueError("density-matrix recovery degenerated (vanishing trace)")
    return out / tr


def observables(
    state: MpsState, gen: SimilarityGenerator, spin_site: int = 0
) -> tuple[float, float, float]:
    """(fictitious <sigma_z>, recovered <sigma_z>, recovered Re rho_01)."""
    rho_f = state.reduced_site_density(spin_site)
    sz_fict = float(np.trace(SIGMA_Z @ rho_f).real)
    rho = recover_density(rho_f, gen)
    sz_rec = float(np.trace(SIGMA_Z @ rho).real)
    return sz_fict, sz_rec, float(rho[0, 1].real)


@dataclass
class TrajectoryRecord:
    """Sampled observables of one trajectory (columns over sample rows)."""

    t: np.ndarray
    norm_factor: np.ndarray
    sz_fict: np.ndarray
    sz_recovered: np.ndarray
    re_rho01_recovered: np.ndarray
    seff: np.ndarray
    max_bond: np.ndarray
    discarded_weight: np.ndarray
    mean_entropy: np.ndarray
    max_entropy: np.ndarray
    beta: float = 0.0

    @property
    def n_rows(self) -> int:
        return len(self.t)


def initial_state(terms: HamiltonianTerms, gen: SimilarityGenerator) -> MpsState:
    """|up> (x) |0, 0, ...> mapped into the transformed frame: the spin
    local state becomes exp(beta D)|up>, normalized."""
    up = np.array([1.0, 0.0], dtype=np.complex128)
    spin0 = gen.forward_matrix() @ up
    spin0 = spin0 / np.linalg.norm(spin0)
    ground = np.zeros(terms.fock_dim, dtype=np.complex128)
    ground[0] = 1.0
    return from_product_state([spin0] + [ground] * terms.n_modes)


def run(cfg: ModelConfig, gen: SimilarityGenerator, evo: EvolutionConfig) -> TrajectoryRecord:
    """Full trajectory: build bath and terms, evolve, sample observables."""
    bath = bath_from_config(cfg)
    terms = build_star_terms(cfg, bath, gen)
    plan = build_trotter2_plan(terms, evo.dt)
    state = initial_state(terms, gen)
    rows = []
    cumulative_discarded = 0.0

    def sample(t, norm_factor, step_index):
        sz_f, sz_r, re01 = observables(state, gen)
        if not (np.isfinite(sz_f) and np.isfinite(sz_r) and np.isfinite(re01)):
            raise DivergenceError("non-finite observable", step=step_index)
        if state.n_sites >= 3:
            spectrum = state.bond_entropies()
            seff = seff_from_entropies(spectrum.entropies)
            mean_s = float(np.mean(spectrum.entropies))
            max_s = float(np.max(spectrum.entropies))
        else:
            seff = mean_s = max_s = float("nan")
        rows.append(
            (t, norm_factor, sz_f, sz_r, re01, seff, state.max_bond_dim(), cumulative_discarded, mean_s, max_s)
        )

    sample(0.0, 1.0, 0)
    for k in range(1, evo.n_steps + 1):
        stats = step(state, plan, evo.policy)
        cumulative_discarded += stats.discarded_weight
        if stats.max_bond > evo.hard_bond_cap:
            raise DivergenceError(
                f"bond dimension {stats.max_bond} exceeded cap {evo.hard_bond_cap}", step=k
            )
        if not np.isfinite(stats.norm_factor):
            raise DivergenceError("non-finite norm factor", step=k)
        if k % evo.record_stride == 0 or k == evo.n_steps:
            sample(k * evo.dt, stats.norm_factor, k)
    cols = list(zip(*rows))
    return TrajectoryRecord(
        t=np.array(cols[0]),
        norm_factor=np.array(cols[1]),
        sz_fict=np.array(cols[2]),
        sz_recovered=np.array(cols[3]),
        re_rho01_recovered=np.array(cols[4]),
        seff=np.array(cols[5]),
        max_bond=np.array(cols[6], dtype=int),
        discarded_weight=np.array(cols[7]),
        mean_entropy=np.array(cols[8]),
        max_entropy=np.array(cols[9]),
        beta=gen.beta,
    )
