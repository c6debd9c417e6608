"""Spin-boson problem setup: Drude bath, finite-temperature thermalization,
discretization into star-coupled modes, and the non-unitary similarity
transformation of the system terms.

Units: the spin coupling sets the energy scale (delta = 1 by default),
hbar = 1, and temperature means k_B*T in the same units.  Basis order for
the spin is (up, down) with sigma_z |up> = +|up>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigError
from .linalg import matrix_exponential, kron

__all__ = [
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "IDENTITY_2",
    "ModelConfig",
    "SimilarityGenerator",
    "DiscretizedBath",
    "HamiltonianTerms",
    "drude_density",
    "thermalize_density",
    "discretize",
    "transform_operator",
    "transform_spin_term",
    "build_star_terms",
    "boson_ops",
    "ghz_state",
]

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
IDENTITY_2 = np.eye(2, dtype=np.complex128)

_GENERATOR_HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class ModelConfig:
    """Spin-boson parameters; defaults follow the standard strong-coupling
    benchmark set (eta = 4, omega_c = 1, k_BT = 2, omega_max = 12.7324,
    all in units of delta)."""

    delta: float = 1.0
    eta: float = 4.0
    omega_c: float = 1.0
    temperature: float = 2.0
    omega_max: float = 12.7324
    n_modes: int = 100
    fock_dim: int = 6

    def __post_init__(self):
        if self.delta <= 0:
            raise ConfigError(f"delta must be > 0, got {self.delta}")
        if self.eta < 0:
            raise ConfigError(f"eta must be >= 0, got {self.eta}")
        if self.omega_c <= 0:
            raise ConfigError(f"omega_c must be > 0, got {self.omega_c}")
        if self.temperature <= 0:
            raise ConfigError(f"temperature must be > 0, got {self.temperature}")
        if self.omega_max <= 0:
            raise ConfigError(f"omega_max must be > 0, got {self.omega_max}")
        if self.n_modes < 1:
            raise ConfigError(f"n_modes must be >= 1, got {self.n_modes}")
        if self.fock_dim < 2:
            raise ConfigError(f"fock_dim must be >= 2, got {self.fock_dim}")


def _normalized_direction(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=np.complex128)
    if M.shape != (2, 2):
        raise ConfigError(f"generator direction must be 2x2, got shape {M.shape}")
    if np.max(np.abs(M - M.conj().T)) > _GENERATOR_HERMITICITY_TOL:
        raise ConfigError("generator direction must be Hermitian")
    return M


@dataclass(frozen=True, eq=False)
class SimilarityGenerator:
    """Hermitian generator direction D and strength beta defining the
    non-unitary conjugation  A -> exp(beta*D) A exp(-beta*D)."""

    beta: float = 0.0
    direction: np.ndarray = field(default_factory=lambda: SIGMA_Z.copy())

    def __post_init__(self):
        if not math.isfinite(self.beta):
            raise ConfigError(f"beta must be finite, got {self.beta}")
        object.__setattr__(self, "direction", _normalized_direction(self.direction))

    @classmethod
    def from_preset(cls, name: str, beta: float) -> "SimilarityGenerator":
        """Named directions: "sigma_z", "sigma_x", "mixed:x,z" for the
        normalized x*sigma_x + z*sigma_z, and "plus_minus:a,b" for the
        Hermitian part of a*sigma_plus + b*sigma_minus."""
        key, _, args = name.partition(":")
        key = key.strip().lower()
        if key == "sigma_z":
            return cls(beta=beta, direction=SIGMA_Z)
        if key == "sigma_x":
            return cls(beta=beta, direction=SIGMA_X)
        if key == "mixed":
            try:
                x, z = (float(v) for v in args.split(","))
            except ValueError:
                raise ConfigError(f"mixed preset needs 'mixed:x,z', got {name!r}") from None
            norm = math.hypot(x, z)
            if norm == 0:
                raise ConfigError("mixed preset needs a nonzero (x, z)")
            return cls(beta=beta, direction=(x * SIGMA_X + z * SIGMA_Z) / norm)
        if key == "plus_minus":
            try:
                a, b = (float(v) for v in args.split(","))
            except ValueError:
                raise ConfigError(f"plus_minus preset needs 'plus_minus:a,b', got {name!r}") from None
            sp = (SIGMA_X + 1j * SIGMA_Y) / 2
            sm = (SIGMA_X - 1j * SIGMA_Y) / 2
            M = a * sp + b * sm
            direction = (M + M.conj().T) / 2
            if np.max(np.abs(direction)) == 0:
                raise ConfigError("plus_minus preset has a vanishing Hermitian part")
            return cls(beta=beta, direction=direction)
        raise ConfigError(f"unknown generator preset {name!r}")

    def forward_matrix(self) -> np.ndarray:
        """exp(+beta*D), the map into the fictitious frame."""
        return matrix_exponential(self.beta * self.direction)

    def inverse_matrix(self) -> np.ndarray:
        """exp(-beta*D), the recovery factor."""
        return matrix_exponential(-self.beta * self.direction)


@dataclass(frozen=True)
class DiscretizedBath:
    """Frequencies and couplings {omega_n, c_n} of the discretized
    thermalized bath, plus the per-mode Fock truncation."""

    omegas: np.ndarray
    couplings: np.ndarray
    fock_dim: int

    def __post_init__(self):
        omegas = np.asarray(self.omegas, dtype=float)
        couplings = np.asarray(self.couplings, dtype=float)
        if omegas.ndim != 1 or omegas.shape != couplings.shape:
            raise ConfigError("omegas and couplings must be 1-d arrays of equal length")
        if np.any(np.diff(omegas) <= 0):
            raise ConfigError("mode frequencies must be strictly increasing")
        if np.any(omegas == 0.0):
            raise ConfigError("a mode sits exactly at omega = 0")
        if np.any(couplings < 0):
            raise ConfigError("couplings must be nonnegative")
        if self.fock_dim < 2:
            raise ConfigError(f"fock_dim must be >= 2, got {self.fock_dim}")
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "couplings", couplings)

    @property
    def n_modes(self) -> int:
        return len(self.omegas)

    @property
    def modes(self) -> list[tuple[float, float]]:
        return list(zip(self.omegas.tolist(), self.couplings.tolist()))


@dataclass(frozen=True)
class HamiltonianTerms:
    """Assembled star-topology terms in the (possibly transformed) frame:
    a 2x2 local spin term, the 2x2 spin-side coupling operator, and one
    (2d x 2d) spin+mode matrix per bath mode (coupling + mode energy)."""

    spin_local: np.ndarray
    coupling_op: np.ndarray
    mode_matrices: list[np.ndarray]
    fock_dim: int

    @property
    def n_modes(self) -> int:
        return len(self.mode_matrices)


def drude_density(omega, eta: float, omega_c: float):
    """Drude spectral density J(w) = eta * w_c * w / (w_c^2 + w^2)."""
    if omega_c <= 0:
        raise ConfigError(f"omega_c must be > 0, got {omega_c}")
    omega = np.asarray(omega, dtype=float)
    out = eta * omega_c * omega / (omega_c**2 + omega**2)
    return out if out.ndim else float(out)


def thermalize_density(J: Callable, temperature: float) -> Callable:
    """Extend an odd spectral density to the full frequency axis with the
    factor (1 + coth(w / 2T)) / 2, so that J_th(w) / J_th(-w) = exp(w/T).

    The w = 0 value is the analytic limit T * J'(0), evaluated by central
    difference.
    """
    if temperature <= 0:
        raise ConfigError(f"temperature must be > 0, got {temperature}")

    def j_th(omega):
        omega = np.asarray(omega, dtype=float)
        scalar = omega.ndim == 0
        omega = np.atleast_1d(omega)
        out = np.empty_like(omega)
        nz = omega != 0.0
        w = omega[nz]
        x = w / (2.0 * temperature)
        out[nz] = 0.5 * (1.0 + 1.0 / np.tanh(x)) * np.asarray(J(w), dtype=float)
        if np.any(~nz):
            h = 1e-6
            slope = (np.asarray(J(h), dtype=float) - np.asarray(J(-h), dtype=float)) / (2 * h)
            out[~nz] = temperature * slope
        return float(out[0]) if scalar else out

    return j_th


def discretize(j_th: Callable, n_modes: int, omega_max: float, fock_dim: int) -> DiscretizedBath:
    """Midpoint discretization of a thermalized density on [-w_max, w_max]:
    w_n = -w_max + (n - 1/2) dw with dw = 2 w_max / N, and couplings
    c_n = sqrt(J_th(w_n) dw / pi).

    N must be even so no grid point lands on w = 0.
    """
    if n_modes < 1:
        raise ConfigError(f"n_modes must be >= 1, got {n_modes}")
    if n_modes % 2 != 0:
        raise ConfigError(
            f"n_modes must be even (the midpoint grid would place a mode at omega = 0), got {n_modes}"
        )
    if omega_max <= 0:
        raise ConfigError(f"omega_max must be > 0, got {omega_max}")
    d_omega = 2.0 * omega_max / n_modes
    omegas = -omega_max + (np.arange(1, n_modes + 1) - 0.5) * d_omega
    values = np.asarray(j_th(omegas), dtype=float)
    if np.any(values < 0):
        raise ConfigError("thermalized density is negative on the grid")
    couplings = np.sqrt(values * d_omega / np.pi)
    return DiscretizedBath(omegas=omegas, couplings=couplings, fock_dim=fock_dim)


def bath_from_config(cfg: ModelConfig) -> DiscretizedBath:
    """Drude density -> thermalization -> midpoint discretization."""
    j = lambda w: drude_density(w, cfg.eta, cfg.omega_c)
    return discretize(thermalize_density(j, cfg.temperature), cfg.n_modes, cfg.omega_max, cfg.fock_dim)


def transform_operator(op: np.ndarray, gen: SimilarityGenerator) -> np.ndarray:
    """Conjugate a 2x2 spin operator: exp(beta*D) op exp(-beta*D)."""
    if gen.beta == 0.0:
        return np.asarray(op, dtype=np.complex128).copy()
    return gen.forward_matrix() @ np.asarray(op, dtype=np.complex128) @ gen.inverse_matrix()


def transform_spin_term(delta: float, gen: SimilarityGenerator) -> np.ndarray:
    """Transformed tunneling term exp(beta*D) (delta*sigma_x) exp(-beta*D).

    For D = sigma_z the off-diagonals become delta*e^{2 beta} (down -> up)
    and delta*e^{-2 beta} (up -> down).
    """
    return transform_operator(delta * SIGMA_X, gen)


def boson_ops(fock_dim: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Truncated annihilation, position-like (a + a^dag), and number
    operators in the d-dimensional Fock basis."""
    n = np.arange(1, fock_dim, dtype=float)
    a = np.diag(np.sqrt(n), k=1).astype(np.complex128)
    x = a + a.conj().T
    num = np.diag(np.arange(fock_dim, dtype=float)).astype(np.complex128)
    return a, x, num


def build_star_terms(
    cfg: ModelConfig, bath: DiscretizedBath, gen: SimilarityGenerator
) -> HamiltonianTerms:
    """Assemble the transformed star Hamiltonian: local spin term plus one
    two-site matrix  c_n * A_beta (x) (a + a^dag) + omega_n * I (x) a^dag a
    per mode, with A_beta the conjugated coupling operator (A_beta = sigma_z
    unchanged when the generator direction is sigma_z)."""
    if bath.fock_dim != cfg.fock_dim:
        raise ConfigError(
            f"bath fock_dim {bath.fock_dim} does not match config fock_dim {cfg.fock_dim}"
        )
    if bath.n_modes != cfg.n_modes:
        raise ConfigError(f"bath has {bath.n_modes} modes, config says {cfg.n_modes}")
    d = cfg.fock_dim
    spin_local = transform_spin_term(cfg.delta, gen)
    coupling_op = transform_operator(SIGMA_Z, gen)
    _, x, num = boson_ops(d)
    eye_d = np.eye(2, dtype=np.complex128)
    coupling_part = kron(coupling_op, x)
    energy_part = kron(eye_d, num)
    mode_matrices = [
        c * coupling_part + w * energy_part
        for w, c in zip(bath.omegas, bath.couplings)
    ]
    return HamiltonianTerms(
        spin_local=spin_local, coupling_op=coupling_op, mode_matrices=mode_matrices, fock_dim=d
    )


def ghz_state(n_spins: int) -> np.ndarray:
    """Dense GHZ state vector (|up...up> + |down...down>) / sqrt(2)."""
    if n_spins < 2:
        raise ConfigError(f"GHZ state needs at least 2 spins, got {n_spins}")
    psi = np.zeros(2**n_spins, dtype=np.complex128)
    psi[0] = 1 / math.sqrt(2)
    psi[-1] = 1 / math.sqrt(2)
    return psi
