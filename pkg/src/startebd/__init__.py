"""TEBD simulation of star-topology spin-boson dynamics with non-unitary
similarity transformations that tune the entanglement growth rate."""

from .errors import ConfigError, DivergenceError, InstanceTooLargeError, StarTebdError
from .linalg import TruncationPolicy, eigendecompose_hermitian, kron, matrix_exponential, truncated_svd
from .model import (
    DiscretizedBath,
    HamiltonianTerms,
    ModelConfig,
    SimilarityGenerator,
    bath_from_config,
    build_star_terms,
    discretize,
    drude_density,
    ghz_state,
    thermalize_density,
    transform_spin_term,
)
from .mps import BondSpectrum, MpsState, effective_entanglement, from_product_state, ghz_mps, seff_from_entropies
from .oracle import DenseInstance, dense_hamiltonian, dense_schmidt, ghz_seff_closed_form, propagate_exact
from .trotter import (
    EvolutionConfig,
    TrajectoryRecord,
    TrotterPlan,
    build_trotter2_plan,
    observables,
    recover_density,
    run,
    step,
)

__version__ = "0.1.0"
