import numpy as np
import pytest

from startebd.errors import DivergenceError
from startebd.linalg import TruncationPolicy, matrix_exponential
from startebd.model import (
    DiscretizedBath,
    ModelConfig,
    SimilarityGenerator,
    bath_from_config,
    build_star_terms,
)
from startebd.oracle import dense_hamiltonian, partial_trace_site, propagate_exact
from startebd.trotter import (
    EvolutionConfig,
    build_trotter2_plan,
    initial_state,
    observables,
    recover_density,
    run,
    step,
)

EXACT = TruncationPolicy(0.0)


def small_setup(beta=0.0, n_modes=2, fock_dim=3):
    cfg = ModelConfig(n_modes=n_modes, fock_dim=fock_dim)
    if n_modes % 2 == 0:
        bath = bath_from_config(cfg)
    else:
        # odd counts are rejected by the midpoint grid; build the bath by hand
        bath = DiscretizedBath(
            omegas=np.linspace(0.4, 1.2, n_modes),
            couplings=np.full(n_modes, 0.8),
            fock_dim=fock_dim,
        )
    gen = SimilarityGenerator(beta=beta)
    terms = build_star_terms(cfg, bath, gen)
    return cfg, bath, gen, terms


class TestEvolutionConfig:
    def test_defaults(self):
        evo = EvolutionConfig(t_final=1.0)
        assert evo.dt == 0.005
        assert evo.policy.threshold == 1e-5
        assert evo.record_stride == 10
        assert evo.n_steps == 200

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"t_final": 1.0, "dt": 0.0},
            {"t_final": 0.001, "dt": 0.005},
            {"t_final": 1.0, "record_stride": 0},
            {"t_final": 1.0, "hard_bond_cap": 0},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            EvolutionConfig(**kwargs)


class TestPlanStructure:
    def test_single_mode_plan(self):
        _, _, _, terms = small_setup(n_modes=1, fock_dim=2)
        plan = build_trotter2_plan(terms, 0.01)
        assert [op.kind for op in plan.ops] == ["local", "two", "two", "local"]
        assert plan.spin_positions[-1] == 0

    def test_palindromic_bond_sequence(self):
        _, _, _, terms = small_setup(n_modes=4, fock_dim=2)
        plan = build_trotter2_plan(terms, 0.01)
        bonds = [op.site for op in plan.ops if op.kind != "local"]
        assert bonds == bonds[::-1]
        assert plan.spin_positions[-1] == 0
        # forward ops absorb right, mirrored ops absorb left
        halves = len(bonds) // 2
        absorbs = [op.absorb_right for op in plan.ops if op.kind != "local"]
        assert all(absorbs[:halves]) and not any(absorbs[halves:])

    def test_gates_unitary_at_beta_zero(self):
        _, _, _, terms = small_setup(beta=0.0)
        plan = build_trotter2_plan(terms, 0.005)
        for op in plan.ops:
            if op.matrix is None:
                continue
            G = op.matrix
            assert np.max(np.abs(G.conj().T @ G - np.eye(G.shape[0]))) <= 1e-12

    def test_gates_non_unitary_at_finite_beta(self):
        _, _, _, terms = small_setup(beta=0.5)
        plan = build_trotter2_plan(terms, 0.005)
        local = plan.ops[0].matrix
        s = np.linalg.svd(local, compute_uv=False)
        assert np.max(np.abs(s - 1)) > 1e-6

    def test_tiny_dt_gives_identity_gates(self):
        _, _, _, terms = small_setup()
        plan = build_trotter2_plan(terms, 1e-12)
        for op in plan.ops:
            if op.matrix is not None:
                assert np.max(np.abs(op.matrix - np.eye(op.matrix.shape[0]))) <= 1e-10


class TestComposition:
    def test_second_order_richardson_ratio(self):
        # one-step composition error vs exp(-iH dt) shrinks ~8x when dt halves
        cfg, bath, gen, terms = small_setup(n_modes=1, fock_dim=3)
        H = dense_hamiltonian(cfg, bath, gen).matrix
        d = terms.fock_dim

        def composition_error(dt):
            plan = build_trotter2_plan(terms, dt)
            U = np.eye(2 * d, dtype=complex)
            for op in plan.ops:
                M = np.kron(op.matrix, np.eye(d)) if op.kind == "local" else op.matrix
                U = M @ U
            return np.linalg.norm(U - matrix_exponential(-1j * dt * H))

        ratio = composition_error(0.02) / composition_error(0.01)
        assert 6.0 <= ratio <= 10.0

    def test_identity_plan_leaves_state(self):
        _, _, gen, terms = small_setup(n_modes=2, fock_dim=2)
        plan = build_trotter2_plan(terms, 0.0)
        state = initial_state(terms, gen)
        before = state.to_statevector()
        stats = step(state, plan, EXACT)
        assert np.allclose(state.to_statevector(), before, atol=1e-12)
        assert stats.norm_factor == pytest.approx(1.0, abs=1e-12)

    def test_single_step_fidelity_vs_dense(self):
        cfg, bath, gen, terms = small_setup(beta=0.0)
        plan = build_trotter2_plan(terms, 0.005)
        state = initial_state(terms, gen)
        psi0 = state.to_statevector()
        step(state, plan, EXACT)
        H = dense_hamiltonian(cfg, bath, gen).matrix
        expected = matrix_exponential(-1j * 0.005 * H) @ psi0
        fid = abs(np.vdot(expected, state.to_statevector()))
        assert fid >= 1 - 1e-6

    def test_norm_preserved_at_beta_zero(self):
        _, _, gen, terms = small_setup(beta=0.0)
        plan = build_trotter2_plan(terms, 0.005)
        state = initial_state(terms, gen)
        for _ in range(5):
            stats = step(state, plan, EXACT)
            assert stats.norm_factor == pytest.approx(1.0, abs=1e-10)

    def test_norm_drifts_at_large_beta(self):
        _, _, gen, terms = small_setup(beta=0.8)
        plan = build_trotter2_plan(terms, 0.005)
        state = initial_state(terms, gen)
        factors = [step(state, plan, EXACT).norm_factor for _ in range(5)]
        assert any(abs(f - 1.0) > 1e-7 for f in factors)

    def test_gauge_residual_after_steps(self):
        _, _, gen, terms = small_setup(beta=0.4)
        plan = build_trotter2_plan(terms, 0.005)
        state = initial_state(terms, gen)
        for _ in range(10):
            step(state, plan, TruncationPolicy(1e-8))
            assert state.gauge_residual() <= 1e-10

    def test_discarded_weight_bound_per_step(self):
        _, _, gen, terms = small_setup(beta=0.0)
        plan = build_trotter2_plan(terms, 0.05)
        state = initial_state(terms, gen)
        threshold = 1e-4
        policy = TruncationPolicy(threshold)
        for _ in range(20):
            stats = step(state, plan, policy)
            n_truncations = sum(1 for op in plan.ops if op.kind != "local")
            max_svals = max(state.max_bond_dim() * d for d in state.physical_dims)
            assert stats.discarded_weight <= n_truncations * threshold**2 * max_svals


class TestRecoverDensity:
    def test_pure_eigenstate_invariant(self):
        rho = np.diag([1.0, 0.0]).astype(complex)
        for beta in (-0.7, 0.0, 1.1):
            out = recover_density(rho, SimilarityGenerator(beta=beta))
            assert np.allclose(out, rho, atol=1e-12)

    def test_maximally_mixed_closed_form(self):
        out = recover_density(np.eye(2, dtype=complex) / 2, SimilarityGenerator(beta=0.4))
        sz = np.trace(np.diag([1.0, -1.0]) @ out).real
        assert sz == pytest.approx(-np.tanh(0.8), abs=1e-12)
        assert sz == pytest.approx(-0.66404, abs=1e-5)

    def test_identity_at_beta_zero(self, rng):
        M = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        rho = M @ M.conj().T
        rho = rho / np.trace(rho).real
        out = recover_density(rho, SimilarityGenerator(beta=0.0))
        assert np.allclose(out, rho, atol=1e-14)

    def test_recovery_inverts_forward_conjugation(self, rng):
        gen = SimilarityGenerator(beta=0.6)
        M = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        rho = M @ M.conj().T
        rho = rho / np.trace(rho).real
        F = gen.forward_matrix()
        rho_f = F @ rho @ F.conj().T
        rho_f = rho_f / np.trace(rho_f).real
        assert np.allclose(recover_density(rho_f, gen), rho, atol=1e-12)

    def test_trace_validation(self):
        with pytest.raises(ValueError, match="unit trace"):
            recover_density(np.eye(2, dtype=complex), SimilarityGenerator())

    def test_degenerate_recovery(self):
        rho = np.diag([1.0, 0.0]).astype(complex)
        with pytest.raises(ValueError, match="recovery degenerated|unit trace"):
            recover_density(rho, SimilarityGenerator(beta=400.0))


class TestObservables:
    def test_initial_state_values(self):
        _, _, gen, terms = small_setup(beta=0.5)
        state = initial_state(terms, gen)
        sz_f, sz_r, re01 = observables(state, gen)
        assert sz_f == pytest.approx(1.0, abs=1e-12)
        assert sz_r == pytest.approx(1.0, abs=1e-12)
        assert re01 == pytest.approx(0.0, abs=1e-12)


class TestRun:
    def test_short_time_expansion(self):
        cfg = ModelConfig(n_modes=2, fock_dim=2)
        evo = EvolutionConfig(t_final=0.005, dt=0.005, record_stride=1)
        rec = run(cfg, SimilarityGenerator(), evo)
        assert rec.n_rows == 2
        assert rec.sz_recovered[0] == 1.0
        assert rec.sz_recovered[1] == pytest.approx(1.0, abs=4 * 0.005**2)

    def test_deterministic_rerun(self):
        cfg = ModelConfig(n_modes=2, fock_dim=3)
        evo = EvolutionConfig(t_final=0.1, dt=0.005)
        a = run(cfg, SimilarityGenerator(beta=0.3), evo)
        b = run(cfg, SimilarityGenerator(beta=0.3), evo)
        for name in ("t", "norm_factor", "sz_fict", "sz_recovered", "seff", "discarded_weight"):
            assert np.array_equal(getattr(a, name), getattr(b, name))

    def test_cross_beta_recovered_consistency(self):
        cfg = ModelConfig(n_modes=2, fock_dim=3)
        evo = EvolutionConfig(t_final=0.25, dt=0.005, policy=TruncationPolicy(1e-10))
        base = run(cfg, SimilarityGenerator(beta=0.0), evo)
        moved = run(cfg, SimilarityGenerator(beta=0.4), evo)
        assert np.max(np.abs(base.sz_recovered - moved.sz_recovered)) <= 5e-3
        assert np.max(np.abs(base.re_rho01_recovered - moved.re_rho01_recovered)) <= 5e-3

    def test_fictitious_freezing_is_monotone_in_beta(self):
        cfg = ModelConfig(n_modes=2, fock_dim=3)
        evo = EvolutionConfig(t_final=0.25, dt=0.005)
        finals = [
            run(cfg, SimilarityGenerator(beta=b), evo).sz_fict[-1]
            for b in (-0.8, -0.4, 0.0, 0.4, 0.8)
        ]
        assert all(a < b for a, b in zip(finals, finals[1:]))

    def test_mps_matches_dense_oracle(self):
        cfg = ModelConfig(n_modes=2, fock_dim=3)
        gen = SimilarityGenerator(beta=0.3)
        evo = EvolutionConfig(t_final=0.2, dt=0.005, policy=TruncationPolicy(1e-10))
        rec = run(cfg, gen, evo)
        bath = bath_from_config(cfg)
        inst = dense_hamiltonian(cfg, bath, gen)
        terms = build_star_terms(cfg, bath, gen)
        psi0 = initial_state(terms, gen).to_statevector()
        states, _ = propagate_exact(inst, psi0, rec.t)
        for i in range(rec.n_rows):
            rho = recover_density(partial_trace_site(states[i], list(inst.dims), 0), gen)
            sz = np.trace(np.diag([1.0, -1.0]) @ rho).real
            assert rec.sz_recovered[i] == pytest.approx(sz, abs=2e-5)

    def test_divergence_on_bond_cap(self):
        cfg = ModelConfig(n_modes=2, fock_dim=3)
        evo = EvolutionConfig(t_final=0.5, dt=0.005, hard_bond_cap=1)
        with pytest.raises(DivergenceError) as err:
            run(cfg, SimilarityGenerator(), evo)
        assert err.value.step >= 1
