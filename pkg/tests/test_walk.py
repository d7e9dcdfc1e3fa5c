import numpy as np
import pytest

from corrwalk import (
    CoinParameters,
    CoinPhases,
    InvalidParameterError,
    PhaseSequence,
    coin_matrix,
    evolve,
    generate_coin_phases,
    initial_state_generic,
    initial_state_symmetric,
    probability_profile,
    step,
)

from _oracles import as_vector, dense_step_unitary

INV_SQRT2 = 1.0 / np.sqrt(2.0)


class TestCoinMatrix:
    def test_hadamard(self):
        C = coin_matrix(CoinParameters(q=0.5, theta=0.0, phi=0.0))
        np.testing.assert_allclose(C, INV_SQRT2 * np.array([[1, 1], [1, -1]]), atol=1e-15)

    def test_q_one_is_diagonal(self):
        C = coin_matrix(CoinParameters(q=1.0, theta=1.3, phi=2.1))
        np.testing.assert_allclose(C[0], [1.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(C[1, 0], 0.0, atol=1e-15)
        np.testing.assert_allclose(C[1, 1], -np.exp(1j * 3.4), atol=1e-12)

    def test_quarter_phase(self):
        C = coin_matrix(CoinParameters(q=0.5, theta=np.pi / 2, phi=0.0))
        np.testing.assert_allclose(C, INV_SQRT2 * np.array([[1, 1j], [1, -1j]]), atol=1e-12)
        np.testing.assert_allclose(C @ C.conj().T, np.eye(2), atol=1e-12)

    @pytest.mark.parametrize("q", [0.0, 0.25, 0.5, 1.0])
    def test_unitary_for_random_phases(self, q):
        rng = np.random.default_rng(1)
        for _ in range(5):
            theta, phi = rng.uniform(0, 2 * np.pi, 2)
            C = coin_matrix(CoinParameters(q=q, theta=theta, phi=phi))
            np.testing.assert_allclose(C @ C.conj().T, np.eye(2), atol=1e-12)

    def test_rejects_bad_q(self):
        with pytest.raises(InvalidParameterError):
            CoinParameters(q=1.5)
        with pytest.raises(InvalidParameterError):
            CoinParameters(q=-0.1)


class TestInitialStates:
    def test_symmetric_position_and_weights(self):
        state = initial_state_symmetric(1000)
        profile = probability_profile(state)
        assert np.argmax(profile) == 499  # site 500
        assert profile[499] == pytest.approx(1.0, abs=1e-15)
        assert abs(state.up[499]) ** 2 == pytest.approx(0.5, abs=1e-15)
        assert abs(state.down[499]) ** 2 == pytest.approx(0.5, abs=1e-15)
        assert np.count_nonzero(profile) == 1

    def test_smallest_lattice(self):
        state = initial_state_symmetric(2)
        assert state.norm() == pytest.approx(1.0, abs=1e-15)
        assert abs(state.up[0]) > 0  # site 1 = 2 // 2

    def test_delta_initial_condition(self):
        for N in (2, 7, 64):
            profile = probability_profile(initial_state_symmetric(N))
            expected = np.zeros(N)
            expected[N // 2 - 1] = 1.0
            np.testing.assert_allclose(profile, expected, atol=1e-15)

    def test_rejects_small_lattice(self):
        with pytest.raises(InvalidParameterError):
            initial_state_symmetric(1)

    def test_generic_spin_up_delta(self):
        state, factor = initial_state_generic(8, [(3, 1.0, 0.0)])
        assert factor == pytest.approx(1.0)
        assert state.norm() == pytest.approx(1.0, abs=1e-15)
        assert state.up[2] == pytest.approx(1.0)

    def test_generic_matches_symmetric(self):
        N = 16
        state, factor = initial_state_generic(N, [(N // 2, INV_SQRT2, 1j * INV_SQRT2)])
        reference = initial_state_symmetric(N)
        np.testing.assert_allclose(state.up, reference.up, atol=1e-15)
        np.testing.assert_allclose(state.down, reference.down, atol=1e-15)
        assert factor == pytest.approx(1.0, abs=1e-12)

    def test_generic_renormalizes_and_reports_factor(self):
        state, factor = initial_state_generic(8, [(3, 2.0, 0.0)])
        assert factor == pytest.approx(0.5)
        assert state.up[2] == pytest.approx(1.0)
        assert state.norm() == pytest.approx(1.0, abs=1e-15)

    def test_generic_rejects_empty_and_zero_norm(self):
        with pytest.raises(InvalidParameterError):
            initial_state_generic(8, [])
        with pytest.raises(InvalidParameterError):
            initial_state_generic(8, [(3, 0.0, 0.0)])

    def test_generic_rejects_site_out_of_range(self):
        with pytest.raises(InvalidParameterError):
            initial_state_generic(8, [(0, 1.0, 0.0)])
        with pytest.raises(InvalidParameterError):
            initial_state_generic(8, [(9, 1.0, 0.0)])


def zero_phases(T, N):
    return CoinPhases(theta=PhaseSequence(np.zeros(T)), phi=PhaseSequence(np.zeros(N)))


class TestStep:
    def test_delta_spin_up_single_step(self):
        N = 9
        state, _ = initial_state_generic(N, [(5, 1.0, 0.0)])
        out = step(state, 0.0, np.zeros(N))
        expected_up = np.zeros(N, complex)
        expected_up[3] = INV_SQRT2  # site 4 = n0 - 1
        expected_down = np.zeros(N, complex)
        expected_down[5] = INV_SQRT2  # site 6 = n0 + 1
        np.testing.assert_allclose(out.up, expected_up, atol=1e-15)
        np.testing.assert_allclose(out.down, expected_down, atol=1e-15)
        assert out.time == 1

    def test_norm_preserved_random_phases(self):
        rng = np.random.default_rng(7)
        N = 33
        state, _ = initial_state_generic(
            N, [(int(s), complex(*rng.normal(size=2)), complex(*rng.normal(size=2))) for s in range(1, N + 1)]
        )
        for _ in range(10):
            state = step(state, rng.uniform(0, 2 * np.pi), rng.uniform(0, 2 * np.pi, N))
            assert state.norm() == pytest.approx(1.0, abs=1e-12)

    def test_homogeneous_profile_symmetric(self):
        N = 128
        state = initial_state_symmetric(N)
        n0 = N // 2
        phi = np.zeros(N)
        for t in range(1, N // 2 + 1):
            state = step(state, 0.0, phi)
            profile = probability_profile(state)
            mirrored = profile[::-1]
            # site n maps to 2*n0 - n, i.e. index i -> 2*(n0-1) - i
            shifted = np.roll(mirrored, 2 * n0 - N - 1)
            np.testing.assert_allclose(profile, shifted, atol=1e-10)

    def test_light_cone_zero_outside(self):
        N = 64
        state = initial_state_symmetric(N)
        n0 = N // 2
        phases = generate_coin_phases(20, N, 1.0, 1.0, seed=3)
        phi = phases.phi
        for t in range(1, 21):
            state = step(state, phases.theta.values[t - 1], phi)
            profile = probability_profile(state)
            sites = np.arange(1, N + 1)
            outside = np.abs(sites - n0) > t
            assert np.all(profile[outside] == 0.0)

    def test_phi_length_mismatch_rejected(self):
        state = initial_state_symmetric(8)
        with pytest.raises(InvalidParameterError):
            step(state, 0.0, np.zeros(7))


class TestEvolve:
    def test_zero_steps_returns_copy(self):
        state = initial_state_symmetric(10)
        out = evolve(state, zero_phases(1, 10), 0)
        np.testing.assert_array_equal(out.up, state.up)
        np.testing.assert_array_equal(out.down, state.down)
        assert out.up is not state.up
        assert out.time == state.time

    def test_matches_iterated_step(self):
        N, T = 21, 13
        phases = generate_coin_phases(T, N, 0.7, 1.3, seed=5)
        expected = initial_state_symmetric(N)
        for t in range(1, T + 1):
            expected = step(expected, phases.theta.values[t - 1], phases.phi)
        out = evolve(initial_state_symmetric(N), phases, T)
        np.testing.assert_allclose(out.up, expected.up, atol=1e-13)
        np.testing.assert_allclose(out.down, expected.down, atol=1e-13)
        assert out.time == T

    @pytest.mark.parametrize("draw", range(20))
    def test_matches_dense_oracle(self, draw):
        rng = np.random.default_rng(1000 + draw)
        N = int(rng.integers(4, 33) // 2 * 2)
        T = int(rng.integers(1, 17))
        theta = rng.uniform(0, 2 * np.pi, T)
        phi = rng.uniform(0, 2 * np.pi, N)
        phases = CoinPhases(theta=PhaseSequence(theta), phi=PhaseSequence(phi))

        state = initial_state_symmetric(N)
        vec = as_vector(state)
        for t in range(T):
            vec = dense_step_unitary(theta[t], phi) @ vec

        out = evolve(state, phases, T)
        np.testing.assert_allclose(as_vector(out), vec, atol=1e-10)

    @pytest.mark.parametrize("draw", range(20))
    def test_dense_one_step_map_is_unitary(self, draw):
        rng = np.random.default_rng(2000 + draw)
        N = 16
        U = dense_step_unitary(rng.uniform(0, 2 * np.pi), rng.uniform(0, 2 * np.pi, N))
        deviation = np.abs(U.conj().T @ U - np.eye(2 * N)).max()
        assert deviation < 1e-12

    def test_observer_sees_every_step(self):
        N, T = 12, 9
        seen = []
        norms = []

        def observer(t, state):
            seen.append(t)
            norms.append(state.norm())

        evolve(initial_state_symmetric(N), zero_phases(T, N), T, observer=observer)
        assert seen == list(range(1, T + 1))
        assert all(n == pytest.approx(1.0, abs=1e-12) for n in norms)

    def test_norm_conserved_long_run(self):
        N, T = 256, 2000
        phases = generate_coin_phases(T, N, 1.0, 1.0, seed=17)
        drift = []
        evolve(
            initial_state_symmetric(N),
            phases,
            T,
            observer=lambda t, s: drift.append(abs(s.norm() - 1.0)),
        )
        assert max(drift) < 1e-9

    def test_insufficient_theta_rejected(self):
        state = initial_state_symmetric(8)
        with pytest.raises(InvalidParameterError):
            evolve(state, zero_phases(4, 8), 5)

    def test_phi_mismatch_rejected(self):
        state = initial_state_symmetric(8)
        with pytest.raises(InvalidParameterError):
            evolve(state, zero_phases(4, 6), 2)
