import numpy as np
import pytest

from sectorlab import (
    AlgebraElement,
    BlockShape,
    Dynamics,
    StateFunctional,
    ToleranceError,
    central_decomposition,
    central_support,
    disjointness_witness,
    folium_contains,
    gibbs_state,
    gns,
    is_disjoint,
    is_quasi_equivalent,
    matrix_unit_basis,
    mix_states,
)


class TestEvaluation:
    def test_normalization(self, shape23, rng):
        omega = StateFunctional.random(shape23, rng)
        assert abs(omega(AlgebraElement.unit(shape23)) - 1.0) < 1e-12

    def test_diagonal_pairing(self):
        shape = BlockShape((2,))
        omega = StateFunctional(shape, [np.diag([1.0, 0.0])])
        a = AlgebraElement(shape, [np.diag([0.3, 0.9])])
        assert abs(omega(a) - 0.3) < 1e-14

    def test_bounded_by_norm(self, shape23, rng):
        for _ in range(20):
            omega = StateFunctional.random(shape23, rng)
            a = AlgebraElement.random(shape23, rng)
            assert abs(omega(a)) <= a.norm() + 1e-10

    def test_rejects_unnormalized(self):
        shape = BlockShape((2,))
        with pytest.raises(ValueError):
            StateFunctional(shape, [np.diag([1.0, 1.0])])

    def test_rejects_negative_density(self):
        shape = BlockShape((2,))
        with pytest.raises(ValueError):
            StateFunctional(shape, [np.diag([1.5, -0.5])])


class TestGns:
    def test_faithful_state_on_m2(self, rng):
        shape = BlockShape((2,))
        omega = StateFunctional.random(shape, rng)
        rep = gns(omega)
        assert rep.gns_dimension == 4
        assert rep.represented_algebra.dim == 4
        assert rep.centre.dim == 1

    def test_vector_state_on_m2(self):
        shape = BlockShape((2,))
        omega = StateFunctional.vector_state(shape, 0, [1.0, 0.0])
        rep = gns(omega)
        assert rep.gns_dimension == 2
        assert rep.centre.dim == 1

    def test_block_supported_state(self, rng):
        shape = BlockShape((2, 3))
        omega = StateFunctional.random(shape, rng, charged_blocks=[0])
        rep = gns(omega)
        # kernel is the full second block
        assert rep.represented_algebra.dim == 4
        assert rep.kernel_basis.shape[0] == 9

    def test_state_recovered_from_cyclic_vector(self, shape23, rng):
        omega = StateFunctional.random(shape23, rng)
        rep = gns(omega)
        for e in matrix_unit_basis(shape23):
            expected = omega(e)
            got = np.vdot(rep.cyclic_vector, rep.represent(e) @ rep.cyclic_vector)
            assert abs(expected - got) < 1e-10

    def test_representation_is_star_homomorphism(self, shape23, rng):
        omega = StateFunctional.random(shape23, rng)
        rep = gns(omega)
        a = AlgebraElement.random(shape23, rng)
        b = AlgebraElement.random(shape23, rng)
        assert np.linalg.norm(
            rep.represent(a * b) - rep.represent(a) @ rep.represent(b), 2
        ) < 1e-9
        assert np.linalg.norm(
            rep.represent(a.adjoint()) - np.conj(rep.represent(a).T), 2
        ) < 1e-10
        one = rep.represent(AlgebraElement.unit(shape23))
        assert np.linalg.norm(one - np.eye(rep.gns_dimension), 2) < 1e-10

    def test_cyclic_vector_is_cyclic(self, shape23, rng):
        omega = StateFunctional.random(shape23, rng)
        rep = gns(omega)
        orbit = np.stack([
            rep.represent(e) @ rep.cyclic_vector for e in matrix_unit_basis(shape23)
        ])
        rank = np.linalg.matrix_rank(orbit, tol=1e-10)
        assert rank == rep.gns_dimension


class TestFolium:
    def test_own_folium(self, shape23, rng):
        omega = StateFunctional.random(shape23, rng)
        assert folium_contains(gns(omega), omega)

    def test_disjoint_block_state_excluded(self):
        shape = BlockShape((2, 3))
        rep = gns(StateFunctional.uniform_on_block(shape, 0))
        other = StateFunctional.uniform_on_block(shape, 1)
        assert not folium_contains(rep, other)

    def test_faithful_representation_contains_everything(self, shape23, rng):
        rep = gns(StateFunctional.maximally_mixed(shape23))
        for _ in range(5):
            assert folium_contains(rep, StateFunctional.random(shape23, rng))

    def test_quasi_equivalent_states_share_folia(self, shape23, rng):
        omega1 = StateFunctional.random(shape23, rng, charged_blocks=[0])
        omega2 = StateFunctional.random(shape23, rng, charged_blocks=[0])
        assert is_quasi_equivalent(omega1, omega2)
        assert folium_contains(gns(omega1), omega2)


class TestCentralSupport:
    def test_faithful_gives_unit(self, shape23, rng):
        omega = StateFunctional.random(shape23, rng)
        support = central_support(omega)
        assert (support - AlgebraElement.unit(shape23)).norm() < 1e-12

    def test_single_block(self):
        shape = BlockShape((2, 3))
        omega = StateFunctional.uniform_on_block(shape, 0)
        expected = AlgebraElement.block_identity(shape, 0)
        assert (central_support(omega) - expected).norm() < 1e-12

    def test_two_charged_blocks(self, rng):
        shape = BlockShape((2, 3))
        omega = mix_states([
            (0.3, StateFunctional.uniform_on_block(shape, 0)),
            (0.7, StateFunctional.uniform_on_block(shape, 1)),
        ])
        assert (central_support(omega) - AlgebraElement.unit(shape)).norm() < 1e-12


class TestDisjointness:
    def test_different_blocks_disjoint(self):
        shape = BlockShape((2, 3))
        s0 = StateFunctional.uniform_on_block(shape, 0)
        s1 = StateFunctional.uniform_on_block(shape, 1)
        assert is_disjoint(s0, s1, verify=True)

    def test_faithful_pair_not_disjoint(self, rng):
        shape = BlockShape((2,))
        s0 = StateFunctional.random(shape, rng)
        s1 = StateFunctional.random(shape, rng)
        assert not is_disjoint(s0, s1, verify=True)

    def test_overlapping_supports_not_disjoint(self, rng):
        shape = BlockShape((2, 2, 2))
        s0 = StateFunctional.random(shape, rng, charged_blocks=[0, 1])
        s1 = StateFunctional.random(shape, rng, charged_blocks=[1, 2])
        assert not is_disjoint(s0, s1, verify=True)

    def test_witness_separates(self, rng):
        shape = BlockShape((2, 3))
        s0 = StateFunctional.uniform_on_block(shape, 0)
        s1 = StateFunctional.uniform_on_block(shape, 1)
        witness = disjointness_witness(s0, s1)
        assert witness.is_projection()
        assert abs(s0(witness) - 1.0) < 1e-12
        assert abs(s1(witness)) < 1e-12

    def test_witness_requires_disjointness(self, rng):
        shape = BlockShape((2,))
        s0 = StateFunctional.random(shape, rng)
        s1 = StateFunctional.random(shape, rng)
        with pytest.raises(ValueError):
            disjointness_witness(s0, s1)


class TestQuasiEquivalence:
    def test_faithful_pair(self, shape23, rng):
        s0 = StateFunctional.random(shape23, rng)
        s1 = StateFunctional.random(shape23, rng)
        assert is_quasi_equivalent(s0, s1, verify=True)

    def test_blocks_are_inequivalent(self):
        shape = BlockShape((2, 3))
        s0 = StateFunctional.uniform_on_block(shape, 0)
        s1 = StateFunctional.uniform_on_block(shape, 1)
        assert not is_quasi_equivalent(s0, s1, verify=True)

    def test_gibbs_states_on_a_factor(self):
        # on a single matrix block all faithful states are quasi-equivalent,
        # including Gibbs states at different temperatures
        shape = BlockShape((3,))
        d = Dynamics(shape, [np.diag([0.0, 1.0, 2.0])])
        assert is_quasi_equivalent(gibbs_state(d, 1.0), gibbs_state(d, 2.0),
                                   verify=True)

    def test_trichotomy_for_factor_states(self, rng):
        shape = BlockShape((2, 3))
        factors = [
            StateFunctional.random(shape, rng, charged_blocks=[i])
            for i in (0, 1, 0, 1)
        ]
        for i, a in enumerate(factors):
            for b in factors[i + 1:]:
                assert is_disjoint(a, b) != is_quasi_equivalent(a, b)


class TestCentralDecomposition:
    def test_factor_state_single_component(self, rng):
        shape = BlockShape((2, 3))
        omega = StateFunctional.random(shape, rng, charged_blocks=[1])
        decomposition = central_decomposition(omega)
        assert len(decomposition.components) == 1
        assert abs(decomposition.components[0].weight - 1.0) < 1e-12

    def test_even_mixture(self):
        shape = BlockShape((2, 2))
        omega = mix_states([
            (0.5, StateFunctional.uniform_on_block(shape, 0)),
            (0.5, StateFunctional.uniform_on_block(shape, 1)),
        ])
        decomposition = central_decomposition(omega)
        assert decomposition.weights == (0.5, 0.5)

    def test_weights_are_block_traces(self, rng):
        shape = BlockShape((2, 3, 2))
        omega = StateFunctional.random(shape, rng)
        decomposition = central_decomposition(omega)
        traces = [float(np.trace(rho).real) for rho in omega.densities]
        assert np.allclose(decomposition.weights, traces, atol=1e-12)

    def test_reassembly_on_operator_basis(self, rng):
        shape = BlockShape((2, 3, 2))
        omega = StateFunctional.random(shape, rng)
        rebuilt = central_decomposition(omega).reassemble()
        for e in matrix_unit_basis(shape):
            assert abs(omega(e) - rebuilt(e)) < 1e-12

    def test_components_disjoint_factors(self, rng):
        shape = BlockShape((2, 2, 3))
        omega = StateFunctional.random(shape, rng)
        comps = central_decomposition(omega).components
        for i, c in enumerate(comps):
            assert gns(c.state).centre.dim == 1
            for d in comps[i + 1:]:
                assert is_disjoint(c.state, d.state)


class TestMixing:
    def test_single_pair_identity(self, shape23, rng):
        omega = StateFunctional.random(shape23, rng)
        assert mix_states([(1.0, omega)]).distance(omega) < 1e-14

    def test_orthogonal_pure_states_give_maximally_mixed(self):
        shape = BlockShape((2,))
        up = StateFunctional.vector_state(shape, 0, [1.0, 0.0])
        down = StateFunctional.vector_state(shape, 0, [0.0, 1.0])
        mixed = mix_states([(0.5, up), (0.5, down)])
        assert np.allclose(mixed.densities[0], np.eye(2) / 2)

    def test_gibbs_mixture_energy(self):
        shape = BlockShape((3,))
        d = Dynamics(shape, [np.diag([0.0, 1.0, 2.0])])
        h = d.as_element()
        g1, g2 = gibbs_state(d, 1.0), gibbs_state(d, 2.0)
        mixed = mix_states([(0.3, g1), (0.7, g2)])
        expected = 0.3 * g1(h) + 0.7 * g2(h)
        assert abs(mixed(h) - expected) < 1e-12

    def test_bad_weights_rejected(self, shape23, rng):
        omega = StateFunctional.random(shape23, rng)
        with pytest.raises(ValueError):
            mix_states([(0.4, omega), (0.4, omega)])
        with pytest.raises(ValueError):
            mix_states([(1.5, omega), (-0.5, omega)])
