import numpy as np
import pytest

from sectorlab import (
    AlgebraElement,
    BlockShape,
    FiniteGroup,
    OperatorSubalgebra,
    ShapeMismatchError,
    center,
    close_under_multiplication,
    commutant,
    matrix_unit_basis,
    minimal_central_projections,
    operator_norm,
)


class TestElementArithmetic:
    def test_unit_is_idempotent(self, shape23):
        one = AlgebraElement.unit(shape23)
        assert (one * one - one).norm() == 0.0

    def test_involution(self, shape23, rng):
        a = AlgebraElement.random(shape23, rng)
        assert (a.adjoint().adjoint() - a).norm() == 0.0

    def test_diagonal_product(self):
        shape = BlockShape((2,))
        a = AlgebraElement(shape, [np.diag([1.0, 2.0])])
        b = AlgebraElement(shape, [np.diag([3.0, 4.0])])
        assert np.allclose((a * b).blocks[0], np.diag([3.0, 8.0]))

    def test_shape_mismatch_rejected(self):
        a = AlgebraElement.unit(BlockShape((2,)))
        b = AlgebraElement.unit(BlockShape((3,)))
        with pytest.raises(ShapeMismatchError):
            _ = a * b

    def test_trace_inner_product_matches_vectors(self, shape23, rng):
        a = AlgebraElement.random(shape23, rng)
        b = AlgebraElement.random(shape23, rng)
        direct = sum(np.trace(np.conj(x.T) @ y)
                     for x, y in zip(a.blocks, b.blocks))
        assert abs(a.inner(b) - direct) < 1e-12
        assert abs(a.inner(b) - np.vdot(a.to_vector(), b.to_vector())) < 1e-12


class TestOperatorNorm:
    def test_unit(self, shape23):
        assert operator_norm(AlgebraElement.unit(shape23)) == 1.0

    def test_self_adjoint_spectral_radius(self):
        a = AlgebraElement(BlockShape((2,)), [np.diag([3.0, -4.0])])
        assert operator_norm(a) == 4.0

    def test_frobenius_bounds(self, rng):
        # ||a||_2 <= ||a||_F <= sqrt(5) ||a||_2 for a 5x5 matrix
        shape = BlockShape((5,))
        for _ in range(10):
            a = AlgebraElement.random(shape, rng)
            frob = a.hs_norm()
            assert operator_norm(a) <= frob + 1e-12
            assert operator_norm(a) >= frob / np.sqrt(5) - 1e-12

    def test_cstar_identity(self, shape23, rng):
        for _ in range(10):
            a = AlgebraElement.random(shape23, rng)
            assert abs(operator_norm(a.adjoint() * a) - operator_norm(a) ** 2) < 1e-10


class TestClosure:
    def test_unit_alone(self, shape23):
        s = close_under_multiplication([AlgebraElement.unit(shape23)])
        assert s.dim == 1

    def test_matrix_units_of_m2(self):
        shape = BlockShape((2,))
        s = close_under_multiplication(matrix_unit_basis(shape))
        assert s.dim == 4

    def test_generic_hermitian_pair_generates_m3(self, rng):
        shape = BlockShape((3,))
        a = AlgebraElement.random_hermitian(shape, rng)
        b = AlgebraElement.random_hermitian(shape, rng)
        assert close_under_multiplication([a, b]).dim == 9

    def test_bicommutant(self, rng):
        # double commutant has the same span as the generated *-algebra
        shape = BlockShape((4,))
        a = AlgebraElement.random_hermitian(shape, rng)
        generated = close_under_multiplication([a])
        double = commutant(commutant(generated))
        assert double.same_span(generated, 1e-10)


class TestCommutant:
    def test_full_matrix_algebra_gives_scalars(self):
        shape = BlockShape((3,))
        s = close_under_multiplication(matrix_unit_basis(shape))
        assert commutant(s).dim == 1

    def test_diagonal_subalgebra_of_m2(self):
        shape = BlockShape((2,))
        diag = OperatorSubalgebra.from_span(shape, [
            AlgebraElement(shape, [np.diag([1.0, 0.0])]),
            AlgebraElement(shape, [np.diag([0.0, 1.0])]),
        ])
        c = commutant(diag)
        assert c.dim == 2
        for b in c.basis:
            assert abs(b.blocks[0][0, 1]) < 1e-12 and abs(b.blocks[0][1, 0]) < 1e-12

    def test_doubled_m2_in_m4_against_bruteforce(self):
        shape = BlockShape((4,))
        def doubled(m):
            out = np.zeros((4, 4), dtype=complex)
            out[:2, :2] = m
            out[2:, 2:] = m
            return AlgebraElement(shape, [out])
        gens = [doubled(np.eye(2)[:, [i]] @ np.eye(2)[[j], :])
                for i in range(2) for j in range(2)]
        s = close_under_multiplication(gens)
        c = commutant(s)
        assert c.dim == 4

        # independent oracle: stack x g - g x maps entrywise with kron
        rows = []
        for g in gens:
            m = g.blocks[0]
            rows.append(np.kron(np.eye(4), m.T) - np.kron(m, np.eye(4)))
        _, sv, vh = np.linalg.svd(np.vstack(rows))
        oracle_dim = int(np.sum(sv <= 1e-10 * sv[0])) + (16 - len(sv))
        assert oracle_dim == c.dim

    def test_commutant_elements_commute(self, shape23, rng):
        a = AlgebraElement.random_hermitian(shape23, rng)
        s = close_under_multiplication([a])
        c = commutant(s)
        worst = max((x * b - b * x).norm() for x in c.basis for b in s.basis)
        assert worst <= 1e-10


class TestCenter:
    def test_block_algebra_centre_counts_blocks(self, shape23):
        full = close_under_multiplication(matrix_unit_basis(shape23))
        assert center(full).dim == 2

    def test_factor_has_trivial_centre(self):
        shape = BlockShape((3,))
        full = close_under_multiplication(matrix_unit_basis(shape))
        assert center(full).dim == 1

    def test_regular_representation_of_s3(self):
        # centre dimension equals the number of conjugacy classes (3)
        group = FiniteGroup.symmetric(3)
        shape = BlockShape((6,))
        gens = []
        for g in group.elements():
            m = np.zeros((6, 6))
            for h in group.elements():
                m[group.multiply(g, h), h] = 1.0
            gens.append(AlgebraElement(shape, [m]))
        algebra = close_under_multiplication(gens)
        assert algebra.dim == 6
        assert center(algebra).dim == 3

    def test_centre_commutes_with_everything(self, shape23, rng):
        a = AlgebraElement.random_hermitian(shape23, rng)
        s = close_under_multiplication([a])
        z = center(s)
        worst = max((x * b - b * x).norm() for x in z.basis for b in s.basis)
        assert worst <= 1e-10


class TestMinimalCentralProjections:
    def test_centre_of_two_blocks(self, shape23):
        full = close_under_multiplication(matrix_unit_basis(shape23))
        spec = minimal_central_projections(center(full))
        assert spec.num_points == 2

    def test_trivial_centre(self, shape23):
        z = OperatorSubalgebra.from_span(shape23, [AlgebraElement.unit(shape23)])
        spec = minimal_central_projections(z)
        assert spec.num_points == 1
        assert (spec.projections[0] - AlgebraElement.unit(shape23)).norm() < 1e-10

    def test_four_blocks_give_four_points(self):
        shape = BlockShape((1, 2, 2, 3))
        full = close_under_multiplication(matrix_unit_basis(shape))
        spec = minimal_central_projections(center(full))
        assert spec.num_points == 4

    def test_partition_of_unity(self, shape23):
        full = close_under_multiplication(matrix_unit_basis(shape23))
        spec = minimal_central_projections(center(full))
        total = AlgebraElement.zero(shape23)
        for i, p in enumerate(spec.projections):
            assert p.is_projection(1e-12)
            for q in spec.projections[i + 1:]:
                assert (p * q).norm() <= 1e-12
            total = total + p
        assert (total - AlgebraElement.unit(shape23)).norm() <= 1e-12

    def test_rejects_noncommutative_input(self):
        shape = BlockShape((2,))
        full = close_under_multiplication(matrix_unit_basis(shape))
        with pytest.raises(ValueError):
            minimal_central_projections(full)
