"""Finite-dimensional C*-algebras as direct sums of matrix blocks.

An algebra M_{n_1} (+) ... (+) M_{n_B} is described by its BlockShape; an
element carries one complex matrix per block. Subalgebras are stored as
orthonormal bases with respect to the trace inner product
<a, b> = sum_i Tr(a_i^* b_i), which turns membership tests into
projections and commutant/centre computations into plain nullspace
problems. In finite dimensions the bicommutant of a *-closed unital
subalgebra is the subalgebra itself, so no topology enters anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeMismatchError, ToleranceError
from .linalg import (
    DEFAULT_TOL,
    cluster_indices,
    hermitian_part,
    in_row_span,
    nullspace,
    orthonormalize_rows,
    project_onto_rows,
)


@dataclass(frozen=True)
class BlockShape:
    """Ordered block sizes (n_1, ..., n_B) of a block matrix algebra."""

    dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(n) for n in self.dims))
        if len(self.dims) < 1:
            raise ValueError("a block shape needs at least one block")
        if any(n < 1 for n in self.dims):
            raise ValueError(f"block sizes must be positive, got {self.dims}")

    @property
    def num_blocks(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        """Dimension of the Hilbert space the blocks act on."""
        return sum(self.dims)

    @property
    def dim(self) -> int:
        """Linear dimension of the algebra, sum of n_i^2."""
        return sum(n * n for n in self.dims)

    def block_slices(self) -> list[slice]:
        out, start = [], 0
        for n in self.dims:
            out.append(slice(start, start + n))
            start += n
        return out


class AlgebraElement:
    """One complex matrix per block; immutable after construction.

    Supports +, -, scalar multiples, the algebra product via ``*``, the
    adjoint, the trace inner product and the C*-norm. All operations are
    blockwise and pure.
    """

    __slots__ = ("shape", "blocks")

    def __init__(self, shape: BlockShape, blocks):
        if len(blocks) != shape.num_blocks:
            raise ShapeMismatchError(
                f"expected {shape.num_blocks} blocks, got {len(blocks)}"
            )
        frozen = []
        for n, b in zip(shape.dims, blocks):
            arr = np.array(b, dtype=complex)
            if arr.shape != (n, n):
                raise ShapeMismatchError(
                    f"block of shape {arr.shape} does not match size {n}"
                )
            arr.setflags(write=False)
            frozen.append(arr)
        self.shape = shape
        self.blocks = tuple(frozen)

    # -- constructors -------------------------------------------------

    @classmethod
    def unit(cls, shape: BlockShape) -> "AlgebraElement":
        return cls(shape, [np.eye(n) for n in shape.dims])

    @classmethod
    def zero(cls, shape: BlockShape) -> "AlgebraElement":
        return cls(shape, [np.zeros((n, n)) for n in shape.dims])

    @classmethod
    def block_identity(cls, shape: BlockShape, index: int) -> "AlgebraElement":
        """Minimal central projection: the identity of one block."""
        blocks = [np.zeros((n, n)) for n in shape.dims]
        blocks[index] = np.eye(shape.dims[index])
        return cls(shape, blocks)

    @classmethod
    def from_vector(cls, shape: BlockShape, vec: np.ndarray) -> "AlgebraElement":
        vec = np.asarray(vec, dtype=complex)
        if vec.shape != (shape.dim,):
            raise ShapeMismatchError(f"vector length {vec.shape} != {shape.dim}")
        blocks, start = [], 0
        for n in shape.dims:
            blocks.append(vec[start:start + n * n].reshape(n, n))
            start += n * n
        return cls(shape, blocks)

    @classmethod
    def from_big_matrix(cls, shape: BlockShape, m: np.ndarray) -> "AlgebraElement":
        """Extract the block-diagonal part of a total_dim x total_dim matrix."""
        return cls(shape, [m[s, s] for s in shape.block_slices()])

    @classmethod
    def random(cls, shape: BlockShape, rng: np.random.Generator) -> "AlgebraElement":
        return cls(shape, [
            rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            for n in shape.dims
        ])

    @classmethod
    def random_hermitian(cls, shape: BlockShape, rng: np.random.Generator) -> "AlgebraElement":
        return cls.random(shape, rng).hermitian()

    # -- arithmetic ---------------------------------------------------

    def _require_same_shape(self, other: "AlgebraElement"):
        if self.shape != other.shape:
            raise ShapeMismatchError(f"{self.shape} vs {other.shape}")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._require_same_shape(other)
        return AlgebraElement(self.shape, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._require_same_shape(other)
        return AlgebraElement(self.shape, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __neg__(self):
        return AlgebraElement(self.shape, [-a for a in self.blocks])

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._require_same_shape(other)
            return AlgebraElement(self.shape, [a @ b for a, b in zip(self.blocks, other.blocks)])
        if isinstance(other, (int, float, complex, np.number)):
            return AlgebraElement(self.shape, [complex(other) * a for a in self.blocks])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return AlgebraElement(self.shape, [complex(other) * a for a in self.blocks])
        return NotImplemented

    def adjoint(self) -> "AlgebraElement":
        return AlgebraElement(self.shape, [np.conj(a.T) for a in self.blocks])

    def hermitian(self) -> "AlgebraElement":
        return AlgebraElement(self.shape, [hermitian_part(a) for a in self.blocks])

    def commutator(self, other: "AlgebraElement") -> "AlgebraElement":
        return self * other - other * self

    # -- metrics ------------------------------------------------------

    def trace(self) -> complex:
        return complex(sum(np.trace(a) for a in self.blocks))

    def inner(self, other: "AlgebraElement") -> complex:
        """Trace inner product <self, other> = sum_i Tr(self_i^* other_i)."""
        self._require_same_shape(other)
        return complex(sum(
            np.sum(np.conj(a) * b) for a, b in zip(self.blocks, other.blocks)
        ))

    def norm(self) -> float:
        """C*-norm: the largest singular value over all blocks."""
        return max(float(np.linalg.norm(a, 2)) for a in self.blocks)

    def hs_norm(self) -> float:
        """Hilbert-Schmidt (Frobenius) norm across blocks."""
        return float(np.sqrt(sum(np.sum(np.abs(a) ** 2) for a in self.blocks)))

    def allclose(self, other: "AlgebraElement", tol: float = DEFAULT_TOL) -> bool:
        return (self - other).norm() <= tol * max(1.0, self.norm(), other.norm())

    def is_projection(self, tol: float = DEFAULT_TOL) -> bool:
        return (self * self - self).norm() <= tol and (self - self.adjoint()).norm() <= tol

    # -- coordinates --------------------------------------------------

    def to_vector(self) -> np.ndarray:
        """Row-major concatenation of the blocks; trace inner product of
        elements equals the standard inner product of these vectors."""
        return np.concatenate([a.ravel() for a in self.blocks])

    def to_big_matrix(self) -> np.ndarray:
        n = self.shape.total_dim
        out = np.zeros((n, n), dtype=complex)
        for s, a in zip(self.shape.block_slices(), self.blocks):
            out[s, s] = a
        return out

    def __repr__(self):
        return f"AlgebraElement(shape={self.shape.dims}, norm={self.norm():.4g})"


def matrix_unit_basis(shape: BlockShape) -> list[AlgebraElement]:
    """The canonical matrix units, orthonormal for the trace inner product.

    Ordered block by block, row-major inside each block, matching the
    coordinates used by to_vector/from_vector.
    """
    out = []
    for bi, n in enumerate(shape.dims):
        for r in range(n):
            for c in range(n):
                blocks = [np.zeros((m, m)) for m in shape.dims]
                blocks[bi][r, c] = 1.0
                out.append(AlgebraElement(shape, blocks))
    return out


@dataclass(frozen=True)
class OperatorSubalgebra:
    """A *-subalgebra stored as an orthonormal basis (trace inner product).

    The basis matrix caches the stacked coordinate vectors so membership
    and projection are single matrix products.
    """

    shape: BlockShape
    basis: tuple[AlgebraElement, ...]
    basis_matrix: np.ndarray = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        if self.basis_matrix is None:
            mat = np.stack([b.to_vector() for b in self.basis]) if self.basis else \
                np.zeros((0, self.shape.dim), dtype=complex)
            object.__setattr__(self, "basis_matrix", mat)

    @classmethod
    def from_span(cls, shape: BlockShape, elements, tol: float = DEFAULT_TOL,
                  include_unit: bool = False) -> "OperatorSubalgebra":
        vecs = [e.to_vector() for e in elements]
        if include_unit:
            vecs.append(AlgebraElement.unit(shape).to_vector())
        rows = orthonormalize_rows(np.stack(vecs), tol) if vecs else \
            np.zeros((0, shape.dim), dtype=complex)
        basis = tuple(AlgebraElement.from_vector(shape, r) for r in rows)
        return cls(shape, basis, rows)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, x: AlgebraElement, tol: float = DEFAULT_TOL) -> bool:
        return in_row_span(self.basis_matrix, x.to_vector(), tol)

    def project(self, x: AlgebraElement) -> AlgebraElement:
        return AlgebraElement.from_vector(
            self.shape, project_onto_rows(self.basis_matrix, x.to_vector())
        )

    def same_span(self, other: "OperatorSubalgebra", tol: float = DEFAULT_TOL) -> bool:
        if self.dim != other.dim:
            return False
        return all(other.contains(b, tol) for b in self.basis)

    def is_commutative(self, tol: float = DEFAULT_TOL) -> bool:
        return max_commutator_norm(self) <= tol

    def contains_unit(self, tol: float = DEFAULT_TOL) -> bool:
        return self.contains(AlgebraElement.unit(self.shape), tol)


def max_commutator_norm(s: OperatorSubalgebra) -> float:
    worst = 0.0
    for i, a in enumerate(s.basis):
        for b in s.basis[i + 1:]:
            worst = max(worst, a.commutator(b).norm())
    return worst


def operator_norm(a: AlgebraElement) -> float:
    return a.norm()


def close_under_multiplication(generators, tol: float = DEFAULT_TOL) -> OperatorSubalgebra:
    """Smallest unital *-closed, multiplicatively closed subspace containing
    the generators, with an orthonormal basis.

    Iterates pairwise products and re-orthonormalizes until the dimension
    stabilizes; in finite dimensions this is the bicommutant of the
    generated set.
    """
    generators = list(generators)
    if not generators:
        raise ValueError("need at least one generator")
    shape = generators[0].shape
    seed = [AlgebraElement.unit(shape)]
    for g in generators:
        if g.shape != shape:
            raise ShapeMismatchError("generators must share one shape")
        seed.append(g)
        seed.append(g.adjoint())
    current = OperatorSubalgebra.from_span(shape, seed, tol)
    while True:
        products = [a * b for a in current.basis for b in current.basis]
        grown = OperatorSubalgebra.from_span(
            shape, list(current.basis) + products, tol
        )
        if grown.dim == current.dim:
            return grown
        current = grown
        if current.dim > shape.dim:  # cannot happen; guards endless loops
            raise ToleranceError("closure exceeded the ambient dimension")


def _left_mult_matrix(b: np.ndarray) -> np.ndarray:
    return np.kron(b, np.eye(b.shape[0]))


def _right_mult_matrix(b: np.ndarray) -> np.ndarray:
    return np.kron(np.eye(b.shape[0]), b.T)


def commutant(s: OperatorSubalgebra, tol: float = DEFAULT_TOL) -> OperatorSubalgebra:
    """All ambient elements commuting with every basis element of s.

    Solved as the joint nullspace of the stacked commutation maps
    x -> x b - b x, blockwise via row-major vec identities.
    """
    shape = s.shape
    if s.dim == 0:
        return OperatorSubalgebra.from_span(shape, matrix_unit_basis(shape), tol)
    rows = []
    for b in s.basis:
        cols = []
        for blk in b.blocks:
            cols.append(_right_mult_matrix(blk) - _left_mult_matrix(blk))
        block_map = np.zeros((shape.dim, shape.dim), dtype=complex)
        start = 0
        for n, m in zip(shape.dims, cols):
            sl = slice(start, start + n * n)
            block_map[sl, sl] = m
            start += n * n
        rows.append(block_map)
    kernel = nullspace(np.vstack(rows), tol)
    basis = tuple(AlgebraElement.from_vector(shape, r) for r in kernel)
    return OperatorSubalgebra(shape, basis, kernel)


def center(s: OperatorSubalgebra, tol: float = DEFAULT_TOL) -> OperatorSubalgebra:
    """Elements of s commuting with all of s.

    Computed inside the coefficient space of s, so the result is exactly a
    subspace of s no matter how the ambient nullspace rounds.
    """
    if s.dim == 0:
        return s
    cols = []
    for e in s.basis:
        stacked = np.concatenate([e.commutator(b).to_vector() for b in s.basis])
        cols.append(stacked)
    coeff_kernel = nullspace(np.stack(cols, axis=1), tol)
    vectors = coeff_kernel @ s.basis_matrix
    basis = tuple(AlgebraElement.from_vector(s.shape, v) for v in vectors)
    return OperatorSubalgebra(s.shape, basis, vectors)


@dataclass(frozen=True)
class CentralSpectrum:
    """Minimal projections of a commutative algebra: the points of its
    Gelfand spectrum, with opaque labels."""

    projections: tuple[AlgebraElement, ...]
    labels: tuple[str, ...]

    @property
    def num_points(self) -> int:
        return len(self.projections)

    def point_of(self, p: AlgebraElement, tol: float = DEFAULT_TOL) -> int:
        """Index of the spectrum point matching a given projection."""
        for i, q in enumerate(self.projections):
            if (p - q).norm() <= tol * max(1.0, p.norm()):
                return i
        raise ToleranceError("projection does not match any spectrum point")


def minimal_central_projections(
    z: OperatorSubalgebra, tol: float = DEFAULT_TOL
) -> CentralSpectrum:
    """Joint spectral decomposition of a commutative *-subalgebra.

    Refines joint eigenspaces of the self-adjoint parts of the basis;
    eigenvalues closer than tol (relative) land in one cluster. The
    resulting projections are mutually orthogonal idempotents summing to
    the identity and are verified to lie in z.
    """
    if not z.is_commutative(tol):
        raise ValueError("input subalgebra is not commutative")
    shape = z.shape
    total = shape.total_dim
    generators = []
    for b in z.basis:
        big = b.to_big_matrix()
        generators.append(hermitian_part(big))
        generators.append(hermitian_part(-1j * big))
    subspaces = [np.eye(total, dtype=complex)]
    for g in generators:
        scale = max(1.0, float(np.linalg.norm(g, 2)))
        refined = []
        for v in subspaces:
            if v.shape[1] == 1:
                refined.append(v)
                continue
            restricted = np.conj(v.T) @ g @ v
            vals, vecs = np.linalg.eigh(hermitian_part(restricted))
            for idx in cluster_indices(vals, tol * scale):
                refined.append(v @ vecs[:, idx])
        subspaces = refined
    projections, labels = [], []
    for i, v in enumerate(subspaces):
        big = v @ np.conj(v.T)
        p = AlgebraElement.from_big_matrix(shape, big)
        off_diag = float(np.linalg.norm(big - p.to_big_matrix(), 2))
        if off_diag > tol * total:
            raise ToleranceError("joint eigenprojection is not block diagonal")
        if not z.contains(p, max(tol * total, 1e-8)):
            raise ToleranceError(
                "spectral projection escaped the commutative algebra; "
                "eigenvalue clustering tolerance is likely too small"
            )
        projections.append(p)
        labels.append(f"s{i}")
    return CentralSpectrum(tuple(projections), tuple(labels))
