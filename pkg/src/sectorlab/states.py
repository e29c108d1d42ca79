"""States, GNS representations and the sector calculus.

A state is a normalized positive functional given by one density matrix
per block, evaluated as w(a) = sum_i Tr(rho_i a_i). Its GNS
representation is built from the sesquilinear form w(a^* b) on the
algebra; everything downstream (folium membership, disjointness,
quasi-equivalence, central supports and the central decomposition into
factor states) reduces to which blocks carry weight, and the code
cross-checks its fast block computations against the representation-level
definitions on demand.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraElement,
    BlockShape,
    CentralSpectrum,
    OperatorSubalgebra,
    center,
    commutant,
    matrix_unit_basis,
    minimal_central_projections,
)
from .errors import ShapeMismatchError, ToleranceError
from .linalg import DEFAULT_TOL, intertwiner_space, nullspace

STATE_TOL = 1e-8


class StateFunctional:
    """Positive normalized functional with one density matrix per block."""

    __slots__ = ("shape", "densities")

    def __init__(self, shape: BlockShape, densities, tol: float = STATE_TOL):
        if len(densities) != shape.num_blocks:
            raise ShapeMismatchError(
                f"expected {shape.num_blocks} densities, got {len(densities)}"
            )
        frozen = []
        total = 0.0
        for n, d in zip(shape.dims, densities):
            arr = np.array(d, dtype=complex)
            if arr.shape != (n, n):
                raise ShapeMismatchError(
                    f"density of shape {arr.shape} does not match block size {n}"
                )
            if np.linalg.norm(arr - np.conj(arr.T), 2) > tol:
                raise ValueError("density matrices must be Hermitian")
            if arr.size and float(np.min(np.linalg.eigvalsh(arr))) < -tol:
                raise ValueError("density matrices must be positive semidefinite")
            total += float(np.trace(arr).real)
            arr.setflags(write=False)
            frozen.append(arr)
        if abs(total - 1.0) > tol:
            raise ValueError(f"densities must have total trace 1, got {total}")
        self.shape = shape
        self.densities = tuple(frozen)

    # -- constructors -------------------------------------------------

    @classmethod
    def maximally_mixed(cls, shape: BlockShape) -> "StateFunctional":
        n = shape.total_dim
        return cls(shape, [np.eye(m) / n for m in shape.dims])

    @classmethod
    def uniform_on_block(cls, shape: BlockShape, block: int) -> "StateFunctional":
        n = shape.dims[block]
        densities = [np.zeros((m, m)) for m in shape.dims]
        densities[block] = np.eye(n) / n
        return cls(shape, densities)

    @classmethod
    def vector_state(cls, shape: BlockShape, block: int, vec) -> "StateFunctional":
        v = np.asarray(vec, dtype=complex)
        v = v / np.linalg.norm(v)
        densities = [np.zeros((m, m)) for m in shape.dims]
        densities[block] = np.outer(v, np.conj(v))
        return cls(shape, densities)

    @classmethod
    def random(cls, shape: BlockShape, rng: np.random.Generator,
               charged_blocks=None) -> "StateFunctional":
        """Random full-rank state on the given blocks (default: all)."""
        charged = set(range(shape.num_blocks)) if charged_blocks is None \
            else set(charged_blocks)
        densities = []
        for i, n in enumerate(shape.dims):
            if i in charged:
                g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
                densities.append(g @ np.conj(g.T) + 1e-6 * np.eye(n))
            else:
                densities.append(np.zeros((n, n)))
        total = sum(float(np.trace(d).real) for d in densities)
        return cls(shape, [d / total for d in densities])

    # -- evaluation ---------------------------------------------------

    def __call__(self, a: AlgebraElement) -> complex:
        if a.shape != self.shape:
            raise ShapeMismatchError(f"{a.shape} vs {self.shape}")
        return complex(sum(
            np.trace(rho @ blk) for rho, blk in zip(self.densities, a.blocks)
        ))

    def eval_vector(self) -> np.ndarray:
        """Coordinates v with w(a) = v . vec(a) (plain dot, no conjugation)."""
        return np.concatenate([rho.T.ravel() for rho in self.densities])

    def charged_blocks(self, tol: float = DEFAULT_TOL) -> tuple[int, ...]:
        """Blocks carrying trace weight above tol."""
        return tuple(
            i for i, rho in enumerate(self.densities)
            if float(np.trace(rho).real) > tol
        )

    def block_weight(self, i: int) -> float:
        return float(np.trace(self.densities[i]).real)

    def is_faithful(self, tol: float = DEFAULT_TOL) -> bool:
        return all(
            float(np.min(np.linalg.eigvalsh(rho))) > tol for rho in self.densities
        )

    def distance(self, other: "StateFunctional") -> float:
        return float(np.linalg.norm(self.eval_vector() - other.eval_vector()))

    def __repr__(self):
        weights = [round(self.block_weight(i), 6) for i in range(self.shape.num_blocks)]
        return f"StateFunctional(shape={self.shape.dims}, block_weights={weights})"


def evaluate(omega: StateFunctional, a: AlgebraElement) -> complex:
    return omega(a)


def mix_states(pairs, tol: float = STATE_TOL) -> StateFunctional:
    """Convex combination of states; weights must be >= 0 and sum to 1."""
    pairs = list(pairs)
    if not pairs:
        raise ValueError("need at least one (weight, state) pair")
    weights = [float(w) for w, _ in pairs]
    if any(w < -tol for w in weights):
        raise ValueError("mixture weights must be nonnegative")
    if abs(sum(weights) - 1.0) > tol:
        raise ValueError("mixture weights must sum to 1")
    shape = pairs[0][1].shape
    densities = [np.zeros((n, n), dtype=complex) for n in shape.dims]
    for w, state in pairs:
        if state.shape != shape:
            raise ShapeMismatchError("mixture members must share one shape")
        for i, rho in enumerate(state.densities):
            densities[i] = densities[i] + w * rho
    return StateFunctional(shape, densities)


@dataclass(frozen=True)
class RepresentationData:
    """A unital *-representation with its bicommutant, commutant, centre
    and central spectrum.

    For GNS representations the cyclic vector is populated; induced
    representations reuse the same container with cyclic_vector None.
    image_stack[k] is the matrix representing the k-th canonical matrix
    unit, so represent() is linear extension along to_vector coordinates.
    point_block_map ties each central-spectrum point to the ambient block
    whose identity maps onto that point (None entries for points without
    an ambient preimage, as happens for induced representations).
    """

    ambient_shape: BlockShape
    dimension: int
    image_stack: np.ndarray
    cyclic_vector: np.ndarray | None
    represented_algebra: OperatorSubalgebra
    commutant: OperatorSubalgebra
    centre: OperatorSubalgebra
    central_spectrum: CentralSpectrum
    kernel_basis: np.ndarray
    point_block_map: tuple[int | None, ...]

    @property
    def gns_dimension(self) -> int:
        return self.dimension

    def represent(self, a: AlgebraElement) -> np.ndarray:
        if a.shape != self.ambient_shape:
            raise ShapeMismatchError(f"{a.shape} vs {self.ambient_shape}")
        return np.tensordot(a.to_vector(), self.image_stack, axes=(0, 0))

    def is_factor(self) -> bool:
        return self.centre.dim == 1

    def kernel_elements(self) -> list[AlgebraElement]:
        return [
            AlgebraElement.from_vector(self.ambient_shape, row)
            for row in self.kernel_basis
        ]


def representation_from_images(
    shape: BlockShape,
    image_stack: np.ndarray,
    cyclic_vector: np.ndarray | None = None,
    tol: float = DEFAULT_TOL,
) -> RepresentationData:
    """Assemble RepresentationData from the matrix-unit images.

    Computes the represented algebra (its span: images of a homomorphism
    are already multiplicatively closed), commutant, centre, spectrum,
    kernel and the ambient-block chart of the spectrum points.
    """
    d = image_stack.shape[1]
    rep_shape = BlockShape((d,))
    elements = [AlgebraElement(rep_shape, [m]) for m in image_stack]
    algebra = OperatorSubalgebra.from_span(rep_shape, elements, tol, include_unit=True)
    comm = commutant(algebra, tol)
    cent = center(algebra, tol)
    spectrum = minimal_central_projections(cent, tol)
    kernel = nullspace(image_stack.reshape(image_stack.shape[0], d * d).T, tol)

    point_blocks: list[int | None] = [None] * spectrum.num_points
    for i in range(shape.num_blocks):
        z = AlgebraElement.block_identity(shape, i)
        img = np.tensordot(z.to_vector(), image_stack, axes=(0, 0))
        if np.linalg.norm(img, 2) <= tol:
            continue
        img_el = AlgebraElement(rep_shape, [img])
        matched = False
        for j, p in enumerate(spectrum.projections):
            if (img_el - p).norm() <= max(tol * d, 1e-8):
                if point_blocks[j] is not None:
                    raise ToleranceError("two blocks map to one spectrum point")
                point_blocks[j] = i
                matched = True
                break
        if not matched:
            # the block identity lands in the centre but not on a minimal
            # projection; legal for non-GNS images, recorded as uncharted
            continue
    return RepresentationData(
        ambient_shape=shape,
        dimension=d,
        image_stack=image_stack,
        cyclic_vector=cyclic_vector,
        represented_algebra=algebra,
        commutant=comm,
        centre=cent,
        central_spectrum=spectrum,
        kernel_basis=kernel,
        point_block_map=tuple(point_blocks),
    )


def gns(omega: StateFunctional, tol: float = DEFAULT_TOL) -> RepresentationData:
    """GNS representation of a state.

    The representation space is the algebra modulo the null space of
    <a, b> = w(a^* b); the Gram matrix of the canonical matrix units has
    the closed block form I_n kron rho^T. Eigenvectors above tolerance
    give an orthonormal basis, and operators are matrix elements
    w(a_m^* x a_l).
    """
    shape = omega.shape
    units = matrix_unit_basis(shape)
    gram_blocks = []
    for n, rho in zip(shape.dims, omega.densities):
        gram_blocks.append(np.kron(np.eye(n), rho.T))
    dim = shape.dim
    gram = np.zeros((dim, dim), dtype=complex)
    start = 0
    for g in gram_blocks:
        sl = slice(start, start + g.shape[0])
        gram[sl, sl] = g
        start += g.shape[0]
    vals, vecs = np.linalg.eigh(gram)
    keep = vals > tol * max(1.0, float(vals[-1]))
    coeffs = vecs[:, keep] / np.sqrt(vals[keep])  # columns: o.n. GNS basis
    d = coeffs.shape[1]

    # basis_elements[m] is the algebra element representing basis vector m
    basis_elements = [
        AlgebraElement.from_vector(shape, coeffs[:, m]) for m in range(d)
    ]
    image_stack = np.zeros((dim, d, d), dtype=complex)
    for k, e in enumerate(units):
        prod_vecs = np.stack(
            [(e * b).to_vector() for b in basis_elements], axis=1
        )
        image_stack[k] = np.conj(coeffs.T) @ gram @ prod_vecs
    unit_vec = AlgebraElement.unit(shape).to_vector()
    cyclic = np.conj(coeffs.T) @ gram @ unit_vec
    return representation_from_images(shape, image_stack, cyclic, tol)


def folium_contains(rep: RepresentationData, omega: StateFunctional,
                    tol: float = DEFAULT_TOL) -> bool:
    """Whether omega extends to a density operator in the representation.

    In finite dimensions normality is automatic, so membership is exactly
    annihilation of ker(pi).
    """
    if omega.shape != rep.ambient_shape:
        raise ShapeMismatchError("state and representation shapes differ")
    if rep.kernel_basis.shape[0] == 0:
        return True
    values = rep.kernel_basis @ omega.eval_vector()
    return float(np.max(np.abs(values))) <= tol


def central_support(omega: StateFunctional, tol: float = DEFAULT_TOL) -> AlgebraElement:
    """Smallest central projection of the ambient algebra with w(z) = 1:
    the sum of the block identities over charged blocks."""
    out = AlgebraElement.zero(omega.shape)
    for i in omega.charged_blocks(tol):
        out = out + AlgebraElement.block_identity(omega.shape, i)
    return out


def is_disjoint(omega1: StateFunctional, omega2: StateFunctional,
                tol: float = DEFAULT_TOL, verify: bool = False) -> bool:
    """Disjointness of the GNS representations.

    Production route: orthogonality of the central supports (disjoint
    charged-block sets). With verify=True the two other equivalent
    characterizations (vanishing intertwiner space between the GNS
    representations, empty folium intersection) are computed and must
    agree.
    """
    if omega1.shape != omega2.shape:
        raise ShapeMismatchError("states must share one shape")
    s1 = set(omega1.charged_blocks(tol))
    s2 = set(omega2.charged_blocks(tol))
    disjoint = not (s1 & s2)
    if verify:
        rep1, rep2 = gns(omega1, tol), gns(omega2, tol)
        space = intertwiner_space(
            list(rep1.image_stack), list(rep2.image_stack), tol
        )
        by_intertwiner = space.shape[0] == 0
        common = sorted(s1 & s2)
        if common:
            probe = StateFunctional.uniform_on_block(omega1.shape, common[0])
            by_folium = not (
                folium_contains(rep1, probe, tol) and folium_contains(rep2, probe, tol)
            )
        else:
            by_folium = True
        if by_intertwiner != disjoint or by_folium != disjoint:
            raise ToleranceError(
                "disjointness characterizations disagree: "
                f"supports={disjoint} intertwiner={by_intertwiner} folium={by_folium}"
            )
    return disjoint


def disjointness_witness(omega1: StateFunctional, omega2: StateFunctional,
                         tol: float = DEFAULT_TOL) -> AlgebraElement:
    """A minimal central projection C with w1(C) != w2(C).

    Only meaningful for disjoint states, where any block charged for the
    first state works: w1(C) > 0 while w2(C) = 0.
    """
    if not is_disjoint(omega1, omega2, tol):
        raise ValueError("states are not disjoint; no separating support exists")
    block = omega1.charged_blocks(tol)[0]
    return AlgebraElement.block_identity(omega1.shape, block)


def is_quasi_equivalent(omega1: StateFunctional, omega2: StateFunctional,
                        tol: float = DEFAULT_TOL, verify: bool = False) -> bool:
    """Equality of central supports; with verify=True cross-checked
    against folium equality on a probe set."""
    if omega1.shape != omega2.shape:
        raise ShapeMismatchError("states must share one shape")
    s1 = set(omega1.charged_blocks(tol))
    s2 = set(omega2.charged_blocks(tol))
    equal = s1 == s2
    if verify:
        rep1, rep2 = gns(omega1, tol), gns(omega2, tol)
        probes = [omega1, omega2] + [
            StateFunctional.uniform_on_block(omega1.shape, i)
            for i in range(omega1.shape.num_blocks)
        ]
        by_folium = all(
            folium_contains(rep1, p, tol) == folium_contains(rep2, p, tol)
            for p in probes
        )
        if by_folium != equal:
            raise ToleranceError(
                "quasi-equivalence characterizations disagree: "
                f"supports={equal} folium-probes={by_folium}"
            )
    return equal


@dataclass(frozen=True)
class SectorComponent:
    weight: float
    state: StateFunctional
    label: str


@dataclass(frozen=True)
class SectorDecomposition:
    """Convex decomposition of a state into pairwise disjoint factor states
    labelled by their central-spectrum points."""

    components: tuple[SectorComponent, ...]

    def reassemble(self) -> StateFunctional:
        return mix_states([(c.weight, c.state) for c in self.components])

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(c.weight for c in self.components)


def central_decomposition(omega: StateFunctional,
                          tol: float = DEFAULT_TOL) -> SectorDecomposition:
    """Decomposition over the charged minimal central projections.

    Component i has weight w(P_i) (the block trace) and state
    w(P_i . P_i)/weight, which on a block algebra is the normalized
    block density. Labels are the charged ambient spectrum points.
    """
    shape = omega.shape
    components = []
    for i in omega.charged_blocks(tol):
        weight = omega.block_weight(i)
        densities = [np.zeros((n, n)) for n in shape.dims]
        densities[i] = omega.densities[i] / weight
        components.append(SectorComponent(
            weight=weight,
            state=StateFunctional(shape, densities),
            label=f"block{i}",
        ))
    return SectorDecomposition(tuple(components))
