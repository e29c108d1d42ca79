"""Group actions on block algebras and the symmetry-breakdown machinery.

An automorphism of a block algebra is a size-compatible block permutation
composed with blockwise unitary conjugation (the general form in finite
dimensions). A symmetry is unbroken in a representation when the induced
permutation action on the central spectrum is trivial; otherwise the
spectrum splits into orbits. The augmented algebra of sections over the
coset space H\\G carries the broken symmetry as an honest automorphism
group, and inducing a covariant pair up from the unbroken subgroup
produces representations whose centre is spanned by the coset indicator
sections.
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
    matrix_unit_basis,
    minimal_central_projections,
)
from .errors import (
    CentralActionError,
    HypothesisError,
    NonCovariantPairError,
    ShapeMismatchError,
    UnimplementableError,
)
from .groups import CosetSpace, FiniteGroup, LeftCosetSpace, left_cosets, right_cosets
from .linalg import DEFAULT_TOL, intertwiner_space, nullspace
from .states import RepresentationData, representation_from_images


class Automorphism:
    """Block permutation plus one unitary per target block.

    Acts by a |-> (U_i a_{perm^{-1}(i)} U_i^*), which preserves products,
    adjoints and the norm whenever the permutation is size-compatible and
    the matrices are unitary.
    """

    __slots__ = ("shape", "perm", "unitaries", "_inv_perm")

    def __init__(self, shape: BlockShape, perm, unitaries, tol: float = 1e-9):
        perm = tuple(int(p) for p in perm)
        if sorted(perm) != list(range(shape.num_blocks)):
            raise ValueError(f"{perm} is not a permutation of the blocks")
        for j, target in enumerate(perm):
            if shape.dims[j] != shape.dims[target]:
                raise ValueError(
                    f"permutation maps block {j} (size {shape.dims[j]}) to "
                    f"block {target} (size {shape.dims[target]})"
                )
        frozen = []
        for n, u in zip(shape.dims, unitaries):
            arr = np.array(u, dtype=complex)
            if arr.shape != (n, n):
                raise ShapeMismatchError("unitary does not match target block size")
            if np.linalg.norm(arr @ np.conj(arr.T) - np.eye(n), 2) > tol:
                raise ValueError("matrices must be unitary")
            arr.setflags(write=False)
            frozen.append(arr)
        inv = [0] * len(perm)
        for j, target in enumerate(perm):
            inv[target] = j
        self.shape = shape
        self.perm = perm
        self.unitaries = tuple(frozen)
        self._inv_perm = tuple(inv)

    @classmethod
    def identity(cls, shape: BlockShape) -> "Automorphism":
        return cls(shape, range(shape.num_blocks), [np.eye(n) for n in shape.dims])

    @classmethod
    def inner(cls, shape: BlockShape, unitaries) -> "Automorphism":
        return cls(shape, range(shape.num_blocks), unitaries)

    @classmethod
    def block_swap(cls, shape: BlockShape, i: int, j: int) -> "Automorphism":
        perm = list(range(shape.num_blocks))
        perm[i], perm[j] = j, i
        return cls(shape, perm, [np.eye(n) for n in shape.dims])

    def __call__(self, a: AlgebraElement) -> AlgebraElement:
        if a.shape != self.shape:
            raise ShapeMismatchError(f"{a.shape} vs {self.shape}")
        blocks = []
        for i in range(self.shape.num_blocks):
            u = self.unitaries[i]
            src = a.blocks[self._inv_perm[i]]
            blocks.append(u @ src @ np.conj(u.T))
        return AlgebraElement(self.shape, blocks)

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self after other: (self.compose(other))(a) = self(other(a))."""
        if self.shape != other.shape:
            raise ShapeMismatchError("automorphisms on different shapes")
        perm = tuple(self.perm[other.perm[j]] for j in range(len(self.perm)))
        unitaries = []
        for k in range(self.shape.num_blocks):
            unitaries.append(self.unitaries[k] @ other.unitaries[self._inv_perm[k]])
        return Automorphism(self.shape, perm, unitaries)

    def inverse(self) -> "Automorphism":
        unitaries = [np.conj(self.unitaries[self.perm[k]].T)
                     for k in range(self.shape.num_blocks)]
        return Automorphism(self.shape, self._inv_perm, unitaries)

    def action_distance(self, other: "Automorphism") -> float:
        """Largest norm difference of the two actions on the matrix units.

        Compares actions, not data: unitaries only matter up to phase.
        """
        worst = 0.0
        for e in matrix_unit_basis(self.shape):
            worst = max(worst, (self(e) - other(e)).norm())
        return worst

    def unitarity_defect(self) -> float:
        return max(
            float(np.linalg.norm(u @ np.conj(u.T) - np.eye(u.shape[0]), 2))
            for u in self.unitaries
        )


class AutomorphicAction:
    """A finite group acting by automorphisms, tau_g tau_h = tau_{gh}."""

    __slots__ = ("group", "shape", "automorphisms", "_coord_cache")

    def __init__(self, group: FiniteGroup, automorphisms):
        automorphisms = tuple(automorphisms)
        if len(automorphisms) != group.order:
            raise ValueError("need one automorphism per group element")
        self.group = group
        self.shape = automorphisms[0].shape
        self.automorphisms = automorphisms
        self._coord_cache = {}

    def of(self, g: int) -> Automorphism:
        return self.automorphisms[g]

    @classmethod
    def trivial(cls, group: FiniteGroup, shape: BlockShape) -> "AutomorphicAction":
        ident = Automorphism.identity(shape)
        return cls(group, [ident] * group.order)

    @classmethod
    def from_generators(cls, group: FiniteGroup, generators: dict,
                        tol: float = DEFAULT_TOL) -> "AutomorphicAction":
        """Complete a generator assignment to the whole group by breadth
        first search, verifying consistency whenever two words meet."""
        shape = next(iter(generators.values())).shape
        known: dict[int, Automorphism] = {group.identity: Automorphism.identity(shape)}
        frontier = [group.identity]
        while frontier:
            nxt = []
            for h in frontier:
                for g, tau_g in generators.items():
                    x = group.multiply(g, h)
                    candidate = tau_g.compose(known[h])
                    if x in known:
                        if known[x].action_distance(candidate) > max(tol, 1e-8):
                            raise ValueError(
                                f"generator data inconsistent at element {x}"
                            )
                    else:
                        known[x] = candidate
                        nxt.append(x)
            frontier = nxt
        if len(known) != group.order:
            raise ValueError("generators do not generate the group")
        return cls(group, [known[g] for g in group.elements()])

    def coordinate_matrix(self, g: int) -> np.ndarray:
        """tau_g as a linear map on to_vector coordinates."""
        if g not in self._coord_cache:
            cols = [self.of(g)(e).to_vector() for e in matrix_unit_basis(self.shape)]
            self._coord_cache[g] = np.stack(cols, axis=1)
        return self._coord_cache[g]


@dataclass(frozen=True)
class ActionAudit:
    ok: bool
    max_defect: float
    detail: str


def verify_action(action: AutomorphicAction, tol: float = 1e-9) -> ActionAudit:
    """Audit the homomorphism property, unit and unitarity defects."""
    group = action.group
    worst, detail = 0.0, "ok"
    ident_defect = action.of(group.identity).action_distance(
        Automorphism.identity(action.shape)
    )
    if ident_defect > worst:
        worst, detail = ident_defect, "identity element does not act trivially"
    for g in group.elements():
        u_defect = action.of(g).unitarity_defect()
        if u_defect > worst:
            worst, detail = u_defect, f"non-unitary matrix at element {g}"
    for g in group.elements():
        for h in group.elements():
            composed = action.of(g).compose(action.of(h))
            direct = action.of(group.multiply(g, h))
            defect = composed.action_distance(direct)
            if defect > worst:
                worst, detail = defect, f"homomorphism defect at ({g}, {h})"
    return ActionAudit(ok=worst <= tol, max_defect=worst, detail=detail)


# -- induced action on the central spectrum ---------------------------


def induced_central_action(action: AutomorphicAction, rep: RepresentationData,
                           tol: float = DEFAULT_TOL) -> dict[int, tuple[int, ...]]:
    """For each group element, the permutation of the spectrum points of
    the representation centre obtained by transporting the charged block
    identities.

    Raises CentralActionError if some tau_g moves a charged block onto an
    uncharged one: the representation is then not stable under g as a
    union of folia and no induced permutation exists.
    """
    chart = rep.point_block_map
    if any(b is None for b in chart):
        raise ValueError(
            "representation has spectrum points without an ambient block; "
            "use the covariant-unitary route instead"
        )
    block_point = {b: j for j, b in enumerate(chart)}
    out = {}
    for g in action.group.elements():
        perm = action.of(g).perm
        images = []
        for j, b in enumerate(chart):
            target = perm[b]
            if target not in block_point:
                raise CentralActionError(
                    f"element {g} maps sector block {b} to uncharged block "
                    f"{target}; representation is not stable under it"
                )
            images.append(block_point[target])
        out[g] = tuple(images)
    return out


def central_action_from_unitaries(spectrum: CentralSpectrum, unitary_of,
                                  elements, tol: float = DEFAULT_TOL) -> dict:
    """Permutations of spectrum points induced by conjugation with
    implementing unitaries (for representations carrying them)."""
    out = {}
    for g in elements:
        u = unitary_of(g)
        images = []
        for p in spectrum.projections:
            big = u @ p.blocks[0] @ np.conj(u.T)
            moved = AlgebraElement(p.shape, [big])
            images.append(spectrum.point_of(moved, max(tol * big.shape[0], 1e-8)))
        out[g] = tuple(images)
    return out


def central_action_kernel(action: AutomorphicAction, rep: RepresentationData,
                          tol: float = DEFAULT_TOL) -> tuple[int, ...]:
    """Elements whose induced central action is defined and trivial."""
    chart = rep.point_block_map
    if any(b is None for b in chart):
        raise ValueError(
            "representation has spectrum points without an ambient block; "
            "use the covariant-unitary route instead"
        )
    kernel = []
    for g in action.group.elements():
        perm = action.of(g).perm
        trivial = True
        for b in chart:
            if b is None or perm[b] != b:
                trivial = False
                break
        if trivial:
            kernel.append(g)
    return tuple(kernel)


UNBROKEN = "UNBROKEN"
BROKEN = "BROKEN"


@dataclass(frozen=True)
class BreakingClassification:
    verdict: str
    orbits: tuple[tuple[int, ...], ...]
    permutations: dict[int, tuple[int, ...]]

    @property
    def broken(self) -> bool:
        return self.verdict == BROKEN


def classify_breaking(action: AutomorphicAction, rep: RepresentationData,
                      tol: float = DEFAULT_TOL) -> BreakingClassification:
    """Unbroken iff every group element fixes every central-spectrum
    point; otherwise broken, with the decomposition of the spectrum into
    orbits (the centrally ergodic subdomains of the phase diagram)."""
    perms = induced_central_action(action, rep, tol)
    n = rep.central_spectrum.num_points
    unbroken = all(p == tuple(range(n)) for p in perms.values())
    seen, orbits = set(), []
    for start in range(n):
        if start in seen:
            continue
        orbit = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for j in frontier:
                for p in perms.values():
                    if p[j] not in orbit:
                        orbit.add(p[j])
                        nxt.append(p[j])
            frontier = nxt
        seen |= orbit
        orbits.append(tuple(sorted(orbit)))
    return BreakingClassification(
        verdict=UNBROKEN if unbroken else BROKEN,
        orbits=tuple(orbits),
        permutations=perms,
    )


# -- implementing unitaries and the maximal unbroken subgroup ----------


def _solve_intertwining_unitary(rep: RepresentationData, action: AutomorphicAction,
                                g: int, tol: float = DEFAULT_TOL):
    """A unitary W with W pi(F) W^* = pi(tau_g(F)), via the intertwiner
    nullspace and a polar decomposition; None when no invertible
    intertwiner exists."""
    units = matrix_unit_basis(rep.ambient_shape)
    images1 = [rep.represent(e) for e in units]
    images2 = [rep.represent(action.of(g)(e)) for e in units]
    space = intertwiner_space(images1, images2, tol)
    d = rep.dimension
    candidates = [row.reshape(d, d) for row in space]
    rng = np.random.default_rng(11)
    for _ in range(8):
        if len(space) > 1:
            coeff = rng.standard_normal(len(space)) + 1j * rng.standard_normal(len(space))
            candidates.append(
                np.tensordot(coeff, space.reshape(len(space), d, d), axes=(0, 0))
            )
        else:
            break
    best, best_sigma = None, 0.0
    for t in candidates:
        u_svd, s, vh = np.linalg.svd(t)
        if s[0] <= 0:
            continue
        if s[-1] / s[0] > best_sigma:
            best_sigma = s[-1] / s[0]
            best = u_svd @ vh
    if best is None or best_sigma <= 1e-6:
        return None
    defect = max(
        float(np.linalg.norm(best @ a @ np.conj(best.T) - b, 2))
        for a, b in zip(images1, images2)
    )
    if defect > max(tol * d, 1e-8):
        return None
    return best


def _inner_candidate(rep: RepresentationData, action: AutomorphicAction, g: int,
                     tol: float = DEFAULT_TOL):
    """pi applied to the action's own unitary family, valid when the
    permutation part is trivial (then tau_g = Ad of an algebra unitary)."""
    tau = action.of(g)
    if tau.perm != tuple(range(rep.ambient_shape.num_blocks)):
        return None
    u = rep.represent(AlgebraElement(rep.ambient_shape, list(tau.unitaries)))
    d = u.shape[0]
    if np.linalg.norm(u @ np.conj(u.T) - np.eye(d), 2) > max(tol * d, 1e-8):
        return None
    units = matrix_unit_basis(rep.ambient_shape)
    defect = max(
        float(np.linalg.norm(
            u @ rep.represent(e) @ np.conj(u.T) - rep.represent(tau(e)), 2
        ))
        for e in units
    )
    if defect > max(tol * d, 1e-8):
        return None
    return u


def _homomorphism_defect(group: FiniteGroup, elements, unitaries) -> float:
    worst = 0.0
    for a in elements:
        for b in elements:
            prod = unitaries[a] @ unitaries[b]
            direct = unitaries[group.multiply(a, b)]
            worst = max(worst, float(np.linalg.norm(prod - direct, 2)))
    return worst


def solve_covariant_unitaries(rep: RepresentationData, action: AutomorphicAction,
                              elements, tol: float = DEFAULT_TOL) -> dict[int, np.ndarray]:
    """Unitaries U(h), h in the given subgroup, implementing the action on
    the representation space and forming a genuine homomorphism.

    Tries, in order: the action's own unitaries pushed through pi; a
    cyclic solution from one generator with the n-th root phase
    correction; per-element intertwiner solutions. Raises
    UnimplementableError when no homomorphic family is found.
    """
    group = action.group
    elements = tuple(sorted(set(elements)))
    d = rep.dimension
    hom_tol = max(tol * d * 10, 1e-8)

    inner = {h: _inner_candidate(rep, action, h, tol) for h in elements}
    if all(u is not None for u in inner.values()):
        if _homomorphism_defect(group, elements, inner) <= hom_tol:
            return inner

    generator = group.cyclic_generator(elements)
    if generator is not None and len(elements) > 1:
        w = inner.get(generator)
        if w is None:
            w = _solve_intertwining_unitary(rep, action, generator, tol)
        if w is not None:
            n = group.element_order(generator)
            c = np.linalg.matrix_power(w, n)
            vals, vecs = np.linalg.eig(c)
            root = (vecs * np.exp(-1j * np.angle(vals) / n)) @ np.linalg.inv(vecs)
            w = w @ root
            unitaries = {group.identity: np.eye(d, dtype=complex)}
            x, power = generator, w.copy()
            while x != group.identity:
                unitaries[x] = power
                x = group.multiply(x, generator)
                power = power @ w
            if set(unitaries) == set(elements) and \
                    _homomorphism_defect(group, elements, unitaries) <= hom_tol:
                covariant = _covariance_defect(rep, action, unitaries)
                if covariant <= hom_tol:
                    return unitaries

    solved = {}
    for h in elements:
        u = inner.get(h)
        if u is None:
            u = _solve_intertwining_unitary(rep, action, h, tol)
        if u is None:
            raise UnimplementableError(
                f"element {h} acts trivially on the centre but admits no "
                "unitary implementer on this space"
            )
        solved[h] = u
    defect = _homomorphism_defect(group, elements, solved)
    if defect > hom_tol:
        raise UnimplementableError(
            "per-element implementers exist but could not be corrected to a "
            f"homomorphism (defect {defect:.2e}); the obstruction is projective"
        )
    return solved


def _covariance_defect(rep: RepresentationData, action: AutomorphicAction,
                       unitaries: dict[int, np.ndarray]) -> float:
    units = matrix_unit_basis(rep.ambient_shape)
    worst = 0.0
    for h, u in unitaries.items():
        tau = action.of(h)
        for e in units:
            lhs = rep.represent(tau(e))
            rhs = u @ rep.represent(e) @ np.conj(u.T)
            worst = max(worst, float(np.linalg.norm(lhs - rhs, 2)))
    return worst


@dataclass(frozen=True)
class UnbrokenSubgroup:
    """Kernel of the induced central action together with implementing
    unitaries (or the reason none exist)."""

    elements: tuple[int, ...]
    unitaries: dict[int, np.ndarray] | None
    implementable: bool
    message: str


def maximal_unbroken_subgroup(action: AutomorphicAction, rep: RepresentationData,
                              tol: float = DEFAULT_TOL) -> UnbrokenSubgroup:
    """The set of elements acting trivially on the central spectrum,
    verified to be a subgroup, with a covariant unitary family solved on
    the representation space.

    Implementability failures are surfaced in the result instead of
    silently shrinking the subgroup.
    """
    kernel = central_action_kernel(action, rep, tol)
    if not action.group.is_subgroup(kernel):
        raise HypothesisError("central-action kernel is not a subgroup")
    try:
        unitaries = solve_covariant_unitaries(rep, action, kernel, tol)
    except UnimplementableError as exc:
        return UnbrokenSubgroup(kernel, None, False, str(exc))
    return UnbrokenSubgroup(kernel, unitaries, True, "ok")


# -- the augmented algebra ---------------------------------------------


class AugmentedElement:
    """A section of the algebra bundle over the right coset space H\\G.

    Stored as one algebra element per coset representative; the value at
    an arbitrary group element g = h . rep is tau_h(value at rep), which
    is exactly the H-equivariance constraint.
    """

    __slots__ = ("space", "action", "values")

    def __init__(self, space: CosetSpace, action: AutomorphicAction, values):
        values = tuple(values)
        if len(values) != space.size:
            raise ShapeMismatchError("one value per coset required")
        self.space = space
        self.action = action
        self.values = values

    # -- constructors --------------------------------------------------

    @classmethod
    def unit(cls, space: CosetSpace, action: AutomorphicAction) -> "AugmentedElement":
        one = AlgebraElement.unit(action.shape)
        return cls(space, action, [one] * space.size)

    @classmethod
    def constant(cls, space: CosetSpace, action: AutomorphicAction,
                 value: AlgebraElement) -> "AugmentedElement":
        return cls(space, action, [value] * space.size)

    @classmethod
    def indicator(cls, space: CosetSpace, action: AutomorphicAction,
                  coset: int) -> "AugmentedElement":
        """The coset indicator section chi_c . 1, a central projection."""
        values = [AlgebraElement.zero(action.shape) for _ in range(space.size)]
        values[coset] = AlgebraElement.unit(action.shape)
        return cls(space, action, values)

    # -- pointwise algebra ----------------------------------------------

    def _require_compatible(self, other: "AugmentedElement"):
        if self.space is not other.space and self.space != other.space:
            raise ShapeMismatchError("sections live over different coset spaces")

    def __add__(self, other):
        if not isinstance(other, AugmentedElement):
            return NotImplemented
        self._require_compatible(other)
        return AugmentedElement(self.space, self.action,
                                [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        if not isinstance(other, AugmentedElement):
            return NotImplemented
        self._require_compatible(other)
        return AugmentedElement(self.space, self.action,
                                [a - b for a, b in zip(self.values, other.values)])

    def __mul__(self, other):
        if isinstance(other, AugmentedElement):
            self._require_compatible(other)
            return AugmentedElement(self.space, self.action,
                                    [a * b for a, b in zip(self.values, other.values)])
        if isinstance(other, (int, float, complex, np.number)):
            return AugmentedElement(self.space, self.action,
                                    [a * other for a in self.values])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return AugmentedElement(self.space, self.action,
                                    [a * other for a in self.values])
        return NotImplemented

    def adjoint(self) -> "AugmentedElement":
        return AugmentedElement(self.space, self.action,
                                [a.adjoint() for a in self.values])

    def sup_norm(self) -> float:
        return max(v.norm() for v in self.values)

    def value_at(self, g: int) -> AlgebraElement:
        """Equivariant extension to all of G."""
        h, coset = self.space.factor(g)
        return self.action.of(h)(self.values[coset])

    def distance(self, other: "AugmentedElement") -> float:
        return (self - other).sup_norm()

    def to_vector(self) -> np.ndarray:
        return np.concatenate([v.to_vector() for v in self.values])

    @classmethod
    def from_vector(cls, space: CosetSpace, action: AutomorphicAction,
                    vec: np.ndarray) -> "AugmentedElement":
        d = action.shape.dim
        values = [
            AlgebraElement.from_vector(action.shape, vec[c * d:(c + 1) * d])
            for c in range(space.size)
        ]
        return cls(space, action, values)

    def __repr__(self):
        return f"AugmentedElement(cosets={self.space.size}, sup_norm={self.sup_norm():.4g})"


def embed(space: CosetSpace, action: AutomorphicAction,
          f: AlgebraElement) -> AugmentedElement:
    """The isometric embedding g |-> tau_g(f); it intertwines tau with the
    translation action on sections."""
    values = [action.of(r)(f) for r in space.representatives]
    return AugmentedElement(space, action, values)


def augmented_g_action(g: int, section: AugmentedElement) -> AugmentedElement:
    """Right translation on the coset space, corrected through the unique
    factorization rep . g = h . rep' so that equivariance is preserved."""
    space, action = section.space, section.action
    values = []
    for r in space.representatives:
        values.append(section.value_at(space.group.multiply(r, g)))
    return AugmentedElement(space, action, values)


# -- fixed points and conditional expectations -------------------------


def fixed_point_subalgebra(action: AutomorphicAction, elements,
                           tol: float = DEFAULT_TOL) -> OperatorSubalgebra:
    """Joint fixed points of tau restricted to the given elements, via the
    eigenvalue-1 space of the group average."""
    elements = tuple(elements)
    if not elements:
        raise ValueError("need at least one group element")
    dim = action.shape.dim
    avg = np.zeros((dim, dim), dtype=complex)
    for g in elements:
        avg += action.coordinate_matrix(g)
    avg /= len(elements)
    rows = nullspace(avg - np.eye(dim), tol)
    basis = tuple(AlgebraElement.from_vector(action.shape, r) for r in rows)
    return OperatorSubalgebra(action.shape, basis, rows)


def subgroup_average(action: AutomorphicAction, elements,
                     x: AlgebraElement) -> AlgebraElement:
    """Conditional expectation onto the fixed points of the given
    subgroup: the normalized orbit average. Idempotent, unital, positive
    and norm-nonincreasing."""
    elements = tuple(elements)
    out = AlgebraElement.zero(action.shape)
    for g in elements:
        out = out + action.of(g)(x)
    return out * (1.0 / len(elements))


def coset_average(action: AutomorphicAction, subgroup, x: AlgebraElement,
                  tol: float = 1e-8) -> AlgebraElement:
    """Average of tau_g(x) over G/H, defined on H-fixed inputs only (the
    integrand is constant on left cosets exactly then)."""
    sub = tuple(sorted(set(subgroup)))
    if (subgroup_average(action, sub, x) - x).norm() > tol * max(1.0, x.norm()):
        raise ValueError("input is not fixed by the subgroup")
    ls = left_cosets(action.group, sub)
    out = AlgebraElement.zero(action.shape)
    for s in ls.representatives:
        out = out + action.of(s)(x)
    return out * (1.0 / ls.size)


def coset_section_average(section: AugmentedElement) -> AlgebraElement:
    """Adjoint of the embedding: the coset average of tau_{r^-1} applied
    to the section values. Left inverse of embed."""
    action, space = section.action, section.space
    out = AlgebraElement.zero(action.shape)
    for c, r in enumerate(space.representatives):
        out = out + action.of(space.group.inverse(r))(section.values[c])
    return out * (1.0 / space.size)


def augmented_coordinate_matrix(action: AutomorphicAction, space: CosetSpace,
                                g: int) -> np.ndarray:
    """The translation automorphism of the section space in to_vector
    coordinates (blocks of size dim per coset)."""
    d = action.shape.dim
    n = space.size * d
    out = np.zeros((n, n), dtype=complex)
    for c, r in enumerate(space.representatives):
        h, src = space.factor(space.group.multiply(r, g))
        out[c * d:(c + 1) * d, src * d:(src + 1) * d] = action.coordinate_matrix(h)
    return out


@dataclass(frozen=True)
class AugmentedFixedPoints:
    """Fixed sections of the translation action with the isomorphism onto
    the H-fixed subalgebra (evaluation at the identity coset)."""

    sections: tuple[AugmentedElement, ...]
    subalgebra: OperatorSubalgebra  # fixed points of H in the base algebra
    constancy_defect: float

    @property
    def dim(self) -> int:
        return len(self.sections)

    def to_base(self, section: AugmentedElement) -> AlgebraElement:
        return section.values[0]

    def from_base(self, space: CosetSpace, action: AutomorphicAction,
                  x: AlgebraElement) -> AugmentedElement:
        return AugmentedElement.constant(space, action, x)


def augmented_fixed_points(action: AutomorphicAction, space: CosetSpace,
                           tol: float = DEFAULT_TOL) -> AugmentedFixedPoints:
    """Fixed sections under all translations; by equivariance these are
    the constant sections with values in the H-fixed subalgebra."""
    d = action.shape.dim
    n = space.size * d
    avg = np.zeros((n, n), dtype=complex)
    for g in action.group.elements():
        avg += augmented_coordinate_matrix(action, space, g)
    avg /= action.group.order
    rows = nullspace(avg - np.eye(n), tol)
    sections = tuple(
        AugmentedElement.from_vector(space, action, r) for r in rows
    )
    sub = fixed_point_subalgebra(action, space.subgroup, tol)
    defect = 0.0
    for s in sections:
        for v in s.values[1:]:
            defect = max(defect, (v - s.values[0]).norm())
    return AugmentedFixedPoints(sections, sub, defect)


# -- induced covariant representations ---------------------------------


class InducedRepresentation:
    """Induction of a covariant pair (pi, U on H) up to the full group.

    The Hilbert space consists of (U, H)-equivariant functions on G,
    parametrized by their values on left-coset representatives, so the
    dimension is [G:H] * dim(pi). pi_hat represents sections, u_hat the
    group, and pi_bar = pi_hat after the embedding represents the base
    algebra; both covariance identities hold by construction and are
    checked numerically in covariance_defects().
    """

    def __init__(self, rep: RepresentationData, unitaries: dict[int, np.ndarray],
                 action: AutomorphicAction, subgroup, space: CosetSpace | None = None,
                 tol: float = DEFAULT_TOL):
        group = action.group
        sub = tuple(sorted(set(subgroup)))
        if not group.is_subgroup(sub):
            raise ValueError("not a subgroup")
        if set(unitaries) != set(sub):
            raise ValueError("need one unitary per subgroup element")
        bound = max(tol * rep.dimension * 10, 1e-8)
        defect = _covariance_defect(rep, action, unitaries)
        if defect > bound:
            raise NonCovariantPairError(
                f"(pi, U) is not covariant for H (defect {defect:.2e})"
            )
        hom = _homomorphism_defect(group, sub, unitaries)
        if hom > bound:
            raise NonCovariantPairError(
                f"U is not a homomorphism on H (defect {hom:.2e}); the "
                "equivariance constraint on the induced space is inconsistent"
            )
        self.fiber = rep
        self.unitaries = dict(unitaries)
        self.action = action
        self.group = group
        self.subgroup = sub
        self.space = space if space is not None else right_cosets(group, sub)
        self.left_space = left_cosets(group, sub)
        self.fiber_dim = rep.dimension
        self.dimension = self.left_space.size * rep.dimension

    # block helpers ----------------------------------------------------

    def _slices(self):
        d = self.fiber_dim
        return [slice(j * d, (j + 1) * d) for j in range(self.left_space.size)]

    def pi_hat(self, section: AugmentedElement) -> np.ndarray:
        """(pi_hat(F)psi)(g) = pi(F(g^-1)) psi(g): block diagonal over the
        left-coset representatives."""
        out = np.zeros((self.dimension, self.dimension), dtype=complex)
        for j, (s, sl) in enumerate(zip(self.left_space.representatives, self._slices())):
            value = section.value_at(self.group.inverse(s))
            out[sl, sl] = self.fiber.represent(value)
        return out

    def u_hat(self, g1: int) -> np.ndarray:
        """(U_hat(g1)psi)(g) = psi(g1^-1 g), unwound through the
        equivariance constraint psi(s h) = U(h^-1) psi(s)."""
        slices = self._slices()
        out = np.zeros((self.dimension, self.dimension), dtype=complex)
        for j, s in enumerate(self.left_space.representatives):
            x = self.group.multiply(self.group.inverse(g1), s)
            k, h = self.left_space.factor(x)
            out[slices[j], slices[k]] = self.unitaries[self.group.inverse(h)]
        return out

    def pi_bar(self, f: AlgebraElement) -> np.ndarray:
        """(pi_bar(F)psi)(g) = pi(tau_{g^-1}(F)) psi(g)."""
        out = np.zeros((self.dimension, self.dimension), dtype=complex)
        for s, sl in zip(self.left_space.representatives, self._slices()):
            tau = self.action.of(self.group.inverse(s))
            out[sl, sl] = self.fiber.represent(tau(f))
        return out

    # derived data -----------------------------------------------------

    def section_basis(self) -> list[AugmentedElement]:
        """Coset indicators times matrix units: a linear basis of the
        section algebra."""
        out = []
        for c in range(self.space.size):
            for e in matrix_unit_basis(self.action.shape):
                values = [AlgebraElement.zero(self.action.shape)
                          for _ in range(self.space.size)]
                values[c] = e
                out.append(AugmentedElement(self.space, self.action, values))
        return out

    def pi_bar_data(self, tol: float = DEFAULT_TOL) -> RepresentationData:
        units = matrix_unit_basis(self.action.shape)
        stack = np.stack([self.pi_bar(e) for e in units])
        return representation_from_images(self.action.shape, stack, None, tol)

    def covariance_defects(self) -> tuple[float, float]:
        """(max defect of the section covariance, max defect of the base
        covariance) over all group elements and basis elements."""
        worst_hat = 0.0
        basis = self.section_basis()
        for g in self.group.elements():
            u = self.u_hat(g)
            u_inv = np.conj(u.T)
            for b in basis:
                lhs = self.pi_hat(augmented_g_action(g, b))
                rhs = u @ self.pi_hat(b) @ u_inv
                worst_hat = max(worst_hat, float(np.linalg.norm(lhs - rhs, 2)))
        worst_bar = 0.0
        units = matrix_unit_basis(self.action.shape)
        for g in self.group.elements():
            u = self.u_hat(g)
            u_inv = np.conj(u.T)
            tau = self.action.of(g)
            for e in units:
                lhs = self.pi_bar(tau(e))
                rhs = u @ self.pi_bar(e) @ u_inv
                worst_bar = max(worst_bar, float(np.linalg.norm(lhs - rhs, 2)))
        return worst_hat, worst_bar


def induce_covariant_representation(
    rep: RepresentationData,
    unitaries: dict[int, np.ndarray],
    action: AutomorphicAction,
    subgroup,
    tol: float = DEFAULT_TOL,
) -> InducedRepresentation:
    return InducedRepresentation(rep, unitaries, action, subgroup, tol=tol)


@dataclass(frozen=True)
class AugmentedCentreReport:
    """Numerical verification that the centres of the induced section and
    base representations are the functions on the coset space."""

    coset_count: int
    centre_dim_sections: int
    centre_dim_base: int
    indicator_defect: float
    point_of_coset: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return (
            self.centre_dim_sections == self.coset_count
            and self.centre_dim_base == self.coset_count
        )


def augmented_center(induced: InducedRepresentation,
                     tol: float = DEFAULT_TOL) -> AugmentedCentreReport:
    """Compute both centres and verify they are spanned by the coset
    indicator sections.

    Requires the fiber representation to be a factor; otherwise the
    statement does not apply and a HypothesisError is raised.
    """
    if not induced.fiber.is_factor():
        raise HypothesisError(
            "fiber representation has non-trivial centre; the coset-space "
            "description of the induced centre does not apply"
        )
    d = induced.dimension
    rep_shape = BlockShape((d,))

    section_images = [induced.pi_hat(b) for b in induced.section_basis()]
    section_algebra = OperatorSubalgebra.from_span(
        rep_shape,
        [AlgebraElement(rep_shape, [m]) for m in section_images],
        tol,
        include_unit=True,
    )
    centre_sections = center(section_algebra, tol)
    spectrum = minimal_central_projections(centre_sections, tol)

    base_data = induced.pi_bar_data(tol)
    centre_base = base_data.centre

    indicator_defect = 0.0
    point_of_coset = []
    for c in range(induced.space.size):
        chi = AugmentedElement.indicator(induced.space, induced.action, c)
        img = AlgebraElement(rep_shape, [induced.pi_hat(chi)])
        point = spectrum.point_of(img, max(tol * d, 1e-8))
        point_of_coset.append(point)
        indicator_defect = max(
            indicator_defect, (img - spectrum.projections[point]).norm()
        )
        if not centre_base.contains(img, max(tol * d, 1e-8)):
            raise HypothesisError(
                "coset indicator is not central for the induced base "
                "representation; disjointness of the twisted fibers fails"
            )
    return AugmentedCentreReport(
        coset_count=induced.space.size,
        centre_dim_sections=centre_sections.dim,
        centre_dim_base=centre_base.dim,
        indicator_defect=indicator_defect,
        point_of_coset=tuple(point_of_coset),
    )
