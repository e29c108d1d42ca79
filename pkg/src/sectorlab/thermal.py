"""One-parameter dynamics, Gibbs states, KMS checks and inverse-temperature
4-vector kinematics.

Evolution uses the eigendecomposition of the block Hamiltonians, so the
analytic continuation to complex time is exact up to rounding and the
boundary condition w(A alpha_{t+i beta}(B)) = w(alpha_t(B) A) can be
evaluated directly. The Gibbs state normalizes with a single partition
function across blocks, which makes sector weights Boltzmann factors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraElement, BlockShape
from .errors import HypothesisError, ShapeMismatchError
from .linalg import DEFAULT_TOL
from .states import StateFunctional


class Dynamics:
    """Block Hamiltonians generating alpha_t = Ad(exp(itH)) per block."""

    __slots__ = ("shape", "hamiltonians", "_eigs")

    def __init__(self, shape: BlockShape, hamiltonians, tol: float = 1e-9):
        if len(hamiltonians) != shape.num_blocks:
            raise ShapeMismatchError(
                f"expected {shape.num_blocks} hamiltonians, got {len(hamiltonians)}"
            )
        frozen, eigs = [], []
        for n, h in zip(shape.dims, hamiltonians):
            arr = np.array(h, dtype=complex)
            if arr.shape != (n, n):
                raise ShapeMismatchError(
                    f"hamiltonian of shape {arr.shape} does not match block size {n}"
                )
            if np.linalg.norm(arr - np.conj(arr.T), 2) > tol:
                raise ValueError("hamiltonians must be self-adjoint")
            arr = 0.5 * (arr + np.conj(arr.T))
            arr.setflags(write=False)
            frozen.append(arr)
            eigs.append(np.linalg.eigh(arr))
        self.shape = shape
        self.hamiltonians = tuple(frozen)
        self._eigs = tuple(eigs)

    @classmethod
    def free(cls, shape: BlockShape) -> "Dynamics":
        return cls(shape, [np.zeros((n, n)) for n in shape.dims])

    def scaled(self, factor: float) -> "Dynamics":
        return Dynamics(self.shape, [factor * h for h in self.hamiltonians])

    def as_element(self) -> AlgebraElement:
        return AlgebraElement(self.shape, list(self.hamiltonians))

    def energy_range(self) -> tuple[float, float]:
        lows = [float(v[0][0]) for v in self._eigs]
        highs = [float(v[0][-1]) for v in self._eigs]
        return min(lows), max(highs)


def heisenberg_evolve(d: Dynamics, a: AlgebraElement, z: complex) -> AlgebraElement:
    """alpha_z(a) = exp(izH) a exp(-izH) blockwise, entire in z."""
    if a.shape != d.shape:
        raise ShapeMismatchError(f"{a.shape} vs {d.shape}")
    out = []
    for (vals, vecs), blk in zip(d._eigs, a.blocks):
        phase_pos = np.exp(1j * z * vals)
        phase_neg = np.exp(-1j * z * vals)
        left = (vecs * phase_pos) @ np.conj(vecs.T)
        right = (vecs * phase_neg) @ np.conj(vecs.T)
        out.append(left @ blk @ right)
    return AlgebraElement(d.shape, out)


def gibbs_state(d: Dynamics, beta: float) -> StateFunctional:
    """exp(-beta H) normalized by one partition function over all blocks.

    Energies are shifted by the global minimum before exponentiating, so
    large beta stays finite.
    """
    if not beta > 0:
        raise ValueError("beta must be positive; use ground_state for beta=inf")
    e0 = min(float(vals[0]) for vals, _ in d._eigs)
    densities = []
    for vals, vecs in d._eigs:
        w = np.exp(-beta * (vals - e0))
        densities.append((vecs * w) @ np.conj(vecs.T))
    z = sum(float(np.trace(rho).real) for rho in densities)
    return StateFunctional(d.shape, [rho / z for rho in densities])


def ground_state(d: Dynamics, degeneracy_tol: float = 1e-9) -> StateFunctional:
    """The beta = infinity limit: normalized projector onto the lowest
    energy level across all blocks."""
    e0 = min(float(vals[0]) for vals, _ in d._eigs)
    densities = []
    for vals, vecs in d._eigs:
        mask = vals - e0 <= degeneracy_tol
        cols = vecs[:, mask]
        densities.append(cols @ np.conj(cols.T))
    z = sum(float(np.trace(rho).real) for rho in densities)
    return StateFunctional(d.shape, [rho / z for rho in densities])


DEFAULT_T_GRID = (-1.0, 0.0, 1.0)


def kms_defect(
    omega: StateFunctional,
    d: Dynamics,
    beta: float,
    probes,
    t_grid=DEFAULT_T_GRID,
) -> float:
    """max over probes (A, B) and the t-grid of
    |w(A alpha_{t+i beta}(B)) - w(alpha_t(B) A)|.

    Zero (to tolerance) on the Gibbs state of (d, beta) and strictly
    positive at a wrong temperature once the probes fail to commute with
    the Hamiltonian.
    """
    probes = list(probes)
    if not probes:
        raise ValueError("need at least one probe pair")
    worst = 0.0
    for a, b in probes:
        for t in t_grid:
            shifted = omega(a * heisenberg_evolve(d, b, t + 1j * beta))
            plain = omega(heisenberg_evolve(d, b, t) * a)
            worst = max(worst, abs(shifted - plain))
    return worst


def kms_defect_breakdown(omega, d, beta, probes, t_grid=DEFAULT_T_GRID):
    """Per-probe defects, for reporting."""
    return [
        kms_defect(omega, d, beta, [pair], t_grid) for pair in probes
    ]


def default_probe_pairs(shape: BlockShape, count: int, seed: int = 7):
    """Seeded Gaussian Hermitian probe pairs, normalized to unit norm.

    Which observables witness KMS violations most sharply is not
    prescribed anywhere; generic Hermitian pairs are the default choice.
    """
    rng = np.random.default_rng(seed)
    pairs = []
    for _ in range(count):
        a = AlgebraElement.random_hermitian(shape, rng)
        b = AlgebraElement.random_hermitian(shape, rng)
        pairs.append((a * (1.0 / a.norm()), b * (1.0 / b.norm())))
    return pairs


# -- inverse-temperature 4-vectors ------------------------------------

MINKOWSKI_SIGNATURE = np.diag([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True)
class InverseTemperature4Vector:
    """A point of the closed forward cone with positive time component."""

    components: tuple[float, float, float, float]

    def __post_init__(self):
        comps = tuple(float(c) for c in self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) != 4:
            raise ValueError("need exactly four components")
        if comps[0] <= 0:
            raise ValueError("the time component must be positive")
        if self.minkowski_square() < -1e-12 * max(1.0, comps[0] ** 2):
            raise ValueError("vector lies outside the closed forward cone")

    def minkowski_square(self) -> float:
        t, x, y, z = self.components
        return t * t - x * x - y * y - z * z

    def as_array(self) -> np.ndarray:
        return np.array(self.components, dtype=float)


class UndefinedRestFrameError(HypothesisError):
    """Lightlike or vanishing inverse-temperature vector: the scalar beta
    is still defined (and carried on the exception) but no rest frame is."""

    def __init__(self, beta: float):
        super().__init__(f"no rest frame: beta vector is lightlike (beta={beta})")
        self.beta = beta


@dataclass(frozen=True)
class BetaDecomposition:
    beta: float
    u: tuple[float, float, float, float]
    velocity: tuple[float, float, float]


def beta_decompose(bv: InverseTemperature4Vector,
                   tol: float = DEFAULT_TOL) -> BetaDecomposition:
    """Split beta^mu = beta u^mu into the Lorentz-scalar inverse
    temperature, the unit 4-velocity and the 3-velocity of the rest frame."""
    sq = max(bv.minkowski_square(), 0.0)
    beta = math.sqrt(sq)
    scale = max(1.0, bv.components[0])
    if beta <= tol * scale:
        raise UndefinedRestFrameError(beta)
    u = tuple(c / beta for c in bv.components)
    velocity = tuple(c / u[0] for c in u[1:])
    return BetaDecomposition(beta=beta, u=u, velocity=velocity)


def boost_matrix(rapidity) -> np.ndarray:
    """Pure boost exp(K) for the symmetric generator K built from the
    rapidity 3-vector."""
    eta = np.asarray(rapidity, dtype=float)
    if eta.shape != (3,):
        raise ValueError("rapidity must be a 3-vector")
    gen = np.zeros((4, 4))
    gen[0, 1:] = eta
    gen[1:, 0] = eta
    vals, vecs = np.linalg.eigh(gen)
    return (vecs * np.exp(vals)) @ vecs.T


def lorentz_boost(bv: InverseTemperature4Vector, rapidity) -> InverseTemperature4Vector:
    new = boost_matrix(rapidity) @ bv.as_array()
    return InverseTemperature4Vector(tuple(new))


def rapidity_from_velocity(velocity) -> np.ndarray:
    """Rapidity vector whose boost moves the rest frame to 3-velocity v."""
    v = np.asarray(velocity, dtype=float)
    speed = float(np.linalg.norm(v))
    if speed >= 1.0:
        raise ValueError("3-velocity must be subluminal")
    if speed == 0.0:
        return np.zeros(3)
    return v / speed * math.atanh(speed)
