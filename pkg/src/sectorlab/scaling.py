"""Scaling algebra over a geometric grid of scales, with the
renormalization-group action and state lifts.

Sections assign one algebra element to every grid point lambda_k = r^k.
The scale shift sigma acts by index translation: an exact *-automorphism
with cyclic boundary, a partial map in strict-window mode. Lifted states
are kept in disintegrated form (a measure on the grid plus one fiber
state per charged point), so central restriction, disintegration and the
scale shift on states are index-level operations and the disjointness of
lifts at different scales is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraElement, BlockShape
from .errors import OffGridError, ShapeMismatchError, WindowOverflowError
from .linalg import DEFAULT_TOL
from .states import StateFunctional, mix_states
from .thermal import DEFAULT_T_GRID, Dynamics, gibbs_state, heisenberg_evolve, kms_defect

CYCLIC = "cyclic"
STRICT = "strict-window"


@dataclass(frozen=True)
class ScaleGrid:
    """Geometric grid lambda_k = ratio^k for k = -K..K.

    Cyclic boundary makes index shifts exact automorphisms (the discrete
    model of the multiplicative group); the strict window refuses shifts
    that would leave the grid.
    """

    ratio: float
    exponent_range: int
    boundary: str = CYCLIC

    def __post_init__(self):
        if not self.ratio > 1:
            raise ValueError("grid ratio must exceed 1")
        if self.exponent_range < 0:
            raise ValueError("exponent range must be nonnegative")
        if self.boundary not in (CYCLIC, STRICT):
            raise ValueError(f"unknown boundary mode {self.boundary!r}")

    @property
    def size(self) -> int:
        return 2 * self.exponent_range + 1

    @property
    def exponents(self) -> range:
        return range(-self.exponent_range, self.exponent_range + 1)

    @property
    def points(self) -> tuple[float, ...]:
        return tuple(self.ratio ** k for k in self.exponents)

    def index_of(self, lam: float, tol: float = 1e-9) -> int:
        """Grid index (0-based) of a scale factor; OffGridError otherwise."""
        if not lam > 0:
            raise OffGridError(f"scale must be positive, got {lam}")
        k = math.log(lam) / math.log(self.ratio)
        k_round = round(k)
        if abs(k - k_round) > tol:
            raise OffGridError(f"{lam} is not a power of the grid ratio")
        if abs(k_round) > self.exponent_range:
            raise OffGridError(f"{lam} lies outside the grid window")
        return int(k_round) + self.exponent_range

    def exponent_of(self, mu: float, tol: float = 1e-9) -> int:
        """The integer m with mu = ratio^m (no window restriction)."""
        if not mu > 0:
            raise OffGridError(f"scale must be positive, got {mu}")
        m = math.log(mu) / math.log(self.ratio)
        m_round = round(m)
        if abs(m - m_round) > tol:
            raise OffGridError(f"{mu} is not a power of the grid ratio")
        return int(m_round)

    def shift_index(self, index: int, m: int) -> int:
        """Index of the point at ratio^m times the given point."""
        shifted = index + m
        if self.boundary == CYCLIC:
            return shifted % self.size
        if 0 <= shifted < self.size:
            return shifted
        raise WindowOverflowError(
            f"shift by {m} leaves the strict grid window at index {index}"
        )

    def wraps(self, index: int, m: int) -> bool:
        """Whether the cyclic shift from this index wraps around."""
        return not (0 <= index + m < self.size)


class ScalingSection:
    """One algebra element per grid point, with pointwise operations and
    the sup norm over the grid."""

    __slots__ = ("grid", "shape", "values")

    def __init__(self, grid: ScaleGrid, values):
        values = tuple(values)
        if len(values) != grid.size:
            raise ShapeMismatchError("one value per grid point required")
        shape = values[0].shape
        if any(v.shape != shape for v in values):
            raise ShapeMismatchError("section values must share one shape")
        self.grid = grid
        self.shape = shape
        self.values = values

    @classmethod
    def constant(cls, grid: ScaleGrid, a: AlgebraElement) -> "ScalingSection":
        return cls(grid, [a] * grid.size)

    @classmethod
    def unit(cls, grid: ScaleGrid, shape: BlockShape) -> "ScalingSection":
        return cls.constant(grid, AlgebraElement.unit(shape))

    @classmethod
    def scalar(cls, grid: ScaleGrid, shape: BlockShape, f) -> "ScalingSection":
        """Central section f(lambda) . 1 from a scalar function."""
        one = AlgebraElement.unit(shape)
        return cls(grid, [complex(f(lam)) * one for lam in grid.points])

    @classmethod
    def indicator(cls, grid: ScaleGrid, shape: BlockShape, index: int) -> "ScalingSection":
        values = [AlgebraElement.zero(shape) for _ in range(grid.size)]
        values[index] = AlgebraElement.unit(shape)
        return cls(grid, values)

    def _require_compatible(self, other: "ScalingSection"):
        if self.grid != other.grid:
            raise ShapeMismatchError("sections on different grids")
        if self.shape != other.shape:
            raise ShapeMismatchError("sections with different block shapes")

    def __add__(self, other):
        if not isinstance(other, ScalingSection):
            return NotImplemented
        self._require_compatible(other)
        return ScalingSection(self.grid, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        if not isinstance(other, ScalingSection):
            return NotImplemented
        self._require_compatible(other)
        return ScalingSection(self.grid, [a - b for a, b in zip(self.values, other.values)])

    def __mul__(self, other):
        if isinstance(other, ScalingSection):
            self._require_compatible(other)
            return ScalingSection(self.grid, [a * b for a, b in zip(self.values, other.values)])
        if isinstance(other, (int, float, complex, np.number)):
            return ScalingSection(self.grid, [a * other for a in self.values])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return ScalingSection(self.grid, [a * other for a in self.values])
        return NotImplemented

    def adjoint(self) -> "ScalingSection":
        return ScalingSection(self.grid, [a.adjoint() for a in self.values])

    def sup_norm(self) -> float:
        return max(v.norm() for v in self.values)

    def at_scale(self, lam: float) -> AlgebraElement:
        return self.values[self.grid.index_of(lam)]

    def distance(self, other: "ScalingSection") -> float:
        return (self - other).sup_norm()

    def __repr__(self):
        return f"ScalingSection(points={self.grid.size}, sup_norm={self.sup_norm():.4g})"


def sigma(mu: float, section: ScalingSection) -> ScalingSection:
    """The scale shift (sigma_mu A)(lambda) = A(mu lambda): an index
    translation, cyclic or strictly windowed per the grid."""
    grid = section.grid
    m = grid.exponent_of(mu)
    values = [
        section.values[grid.shift_index(i, m)] for i in range(grid.size)
    ]
    return ScalingSection(grid, values)


@dataclass(frozen=True)
class ScaledDynamicsFamily:
    """One generator per grid fiber; the constant family models exact
    dilation covariance, a scale-dependent family (e.g. running mass)
    models explicit breaking."""

    grid: ScaleGrid
    fibers: tuple[Dynamics, ...]

    def __post_init__(self):
        if len(self.fibers) != self.grid.size:
            raise ShapeMismatchError("one fiber generator per grid point required")

    @classmethod
    def constant(cls, grid: ScaleGrid, d: Dynamics) -> "ScaledDynamicsFamily":
        return cls(grid, tuple([d] * grid.size))

    @classmethod
    def mass_scaled(cls, grid: ScaleGrid, base: Dynamics, mass_term: Dynamics,
                    dimension: float, m0: float) -> "ScaledDynamicsFamily":
        """H(lambda) = H_base + lambda^dimension * m0 * H_mass."""
        fibers = []
        for lam in grid.points:
            coeff = (lam ** dimension) * m0
            fibers.append(Dynamics(base.shape, [
                h + coeff * m for h, m in zip(base.hamiltonians, mass_term.hamiltonians)
            ]))
        return cls(grid, tuple(fibers))

    def at_index(self, i: int) -> Dynamics:
        return self.fibers[i]

    @property
    def shape(self) -> BlockShape:
        return self.fibers[0].shape


def lifted_evolve(family: ScaledDynamicsFamily, t: complex,
                  section: ScalingSection) -> ScalingSection:
    """(alpha_t A)(lambda) = fiber evolution for the dilated time
    lambda * t under the fiber generator."""
    if section.grid != family.grid:
        raise ShapeMismatchError("section and dynamics family on different grids")
    values = []
    for i, lam in enumerate(family.grid.points):
        values.append(heisenberg_evolve(family.fibers[i], section.values[i], lam * t))
    return ScalingSection(family.grid, values)


def scale_time_covariance_defect(family: ScaledDynamicsFamily, mu: float,
                                 t: float, section: ScalingSection) -> float:
    """Fiberwise defect of sigma_mu alpha_t = alpha_{mu t} sigma_mu,
    evaluated on the fibers whose shift stays inside the window (the wrap
    fibers of a cyclic grid compare different scales and are excluded)."""
    grid = family.grid
    m = grid.exponent_of(mu)
    lhs = sigma(mu, lifted_evolve(family, t, section))
    rhs = lifted_evolve(family, mu * t, sigma(mu, section))
    worst = 0.0
    for i in range(grid.size):
        if grid.wraps(i, m):
            continue
        worst = max(worst, (lhs.values[i] - rhs.values[i]).norm())
    return worst


@dataclass(frozen=True)
class ScaleMeasure:
    """Probability weights on the grid points."""

    grid: ScaleGrid
    weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.weights) != self.grid.size:
            raise ShapeMismatchError("one weight per grid point required")
        w = np.asarray(self.weights, dtype=float)
        if float(w.min()) < -1e-12:
            raise ValueError("measure weights must be nonnegative")
        if abs(float(w.sum()) - 1.0) > 1e-12:
            raise ValueError("measure weights must sum to 1")
        object.__setattr__(self, "weights", tuple(float(x) for x in w))

    @classmethod
    def dirac(cls, grid: ScaleGrid, lam: float) -> "ScaleMeasure":
        w = [0.0] * grid.size
        w[grid.index_of(lam)] = 1.0
        return cls(grid, tuple(w))

    @classmethod
    def uniform(cls, grid: ScaleGrid) -> "ScaleMeasure":
        return cls(grid, tuple([1.0 / grid.size] * grid.size))

    def support(self, tol: float = DEFAULT_TOL) -> tuple[int, ...]:
        return tuple(i for i, w in enumerate(self.weights) if w > tol)


def scale_average(measure: ScaleMeasure, section: ScalingSection) -> AlgebraElement:
    """The conditional expectation sum_k mu_k A(lambda_k) onto the base
    algebra; unital and positive, and the identity on constant sections."""
    if measure.grid != section.grid:
        raise ShapeMismatchError("measure and section on different grids")
    out = AlgebraElement.zero(section.shape)
    for w, v in zip(measure.weights, section.values):
        if w != 0.0:
            out = out + w * v
    return out


class LiftedState:
    """A state on the scaling algebra in disintegrated form: a measure on
    the grid and one fiber state per charged point.

    Every lift constructed here (and any mixture of lifts) has this form,
    which makes the central restriction, the disintegration and the
    behaviour under scale shifts exact index-level operations.
    """

    __slots__ = ("grid", "shape", "weights", "fiber_states")

    def __init__(self, grid: ScaleGrid, shape: BlockShape, weights, fiber_states):
        weights = tuple(float(w) for w in weights)
        fiber_states = tuple(fiber_states)
        if len(weights) != grid.size or len(fiber_states) != grid.size:
            raise ShapeMismatchError("need one weight and one state slot per point")
        if abs(sum(weights) - 1.0) > 1e-12:
            raise ValueError("lifted-state weights must sum to 1")
        for w, s in zip(weights, fiber_states):
            if w > 0 and s is None:
                raise ValueError("charged grid point without a fiber state")
            if s is not None and s.shape != shape:
                raise ShapeMismatchError("fiber state on the wrong shape")
        self.grid = grid
        self.shape = shape
        self.weights = weights
        self.fiber_states = fiber_states

    def __call__(self, section: ScalingSection) -> complex:
        if section.grid != self.grid or section.shape != self.shape:
            raise ShapeMismatchError("section does not match the lifted state")
        total = 0.0 + 0.0j
        for w, s, v in zip(self.weights, self.fiber_states, section.values):
            if w > 0 and s is not None:
                total += w * s(v)
        return complex(total)

    def support(self, tol: float = DEFAULT_TOL) -> tuple[int, ...]:
        return tuple(i for i, w in enumerate(self.weights) if w > tol)

    def compose_sigma(self, mu: float) -> "LiftedState":
        """The state after the scale shift, omega_hat . sigma_mu: weights
        and fiber states move by the index translation."""
        m = self.grid.exponent_of(mu)
        weights = [0.0] * self.grid.size
        fibers: list[StateFunctional | None] = [None] * self.grid.size
        for i, (w, s) in enumerate(zip(self.weights, self.fiber_states)):
            if w == 0.0 and s is None:
                continue
            j = self.grid.shift_index(i, m)
            weights[j] = w
            fibers[j] = s
        return LiftedState(self.grid, self.shape, weights, fibers)


def lift_state(omega: StateFunctional, measure: ScaleMeasure) -> LiftedState:
    """omega tensor mu: the lift through the conditional expectation of
    the measure."""
    fibers = [omega if w > 0 else None for w in measure.weights]
    return LiftedState(measure.grid, omega.shape, measure.weights, fibers)


def canonical_lift(omega: StateFunctional, grid: ScaleGrid) -> LiftedState:
    return lift_state(omega, ScaleMeasure.dirac(grid, 1.0))


def scaled_lift(omega: StateFunctional, grid: ScaleGrid, lam: float) -> LiftedState:
    """The state transported to scale lambda: the lift through the Dirac
    measure at lambda, equivalently the canonical lift composed with the
    scale shift."""
    return lift_state(omega, ScaleMeasure.dirac(grid, lam))


def mix_lifted(pairs) -> LiftedState:
    pairs = list(pairs)
    if not pairs:
        raise ValueError("need at least one (weight, state) pair")
    if abs(sum(w for w, _ in pairs) - 1.0) > 1e-12:
        raise ValueError("mixture weights must sum to 1")
    grid = pairs[0][1].grid
    shape = pairs[0][1].shape
    weights = [0.0] * grid.size
    partial: list[list] = [[] for _ in range(grid.size)]
    for p, lifted in pairs:
        if lifted.grid != grid or lifted.shape != shape:
            raise ShapeMismatchError("mixture members do not match")
        for i, (w, s) in enumerate(zip(lifted.weights, lifted.fiber_states)):
            if w > 0:
                weights[i] += p * w
                partial[i].append((p * w, s))
    fibers: list[StateFunctional | None] = [None] * grid.size
    for i, parts in enumerate(partial):
        if weights[i] > 0 and parts:
            fibers[i] = mix_states([(w / weights[i], s) for w, s in parts])
    return LiftedState(grid, shape, weights, fibers)


def center_restriction(lifted: LiftedState) -> ScaleMeasure:
    """The measure on the grid read off the scale centre: the lifted state
    evaluated on the indicator sections."""
    weights = []
    for i in range(lifted.grid.size):
        chi = ScalingSection.indicator(lifted.grid, lifted.shape, i)
        weights.append(float(lifted(chi).real))
    total = sum(weights)
    return ScaleMeasure(lifted.grid, tuple(w / total for w in weights))


@dataclass(frozen=True)
class ScaleComponent:
    weight: float
    state: StateFunctional
    index: int
    scale: float


@dataclass(frozen=True)
class ScaleDisintegration:
    components: tuple[ScaleComponent, ...]
    pullback: StateFunctional

    @property
    def measure_weights(self) -> tuple[float, ...]:
        return tuple(c.weight for c in self.components)


def central_disintegration(lifted: LiftedState,
                           tol: float = DEFAULT_TOL) -> ScaleDisintegration:
    """Radon-Nikodym components of the lifted state over its central
    measure, plus the pullback along the constant-section embedding (the
    mixture of the fiber states)."""
    components = []
    pairs = []
    points = lifted.grid.points
    for i, (w, s) in enumerate(zip(lifted.weights, lifted.fiber_states)):
        if w > tol and s is not None:
            components.append(ScaleComponent(w, s, i, points[i]))
            pairs.append((w, s))
    total = sum(w for w, _ in pairs)
    pullback = mix_states([(w / total, s) for w, s in pairs])
    return ScaleDisintegration(tuple(components), pullback)


def lifted_states_disjoint(l1: LiftedState, l2: LiftedState,
                           tol: float = DEFAULT_TOL) -> bool:
    """Disjointness over the scale centre: disjoint grid supports."""
    return not (set(l1.support(tol)) & set(l2.support(tol)))


def lifted_central_witness(l1: LiftedState, l2: LiftedState,
                           tol: float = DEFAULT_TOL) -> ScalingSection:
    """A central indicator section separating two disjoint lifted states:
    value 1 on the support of the first, 0 on the second."""
    if not lifted_states_disjoint(l1, l2, tol):
        raise ValueError("lifted states share scale support; no witness exists")
    out = ScalingSection.constant(l1.grid, AlgebraElement.zero(l1.shape))
    for i in l1.support(tol):
        out = out + ScalingSection.indicator(l1.grid, l1.shape, i)
    return out


@dataclass(frozen=True)
class FlowRecord:
    """One row of a scale-flow table."""

    scale: float
    beta_in: float
    beta_out: float
    kms_defect: float


def rg_flow_of_gibbs(
    family: ScaledDynamicsFamily,
    beta: float,
    lam: float,
    probes,
    t_grid=DEFAULT_T_GRID,
    target_beta: float | None = None,
) -> FlowRecord:
    """KMS check for the thermal state transported to scale lambda.

    The lift of the Gibbs state at beta, evaluated at fiber lambda with
    the time dilated by lambda (generator lambda * H(lambda)), satisfies
    the KMS condition at beta/lambda; the returned record carries the
    defect at the requested target (default beta/lambda).
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    i = family.grid.index_of(lam)
    base_index = family.grid.index_of(1.0)
    omega = gibbs_state(family.at_index(base_index), beta)
    effective = family.at_index(i).scaled(lam)
    beta_out = beta / lam
    target = beta_out if target_beta is None else target_beta
    defect = kms_defect(omega, effective, target, probes, t_grid)
    return FlowRecord(scale=lam, beta_in=beta, beta_out=beta_out, kms_defect=defect)


def flow_table(
    family: ScaledDynamicsFamily,
    beta: float,
    probes,
    t_grid=DEFAULT_T_GRID,
) -> list[FlowRecord]:
    return [
        rg_flow_of_gibbs(family, beta, lam, probes, t_grid)
        for lam in family.grid.points
    ]
