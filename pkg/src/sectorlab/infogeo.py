"""Non-commutative Lp norms, relative modular operators and the
alpha-divergence between states.

Lp spaces are realized in their tracial specialization: the representative
of a state with density rho in Lp is rho^(1/p), the norm is the Schatten
p-norm and the pairing between conjugate exponents is the trace pairing.
On commuting densities everything collapses to the classical scalar
formulas, which the tests use as oracles. The relative modular operator
is exposed separately for the general (non-tracial) reference.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraElement, BlockShape
from .errors import ShapeMismatchError, SingularReferenceError
from .linalg import psd_power
from .states import StateFunctional


def conjugate_exponent(p: float) -> float:
    if p == 1.0:
        return math.inf
    if p == math.inf:
        return 1.0
    return p / (p - 1.0)


@dataclass(frozen=True)
class AlphaParams:
    """Conjugate exponents (p, q) with alpha = 1/q - 1/p, alpha != +-1."""

    p: float
    q: float

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        if p < 1 or q < 1:
            raise ValueError("exponents must lie in [1, inf]")
        inv_p = 0.0 if p == math.inf else 1.0 / p
        inv_q = 0.0 if q == math.inf else 1.0 / q
        if abs(inv_p + inv_q - 1.0) > 1e-12:
            raise ValueError("exponents must be conjugate: 1/p + 1/q = 1")
        if abs(self.alpha) >= 1.0 - 1e-12:
            raise ValueError("alpha = +-1 (p or q = 1) is excluded")

    @property
    def alpha(self) -> float:
        inv_p = 0.0 if self.p == math.inf else 1.0 / self.p
        inv_q = 0.0 if self.q == math.inf else 1.0 / self.q
        return inv_q - inv_p

    @classmethod
    def from_p(cls, p: float) -> "AlphaParams":
        return cls(p, conjugate_exponent(p))

    def swapped(self) -> "AlphaParams":
        return AlphaParams(self.q, self.p)


@dataclass(frozen=True)
class LpElement:
    """A matrix representative in Lp; reference None means the tracial
    pairing (the implemented specialization)."""

    exponent: float
    element: AlgebraElement
    reference: StateFunctional | None = None

    def __post_init__(self):
        if self.exponent < 1:
            raise ValueError("Lp exponent must be at least 1")


def lp_norm(t: LpElement) -> float:
    return lp_norm_of(t.element, t.exponent)


def lp_norm_of(a: AlgebraElement, p: float) -> float:
    """Schatten p-norm across blocks; p = inf gives the operator norm."""
    if p == math.inf:
        return a.norm()
    if p < 1:
        raise ValueError("Lp exponent must be at least 1")
    total = 0.0
    for blk in a.blocks:
        s = np.linalg.svd(blk, compute_uv=False)
        total += float(np.sum(s ** p))
    return total ** (1.0 / p)


def state_representative(omega: StateFunctional, p: float) -> LpElement:
    """The positive Lp representative rho^(1/p) of a state (support
    projections as the partial isometries)."""
    if p == math.inf:
        raise ValueError("the p = inf representative is not defined")
    blocks = [psd_power(rho, 1.0 / p) for rho in omega.densities]
    return LpElement(p, AlgebraElement(omega.shape, blocks))


def _symmetric_trace_product(a: np.ndarray, b: np.ndarray) -> float:
    # Tr(ab) accumulated in a transpose-symmetric order so that swapping
    # the operands reproduces bit-identical floating point results.
    prod = a * b.T
    sym = prod + prod.T
    return 0.5 * float(np.sum(sym).real)


def holder_pairing(t1: LpElement, t2: LpElement) -> float:
    """Trace pairing Re Tr(T1 T2) between conjugate Lp and Lq elements."""
    inv1 = 0.0 if t1.exponent == math.inf else 1.0 / t1.exponent
    inv2 = 0.0 if t2.exponent == math.inf else 1.0 / t2.exponent
    if abs(inv1 + inv2 - 1.0) > 1e-12:
        raise ValueError("pairing requires conjugate exponents")
    if t1.element.shape != t2.element.shape:
        raise ShapeMismatchError("pairing requires a common shape")
    return sum(
        _symmetric_trace_product(a, b)
        for a, b in zip(t1.element.blocks, t2.element.blocks)
    )


class RelativeModularOperator:
    """Delta(X) = rho X sigma^{-1} blockwise, the relative modular
    operator of a state with respect to a faithful reference.

    Positive for the trace inner product; its spectrum is the set of
    ratios of the two density spectra.
    """

    __slots__ = ("shape", "rho", "sigma", "_sigma_inv")

    def __init__(self, phi: StateFunctional, phi0: StateFunctional,
                 tol: float = 1e-12):
        if phi.shape != phi0.shape:
            raise ShapeMismatchError("states must share one shape")
        self.shape = phi.shape
        self.rho = phi.densities
        self.sigma = phi0.densities
        inverses = []
        for s in self.sigma:
            vals, vecs = np.linalg.eigh(s)
            if float(vals[0]) <= tol:
                raise SingularReferenceError(
                    "reference state must be faithful (strictly positive)"
                )
            inverses.append((vecs / vals) @ np.conj(vecs.T))
        self._sigma_inv = tuple(inverses)

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        if x.shape != self.shape:
            raise ShapeMismatchError(f"{x.shape} vs {self.shape}")
        return AlgebraElement(self.shape, [
            r @ blk @ s_inv
            for r, blk, s_inv in zip(self.rho, x.blocks, self._sigma_inv)
        ])

    def eigenvalues(self) -> np.ndarray:
        """All ratios rho_i / sigma_j per block, sorted ascending."""
        out = []
        for r, s in zip(self.rho, self.sigma):
            rv = np.linalg.eigvalsh(r)
            sv = np.linalg.eigvalsh(s)
            out.append(np.outer(rv, 1.0 / sv).ravel())
        return np.sort(np.concatenate(out).real)

    def matrix(self) -> np.ndarray:
        """The superoperator on to_vector coordinates (row-major kron)."""
        blocks = [
            np.kron(r, s_inv.T) for r, s_inv in zip(self.rho, self._sigma_inv)
        ]
        dim = self.shape.dim
        out = np.zeros((dim, dim), dtype=complex)
        start = 0
        for b in blocks:
            sl = slice(start, start + b.shape[0])
            out[sl, sl] = b
            start += b.shape[0]
        return out


def relative_modular_operator(phi: StateFunctional, phi0: StateFunctional,
                              tol: float = 1e-12) -> RelativeModularOperator:
    return RelativeModularOperator(phi, phi0, tol)


def alpha_divergence(phi1: StateFunctional, phi2: StateFunctional,
                     params: AlphaParams) -> float:
    """pq [ Tr(rho1)/p + Tr(rho2)/q - Tr(rho1^{1/p} rho2^{1/q}) ].

    Nonnegative, zero exactly on equal densities, and symmetric under the
    simultaneous swap of the states and of (p, q); on states the bracket
    is 1 - Tr(rho1^{1/p} rho2^{1/q}).
    """
    if phi1.shape != phi2.shape:
        raise ShapeMismatchError("states must share one shape")
    p, q = params.p, params.q
    t1 = state_representative(phi1, p)
    t2 = state_representative(phi2, q)
    tr1 = sum(float(np.trace(rho).real) for rho in phi1.densities)
    tr2 = sum(float(np.trace(rho).real) for rho in phi2.densities)
    pairing = holder_pairing(t1, t2)
    return q * tr1 + p * tr2 - (p * q) * pairing


def virtual_temperature(beta: float, p: float) -> float:
    """beta / p: the inverse temperature attached to the Lp interpolation
    (always between 0 and beta for admissible exponents)."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    if p == math.inf:
        return 0.0
    if p < 1:
        raise ValueError("Lp exponent must be at least 1")
    return beta / p
