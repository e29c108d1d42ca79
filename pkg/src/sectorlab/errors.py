"""Exception hierarchy.

The CLI maps these onto exit codes: scenario/schema problems -> 2,
failed mathematical hypotheses (non-faithful reference, unstable
representation, ...) -> 3, internal tolerance breaches -> 4.
"""


class SectorlabError(Exception):
    """Base class for all library errors."""


class ShapeMismatchError(SectorlabError, ValueError):
    """Operands live on different block shapes (or grids/coset spaces)."""


class ToleranceError(SectorlabError):
    """A numerical quantity that must vanish (or match) exceeded its tolerance."""


class HypothesisError(SectorlabError):
    """A mathematical hypothesis required by an operation does not hold."""


class CentralActionError(HypothesisError):
    """A group element moves the central spectrum outside itself.

    Signals that the representation is not stable under the action as a
    union of folia, so no induced permutation of sector labels exists.
    """


class SingularReferenceError(HypothesisError):
    """A reference state that must be faithful has a singular density."""


class NonCovariantPairError(HypothesisError):
    """The supplied (representation, unitaries) pair fails covariance."""


class UnimplementableError(HypothesisError):
    """No unitary homomorphism implements the automorphisms on this space."""


class OffGridError(SectorlabError, ValueError):
    """A scale factor does not lie on the discretized scale grid."""


class WindowOverflowError(OffGridError):
    """A scale shift left the strict grid window."""


class ScenarioError(SectorlabError):
    """A scenario file violates the input schema."""
