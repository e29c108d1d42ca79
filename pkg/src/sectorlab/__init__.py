"""sectorlab: superselection sectors, symmetry breaking and thermal scale
flows on finite-dimensional block matrix algebras."""

from .algebra import (
    AlgebraElement,
    BlockShape,
    CentralSpectrum,
    OperatorSubalgebra,
    center,
    close_under_multiplication,
    commutant,
    matrix_unit_basis,
    minimal_central_projections,
    operator_norm,
)
from .errors import (
    CentralActionError,
    HypothesisError,
    OffGridError,
    ScenarioError,
    SectorlabError,
    ShapeMismatchError,
    SingularReferenceError,
    ToleranceError,
    UnimplementableError,
    WindowOverflowError,
)
from .groups import CosetSpace, FiniteGroup, left_cosets, right_cosets
from .infogeo import (
    AlphaParams,
    LpElement,
    RelativeModularOperator,
    alpha_divergence,
    conjugate_exponent,
    holder_pairing,
    lp_norm,
    lp_norm_of,
    relative_modular_operator,
    state_representative,
    virtual_temperature,
)
from .scaling import (
    FlowRecord,
    LiftedState,
    ScaleDisintegration,
    ScaleGrid,
    ScaleMeasure,
    ScaledDynamicsFamily,
    ScalingSection,
    canonical_lift,
    center_restriction,
    central_disintegration,
    flow_table,
    lift_state,
    lifted_central_witness,
    lifted_evolve,
    lifted_states_disjoint,
    mix_lifted,
    rg_flow_of_gibbs,
    scale_average,
    scale_time_covariance_defect,
    scaled_lift,
    sigma,
)
from .states import (
    RepresentationData,
    SectorComponent,
    SectorDecomposition,
    StateFunctional,
    central_decomposition,
    central_support,
    disjointness_witness,
    evaluate,
    folium_contains,
    gns,
    is_disjoint,
    is_quasi_equivalent,
    mix_states,
)
from .symmetry import (
    AugmentedCentreReport,
    AugmentedElement,
    AutomorphicAction,
    Automorphism,
    BreakingClassification,
    BROKEN,
    InducedRepresentation,
    UNBROKEN,
    UnbrokenSubgroup,
    augmented_center,
    augmented_fixed_points,
    augmented_g_action,
    classify_breaking,
    coset_average,
    coset_section_average,
    embed,
    fixed_point_subalgebra,
    induce_covariant_representation,
    induced_central_action,
    maximal_unbroken_subgroup,
    solve_covariant_unitaries,
    subgroup_average,
    verify_action,
)
from .thermal import (
    BetaDecomposition,
    Dynamics,
    InverseTemperature4Vector,
    UndefinedRestFrameError,
    beta_decompose,
    default_probe_pairs,
    gibbs_state,
    ground_state,
    heisenberg_evolve,
    kms_defect,
    kms_defect_breakdown,
    lorentz_boost,
    rapidity_from_velocity,
)

__version__ = "0.1.0"
