"""Free non-commutative DGAs over Z2 and their mapping cones."""

from .freealg import (
    Algebra,
    AlgebraError,
    DomainMismatchError,
    GenMap,
    HomotopyEvaluator,
    ParseError,
    Poly,
    UnknownGeneratorError,
    apply_morphism,
    gamma_K,
    gamma_twisted,
    omega_combinator,
    parse_poly,
    poly_add,
    poly_mul,
)
from .dga import (
    ChainHomotopy,
    DestabilizationError,
    Dga,
    DgaError,
    DgaMorphism,
    Relabel,
    Substitution,
    TameIso,
    ValidationReport,
    VerificationError,
    apply_tame_iso,
    destabilize,
    differential_apply,
    homotopic_partner,
    stabilize,
    validate_chain_map,
    validate_dga,
    validate_homotopy,
)
from .cone import (
    ConeDga,
    ConeError,
    build_cone_interval,
    build_cone_torus,
    concat_cones,
    concat_cones_full,
    glue_cones,
    homotopy_iso,
    verify_iso,
)
from .invariants import (
    Augmentation,
    CH0Presentation,
    LinearizedComplex,
    ResourceLimitError,
    UPoly2,
    find_augmentations,
    homology_ranks,
    linearize,
    monodromy_orbits,
    q_poly,
    reduce_ch0_single_generator,
    upoly_gcd,
)
from .knots import (
    b_polys,
    build_L1_morphism,
    build_L2_morphism,
    torus_2p_dga,
    torus_2p_monodromy,
    trefoil_dga,
    trefoil_monodromy,
    unknot_dga,
)
