"""mtk: multitensors over finite data.

Build multitensors from finite multicategories, run the path-summing monad
on enriched graphs, compute coequalisers of monad algebras by the
sequential construction with a congruence-closure oracle, lift a
multitensor to a functor operad on its unary-part algebras by two
independent routes, and check that standard convolution coincides with
the lift.
"""

from .errors import (
    ArityError,
    BaseMismatchError,
    IsoNotFound,
    MtkError,
    NoStabilisation,
    ValidationError,
)
from .fin import (
    EMPTY,
    FinCat,
    FinFn,
    FinSet,
    chain_colimit,
    coequalize,
    coproduct,
    discrete_cat,
    finfn,
    finset,
    product,
    quotient_by,
)
from .copresheaf import (
    Copresheaf,
    NatTransform,
    all_copresheaves,
    all_families,
    copresheaf,
    copresheaf_chain_colimit,
    copresheaf_coequalize,
    copresheaf_coproduct,
    kan_free,
    kan_unit,
    pointwise_lift,
    value_family,
)
from .cat import BaseCat, CopresheafCat, FinSetCat
from .multicat import (
    Multicat,
    collapse_e_multicat,
    discrete,
    fixture_m1,
    fixture_m3,
    fixture_m4,
    from_tables,
    linear_part,
    monoid_multicat,
    multicat_from_json,
    non_promonoidal_multicat,
    random_multicat,
    semigroup_operad,
    validate,
)
from .graphs import GraphFiberCat, VGraph, sequence_graph, vgraph
from .multitensor import (
    ECategoryStructure,
    Multitensor,
    PartitionIndex,
    PlainGraph,
    check_distributive,
    check_pathlike,
    compositions,
    ecat_check,
    ecat_enumerate,
    gamma_apply,
    gamma_monad,
    mt_check_axioms,
    mt_from_multicat,
    tbar,
    tilde_unary,
    unary_part,
)
from .monad import (
    Algebra,
    AlgebraCat,
    AlgebraMor,
    CoeqConfig,
    CoeqTrace,
    ComputableMonad,
    MonadMorphism,
    alg_coeq_oracle,
    alg_coeq_sequential,
    check_monad_laws,
    check_simple_hypothesis,
    free_algebra,
    identity_monad,
    induced_monad,
    phi_shriek,
    phi_star,
)
from .lifting import (
    LaxMonoidalFunctor,
    LiftedMultitensor,
    basic_coequaliser,
    check_free_components,
    check_lift_theorem,
    check_preserves_basic_coeq,
    check_route_agreement,
    identity_lax_functor,
    lift_lax_functor,
    lift_multitensor,
    lift_object,
    lift_substitution,
    lift_via_monad_route,
)
from .convolution import (
    CoendPresentation,
    coend_tensor,
    convolution_multitensor,
    convolution_vs_lift,
    ecat_ef_agreement,
    promonoidal_check,
)
