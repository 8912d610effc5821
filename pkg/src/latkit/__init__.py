"""latkit: computation on finite posets and lattices.

Closure operators and closure systems, generation from preclosure
families, least fixpoints, Scott continuity and way-below, Heyting
implication and nuclei, filters and the fitted-nucleus duality, closure
rules, and anti-exchange analysis of powerset operators.

Everything exact, everything finite, everything checked twice where two
independent routes exist.
"""

from .errors import (
    CapExceeded,
    CycleDetected,
    DuplicateLabel,
    InputError,
    LatkitError,
    MixedPosets,
    NoLeastElement,
    NotAClosureSystem,
    NotAFrame,
    NotANucleus,
    NotAPreorder,
    NotAscendingAt,
    NotIncreasing,
    NotMeetSemilattice,
    NotPreclosure,
    NotPreframe,
    NotPrenucleus,
    ParseError,
    TheoremBreach,
    UnknownLabel,
)
from .order import (
    DIRECTED_CAP,
    SUBSET_CAP,
    FinitePoset,
    Subset,
    build_poset,
    directed_subsets,
    enabledness,
    has_ceiling,
    interpolation_check,
    is_continuous_poset,
    is_default_enabled,
    is_default_enabled_within,
    is_meet_semilattice,
    lattice_queries,
    order_queries,
    subposet,
    way_below,
    way_below_set,
)
from .maps import (
    EndoMap,
    classify,
    closed_under,
    compose,
    constant_map,
    directed_closed,
    fix,
    identity_map,
    inaccessible_by_directed_joins,
    inversely_closed_under,
    is_preclosure,
    is_scott_continuous,
    pointwise_join,
    pointwise_leq,
    pointwise_meet,
)
from .closure import (
    ClosureOperator,
    ClosureSystem,
    cl_join,
    cl_meet,
    clsys,
    dcclsys,
    default_induction_check,
    dj,
    duality,
    duality_inv,
    enumerate_cl_lattice,
    generate_closure,
    induction_check,
    is_closure_system,
    kleene_generate,
    obverse_induction_check,
    sccore,
    sccore_bruteforce,
    tarski,
)
from .rules import (
    ClosureRule,
    RuleSet,
    default_rules,
    is_default_rule,
    is_nuclear_enabled,
    nuclear_rules,
    obeys,
    rel_impl_max,
    rel_impl_star,
    rho,
    rul,
    rule_closure,
    sigma,
)
from .heyting import (
    FrameView,
    Nucleus,
    adjunction_check,
    enumerate_nuclei,
    fix_of_meet_check,
    frame_of_nuclei_check,
    heyting_implication,
    is_nuclear_system,
    is_nucleus_map,
    is_prenucleus,
    least_nucleus_above,
    nuc_map,
    nuclear_core,
    nucleus_join,
    nucleus_meet,
    nucsys,
    regular_nucleus,
    validate_structure,
)
from .hmj import (
    FilterSet,
    enumerate_filters,
    filters_report,
    fitnuc,
    fitting,
    galois_identities_check,
    hmj_correspondence,
    is_compact_quotient,
    is_filter,
    is_fitted,
    is_nuclear_filter,
    is_scott_open,
    nucfilt,
    oneker,
    open_nucleus,
    quotient_frame_check,
)
from .convexity import (
    CONVEXITY_CAP,
    PowersetOperator,
    acyclicity,
    clsys_operator,
    convexity_checks,
    dcclsys_operator,
    funnel_check,
    rule_closure_operator,
    table_operator,
)
from . import fixtures

__version__ = "0.1.0"
