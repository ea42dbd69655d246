"""Toolkit for non-compact surfaces presented by block-gluing rules.

Surfaces are described by finite rule systems gluing annuli, pants and
handles; the package computes their classifying invariants (genus, ends
space, Cantor-Bendixson analysis), decides homeomorphism on the tractable
fragment, decomposes surfaces into pants windows, rewrites transversal
curve configurations, and tracks proper-map degrees symbolically.
"""

from .classify import (
    ClassifierVerdict,
    ClassVerdict,
    distinct_family,
    kerekjarto,
    realize,
)
from .decompose import (
    ComponentCensus,
    DecompositionGraph,
    EssentialPants,
    Piece,
    PieceKind,
    SpineGraph,
    decompose,
    decomposition_to_dot,
    find_essential_pants,
    graph_phe_equal,
    interchange_normalize,
    spine,
    spine_to_dot,
)
from .degree import (
    MapDescriptor,
    deg_compose,
    degree_from_disk_witness,
    descriptor_from_json,
    descriptor_to_json,
    infer_degree,
)
from .ends import (
    Cantor,
    Cardinality,
    CBReport,
    EndExpr,
    EndsAutomaton,
    EndsCount,
    Pt,
    Seq,
    Union,
    Verdict,
    automaton_to_json,
    cb_report,
    cb_report_to_json,
    ends_automaton,
    ends_count,
    ends_count_to_json,
    expr_cb_report,
    find_isolated_planar_end,
    format_end_expr,
    normalize_end_expr,
    pair_homeomorphic,
    parse_end_expr,
    to_end_expr,
    validate_end_expr,
)
from .errors import (
    BoundaryCountMismatchError,
    ClassifyError,
    ComplexityTooLowError,
    DanglingRuleError,
    DecomposeError,
    DegreeContradictionError,
    DegreeError,
    DegreeUnknownError,
    DomainError,
    EndkitError,
    EndsError,
    InconsistentConfigurationError,
    InconsistentInvariantsError,
    InvalidCurveConfigError,
    InvalidEndExprError,
    LabelsNotNormalizedError,
    NotConvertibleError,
    NotFiniteTypeError,
    NotRealizableError,
    OccurrenceInsideCycleError,
    PlaneExcludedError,
    PresentationError,
    PresentationSyntaxError,
    PuncturedTorusExcludedInStrictError,
    RewriteError,
    TrivialComponentsPresentError,
    UnreachableRuleError,
)
from .presentation import (
    INFINITE,
    BlockKind,
    FiniteType,
    Genus,
    SurfacePresentation,
    canonical_finite_type,
    cyclic_states,
    first_occurrences,
    genus,
    is_finite_type,
    parse_presentation,
    pretty_print,
    regularize,
    splice_annulus,
    standard_presentation,
    states_after_cycles,
)
from .rewrite import (
    HOMEO,
    PLUS_MINUS_ONE,
    UNKNOWN,
    ZERO,
    Component,
    ComponentKind,
    CurveConfig,
    Degree,
    GlobalDegree,
    Homeo,
    Other,
    PlusMinusOne,
    RewriteTrace,
    TraceStep,
    Unknown,
    Zero,
    alexander_homotopy,
    annulus_push,
    curve_config_from_json,
    curve_config_to_json,
    r1_disk_removal,
    r2_homeo_normalize,
    r3_annulus_removal,
    r4_surjectivity_endgame,
    radial_extension,
    run_pipeline,
)

__version__ = "0.1.0"
