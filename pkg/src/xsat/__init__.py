"""xsat: a satisfiability workbench for clause specifications over
Boolean XPath-style tree patterns."""

from .algebra import MergeResult, descendant_edges, join, shared_join, unfold_edge
from .logic import (
    CheckReport,
    Clause,
    Conditional,
    Constraint,
    Negative,
    Positive,
    Specification,
    check_document,
    constraint_equal,
    doc_satisfies_clause,
    doc_satisfies_constraint,
    simplify,
    subsumes,
)
from .morphisms import (
    NodeMap,
    enumerate_monomorphisms,
    enumerate_prefix_functions,
    exists_monomorphism,
    extend_map,
    is_monomorphism,
    is_prefix_function,
)
from .oracle import (
    OracleBound,
    Witness,
    bounded_models,
    bounded_sat,
    default_bound,
    enumerate_documents,
)
from .patterns import (
    WILDCARD,
    Axis,
    Document,
    NotADocument,
    Pattern,
    PatternError,
    as_document,
    canonical_form,
    is_isomorphic,
    strict_ancestors,
    validate,
)
from .refutation import (
    LIMIT_REACHED,
    SATURATED,
    UNSATISFIABLE,
    HistoryEvent,
    ReplayMismatch,
    RunConfig,
    RunResult,
    apply_r1,
    apply_r2,
    apply_r3,
    replay,
    run,
    run_v2,
    saturate_v1,
)
from .textio import (
    ParseError,
    SourceSpan,
    SpecParseError,
    format_history,
    ingest_xml,
    parse_document_native,
    parse_pattern,
    parse_spec,
    print_pattern,
    print_spec,
)

__version__ = "0.1.0"
