"""Evidence-based subjective logic and flow-based trust computation."""

from .errors import (
    EbslError,
    InvalidEvidenceError,
    InvalidOpinionError,
    InvalidScalarError,
    ParseError,
    ThetaViolationError,
    UnboundVariableError,
)
from .opinion import (
    AlgebraParams,
    DEFAULT_PARAMS,
    Evidence,
    GFunction,
    GSelector,
    Opinion,
    UNCERTAINTY,
    consensus,
    delta,
    discount_g,
    discount_legacy,
    discount_odot,
    evidence_from_opinion,
    negative_evidence,
    opinion_from_evidence,
    opinion_with_uncertainty_floor,
    positive_evidence,
    scalar_mul,
)
from .expr import (
    ConsensusNode,
    GDiscountNode,
    LegacyDiscountNode,
    OdotDiscountNode,
    OpinionExpr,
    ScaleNode,
    Var,
    count_variable_occurrences,
    evaluate,
    is_canonical,
)
from .engine import (
    ConvergenceReport,
    EngineConfig,
    FunctionalTrustInput,
    OpinionMatrix,
    analytic_loop_solution,
    functional_trust,
    matrix_discount_product,
    naive_sl_solve,
    negative_evidence_matrix,
    offdiag,
    positive_evidence_matrix,
    solve_referral,
    step,
    theta_bound,
)
from .flow import FlowConfig, aggregate_rating, solve_flow, validate_rating_matrix
from .ingest import (
    EvidenceMatrix,
    InteractionRecord,
    ParseResult,
    build_evidence_matrix,
    cluster_evidence_matrix,
    cluster_nodes,
    evidence_to_opinion_matrix,
    parse_log,
)
from .render import RenderSpec, evidence_pixels, render_matrix, write_pgm
from .comparison import CompareReport, MethodResult, compare_methods

__all__ = [
    "AlgebraParams",
    "CompareReport",
    "ConsensusNode",
    "ConvergenceReport",
    "DEFAULT_PARAMS",
    "EbslError",
    "EngineConfig",
    "Evidence",
    "EvidenceMatrix",
    "FlowConfig",
    "FunctionalTrustInput",
    "GDiscountNode",
    "GFunction",
    "GSelector",
    "InteractionRecord",
    "InvalidEvidenceError",
    "InvalidOpinionError",
    "InvalidScalarError",
    "LegacyDiscountNode",
    "MethodResult",
    "OdotDiscountNode",
    "Opinion",
    "OpinionExpr",
    "OpinionMatrix",
    "ParseError",
    "ParseResult",
    "RenderSpec",
    "ScaleNode",
    "ThetaViolationError",
    "UNCERTAINTY",
    "UnboundVariableError",
    "Var",
    "aggregate_rating",
    "analytic_loop_solution",
    "build_evidence_matrix",
    "cluster_evidence_matrix",
    "cluster_nodes",
    "compare_methods",
    "consensus",
    "count_variable_occurrences",
    "delta",
    "discount_g",
    "discount_legacy",
    "discount_odot",
    "evaluate",
    "evidence_from_opinion",
    "evidence_pixels",
    "evidence_to_opinion_matrix",
    "functional_trust",
    "is_canonical",
    "matrix_discount_product",
    "naive_sl_solve",
    "negative_evidence",
    "negative_evidence_matrix",
    "offdiag",
    "opinion_from_evidence",
    "opinion_with_uncertainty_floor",
    "parse_log",
    "positive_evidence",
    "positive_evidence_matrix",
    "render_matrix",
    "scalar_mul",
    "solve_flow",
    "solve_referral",
    "step",
    "theta_bound",
    "validate_rating_matrix",
    "write_pgm",
]
