"""marginlab: exact-arithmetic analysis of margin losses.

Evaluates the max-margin, restricted-max-margin and max-min-margin
surrogates, computes their Bayes risks as exact rational LPs over
transportation-type polytopes, enumerates the relevant polytope
vertices, and renders consistency verdicts with machine-checkable
certificates or counterexamples.
"""

__version__ = "0.1.0"

from .consistency import (
    ConsistencyReport,
    ReportConfig,
    brute_force_oracle,
    build_report,
    certify_tree_metric,
    check_assumption_a1,
    check_dominant_label_identity,
    check_embedding_identities,
    check_necessary_condition,
    check_rm_simple_sufficient,
    is_distance,
)
from .corpus import corpus_loss, corpus_names
from .losses import (
    LossMatrix,
    argmax_decode,
    as_simplex_point,
    bayes_predictor,
    eval_max_margin,
    eval_max_min_margin,
    eval_restricted_max_margin,
    loss_matrix,
)
from .polytopes import (
    enumerate_vertices,
    epigraph_polytope,
    prediction_set,
    simplex_grid,
    transport_plan_vertices,
    transportation_polytope,
)
from .rationals import Rational, rat
from .risks import (
    RiskValue,
    bayes_risk_l,
    bayes_risk_m,
    bayes_risk_m_dual,
    bayes_risk_mm,
    bayes_risk_rm,
    conjugate_neg_hm,
    subgradient_point_neg_hm,
    verify_mm_minimizer,
)

__all__ = [name for name in dir() if not name.startswith("_")]
