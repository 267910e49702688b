"""netconc: empirical distributions of graph statistics on random graphs
with dependent edges, exact dependence quantifiers via exhaustive
enumeration, closed-form concentration bounds, and simulation harnesses."""

from .graphs import BlockStructure, Graph, ParseError, new_graph, parse_edge_list, serialize_edge_list
from .stats import (
    DEGREE,
    ESP,
    GEODESIC,
    IN_DEGREE,
    KINDS,
    OUT_DEGREE,
    WITHIN_BLOCK_DEGREE,
    WITHIN_BLOCK_OUT_DEGREE,
    EmpiricalDistribution,
    degree_distribution,
    esp_distribution,
    geodesic_distribution,
    in_degree_distribution,
    linf_error,
    out_degree_distribution,
    within_block_outdegree_distribution,
)
from .models import (
    AS_PRINTED,
    STANDARD_GWESP,
    BernoulliModel,
    BetaModel,
    CurvedErgm,
    LocalDependence,
    ThetaStarEstimate,
    beta_model_probs,
    estimate_theta_star,
    gwesp_eta,
    homogeneous_bernoulli,
    mcmc_sample_ergm,
    replicate_rng,
    sample,
    spec_from_json,
    spec_to_json,
)
from .oracle import (
    DependenceProfile,
    ExactDistribution,
    LemmaReport,
    StateSpaceTooLarge,
    compute_dependence_profile,
    edge_count_support,
    exact_distribution,
    exact_tail_prob,
    exact_theta_star,
    verify_lemma1,
)
from .bounds import (
    BoundReport,
    cor1_radius,
    cor2_radius,
    cor_bern_bound,
    thm1_cheb_radius,
    thm1_exp_radius,
    thm2_radius,
)
from .studies import (
    StudyConfig,
    StudyResult,
    emit_svg_boxplot,
    expected_degree_slope,
    generate_synthetic_classes,
    run_study1,
    run_study2,
    run_subsample,
)

__version__ = "0.1.0"
