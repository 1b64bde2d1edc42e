"""matchspread: threshold predictors, spread certificates, and enumeration
diagnostics for perfect matchings in inhomogeneous random graphs."""

from .core import (
    GroundSet,
    ProbVector,
    SubsetFamily,
    boost_vector,
    boosted_hit_probability,
    expected_cover_count,
    faithful_threshold_map,
    falling_factorial,
    mu_exact,
    t_ell_transform,
    up_closure,
)
from .enumeration import (
    McKayEstimate,
    MomentReport,
    chung_lu_obstruction_moments,
    condition_report,
    count_graphs_exact,
    enumerate_graphs,
    gnd_isolated_moments,
    mckay_count,
    moment_diagnostics,
)
from .errors import ConfigError, InfeasibleSizeError, MatchspreadError
from .matching import (
    KERNEL_BACKEND,
    brute_force_pm_oracle,
    check_perfect_matching,
    count_isolated,
    has_perfect_matching,
    maximum_matching,
)
from .models import (
    BlockStructure,
    DegreeSequence,
    Graph,
    RngStream,
    chung_lu_probabilities,
    edge_ground_set,
    edge_item,
    erdos_gallai_graphical,
    sample_block_model,
    sample_chung_lu,
    sample_degree_sequence_graph,
    sample_product,
)
from .spectrum import SpectrumReport, bivalued_spectrum_has_pm, build_spectrum, critical_alpha
from .spread import (
    CoverSolution,
    PermutationMeasure,
    SpreadMeasure,
    block_permutation_spread_prob,
    cover_value_exact,
    forced_spread_check,
    fractional_cover_value,
    spread_implies_half,
    spread_q_construction,
    verify_q_spread,
)

__version__ = "0.1.0"
