"""cpkit: detect, score, simulate and test core-periphery structure in graphs."""
__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .graph import (
    UNREACHABLE,
    DistanceRow,
    Graph,
    all_pairs_distances,
    bfs_distances,
    capacity,
    closeness_centrality,
    complete_graph,
    core_numbers,
    cycle_graph,
    degrees,
    empty_graph,
    ideal_cp_graph,
    k_core,
    path_counts_excluding,
    path_graph,
    star_graph,
)
from .io import format_edge_list, parse_edge_list, read_edge_list, write_edge_list
from .metrics import (
    CoreAssignment,
    CPProfile,
    CucuringuConfig,
    borgatti_rho,
    brusco_misfit,
    brusco_Z,
    cp_centralization,
    cp_profile,
    cucuringu_objective,
    dasilva_core_coefficient,
    holme_ccp,
    path_core_scores,
    persistence_probability,
)
from .generators import (
    BlockParams,
    HybridParams,
    LayeredParams,
    generate_chung_lu,
    generate_dcsbm,
    generate_er,
    generate_gnm,
    generate_hybrid,
    generate_layered,
    generate_logistic,
    generate_sbm,
    generate_sbm2,
    generate_sociability,
)
from .nulls import parametric_er, rewire_preserve_degrees, rewire_preserve_m
from .optimize import (
    BORGATTI,
    BRUSCO,
    BRUSCO_MISFIT,
    AnnealSchedule,
    Objective,
    cucuringu,
    degree_gap_estimator,
    greedy_restarts,
    greedy_switch,
    lip_solver,
    node_order_sweep,
    simulated_annealing,
)
from .infer import (
    DCSBMLik,
    EMResult,
    GibbsChain,
    Prior,
    dcsbm_greedy_fit,
    dcsbm_loglik,
    gibbs_sampler,
    loglik_sbm2,
    newman_em,
    posterior_odds,
)
from .significance import NullSpec, TestResult, permutation_test, rossa_zscore, surprise_pvalue
