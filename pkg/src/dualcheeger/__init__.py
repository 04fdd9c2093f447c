"""Multi-way Cheeger and dual Cheeger constants, spectra and clustering on small graphs."""

__version__ = "0.1.0"

from .exceptions import BudgetError, DomainError, ParseError, PipelineError
from .graph import (
    GENERATOR_KINDS,
    SubBipartition,
    Subpartition,
    WeightedGraph,
    boundary_measure,
    contract_edge,
    disjoint_union,
    dominant_bipartition,
    dual_expansion,
    expansion,
    generate,
    internal_weight,
    volume,
)
from .spectral import EigenSystem, EmbeddingMap, dual_rayleigh, eigensystem, jacobi_eigh, rayleigh, top_embedding
from .exact import (
    CheegerProfile,
    DualCheegerProfile,
    cheeger_profile,
    check_bipartite_witness,
    dual_cheeger_profile,
    h_exact,
    hbar_exact,
    hbar_star_exact,
)
from .sweep import SignedDuplicationGraph, build_duplication, cheeger_sweep, dual_sweep
from .projective import (
    Certificate,
    PipelineParams,
    ProjectiveSpace,
    best_coordinate,
    cutoff_localize,
    extract_sub_bipartition,
    merge_heavy_clusters,
    padded_random_partition,
    rough_distance,
    spreading_bound_check,
)
from .markov import FiniteMarkovOperator, check_markov_hci, from_graph, j_measure, markov_profiles, metropolis
from .verify import CheckResult, cycle_suite, default_corpus, interlacing_check, run_suite
from .estimators import CheegerProfiler, DualCheegerClustering, TopEigenEmbedding
