"""Edge-disjoint realizations of tree degree sequences.

Decision, construction, exact and approximate counting, almost-uniform
sampling, and the hardness gadgets tying the general problem to bipartite
degree-pair packing.
"""

from .degseq import (
    DegreeMatrix,
    DegreeSequence,
    SequenceClass,
    classify,
    is_graphical,
    is_tree_sequence,
    sum_sequences,
)
from .errors import (
    DimensionError,
    DomainError,
    InfeasibleError,
    InternalInvariantError,
    ResourceGuardError,
    TreePackError,
)
from .packing import (
    MultiInstance,
    PackingResult,
    common_edges,
    disjoint_hamiltonian_paths,
    kundu_packable,
    nonstar_restricted_tree,
    pack_caterpillars,
    pack_complementary_leaves,
    pack_multi,
)
from .reductions import (
    BipartitePairInstance,
    SimplePairInstance,
    add_dominating_vertex,
    add_pendant_gadget,
    bipartite_to_simple,
    brute_force_disjoint_decision,
    reduce_to_tree_sequence,
)
from .sampling import (
    EstimateReport,
    PairAnalysis,
    analyze_pair,
    estimate_disjoint_count,
    exact_disjoint_count,
    expected_common_general,
    required_samples,
    sample_disjoint_pair,
    tv_distance,
)
from .trees import (
    LabeledTree,
    PruferCode,
    count_trees,
    edge_probability,
    enumerate_caterpillars,
    enumerate_trees,
    is_caterpillar,
    prufer_decode,
    prufer_encode,
    random_tree,
)

__version__ = "0.1.0"
