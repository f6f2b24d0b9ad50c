"""Expander construction, congestion-bounded routing, connected graph
embeddings, and a solution-count-preserving binary-CSP compiler, with
brute-force oracles for every guarantee."""

from .compiler import (
    BagIndex,
    CompiledInstance,
    PipelineResult,
    build_bag_index,
    compile_instance,
    decode_assignment,
    encode_assignment,
    pipeline,
    select_host_size,
    to_padded_alphabet,
    tuple_rank,
    tuple_unrank,
)
from .config import DEFAULT_CONFIG, Config, load_config
from .csp import (
    Assignment,
    CspInstance,
    ExplicitRelation,
    IntensionalRelation,
    Relation,
    clique_instance,
    coloring_instance,
    count_satisfying,
    csp_from_json,
    csp_to_json,
    equality_relation,
    four_regular_coloring_instance,
    full_relation,
    inequality_relation,
    is_satisfied,
    iter_solutions,
    random_instance,
    regularize,
    solve_bruteforce,
)
from .embedding import (
    ConnectedEmbedding,
    DepthReport,
    EmbedResult,
    balanced_map,
    demand_graph,
    embed,
    verify_embedding,
)
from .errors import (
    BudgetError,
    CertificationError,
    DecodeDisagreementError,
    InputError,
    VerificationError,
)
from .expander import (
    CertifiedExpander,
    base_expander,
    bipartite_expander,
    cheeger_exact,
    cheeger_spectral_bound,
    second_eigenvalue,
    surgery,
)
from .graphs import (
    Bipartition,
    Graph,
    Multigraph,
    Path,
    double_cover,
    is_bipartite,
    matching_decomposition,
    min_odd_cycle,
    shortest_path,
)
from .routing import (
    CongestionProfile,
    DemandSet,
    RoutingSolution,
    accumulate_congestion,
    congestion_profile,
    route_matching,
)

__version__ = "0.1.0"
