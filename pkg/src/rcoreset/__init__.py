"""Per-machine graph summaries for maximum matching and minimum vertex cover on randomly split edge sets."""

from .coreset_matching import (
    MergeTrace,
    exact_merge,
    greedy_merge,
    matching_coreset,
    subsampled_matching_protocol,
)
from .coreset_vc import (
    HypotheticalTrace,
    PeelingTrace,
    RegimeWarning,
    VcCoreset,
    grouped_vc_protocol,
    hypothetical_peeling,
    merge_vc,
    sandwich_check,
    vc_coreset,
)
from .encoding import CommLedger, Message, message_bits
from .estimators import MatchingCoreset, SimultaneousProtocol, VertexCoverCoreset, check_graph
from .generators import (
    DegreeOneStats,
    HardMatchingInstance,
    HardVcInstance,
    degree_one_stats,
    gen_hard_matching,
    gen_hard_vc,
    gen_maximal_trap,
    gen_random_bipartite,
)
from .graph import (
    Graph,
    GraphError,
    GraphFormatError,
    Matching,
    degree,
    induced_degree_one_matching,
    load_graph,
)
from .matching import (
    brute_force_max_matching,
    maximal_matching,
    maximum_matching_bipartite,
    maximum_matching_general,
)
from .partition import Partition, adversarial_partition, random_k_partition, shard
from .protocol import ProtocolResult, run_simultaneous
from .rng import RngSeed
from .vertex_cover import brute_force_vc, exact_vc_bipartite, is_vertex_cover, two_approx_vc

__version__ = "0.1.0"
