"""Structural controllability of temporal networks.

Driver-node detection via incremental max-flow on the time-layered graph,
plus edge-role classification and robustness analysis under edge attacks.
"""

__version__ = "0.1.0"

from ._kernels import active_backend, set_backend
from .controllability import (
    DimensionCache,
    FlowSession,
    check_submodular,
    controllable_dimension,
    is_fully_controllable,
)
from .detect import (
    BruteForceResult,
    DriverSelection,
    UncontrollableError,
    brute_force,
    check_bound,
    greedy_baseline,
    multi_solutions,
    otaha,
)
from .edge_analysis import (
    AttackTrace,
    EdgeClassification,
    EdgeRole,
    attack_simulation,
    classify_edges,
    edge_betweenness,
)
from .generate import GeneratorSpec, er_temporal, generate, scale_free_temporal
from .oracle import NumericRealization, numeric_rank, rank_dimension, realize
from .temporal_graph import (
    EdgeListParseError,
    LayeredFlowGraph,
    TemporalNetwork,
    build_layered,
    from_edges,
    parse_temporal_edgelist,
)

__all__ = [
    "AttackTrace",
    "BruteForceResult",
    "DimensionCache",
    "DriverSelection",
    "EdgeClassification",
    "EdgeListParseError",
    "EdgeRole",
    "FlowSession",
    "GeneratorSpec",
    "LayeredFlowGraph",
    "NumericRealization",
    "TemporalNetwork",
    "UncontrollableError",
    "active_backend",
    "attack_simulation",
    "brute_force",
    "build_layered",
    "check_bound",
    "check_submodular",
    "classify_edges",
    "controllable_dimension",
    "edge_betweenness",
    "er_temporal",
    "from_edges",
    "generate",
    "greedy_baseline",
    "is_fully_controllable",
    "multi_solutions",
    "numeric_rank",
    "otaha",
    "parse_temporal_edgelist",
    "rank_dimension",
    "realize",
    "scale_free_temporal",
    "set_backend",
]
