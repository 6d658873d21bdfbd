"""Verification and search engine for the second neighborhood conjecture."""

from snw.digraph import (
    UNREACHABLE,
    Digraph,
    DistanceMatrix,
    distances,
    from_edges,
    girth,
    induced_subgraph,
    is_m_free,
    is_strongly_connected,
    kth_in_neighborhood,
    kth_out_neighborhood,
    parse_dg,
    set_kth_out_neighborhood,
    strongly_connected_components,
    to_dg,
)
from snw.seymour import (
    UNBOUNDED,
    analyze,
    best_lambda,
    edge_minimal_reduce,
    is_lambda_counterexample,
    minimal_reduce,
    seymour_vertices,
    subset_inequality_check,
    subset_seymour_search,
)

__version__ = "0.1.0"
