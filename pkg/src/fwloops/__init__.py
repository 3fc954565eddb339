"""Floyd-Warshall loop orders, their repeat counts, and the tooling to check them."""

from fwloops.core import (
    INF,
    DistMatrix,
    GraphInstance,
    NegativeCycleError,
    VertexPath,
    WeightOverflowError,
    init_matrix,
    validate_no_negative_cycle,
    weight_add,
)
from fwloops.oracle import apsp_bellman_ford, apsp_brute_force
from fwloops.variants import PassOrder, RunTrace, relax_pass, repeats_to_correct, run_repeated

__all__ = [
    "INF",
    "DistMatrix",
    "GraphInstance",
    "NegativeCycleError",
    "PassOrder",
    "RunTrace",
    "VertexPath",
    "WeightOverflowError",
    "apsp_bellman_ford",
    "apsp_brute_force",
    "init_matrix",
    "relax_pass",
    "repeats_to_correct",
    "run_repeated",
    "validate_no_negative_cycle",
    "weight_add",
]
