"""Reference all-pairs distances that share no code with the loop variants.

Two routes: Bellman-Ford from every source, and exhaustive enumeration of
simple paths for tiny graphs.  They cross-check each other in the tests.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from fwloops.core import (
    INF,
    INF_CODE,
    MIN_FINITE,
    MAX_FINITE,
    DistMatrix,
    GraphInstance,
    NegativeCycleError,
    WeightOverflowError,
    require_no_negative_cycle,
    weight_add,
)

BRUTE_FORCE_MAX_N = 8


@njit(cache=True)
def bellman_ford_rows(w, out):
    """Fill ``out[s]`` with distances from ``s``.  Returns the first source
    that still relaxes after n-1 rounds (negative cycle), -2 on overflow,
    -1 when all is well."""
    n = w.shape[0]
    for s in range(n):
        dist = out[s]
        for v in range(n):
            dist[v] = INF_CODE
        dist[s] = 0
        for rnd in range(n):
            relaxed = False
            for u in range(n):
                du = dist[u]
                if du == INF_CODE:
                    continue
                for v in range(n):
                    x = w[u, v]
                    if u == v or x == INF_CODE:
                        continue
                    if (x > 0 and du > MAX_FINITE - x) or (x < 0 and du < MIN_FINITE - x):
                        return -2
                    if du + x < dist[v]:
                        dist[v] = du + x
                        relaxed = True
            if not relaxed:
                break
            if rnd == n - 1:
                return s
    return -1


def apsp_bellman_ford(g: GraphInstance) -> DistMatrix:
    """Shortest-path distances by Bellman-Ford from each source.

    Diagonal entries are 0 (the empty path); self-loop weights never shorten
    anything once negative cycles are excluded.
    """
    require_no_negative_cycle(g)
    return DistMatrix(bellman_ford_array(g.to_array()))


def bellman_ford_array(w: np.ndarray) -> np.ndarray:
    out = np.empty_like(w)
    r = bellman_ford_rows(w, out)
    if r == -2:
        raise WeightOverflowError(MIN_FINITE, -1, "path weight out of range")
    if r >= 0:
        raise NegativeCycleError((r + 1,))
    return out


def apsp_brute_force(g: GraphInstance) -> DistMatrix:
    """Minimum weight over all simple paths, by depth-first enumeration."""
    n = g.n
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")
    require_no_negative_cycle(g)
    best = [[INF] * n for _ in range(n)]

    def dfs(s: int, u: int, length, visited: list[bool]) -> None:
        if length < best[s][u]:
            best[s][u] = length
        for v in range(n):
            x = g.weights[u][v]
            if visited[v] or x == INF:
                continue
            visited[v] = True
            dfs(s, v, weight_add(length, x), visited)
            visited[v] = False

    for s in range(n):
        visited = [False] * n
        visited[s] = True
        dfs(s, s, 0, visited)
    return DistMatrix.from_weights(best)
