"""Shape of shortest paths in the graph whose edges are the matrix entries.

After one IJK pass every reachable pair should have a shortest path whose
labels rise to a peak and then fall; after one IKJ pass, one whose labels rise
strictly up to the penultimate vertex.  Both checks are exact dynamic programs
over vertices sorted by label.
"""

from __future__ import annotations

import enum

from fwloops.core import INF, DistMatrix, VertexPath, Weight, weight_add


class PathShape(enum.Enum):
    UPPER_UNIMODAL = "upper-unimodal"
    INCREASING_EXCEPT_LAST = "increasing-except-last"


def has_shape(labels, shape: PathShape) -> bool:
    """Shape predicate on a label sequence.  Sequences of 1 or 2 labels always pass."""
    vs = list(labels)
    if shape is PathShape.INCREASING_EXCEPT_LAST:
        return all(a < b for a, b in zip(vs[:-1], vs[1:-1]))
    h = 0
    while h + 1 < len(vs) and vs[h] < vs[h + 1]:
        h += 1
    return all(a > b for a, b in zip(vs[h:], vs[h + 1 :]))


def _increasing_from(d: list[list[Weight]], s: int):
    """Best strictly increasing path from ``s`` to each ``v >= s`` (0-based)."""
    n = len(d)
    best = [INF] * n
    prev = [-1] * n
    best[s] = 0
    for v in range(s + 1, n):
        for u in range(s, v):
            c = weight_add(best[u], d[u][v])
            if c < best[v]:
                best[v], prev[v] = c, u
    return best, prev


def _decreasing_to(d: list[list[Weight]], t: int):
    """Best strictly decreasing path from each ``v >= t`` down to ``t``."""
    n = len(d)
    best = [INF] * n
    nxt = [-1] * n
    best[t] = 0
    for v in range(t + 1, n):
        for u in range(t, v):
            c = weight_add(d[v][u], best[u])
            if c < best[v]:
                best[v], nxt[v] = c, u
    return best, nxt


def _check(d: DistMatrix, target: DistMatrix, s: int, t: int) -> None:
    if d.n != target.n:
        raise ValueError(f"dimension mismatch: {d.n} vs {target.n}")
    for v in (s, t):
        if not 1 <= v <= d.n:
            raise ValueError(f"vertex {v} outside 1..{d.n}")


def _best_shaped(rows, s: int, t: int, shape: PathShape):
    """Minimum length of a shaped walk from s to t and the walk itself (0-based)."""
    if s == t:
        return 0, [s]
    inc, prev = _increasing_from(rows, s)

    def up_to(v):
        out = [v]
        while out[-1] != s:
            out.append(prev[out[-1]])
        return out[::-1]

    best, walk = INF, None
    if shape is PathShape.INCREASING_EXCEPT_LAST:
        for u in range(s, len(rows)):
            if u == t:
                continue
            c = weight_add(inc[u], rows[u][t])
            if c < best:
                best, walk = c, (u, None)
        return best, (up_to(walk[0]) + [t] if walk else None)
    dec, nxt = _decreasing_to(rows, t)
    for h in range(max(s, t), len(rows)):
        c = weight_add(inc[h], dec[h])
        if c < best:
            best, walk = c, h
    if walk is None:
        return best, None
    path = up_to(walk)
    while path[-1] != t:
        path.append(nxt[path[-1]])
    return best, path


def _drop_cycles(walk: list[int]) -> list[int]:
    # Cutting a closed sub-walk keeps both shapes intact.
    out: list[int] = []
    for v in walk:
        if v in out:
            del out[out.index(v) + 1 :]
        else:
            out.append(v)
    return out


def exists_shaped_shortest(
    d: DistMatrix, target: DistMatrix, s: int, t: int, shape: PathShape
) -> bool:
    """True iff the graph with edge lengths ``d`` has an s-t path of length
    ``target[s, t]`` whose labels have the given shape."""
    _check(d, target, s, t)
    best, _ = _best_shaped(d.rows(), s - 1, t - 1, shape)
    return best == target[s, t]


def enumerate_shaped_witness(
    d: DistMatrix, target: DistMatrix, s: int, t: int, shape: PathShape
) -> VertexPath | None:
    _check(d, target, s, t)
    best, walk = _best_shaped(d.rows(), s - 1, t - 1, shape)
    if best != target[s, t]:
        return None
    if walk is None:  # unreachable: the INF entry itself is the shortest edge
        return VertexPath((s, t))
    return VertexPath(tuple(v + 1 for v in _drop_cycles(walk)))


def shape_failures(
    d: DistMatrix, target: DistMatrix, shape: PathShape
) -> list[tuple[int, int]]:
    """Reachable pairs lacking a shaped shortest path in ``d``."""
    if d.n != target.n:
        raise ValueError(f"dimension mismatch: {d.n} vs {target.n}")
    rows = d.rows()
    n = d.n
    inc = [_increasing_from(rows, s)[0] for s in range(n)]
    dec = [_decreasing_to(rows, t)[0] for t in range(n)]
    bad = []
    for s in range(n):
        for t in range(n):
            want = target[s + 1, t + 1]
            if want == INF:
                continue
            if s == t:
                cands = (0,)
            elif shape is PathShape.INCREASING_EXCEPT_LAST:
                cands = (weight_add(inc[s][u], rows[u][t]) for u in range(s, n) if u != t)
            else:
                cands = (weight_add(inc[s][h], dec[t][h]) for h in range(max(s, t), n))
            if min(cands, default=INF) != want:
                bad.append((s + 1, t + 1))
    return bad
