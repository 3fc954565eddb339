"""Extended-integer weights, graph instances and distance matrices.

Weights are exact signed 64-bit integers or ``INF``.  ``INF`` is ``math.inf``
so it compares correctly against plain ints; finite sums that leave the
representable range raise :class:`WeightOverflowError` instead of wrapping.

Vertex labels are 1-based everywhere in the public API.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

import numpy as np
from numba import njit

INF = math.inf

Weight = Union[int, float]  # float only ever for INF

#: int64 max encodes INF inside arrays; the largest finite weight is one below.
INF_CODE = 2**63 - 1
MAX_FINITE = INF_CODE - 1
MIN_FINITE = -(2**63)


class WeightOverflowError(OverflowError):
    """A finite weight sum left the signed 64-bit range."""

    def __init__(self, a: Weight, b: Weight, where: str = ""):
        self.operands = (a, b)
        msg = f"weight overflow: {a} + {b}"
        if where:
            msg += f" ({where})"
        super().__init__(msg)


class NegativeCycleError(ValueError):
    """Raised when an operation requires an instance without negative cycles."""

    def __init__(self, cycle: Sequence[int]):
        self.cycle = tuple(cycle)
        super().__init__(f"negative cycle: {list(self.cycle)}")


def is_inf(x: Weight) -> bool:
    return x == INF


def check_weight(x) -> Weight:
    """Coerce ``x`` to a valid Weight or raise ``ValueError``."""
    if isinstance(x, float):
        if x == INF:
            return INF
        if x.is_integer():
            x = int(x)
        else:
            raise ValueError(f"non-integer weight {x!r}")
    if isinstance(x, (bool, np.bool_)):
        raise ValueError(f"non-integer weight {x!r}")
    if isinstance(x, np.integer):
        x = int(x)
    if not isinstance(x, int):
        raise ValueError(f"non-integer weight {x!r}")
    if not MIN_FINITE <= x <= MAX_FINITE:
        raise WeightOverflowError(x, 0, "weight out of range")
    return x


def weight_add(a: Weight, b: Weight) -> Weight:
    """``a + b`` with INF absorbing; raises on finite overflow."""
    if a == INF or b == INF:
        return INF
    s = a + b
    if not MIN_FINITE <= s <= MAX_FINITE:
        raise WeightOverflowError(a, b)
    return s


def _encode(x: Weight) -> int:
    return INF_CODE if x == INF else x


def _decode(x) -> Weight:
    x = int(x)
    return INF if x == INF_CODE else x


@dataclass(frozen=True)
class GraphInstance:
    """Complete digraph on vertices ``1..n`` with weight ``w(i, j)``.

    ``weights`` is the row-major n x n table (0-based storage).  Use
    :meth:`from_edges` to build one from a sparse edge list.
    """

    n: int
    weights: tuple[tuple[Weight, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if len(self.weights) != self.n or any(len(r) != self.n for r in self.weights):
            raise ValueError("weights must be an n x n table")
        rows = tuple(tuple(check_weight(x) for x in row) for row in self.weights)
        object.__setattr__(self, "weights", rows)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int, Weight]],
        self_loop: Weight = 0,
    ) -> "GraphInstance":
        """Absent pairs become INF, absent self-loops ``self_loop``.

        Duplicate pairs keep the minimum weight.
        """
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        table = [[INF] * n for _ in range(n)]
        seen = set()
        for u, v, w in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"vertex out of range in edge ({u}, {v})")
            w = check_weight(w)
            if (u, v) in seen:
                table[u - 1][v - 1] = min(table[u - 1][v - 1], w)
            else:
                table[u - 1][v - 1] = w
                seen.add((u, v))
        for i in range(n):
            if (i + 1, i + 1) not in seen:
                table[i][i] = self_loop
        return cls(n, tuple(tuple(r) for r in table))

    @classmethod
    def path(cls, labels: Sequence[int], weight: Weight = 1) -> "GraphInstance":
        """Directed path visiting ``labels`` in order, every edge ``weight``."""
        n = len(labels)
        if sorted(labels) != list(range(1, n + 1)):
            raise ValueError("labels must be a permutation of 1..n")
        return cls.from_edges(n, [(a, b, weight) for a, b in zip(labels, labels[1:])])

    def w(self, i: int, j: int) -> Weight:
        return self.weights[i - 1][j - 1]

    def edges(self) -> Iterator[tuple[int, int, Weight]]:
        """Finite off-diagonal edges plus nonzero self-loops, row-major."""
        for i, row in enumerate(self.weights, 1):
            for j, x in enumerate(row, 1):
                if x == INF:
                    continue
                if i == j and x == 0:
                    continue
                yield i, j, x

    def to_array(self) -> np.ndarray:
        return np.array(
            [[_encode(x) for x in row] for row in self.weights], dtype=np.int64
        )


class DistMatrix:
    """Immutable n x n matrix of weights, indexed ``d[i, j]`` with 1-based labels."""

    __slots__ = ("_a",)

    def __init__(self, data):
        a = np.array(data, dtype=np.int64, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError(f"expected a nonempty square matrix, got shape {a.shape}")
        a.setflags(write=False)
        self._a = a

    @classmethod
    def from_weights(cls, rows: Sequence[Sequence[Weight]]) -> "DistMatrix":
        return cls([[_encode(check_weight(x)) for x in r] for r in rows])

    @property
    def n(self) -> int:
        return self._a.shape[0]

    @property
    def array(self) -> np.ndarray:
        """Read-only int64 view; INF is stored as ``INF_CODE``."""
        return self._a

    def __getitem__(self, ij: tuple[int, int]) -> Weight:
        i, j = ij
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError(f"({i}, {j}) outside 1..{self.n}")
        return _decode(self._a[i - 1, j - 1])

    def rows(self) -> list[list[Weight]]:
        return [[_decode(x) for x in r] for r in self._a]

    def __eq__(self, other):
        if not isinstance(other, DistMatrix):
            return NotImplemented
        return self._a.shape == other._a.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self):
        return hash((self.n, self._a.tobytes()))

    def __le__(self, other: "DistMatrix") -> bool:
        """Entry-wise comparison."""
        _same_n(self, other)
        return bool(np.all(self._a <= other._a))

    def __ge__(self, other: "DistMatrix") -> bool:
        _same_n(self, other)
        return bool(np.all(self._a >= other._a))

    def diff(self, other: "DistMatrix") -> list[tuple[int, int, Weight, Weight]]:
        """Entries where the two matrices disagree, as ``(i, j, self, other)``."""
        _same_n(self, other)
        idx = np.argwhere(self._a != other._a)
        return [
            (int(i) + 1, int(j) + 1, _decode(self._a[i, j]), _decode(other._a[i, j]))
            for i, j in idx
        ]

    def __repr__(self):
        return f"DistMatrix({self.rows()!r})"


def _same_n(a: DistMatrix, b: DistMatrix) -> None:
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")


@dataclass(frozen=True)
class VertexPath:
    vertices: tuple[int, ...]

    def __post_init__(self):
        vs = tuple(int(v) for v in self.vertices)
        if not vs:
            raise ValueError("a path needs at least one vertex")
        for a, b in zip(vs, vs[1:]):
            if a == b:
                raise ValueError(f"consecutive repeated vertex {a}")
        object.__setattr__(self, "vertices", vs)

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def length(self, d: DistMatrix) -> Weight:
        """Total weight of the path using ``d`` entries as edge lengths."""
        total: Weight = 0
        for a, b in zip(self.vertices, self.vertices[1:]):
            total = weight_add(total, d[a, b])
        return total


def init_matrix(g: GraphInstance) -> DistMatrix:
    return DistMatrix(g.to_array())


def validate_no_negative_cycle(g: GraphInstance) -> tuple[int, ...] | None:
    """Return ``None`` when ``g`` has no negative cycle, else a witness cycle.

    The witness is a closed vertex sequence ``(v0, ..., v0)`` rotated to start
    at its smallest label; a negative self-loop ``i`` is reported as ``(i, i)``.
    """
    for i in range(1, g.n + 1):
        if g.w(i, i) < 0:
            return (i, i)
    pred = np.full(g.n, -1, dtype=np.int64)
    v = _negative_cycle_vertex(g.to_array(), pred)
    if v == -1:
        return None
    if v == -2:
        raise WeightOverflowError(MIN_FINITE, -1, "path weight underflow in cycle check")
    n = g.n
    for _ in range(n):  # walk back onto the cycle
        v = int(pred[v])
    cycle = [v]
    u = int(pred[v])
    while u != v:
        cycle.append(u)
        u = int(pred[u])
    cycle.reverse()
    k = cycle.index(min(cycle))
    cycle = cycle[k:] + cycle[:k]
    return tuple(c + 1 for c in cycle) + (cycle[0] + 1,)


@njit(cache=True)
def _negative_cycle_vertex(w, pred):
    # Bellman-Ford from a virtual source joined to every vertex by a 0 edge.
    # Returns a vertex relaxed in round n+1 (-1: none, -2: underflow).
    n = w.shape[0]
    dist = np.zeros(n, dtype=np.int64)
    for rnd in range(n + 1):
        last = -1
        for u in range(n):
            du = dist[u]
            for v in range(n):
                x = w[u, v]
                if u == v or x == INF_CODE:
                    continue
                if x < 0 and du < MIN_FINITE - x:
                    return -2
                if du + x < dist[v]:
                    dist[v] = du + x
                    pred[v] = u
                    last = v
        if last == -1:
            return -1
    return last


def require_no_negative_cycle(g: GraphInstance) -> None:
    cycle = validate_no_negative_cycle(g)
    if cycle is not None:
        raise NegativeCycleError(cycle)
