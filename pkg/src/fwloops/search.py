"""Counterexample search over finite instance families, fuzzing, and shrinking.

Exhaustive families are split into index ranges and evaluated on a process
pool (``FW_WORKERS`` caps its size).  Chunks are merged in enumeration order,
so reports do not depend on the worker count.
"""

from __future__ import annotations

import enum
import itertools
import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
from numba import njit

from fwloops.core import (
    INF,
    INF_CODE,
    GraphInstance,
    init_matrix,
    validate_no_negative_cycle,
)
from fwloops.oracle import apsp_bellman_ford, bellman_ford_rows
from fwloops.variants import (
    PassOrder,
    default_cap,
    repeats_inplace,
    repeats_to_correct,
    run_repeated,
)

MAX_PERMUTATION_N = 8
MAX_UNIT_DIGRAPH_N = 5
CHUNK = 1 << 15


class BudgetExceededError(ValueError):
    pass


class FamilyKind(enum.Enum):
    PERMUTATION_PATH = "perm-path"
    ALL_UNIT_DIGRAPHS = "unit-digraphs"
    RANDOM_WEIGHTED = "random"


@dataclass(frozen=True)
class InstanceFamily:
    """A family of instances.

    For ``RANDOM_WEIGHTED`` the vertex count is drawn uniformly from
    ``n_min..n`` (``n_min`` defaults to ``n``), each ordered pair ``i != j``
    carries an edge with probability ``density``, and edge weights are uniform
    in ``w_min..w_max``.  The exhaustive kinds use only ``n``.
    """

    kind: FamilyKind
    n: int
    density: float = 0.5
    w_min: int = 1
    w_max: int = 1
    n_min: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.kind is FamilyKind.RANDOM_WEIGHTED:
            if not 0.0 <= self.density <= 1.0:
                raise ValueError(f"density must be in [0, 1], got {self.density}")
            if self.w_min > self.w_max:
                raise ValueError("w_min must not exceed w_max")
            if not 1 <= self.low_n <= self.n:
                raise ValueError(f"n_min must be in 1..{self.n}")

    @property
    def low_n(self) -> int:
        return self.n if self.n_min is None else self.n_min

    @property
    def size(self) -> int | None:
        """Number of instances, ``None`` for the unbounded random stream."""
        if self.kind is FamilyKind.PERMUTATION_PATH:
            return math.factorial(self.n)
        if self.kind is FamilyKind.ALL_UNIT_DIGRAPHS:
            return 1 << (self.n * (self.n - 1))
        return None

    def describe(self) -> str:
        if self.kind is FamilyKind.RANDOM_WEIGHTED:
            return (
                f"random n={self.low_n}..{self.n} density={self.density} "
                f"weights={self.w_min}..{self.w_max}"
            )
        return f"{self.kind.value} n={self.n}"


def check_budget(family: InstanceFamily) -> None:
    limit = {
        FamilyKind.PERMUTATION_PATH: MAX_PERMUTATION_N,
        FamilyKind.ALL_UNIT_DIGRAPHS: MAX_UNIT_DIGRAPH_N,
    }.get(family.kind)
    if limit is not None and family.n > limit:
        raise BudgetExceededError(
            f"{family.describe()} has {family.size} instances; "
            f"budget allows n <= {limit}"
        )


def unit_digraph(n: int, mask: int) -> GraphInstance:
    """Bit ``b`` of ``mask`` toggles the b-th off-diagonal pair in row-major order."""
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    return GraphInstance.from_edges(n, [(i, j, 1) for b, (i, j) in enumerate(pairs) if mask >> b & 1])


def random_instances(family: InstanceFamily, seed: int) -> Iterator[GraphInstance]:
    """Endless seeded stream; may include instances with negative cycles."""
    rng = np.random.default_rng(seed)
    while True:
        n = int(rng.integers(family.low_n, family.n + 1))
        present = rng.random((n, n)) < family.density
        weights = rng.integers(family.w_min, family.w_max + 1, size=(n, n))
        rows = [
            [0 if i == j else (int(weights[i, j]) if present[i, j] else INF) for j in range(n)]
            for i in range(n)
        ]
        yield GraphInstance(n, tuple(map(tuple, rows)))


def enumerate_family(family: InstanceFamily, seed: int = 0) -> Iterator[GraphInstance]:
    """Every instance of an exhaustive family once, in lexicographic order.

    Permutation paths follow ``itertools.permutations``; unit digraphs follow
    the adjacency bitmask.  Random families yield the endless seeded stream.
    """
    check_budget(family)
    return _instances(family, 0, family.size, seed)


def _instances(family: InstanceFamily, start: int, stop: int | None, seed: int = 0):
    if family.kind is FamilyKind.PERMUTATION_PATH:
        perms = itertools.permutations(range(1, family.n + 1))
        return (GraphInstance.path(p) for p in itertools.islice(perms, start, stop))
    if family.kind is FamilyKind.ALL_UNIT_DIGRAPHS:
        return (unit_digraph(family.n, m) for m in range(start, stop))
    return itertools.islice(random_instances(family, seed), start, stop)


@njit(cache=True)
def _unit_digraph_counts(n, start, stop, order_code, cap, out):
    d = np.empty((n, n), dtype=np.int64)
    w = np.empty((n, n), dtype=np.int64)
    target = np.empty((n, n), dtype=np.int64)
    err = np.zeros(3, dtype=np.int64)
    for idx in range(stop - start):
        mask = start + idx
        b = 0
        for i in range(n):
            for j in range(n):
                if i == j:
                    w[i, j] = 0
                else:
                    w[i, j] = 1 if (mask >> b) & 1 else INF_CODE
                    b += 1
        bellman_ford_rows(w, target)
        d[:, :] = w
        out[idx] = repeats_inplace(d, order_code, cap, target, err)


def _count_chunk(args) -> np.ndarray:
    """Repeat counts for instances ``start..stop``; 0 marks cap exceeded."""
    family, order, cap, start, stop = args
    out = np.zeros(stop - start, dtype=np.int64)
    if family.kind is FamilyKind.ALL_UNIT_DIGRAPHS:
        _unit_digraph_counts(family.n, start, stop, order.code, cap, out)
        return out
    for idx, g in enumerate(_instances(family, start, stop)):
        out[idx] = repeats_to_correct(g, order, cap) or 0
    return out


def worker_count() -> int:
    env = os.environ.get("FW_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _all_counts(family: InstanceFamily, order: PassOrder, cap: int, workers: int) -> np.ndarray:
    total = family.size
    jobs = [(family, order, cap, a, min(a + CHUNK, total)) for a in range(0, total, CHUNK)]
    if workers <= 1 or len(jobs) == 1:
        parts = [_count_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_count_chunk, jobs))
    return np.concatenate(parts)


@dataclass
class SearchReport:
    family: InstanceFamily
    order: PassOrder
    cap: int
    max_repeats_observed: int
    witnesses: list[tuple[GraphInstance, int]]
    instances_examined: int
    histogram: dict[int, int] = field(default_factory=dict)
    witness_count: int = 0
    #: instances that did not reach the true distances within ``cap`` passes
    cap_exceeded: list[GraphInstance] = field(default_factory=list)

    @property
    def bound_respected(self) -> bool:
        return not self.cap_exceeded and self.max_repeats_observed <= self.order.bound


def find_min_repeats_extremum(
    family: InstanceFamily,
    order: PassOrder,
    cap: int | None = None,
    max_witnesses: int | None = None,
    workers: int | None = None,
) -> SearchReport:
    """Repeat count of every instance in an exhaustive family, with the
    instances attaining the maximum.

    ``max_witnesses`` truncates the stored witness list (``witness_count``
    keeps the full tally).
    """
    check_budget(family)
    if family.size is None:
        raise ValueError("random families are not exhaustive; use fuzz_theorems")
    if cap is None:
        cap = default_cap(family.n)
    counts = _all_counts(family, order, cap, workers or worker_count())

    hist = Counter(int(c) for c in counts[counts > 0])
    top = max(hist, default=0)
    over = np.flatnonzero(counts == 0)
    at_top = np.flatnonzero(counts == top) if top else np.array([], dtype=np.int64)
    keep = at_top if max_witnesses is None else at_top[:max_witnesses]
    return SearchReport(
        family=family,
        order=order,
        cap=cap,
        max_repeats_observed=top,
        witnesses=[(_instance_at(family, int(i)), top) for i in keep],
        instances_examined=len(counts),
        histogram=dict(sorted(hist.items())),
        witness_count=len(at_top),
        cap_exceeded=[_instance_at(family, int(i)) for i in over],
    )


def _instance_at(family: InstanceFamily, index: int) -> GraphInstance:
    return next(iter(_instances(family, index, index + 1)))


@dataclass
class Violation:
    instance: GraphInstance
    order: PassOrder
    repeats: int | None  # None: cap exceeded
    minimized: GraphInstance | None = None


@dataclass
class FuzzReport:
    family: InstanceFamily
    seed: int
    instances_examined: int
    discarded: int
    reports: dict[PassOrder, SearchReport]
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations


def fuzz_theorems(
    family: InstanceFamily,
    count: int,
    seed: int,
    max_witnesses: int = 5,
    minimize: bool = True,
) -> FuzzReport:
    """Check KIJ once, IKJ twice and IJK three times against the oracle on
    ``count`` random instances without negative cycles.

    Instances with a negative cycle are skipped and tallied in ``discarded``.
    """
    if family.kind is not FamilyKind.RANDOM_WEIGHTED:
        raise ValueError("fuzzing needs a RANDOM_WEIGHTED family")
    if count < 0:
        raise ValueError("count must be >= 0")
    orders = (PassOrder.KIJ, PassOrder.IJK, PassOrder.IKJ)
    hist = {o: Counter() for o in orders}
    wit: dict[PassOrder, list[tuple[GraphInstance, int]]] = {o: [] for o in orders}
    over: dict[PassOrder, list[GraphInstance]] = {o: [] for o in orders}
    violations: list[Violation] = []
    examined = discarded = 0
    stream = random_instances(family, seed)
    while examined < count:
        g = next(stream)
        if validate_no_negative_cycle(g) is not None:
            discarded += 1
            continue
        examined += 1
        target = apsp_bellman_ford(g)
        init = init_matrix(g)
        for o in orders:
            cap = default_cap(g.n)
            r = repeats_to_correct(g, o, cap, target)
            fixed = run_repeated(init, o, o.bound).final
            if r is None:
                over[o].append(g)
            else:
                hist[o][r] += 1
                if not wit[o] or r > wit[o][0][1]:
                    wit[o] = [(g, r)]
                elif r == wit[o][0][1] and len(wit[o]) < max_witnesses:
                    wit[o].append((g, r))
            if r is None or r > o.bound or fixed != target:
                v = Violation(g, o, r)
                if minimize and r is not None:
                    v.minimized = minimize_witness(g, o, r)
                violations.append(v)

    reports = {
        o: SearchReport(
            family=family,
            order=o,
            cap=default_cap(family.n),
            max_repeats_observed=max(hist[o], default=0),
            witnesses=wit[o],
            instances_examined=examined,
            histogram=dict(sorted(hist[o].items())),
            witness_count=hist[o][max(hist[o])] if hist[o] else 0,
            cap_exceeded=over[o],
        )
        for o in orders
    }
    return FuzzReport(family, seed, examined, discarded, reports, violations)


def _delete_vertex(g: GraphInstance, v: int) -> GraphInstance:
    keep = [i for i in range(g.n) if i != v - 1]
    return GraphInstance(g.n - 1, tuple(tuple(g.weights[i][j] for j in keep) for i in keep))


def _delete_edge(g: GraphInstance, u: int, v: int) -> GraphInstance:
    rows = [list(r) for r in g.weights]
    rows[u - 1][v - 1] = INF
    return GraphInstance(g.n, tuple(map(tuple, rows)))


def minimize_witness(
    g: GraphInstance, order: PassOrder, repeats: int, cap: int | None = None
) -> GraphInstance:
    """Greedily drop vertices (relabelling the rest in order) and edges while
    the repeat count stays at least ``repeats``.

    Cap-exceeded candidates count as keeping the repeat count.
    """
    got = repeats_to_correct(g, order, cap)
    if got != repeats:
        raise ValueError(f"instance needs {got} {order} repeats, not {repeats}")

    def keeps(h: GraphInstance) -> bool:
        r = repeats_to_correct(h, order, cap)
        return r is None or r >= repeats

    changed = True
    while changed:
        changed = False
        for v in range(g.n, 0, -1):
            if 1 < g.n and v <= g.n:
                h = _delete_vertex(g, v)
                if keeps(h):
                    g, changed = h, True
        for u, v, _ in list(g.edges()):
            if u != v:
                h = _delete_edge(g, u, v)
                if keeps(h):
                    g, changed = h, True
    return g
