"""The correct KIJ pass and the two misordered IJK / IKJ passes.

Each pass runs the triple loop over one shared matrix, so a relaxation sees
every earlier update of the same pass.  The loop nests live in numba kernels
that operate on the int64 encoding from :mod:`fwloops.core`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numba import njit

from fwloops.core import (
    INF_CODE,
    MAX_FINITE,
    MIN_FINITE,
    DistMatrix,
    GraphInstance,
    WeightOverflowError,
    init_matrix,
    require_no_negative_cycle,
)


class PassOrder(enum.Enum):
    KIJ = "kij"
    IJK = "ijk"
    IKJ = "ikj"

    @property
    def code(self) -> int:
        return _CODES[self]

    @property
    def bound(self) -> int:
        """Number of repeats that always suffices for this order."""
        return _BOUNDS[self]

    def __str__(self):
        return self.value


_CODES = {PassOrder.KIJ: 0, PassOrder.IJK: 1, PassOrder.IKJ: 2}
_BOUNDS = {PassOrder.KIJ: 1, PassOrder.IJK: 3, PassOrder.IKJ: 2}


@njit(inline="always")
def _update(d, i, k, j, err):
    # d[i, j] <- min(d[i, j], d[i, k] + d[k, j]); 1 if decreased, -1 on overflow
    x = d[i, k]
    y = d[k, j]
    if x == INF_CODE or y == INF_CODE:
        return 0
    if (y > 0 and x > MAX_FINITE - y) or (y < 0 and x < MIN_FINITE - y):
        err[0] = i
        err[1] = k
        err[2] = j
        return -1
    s = x + y
    if s < d[i, j]:
        d[i, j] = s
        return 1
    return 0


@njit(cache=True)
def _pass_kij(d, err):
    n = d.shape[0]
    changed = 0
    for k in range(n):
        for i in range(n):
            for j in range(n):
                r = _update(d, i, k, j, err)
                if r < 0:
                    return -1
                changed |= r
    return changed


@njit(cache=True)
def _pass_ijk(d, err):
    n = d.shape[0]
    changed = 0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                r = _update(d, i, k, j, err)
                if r < 0:
                    return -1
                changed |= r
    return changed


@njit(cache=True)
def _pass_ikj(d, err):
    n = d.shape[0]
    changed = 0
    for i in range(n):
        for k in range(n):
            for j in range(n):
                r = _update(d, i, k, j, err)
                if r < 0:
                    return -1
                changed |= r
    return changed


@njit(cache=True)
def run_pass_inplace(d, order_code, err):
    """One pass over ``d`` in place: 1 changed, 0 unchanged, -1 overflow."""
    if order_code == 0:
        return _pass_kij(d, err)
    if order_code == 1:
        return _pass_ijk(d, err)
    return _pass_ikj(d, err)


@njit(cache=True)
def repeats_inplace(d, order_code, cap, target, err):
    """Passes until ``d == target``: the count, 0 if ``cap`` ran out, -1 on overflow."""
    for k in range(1, cap + 1):
        if run_pass_inplace(d, order_code, err) < 0:
            return -1
        if np.array_equal(d, target):
            return k
    return 0


def _overflow(d: np.ndarray, err: np.ndarray) -> WeightOverflowError:
    i, k, j = (int(x) for x in err)
    return WeightOverflowError(
        int(d[i, k]), int(d[k, j]), f"relaxing d[{i + 1},{j + 1}] via k={k + 1}"
    )


def relax_pass(d: DistMatrix, order: PassOrder) -> tuple[DistMatrix, bool]:
    """Run one full pass; returns the new matrix and whether any entry decreased."""
    a = np.array(d.array)
    err = np.zeros(3, dtype=np.int64)
    r = run_pass_inplace(a, order.code, err)
    if r < 0:
        raise _overflow(a, err)
    return DistMatrix(a), bool(r)


@dataclass(frozen=True)
class RunTrace:
    snapshots: tuple[DistMatrix, ...]
    changed: tuple[bool, ...]

    @property
    def final(self) -> DistMatrix:
        return self.snapshots[-1]

    def __len__(self):
        return len(self.snapshots)


def run_repeated(d: DistMatrix, order: PassOrder, repeats: int) -> RunTrace:
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    snaps, flags = [], []
    for _ in range(repeats):
        d, changed = relax_pass(d, order)
        snaps.append(d)
        flags.append(changed)
    return RunTrace(tuple(snaps), tuple(flags))


def default_cap(n: int) -> int:
    return max(3, n)


def repeats_to_correct(
    g: GraphInstance,
    order: PassOrder,
    cap: int | None = None,
    target: DistMatrix | None = None,
) -> int | None:
    """Smallest number of passes (at least one) after which ``d`` holds the
    true distances, or ``None`` if ``cap`` passes do not get there.

    ``target`` may carry precomputed oracle distances.  Raises
    :class:`~fwloops.core.NegativeCycleError` for invalid instances.
    """
    from fwloops.oracle import apsp_bellman_ford

    if cap is None:
        cap = default_cap(g.n)
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    if target is None:
        target = apsp_bellman_ford(g)
    else:
        require_no_negative_cycle(g)
    a = np.array(init_matrix(g).array)
    err = np.zeros(3, dtype=np.int64)
    r = repeats_inplace(a, order.code, cap, target.array, err)
    if r < 0:
        raise _overflow(a, err)
    return r or None
