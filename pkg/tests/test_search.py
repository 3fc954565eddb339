import itertools

import numpy as np
import pytest

from fwloops.core import GraphInstance, init_matrix
from fwloops.search import (
    BudgetExceededError,
    FamilyKind,
    InstanceFamily,
    _count_chunk,
    enumerate_family,
    find_min_repeats_extremum,
    fuzz_theorems,
    minimize_witness,
    unit_digraph,
)
from fwloops.variants import PassOrder, repeats_to_correct

from conftest import PATH7_LABELS, PATH4_LABELS

PERM = FamilyKind.PERMUTATION_PATH
UNIT = FamilyKind.ALL_UNIT_DIGRAPHS
RAND = FamilyKind.RANDOM_WEIGHTED


def test_permutation_family_sizes(path4):
    insts = list(enumerate_family(InstanceFamily(PERM, 4)))
    assert len(insts) == 24 and len(set(insts)) == 24
    assert path4 in insts
    assert len(list(enumerate_family(InstanceFamily(PERM, 1)))) == 1


def test_unit_digraph_family_sizes():
    insts = list(enumerate_family(InstanceFamily(UNIT, 2)))
    assert len(insts) == 4
    assert {frozenset((u, v) for u, v, _ in g.edges()) for g in insts} == {
        frozenset(),
        frozenset({(1, 2)}),
        frozenset({(2, 1)}),
        frozenset({(1, 2), (2, 1)}),
    }
    assert len(set(enumerate_family(InstanceFamily(UNIT, 3)))) == 64


def test_budget():
    with pytest.raises(BudgetExceededError, match="1073741824"):
        enumerate_family(InstanceFamily(UNIT, 6))
    with pytest.raises(BudgetExceededError):
        find_min_repeats_extremum(InstanceFamily(PERM, 9), PassOrder.IJK)


def test_fast_unit_digraph_path_matches_general_path():
    fam = InstanceFamily(UNIT, 4)
    for order in PassOrder:
        fast = _count_chunk((fam, order, 4, 0, fam.size))
        slow = [repeats_to_correct(unit_digraph(4, m), order, 4) or 0 for m in range(fam.size)]
        assert fast.tolist() == slow


@pytest.mark.parametrize(
    "n, order, top, labels",
    [
        (7, PassOrder.IJK, 3, PATH7_LABELS),
        (6, PassOrder.IJK, 2, None),
        (4, PassOrder.IKJ, 2, PATH4_LABELS),
        (3, PassOrder.IKJ, 1, None),
    ],
)
def test_permutation_extremum(n, order, top, labels):
    rep = find_min_repeats_extremum(InstanceFamily(PERM, n), order, 5)
    assert rep.max_repeats_observed == top
    assert rep.instances_examined == len(list(itertools.permutations(range(n))))
    assert sum(rep.histogram.values()) == rep.instances_examined
    assert rep.witness_count == len(rep.witnesses)
    if labels:
        assert GraphInstance.path(labels) in [g for g, _ in rep.witnesses]
    for g, r in rep.witnesses[:25]:
        assert repeats_to_correct(g, order, 5) == r


def test_report_is_deterministic_across_workers(monkeypatch):
    import fwloops.search

    monkeypatch.setattr(fwloops.search, "CHUNK", 500)
    fam = InstanceFamily(UNIT, 4)
    a = find_min_repeats_extremum(fam, PassOrder.IJK, workers=1)
    b = find_min_repeats_extremum(fam, PassOrder.IJK, workers=2)
    assert a == b


def test_max_witnesses_truncates():
    rep = find_min_repeats_extremum(InstanceFamily(PERM, 7), PassOrder.IJK, 5, max_witnesses=3)
    assert len(rep.witnesses) == 3 and rep.witness_count == 192


def test_fuzz_two_vertices_always_one_repeat():
    fam = InstanceFamily(RAND, 2, density=0.8, w_min=-5, w_max=20)
    rep = fuzz_theorems(fam, 200, seed=3)
    assert rep.ok and rep.instances_examined == 200
    for sub in rep.reports.values():
        assert sub.histogram == {1: 200}


def test_fuzz_zero_count():
    rep = fuzz_theorems(InstanceFamily(RAND, 5, density=0.5, w_min=-5, w_max=20), 0, seed=1)
    assert rep.ok and rep.instances_examined == 0 and rep.discarded == 0


def test_fuzz_is_deterministic_and_counts_discards():
    fam = InstanceFamily(RAND, 8, density=0.5, w_min=-5, w_max=20, n_min=2)
    a = fuzz_theorems(fam, 300, seed=42)
    b = fuzz_theorems(fam, 300, seed=42)
    assert a == b
    assert a.ok and a.discarded > 0
    assert a.reports[PassOrder.IJK].max_repeats_observed <= 3
    assert a.reports[PassOrder.IKJ].max_repeats_observed <= 2


def test_fuzz_unit_weights_histogram():
    rep = fuzz_theorems(InstanceFamily(RAND, 7, density=0.25), 5000, seed=7)
    assert rep.ok
    hist = rep.reports[PassOrder.IJK].histogram
    assert sum(hist.values()) == 5000 and max(hist) <= 3


@pytest.mark.slow
def test_fuzz_n10_weighted():
    fam = InstanceFamily(RAND, 10, density=0.4, w_min=-5, w_max=20)
    rep = fuzz_theorems(fam, 1000, seed=42)
    assert rep.ok
    assert rep.reports[PassOrder.IJK].max_repeats_observed <= 3
    assert rep.reports[PassOrder.IKJ].max_repeats_observed <= 2


def test_minimize_path4_is_already_minimal(path4):
    assert minimize_witness(path4, PassOrder.IKJ, 2) == path4


def test_minimize_drops_extra_edge(path7):
    extra = GraphInstance.from_edges(7, list(path7.edges()) + [(1, 7, 1)])
    r = repeats_to_correct(extra, PassOrder.IJK)
    small = minimize_witness(extra, PassOrder.IJK, r)
    assert repeats_to_correct(small, PassOrder.IJK) >= r
    assert small.n <= extra.n


def test_minimize_trivial():
    g = GraphInstance.from_edges(3, [(1, 2, 4), (2, 3, 1)])
    small = minimize_witness(g, PassOrder.KIJ, 1)
    assert small.n == 1
    assert repeats_to_correct(small, PassOrder.KIJ) == 1


def test_minimize_precondition(path4):
    with pytest.raises(ValueError):
        minimize_witness(path4, PassOrder.IKJ, 3)


def test_minimized_result_is_locally_minimal(path7):
    g = minimize_witness(path7, PassOrder.IJK, 3)
    assert repeats_to_correct(g, PassOrder.IJK) == 3
    for u, v, _ in g.edges():
        rows = [list(r) for r in g.weights]
        rows[u - 1][v - 1] = float("inf")
        h = GraphInstance(g.n, tuple(map(tuple, rows)))
        assert (repeats_to_correct(h, PassOrder.IJK) or 99) < 3
