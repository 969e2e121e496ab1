from __future__ import annotations

import json
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from advnet import bounds, instances, netgraph, reduce, search
from advnet.errors import InvalidCutPair, NotSimple3Level
from advnet.netgraph import CutPair, LevelMatrices

RELAY_PAIR = CutPair(frozenset({0, 1, 8}), frozenset({4, 9}), "T1")
WIDE_PAIR = CutPair(frozenset({0, 6, 7, 8, 9}), frozenset({0, 13, 14, 15}), "T1")


def test_hexagon_associated():
    assoc = reduce.associate_2level(instances.hexagon())
    assert (assoc.a, assoc.b) == ((4, 2), (2, 2))
    assert assoc.vulnerable_all


def test_relay_induced_network():
    ind = reduce.induce_3level(instances.two_terminal_relay(), RELAY_PAIR)
    assert ind.layer1 == (0, 1, 8) and ind.layer2 == (4, 9)
    assert len(ind.network.source_edges) == 3
    assert len(ind.network.in_edges["T"]) == 2
    assoc = reduce.associate_2level(ind.network)
    assert sorted(zip(assoc.a, assoc.b)) == [(1, 1), (2, 1)]


def test_wide_induced_network():
    ind = reduce.induce_3level(instances.two_terminal_wide(), WIDE_PAIR)
    assoc = reduce.associate_2level(ind.network)
    assert sorted(zip(assoc.a, assoc.b)) == [(1, 1), (4, 3)]


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_relay_bound(q):
    rep, chain = reduce.double_cut_bound(instances.two_terminal_relay(), 1, [RELAY_PAIR], q=q)
    assert rep.value == pytest.approx(math.log(q - 1, q) if q > 2 else 0.0)
    assert [s["tag"] for s in chain.stages] == [
        "input", "cut-pair", "induced-3level", "associated-2level"
    ]
    json.loads(chain.dumps())


def test_wide_bound():
    rep, _ = reduce.double_cut_bound(instances.two_terminal_wide(), 1, [WIDE_PAIR])
    assert rep.strict and rep.value == 3 and str(rep) == "< 3"


def test_auto_mode_finds_the_same_bounds():
    rep, _ = reduce.double_cut_bound(instances.two_terminal_relay(), 1, q=3)
    assert rep.value == pytest.approx(math.log(2, 3))
    rep, _ = reduce.double_cut_bound(instances.two_terminal_wide(), 1)
    assert str(rep) == "< 3"


def test_auto_mode_deterministic():
    net = instances.two_terminal_relay()
    a = reduce.double_cut_bound(net, 1, q=3)[1].dumps()
    b = reduce.double_cut_bound(net, 1, q=3)[1].dumps()
    assert a == b
    pairs = reduce.auto_pairs(net, max_pairs=5)
    assert len(pairs) == 5


def test_identity_reduction():
    net = instances.hexagon()
    pair = CutPair(frozenset(net.source_edges), frozenset(net.in_edges["T"]), "T")
    ind = reduce.induce_3level(net, pair)
    assert netgraph.detect_levels(ind.network) == netgraph.detect_levels(net)
    assert ind.network.vulnerable == net.vulnerable


def test_single_edge_cut_without_errors():
    net = instances.three_parallel()  # edge 3 is the unprotected edge V -> T
    pair = CutPair(frozenset({3}), frozenset({3}), "T")
    rep, _ = reduce.double_cut_bound(net, 1, [pair])
    assert rep.value == 1


def test_errors():
    with pytest.raises(NotSimple3Level):
        reduce.associate_2level(instances.two_terminal_relay())
    with pytest.raises(InvalidCutPair):
        reduce.induce_3level(
            instances.two_terminal_relay(), CutPair(frozenset({4, 9}), frozenset({0, 1, 8}), "T1")
        )


def random_simple_3level(seed):
    rng = random.Random(seed)
    n1, n2 = rng.randint(1, 5), rng.randint(1, 4)
    mid = [[0] * n2 for _ in range(n1)]
    for i in range(n1):
        mid[i][rng.randrange(n2)] = 1
    for j in range(n2):
        mid[rng.randrange(n1)][j] = 1
    for _ in range(rng.randint(0, 3)):
        mid[rng.randrange(n1)][rng.randrange(n2)] = 1
    lm = LevelMatrices.of([[1] * n1], mid, [[1]] * n2)
    return netgraph.from_level_matrices(lm, "source"), n1, n2


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**30))
def test_associated_conserves_edge_counts(seed):
    net, n1, n2 = random_simple_3level(seed)
    assoc = reduce.associate_2level(net)
    assert sum(assoc.a) == n1 and sum(assoc.b) == n2
    assert all(x >= 1 for x in assoc.a + assoc.b)


@pytest.mark.parametrize(
    "net,q",
    [
        (instances.diamond(), 2),
        (instances.diamond(), 3),
        (instances.mirrored_diamond(), 2),
        (instances.constant_branch(), 2),
        (instances.constant_branch(), 3),
    ],
)
def test_soundness_sandwich(net, q):
    exact = search.exact_capacity(net, q, 1)
    dc, _ = reduce.double_cut_bound(net, 1, q=q)
    sb = bounds.singleton_bound(net, 1)
    assert exact.max_code_size <= dc.max_code_size(q)
    assert dc.key() <= sb.key()
