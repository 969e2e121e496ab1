from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from advnet import instances, netgraph
from advnet.errors import (
    CyclicGraph,
    DanglingIntermediate,
    DimensionMismatch,
    EmptyTerminalSet,
    InvalidCutPair,
    InvalidNetwork,
    NotATerminal,
    SourceHasInEdges,
    TerminalHasOutEdges,
    TooManyVertices,
    UnreachableTerminal,
)
from advnet.netgraph import CutPair, LevelMatrices

from netgen import random_network


@pytest.mark.parametrize(
    "verts,edges,terms,err",
    [
        (["S", "V", "T"], [("S", "V"), ("V", "S"), ("V", "T")], ["T"], SourceHasInEdges),
        (["S", "A", "B", "T"], [("S", "A"), ("A", "B"), ("B", "A"), ("B", "T")], ["T"], CyclicGraph),
        (["S", "T", "U"], [("S", "T"), ("T", "U")], ["T", "U"], TerminalHasOutEdges),
        (["S", "T"], [], ["T"], UnreachableTerminal),
        (["S", "V", "T"], [("S", "T"), ("S", "V")], ["T"], DanglingIntermediate),
        (["S", "T"], [("S", "T")], [], EmptyTerminalSet),
        (["S", "T"], [("S", "X")], ["T"], InvalidNetwork),
    ],
)
def test_validation_errors(verts, edges, terms, err):
    with pytest.raises(err):
        netgraph.validate(verts, edges, "S", terms)


def test_cycle_through_source_is_rejected():
    with pytest.raises((CyclicGraph, SourceHasInEdges)):
        netgraph.validate(["S", "V", "T"], [("S", "V"), ("V", "S"), ("S", "T")], "S", ["T"])


def test_edges_reordered_with_mapping():
    net, mapping = netgraph.validate(
        ["S", "V", "T"], [("V", "T"), ("S", "V")], "S", ["T"], [1], return_mapping=True
    )
    assert net.edges == (("S", "V"), ("V", "T"))
    assert mapping == {0: 1, 1: 0}
    assert net.vulnerable == {0}


def test_vulnerable_out_of_range():
    with pytest.raises(InvalidNetwork):
        netgraph.validate(["S", "T"], [("S", "T")], "S", ["T"], [3])


def test_relay_structure():
    net = instances.two_terminal_relay()
    assert netgraph.min_cut(net, "S", "T1") == 2
    assert netgraph.min_cut(net, "S", "T2") == 2
    assert netgraph.detect_levels(net) is None
    cuts = netgraph.enumerate_minimal_cuts(net, "T1")
    assert frozenset({0, 1, 8}) in cuts and frozenset({4, 9}) in cuts
    assert netgraph.cut_precedes(net, {0, 1, 8}, {4, 9})
    assert not netgraph.cut_precedes(net, {4, 9}, {0, 1, 8})
    assert netgraph.immediate_predecessors(net, 9, {0, 1, 8}) == {8}
    assert netgraph.immediate_predecessors(net, 4, {0, 1, 8}) == {0, 1}


def test_cut_pair_checks():
    net = instances.two_terminal_relay()
    CutPair(frozenset({0, 1, 8}), frozenset({4, 9}), "T1").check(net)
    with pytest.raises(InvalidCutPair):
        CutPair(frozenset({4, 9}), frozenset({0, 1, 8}), "T1").check(net)
    with pytest.raises(InvalidCutPair):
        CutPair(frozenset({0}), frozenset({4, 9}), "T1").check(net)
    with pytest.raises(NotATerminal):
        netgraph.enumerate_minimal_cuts(net, "V1")


def test_cut_enumeration_vertex_limit():
    net = instances.two_terminal_relay()
    with pytest.raises(TooManyVertices):
        netgraph.enumerate_minimal_cuts(net, "T1", max_vertices=3)


def test_wide_min_cut():
    net = instances.two_terminal_wide()
    assert [netgraph.min_cut(net, "S", t) for t in net.terminals] == [4, 4]


def test_level_matrices_roundtrip():
    net = instances.hexagon()
    lm = netgraph.detect_levels(net)
    assert lm.is_simple_three_level()
    assert lm.matrices[1] == tuple(tuple(r) for r in instances.HEXAGON_MIDDLE)
    two = netgraph.two_level_network([1, 2], [1, 1])
    assert netgraph.detect_levels(two).degrees() == ((1, 2), (1, 1))
    assert two.vulnerable == {0, 1, 2}


def test_level_matrices_shape_errors():
    with pytest.raises(DimensionMismatch):
        LevelMatrices.of([[1, 1]], [[1, 1]])
    with pytest.raises(DimensionMismatch):
        LevelMatrices.two_level([1, 2], [1])


def brute_min_cut(net, terminal):
    m = len(net.edges)
    for k in range(m + 1):
        for cut in itertools.combinations(range(m), k):
            if netgraph.disconnects(net, cut, terminal):
                return k
    return m


def brute_minimal_cuts(net, terminal):
    rel = sorted(netgraph.relevant_edges(net, terminal))
    cuts = [
        frozenset(c)
        for k in range(1, len(rel) + 1)
        for c in itertools.combinations(rel, k)
        if netgraph.disconnects(net, c, terminal)
    ]
    return {c for c in cuts if not any(o < c for o in cuts)}


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**30))
def test_cuts_against_brute_force(seed):
    net = random_network(seed, max_inner=3, extra=3)
    for t in net.terminals:
        assert netgraph.min_cut(net, "S", t) == brute_min_cut(net, t)
        assert set(netgraph.enumerate_minimal_cuts(net, t)) == brute_minimal_cuts(net, t)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**30))
def test_edge_order_extends_precedence(seed):
    net = random_network(seed)
    for e, f in itertools.product(range(len(net.edges)), repeat=2):
        if e != f and netgraph.precedes(net, e, f):
            assert e < f
    assert list(net.source_edges) == list(range(len(net.source_edges)))


def test_shipped_library_matches_builtins():
    built = instances.builtin_instances()
    assert sorted(built) == instances.library_names()
    for name, inst in built.items():
        loaded = instances.load_instance(name)
        assert loaded.to_dict() == inst.to_dict(), name
