from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from advnet import instances
from advnet.channel import is_unambiguous, one_shot_capacity
from advnet.errors import ArityMismatch, ErrorOutsideVulnerableSet, NotPreceding
from advnet.gf import field_ops
from advnet.netcode import (
    LinearFunction,
    LinearNetworkCode,
    NetworkCode,
    PatternSet,
    TableFunction,
    count_patterns,
    evaluate,
    expand_linear,
    forwarding_code,
    induced_channel,
    transfer_channel,
)
from advnet.schemes import scheme_diamond

from netgen import random_network


def random_code(net, q, rng):
    funcs = {}
    for v in net.intermediates:
        k, m = len(net.in_edges[v]), len(net.out_edges[v])
        funcs[v] = TableFunction(q, k, m, [rng.randrange(q) for _ in range(q**k * m)])
    return NetworkCode(q, funcs)


def slow_terminal_values(net, code, word, err, terminal):
    """Edge-by-edge evaluation in plain Python, independent of the batched simulator."""
    val = {}
    for i, e in enumerate(net.source_edges):
        val[e] = err.get(e, word[i])
    for v in net.intermediates:
        x = tuple(val[e] for e in net.in_edges[v])
        y = code.functions[v].apply(x)
        for e, s in zip(net.out_edges[v], y):
            val[e] = err.get(e, s)
    return tuple(val[e] for e in net.in_edges[terminal])


def slow_fanout(net, code, word, t, terminal):
    out = set()
    vul = sorted(net.vulnerable)
    q = code.q
    for w in range(min(t, len(vul)) + 1):
        for supp in itertools.combinations(vul, w):
            for vals in itertools.product(range(q), repeat=w):
                out.add(slow_terminal_values(net, code, word, dict(zip(supp, vals)), terminal))
    return frozenset(out)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**30), st.sampled_from([2, 3]), st.integers(0, 2))
def test_induced_channel_matches_slow_simulation(seed, q, t):
    net = random_network(seed, max_inner=3, extra=2)
    if q ** len(net.source_edges) > 243:
        return
    code = random_code(net, q, random.Random(seed))
    for terminal in net.terminals:
        ch = induced_channel(net, code, terminal, t)
        for word in ch.inputs[:20]:
            assert ch.fanout(word) == slow_fanout(net, code, word, t, terminal)


def test_pattern_count():
    for m, t, q in [(3, 1, 2), (5, 2, 3), (4, 4, 2), (2, 0, 7)]:
        ps = PatternSet.build(range(m), t, q)
        assert len(ps) == count_patterns(m, t, q)
        assert ps.pattern(0) == {}
        assert len({tuple(sorted(ps.pattern(i).items())) for i in range(len(ps))}) == len(ps)


def test_evaluate_rejects_invulnerable_error():
    s = scheme_diamond(3)
    with pytest.raises(ErrorOutsideVulnerableSet):
        evaluate(s.network, s.code, (1, 1, 1), {3: 0})


def test_diamond_alarm_channel():
    s = scheme_diamond(3)
    ch = induced_channel(s.network, s.code, "T", 1)
    assert is_unambiguous(ch, [(1, 1, 1), (2, 2, 2)])
    assert one_shot_capacity(ch).size == 2
    # V2 raises the alarm symbol when its two inputs disagree
    assert evaluate(s.network, s.code, (1, 1, 1), {1: 2})[4] == 0


def test_arity_mismatch():
    net = instances.diamond()
    code = NetworkCode(2, {"V1": TableFunction(2, 1, 1, [0, 1]), "V2": TableFunction(2, 1, 1, [0, 1])})
    with pytest.raises(ArityMismatch):
        code.check(net)


def test_table_json_roundtrip():
    rng = random.Random(3)
    net = instances.two_terminal_relay()
    code = random_code(net, 3, rng)
    back = NetworkCode.from_json(code.to_json())
    for v in net.intermediates:
        assert (back.functions[v].table() == code.functions[v].table()).all()


def test_linear_expansion_matches():
    f = field_ops(5)
    net = instances.mirrored_diamond()
    lin = LinearNetworkCode(f, {"V1": np.array([[1, 2]]), "V2": np.array([[3, 4]])})
    tab = expand_linear(lin)
    lf = LinearFunction(f, [[1, 2]])
    assert (tab.functions["V1"].table() == lf.table()).all()
    assert tab.functions["V1"].apply((1, 1)) == (3,)
    code = NetworkCode.from_json(NetworkCode(5, {"V1": lf, "V2": lf}).to_json())
    assert code.functions["V1"].apply((2, 2)) == (1,)
    assert forwarding_code(net, 5).functions["V2"].apply((4, 1)) == (4,)


def test_transfer_channel_uses_immediate_predecessors():
    net = instances.two_terminal_relay()
    rng = random.Random(7)
    q = 2
    code = random_code(net, q, rng)
    ch = transfer_channel(net, code, [0, 1, 8], [4, 9], 1)
    f1 = code.functions["V1"]
    f4 = code.functions["V4"]
    for x in ch.inputs:
        expect = set()
        for y in itertools.product(range(q), repeat=3):
            if sum(a != b for a, b in zip(x, y)) <= 1:
                expect.add((f1.apply(y[:2])[0], f4.apply(y[2:])[0]))
        assert ch.fanout(x) == expect


def test_transfer_channel_requires_precedence():
    net = instances.two_terminal_relay()
    code = forwarding_code(net, 2)
    with pytest.raises(NotPreceding):
        transfer_channel(net, code, [4, 9], [0, 1, 8], 1)
