from __future__ import annotations

import json

import numpy as np
import pytest

from advnet import bounds, schemes
from advnet.errors import FieldTooSmall, NotTwoLevel, ParameterOutOfRange
from advnet.gf import field_ops
from advnet.netcode import LinearFunction, NetworkCode, PatternSet, evaluate
from advnet.schemes import (
    OuterWords,
    Scheme,
    ShellLabels,
    scheme_a2,
    scheme_c_t,
    scheme_d_t,
    scheme_diamond,
    scheme_mirrored_diamond,
    scheme_opening_network,
    scheme_prop63,
    scheme_thm61,
    verify,
)

REPETITION = [
    (scheme_diamond, (2,)),
    (scheme_diamond, (3,)),
    (scheme_diamond, (5,)),
    (scheme_mirrored_diamond, (2,)),
    (scheme_mirrored_diamond, (3,)),
    (scheme_mirrored_diamond, (4,)),
    (scheme_a2, (2,)),
    (scheme_a2, (3,)),
    (scheme_c_t, (2, 2)),
    (scheme_c_t, (2, 3)),
    (scheme_c_t, (3, 2)),
    (scheme_c_t, (2, 4)),
    (scheme_d_t, (2, 1)),
    (scheme_d_t, (2, 2)),
    (scheme_d_t, (3, 2)),
    (scheme_opening_network, (2,)),
    (scheme_opening_network, (3,)),
    (scheme_opening_network, (4,)),
]


@pytest.mark.parametrize("fn,args", REPETITION)
def test_repetition_schemes_verify(fn, args):
    s = fn(*args)
    rep = verify(s)
    assert rep.passed and rep.claimed_ok
    assert rep.size == s.claimed_code_size


@pytest.mark.parametrize("fn,args", REPETITION)
def test_decoders_recover_every_symbol(fn, args):
    s = fn(*args)
    pats = PatternSet.build(s.network.vulnerable, s.t, s.q)
    for word in s.outer.words:
        for i in range(len(pats)):
            vals = evaluate(s.network, s.code, word, pats.pattern(i))
            for term, dec in s.decoders.items():
                y = tuple(vals[e] for e in s.network.in_edges[term])
                assert dec(y) == word[0], (word, pats.pattern(i), y)


def test_sizes():
    assert scheme_diamond(4).claimed_code_size == 3
    assert scheme_mirrored_diamond(3).claimed_code_size == 3
    assert scheme_d_t(3, 2).claimed_code_size == 3
    assert scheme_opening_network(4).claimed_code_size == 3


def test_stronger_adversary_breaks_schemes():
    rep = verify(scheme_a2(2), t=3)
    assert not rep.passed
    w = rep.witness
    assert w["words"][0] != w["words"][1]
    assert not verify(scheme_mirrored_diamond(2), t=2).passed


def test_shell_labels():
    lab = ShellLabels(2, 4)
    assert lab.h == 2 and lab.leftover == 6
    assert lab.label((0, 0, 0, 0, 0)) == 0
    assert lab.label((0, 1, 1, 1, 1)) == 4
    assert lab.decode(lab.encode(5)) == 5


# five adversary actions against the q = 2, t = 4 shell scheme; a = 0, b = 1
C4_TRACES = [
    ((0, 0, 0, 0, 0, 1, 1, 1, 1), 4),  # second node sees (a,b,b,b,b): shell 1 around b
    ((0, 0, 0, 1, 0, 0, 1, 1, 1), 5),  # (a,a,b,b,b): shell 2 around b
    ((0, 0, 1, 1, 0, 0, 0, 1, 1), 2),  # (a,a,a,b,b): shell 2 around a
    ((0, 1, 1, 1, 0, 0, 0, 0, 1), 1),  # (a,a,a,a,b): shell 1 around a
    ((1, 1, 1, 1, 0, 0, 0, 0, 0), 0),  # (a,a,a,a,a): the projection itself
]


@pytest.mark.parametrize("received,label", C4_TRACES)
def test_c4_decoding_traces(received, label):
    s = scheme_c_t(2, 4)
    lab = ShellLabels(2, 4)
    sent = (0,) * 9
    err = {i: v for i, v in enumerate(received) if v != sent[i]}
    vals = evaluate(s.network, s.code, sent, err)
    y = tuple(vals[e] for e in s.network.in_edges["T"])
    assert y[:4] == received[:4]
    assert lab.decode(y[4:]) == label
    assert s.decoders["T"](y) == 0


def test_c_t_requires_t2():
    with pytest.raises(ParameterOutOfRange):
        scheme_c_t(2, 1)


def test_mds_schemes_small():
    s = scheme_thm61([2, 3, 4], [2, 2, 2], 1, 7)
    assert s.claimed_code_size == 7 ** bounds.lower_thm61([2, 3, 4], [2, 2, 2], 1).value
    ex = verify(s, method="exhaustive")
    co = verify(s, method="coset")
    assert ex.passed and co.passed
    p = scheme_prop63([2, 3, 4], [2, 2, 2], 1, 7)
    assert p.claimed_code_size == 7**4 and verify(p).passed
    assert p.linear is not None


def test_both_routes_find_a_collision():
    # forwarding only one edge of V3 leaves too little redundancy for the code
    f = field_ops(5)
    s = scheme_prop63([1, 1, 2], [1, 1, 2], 1, 5)
    funcs = dict(s.code.functions)
    funcs["V3"] = LinearFunction(f, np.array([[1, 0], [0, 0]]))
    broken = Scheme("broken", s.network, s.outer, NetworkCode(5, funcs), 1, s.claimed_code_size)
    assert not verify(broken, method="exhaustive").passed
    assert not verify(broken, method="coset").passed


def test_field_too_small():
    with pytest.raises(FieldTooSmall) as err:
        scheme_thm61([2, 5, 6], [2, 2, 2], 2, 5)
    assert err.value.threshold == 6


def test_mds_needs_degrees():
    with pytest.raises(NotTwoLevel):
        scheme_thm61(None, None, 1, 7)
    with pytest.raises(NotTwoLevel):
        scheme_thm61([1, 2], [1], 1, 7)


@pytest.mark.parametrize(
    "scheme", [scheme_diamond(3), scheme_c_t(2, 2), scheme_thm61([2, 3, 4], [2, 2, 2], 1, 7)]
)
def test_json_roundtrip(scheme, tmp_path):
    path = tmp_path / "s.json"
    scheme.dump(path)
    back = Scheme.from_json(json.loads(path.read_text()))
    assert back.claimed_code_size == scheme.claimed_code_size
    assert verify(back).passed


def test_outer_words_validation():
    with pytest.raises(Exception):
        OuterWords(2, 2, explicit=[[0, 0], [0, 0]])
    with pytest.raises(Exception):
        OuterWords(2, 2)


def test_registry():
    assert set(schemes.SCHEMES) >= {"diamond", "mirrored-diamond", "c", "d", "relay", "partition-mds"}
    s = schemes.SCHEMES["partition-mds"](11, 2, [2, 5, 6], [2, 2, 2])
    assert s.rate == 3.0
