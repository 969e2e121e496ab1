from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from advnet import bounds, instances, netgraph
from advnet.bounds import BoundReport
from advnet.errors import OutOfRange, UnknownFamily
from advnet.schemes import scheme_diamond, scheme_mirrored_diamond

from netgen import random_network


def brute_singleton(net, t):
    m = len(net.edges)
    best = None
    for term in net.terminals:
        for k in range(m + 1):
            for cut in itertools.combinations(range(m), k):
                if netgraph.disconnects(net, cut, term):
                    v = bounds.cut_value(cut, net.vulnerable, t)
                    best = v if best is None else min(best, v)
    return best


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**30), st.integers(0, 2))
def test_singleton_against_all_cuts(seed, t):
    net = random_network(seed, max_inner=3, extra=2)
    assert bounds.singleton_bound(net, t).value == brute_singleton(net, t)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.tuples(st.integers(1, 5), st.integers(1, 5)), min_size=1, max_size=3),
    st.integers(0, 3),
)
def test_singleton_two_routes_agree(deg, t):
    a, b = [x for x, _ in deg], [y for _, y in deg]
    net = netgraph.two_level_network(a, b)
    assert bounds.singleton_2level(a, b, t).value == bounds.singleton_bound(net, t).value


def test_singleton_examples():
    assert bounds.singleton_bound(instances.two_terminal_relay("all"), 1).value == 0
    assert bounds.singleton_bound(instances.constant_branch(), 1).value == 1
    assert bounds.singleton_2level([12, 8, 2, 2, 1], [5, 2, 4, 3, 1], 3).value == 7
    assert bounds.singleton_2level([2, 5, 6], [2, 2, 2], 2).value == 4


@pytest.mark.parametrize("t", [1, 2, 3])
def test_family_singleton_values(t):
    for fam, expect in [("A", t), ("B", t), ("C", 1), ("D", 1), ("E", 1)]:
        if fam == "C" and t == 1:
            continue
        a, b = instances.family_degrees(fam, t)
        adv = instances.family_adversary(fam, t)
        assert bounds.singleton_2level(a, b, adv).value == expect, (fam, t)


def test_full_adversary_value():
    rep = bounds.full_adversary_value(instances.two_terminal_wide(), 1)
    assert rep.value == 2 and rep.exact


def test_partition_profile_example():
    prof = bounds.partition_profile([2, 5, 6], [2, 2, 2], 2)
    assert (prof.I1, prof.I2, prof.I3, prof.I3_tilde) == ((2,), (0,), (1,), (1,))
    assert (prof.X, prof.Y) == (1, 0)
    assert bounds.lower_thm61([2, 5, 6], [2, 2, 2], 2).value == 3
    assert bounds.lower_prop63([2, 5, 6], [2, 2, 2], 2).value == 2
    prof = bounds.partition_profile([12, 8, 2, 2, 1], [5, 2, 4, 3, 1], 3)
    assert prof.I1 == (0, 1) and prof.I2 == (2, 3, 4) and prof.I3 == ()
    assert bounds.lower_thm61([12, 8, 2, 2, 1], [5, 2, 4, 3, 1], 3).value == 7


def test_partition_profile_t0_overlap():
    # a_i = b_i satisfies both conditions at t = 0; the first class wins
    prof = bounds.partition_profile([2, 3], [2, 1], 0)
    assert prof.I1 == (0, 1) and prof.I2 == ()


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.tuples(st.integers(1, 6), st.integers(1, 6)), min_size=1, max_size=4),
    st.integers(0, 3),
)
def test_bound_sandwich(deg, t):
    a, b = [x for x, _ in deg], [y for _, y in deg]
    lo1 = bounds.lower_prop63(a, b, t).value
    lo2 = bounds.lower_thm61(a, b, t).value
    hi = bounds.singleton_2level(a, b, t).value
    assert lo1 <= lo2 <= hi


def test_match_family():
    assert bounds.match_family([1, 2], [1, 1], 1) == ("A", 1)
    assert bounds.match_family([2, 1], [1, 1], 1) == ("A", 1)
    assert bounds.match_family([1, 4], [1, 3], 1) == ("B", 3)
    assert bounds.match_family([2, 3], [2, 2], 2) == ("C", 2)
    assert bounds.match_family([4, 4], [1, 1], 2) == ("D", 2)
    assert bounds.match_family([3, 4], [1, 1], 3) == ("E", 3)
    assert bounds.match_family([2, 4], [2, 2], 2) == ("A", 2)
    assert bounds.match_family([1, 2], [1, 1], 2) is None
    assert bounds.match_family([1, 1, 1], [1, 1, 1], 1) is None


def test_family_statements():
    rep = bounds.family_strict_upper("A", 1, q=3)
    assert rep.exact and rep.value == pytest.approx(math.log(2, 3))
    assert rep.max_code_size(3) == 2
    rep = bounds.family_strict_upper("B", 3)
    assert rep.strict and str(rep) == "< 3" and rep.max_code_size(2) == 7
    assert str(bounds.family_strict_upper("E", 2)) == "< 1"
    assert bounds.family_strict_upper("D", 2).exact
    with pytest.raises(UnknownFamily):
        bounds.family_strict_upper("Z", 1)
    with pytest.raises(UnknownFamily):
        bounds.family_strict_upper("C", 1)


def test_bound_ordering_key():
    assert BoundReport("x", 3, strict=True).key() < BoundReport("y", 3).key()


def test_packing_diamond_q3():
    s = scheme_diamond(3)
    first = bounds.first_packing_check(s, 1, 1)
    second = bounds.second_packing_check(s, 1, 1)
    assert (first.lhs, first.rhs) == (8, 9)
    assert (second.lhs, second.rhs) == (20, 27)
    assert first.holds and second.holds


def test_packing_forms_mirrored_q2():
    s = scheme_mirrored_diamond(2)
    assert bounds.first_packing_check(s, 1, 0).lhs == 4
    assert bounds.second_packing_check(s, 1, 0).lhs == 16
    # per-node products overcount once two nodes remain
    assert bounds.first_packing_check(s, 1, 0, "product").lhs == 5
    assert bounds.second_packing_check(s, 1, 0, "product").lhs == 25


def test_packing_detects_ambiguous_code():
    from advnet.netcode import NetworkCode, TableFunction
    from advnet.schemes import OuterWords, Scheme

    s = scheme_diamond(3)
    f2 = TableFunction.from_callable(3, 2, 1, lambda x: ((x[0] + x[1]) % 3,))
    code = NetworkCode(3, {"V1": s.code.functions["V1"], "V2": f2})
    outer = OuterWords(3, 3, explicit=[[0, 0, 0], [1, 1, 1], [2, 2, 2]])
    bad = Scheme("bad", s.network, outer, code, 1, 3)
    rep = bounds.first_packing_check(bad, 1, 1)
    assert rep.lhs == 15 and not rep.holds


def test_joint_preimage_differs_from_product():
    joint, product = bounds.ball_preimages(scheme_diamond(3), (1, 1, 1), 1)
    assert len(product) > len(joint)
    assert joint <= product


# reference coordinates on the capacity curves, 9 decimals
SPOTS = [
    (1, 1, 3, 0.1, 1.593013219),
    (1, 2, 3, 0.1, 1.531004406),
    (1, 2, 3, 0.01, 1.919206864),
    (1, 2, 3, 0.05, 1.713603043),
    (1, 1, 5, 0.05, 3.568015214),
    (1, 1, 7, 0.1, 3.717030845),
    (2, 1, 3, 0.1, 4.779039658),
    (2, 2, 3, 0.05, 5.140809129),
    (2, 2, 3, 0.1, 4.593013219),
    (2, 1, 5, 0.1, 7.965066096),
    (2, 2, 5, 0.05, 8.568015214),
    (2, 2, 5, 0.1, 7.655022032),
    (2, 1, 7, 0.1, 11.15109253),
    (2, 2, 7, 0.05, 11.9952213),
    (2, 2, 7, 0.1, 10.71703084),
]


@pytest.mark.parametrize("gen,scen,n,p,expect", SPOTS)
def test_curve_spot_values(gen, scen, n, p, expect):
    assert bounds.bsc_level_capacity(gen, scen, n, p) == pytest.approx(expect, abs=1e-6)


@pytest.mark.parametrize("gen", [1, 2])
@pytest.mark.parametrize("n", [3, 5, 7])
def test_gap_interval(gen, n):
    for p, s1, s2, gap in bounds.curve_rows(gen, n, 0.005):
        assert (gap > 1e-12) == bounds.gap_interval(gen, n, p), (p, gap)
        assert s1 >= s2 - 1e-12


def test_curve_errors_and_csv():
    with pytest.raises(OutOfRange):
        bounds.bsc_level_capacity(1, 1, 3, 0.6)
    with pytest.raises(OutOfRange):
        bounds.bsc_level_capacity(3, 1, 3, 0.1)
    csv = bounds.curves_csv(1, 3, 0.1).splitlines()
    assert csv[0] == "p,scenario1,scenario2,gap"
    assert csv[2] == "0.100000000,1.593013219,1.531004406,0.062008813"
    assert len(csv) == 7
    assert bounds.binary_entropy(0) == 0 and bounds.binary_entropy(0.5) == 1
