"""Structural reductions: the induced 3-level network of a cut pair and the
associated 2-level network of a simple 3-level network, composed into an
upper bound on 1-shot capacity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from . import bounds, netgraph
from .bounds import BoundReport
from .errors import InvalidCutPair, NotSimple3Level
from .netgraph import CutPair, LevelMatrices, Network

DEFAULT_MAX_PAIRS = 64


@dataclass
class ReductionChain:
    """Ordered record of the constructions applied to reach a bound."""

    stages: list[dict] = field(default_factory=list)
    bound: BoundReport | None = None

    def add(self, tag: str, network: Network | None, mapping: dict) -> None:
        self.stages.append(
            {"tag": tag, "network": None if network is None else network.to_dict(), "mapping": mapping}
        )

    def to_json(self) -> dict:
        return {
            "stages": self.stages,
            "bound": None if self.bound is None else self.bound.to_json(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)


@dataclass(frozen=True)
class Induced:
    network: Network
    layer1: tuple[int, ...]  # original edge id for each layer-1 vertex
    layer2: tuple[int, ...]  # original edge id for each layer-2 vertex


def induce_3level(net: Network, cuts: CutPair) -> Induced:
    """Simple 3-level network induced by a preceding cut pair.

    One layer-1 vertex per edge of the first cut and one layer-2 vertex per
    edge of the second; a middle edge joins them when the first edge is an
    immediate predecessor of the second. Layer-1 vertices that feed nothing
    are dropped. Source edges of the result inherit vulnerability from the
    first cut.
    """
    try:
        cuts.check(net)
    except InvalidCutPair:
        raise
    except Exception as exc:  # bad ids or terminal
        raise InvalidCutPair(str(exc)) from exc
    e2 = sorted(cuts.cut2)
    preds = {f: netgraph.immediate_predecessors(net, f, cuts.cut1) for f in e2}
    used = sorted(set().union(*preds.values())) if preds else []
    if any(not p for p in preds.values()):
        raise InvalidCutPair("an edge of cut2 has no immediate predecessor in cut1")
    middle = [[1 if e in preds[f] else 0 for f in e2] for e in used]
    lm = LevelMatrices.of([[1] * len(used)], middle, [[1]] * len(e2))
    vul = [i for i, e in enumerate(used) if e in net.vulnerable]
    return Induced(netgraph.from_level_matrices(lm, vul), tuple(used), tuple(e2))


def _simple_3level(net: Network) -> LevelMatrices:
    lm = netgraph.detect_levels(net)
    if lm is None or not lm.is_simple_three_level():
        raise NotSimple3Level("network is not a simple 3-level network")
    return lm


@dataclass(frozen=True)
class Associated:
    network: Network
    a: tuple[int, ...]
    b: tuple[int, ...]
    components: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]  # (layer-1 idx, layer-2 idx)
    vulnerable_all: bool


def associate_2level(n3: Network) -> Associated:
    """Collapse each connected component of the middle layer into one node.

    Node i receives a_i source edges (its layer-1 vertices) and b_i terminal
    edges (its layer-2 vertices). Vulnerable source edges map to source
    edges of the matching component.
    """
    lm = _simple_3level(n3)
    mid = lm.matrices[1]
    n1, n2 = len(mid), len(mid[0])
    parent = list(range(n1 + n2))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n1):
        for j in range(n2):
            if mid[i][j]:
                parent[find(i)] = find(n1 + j)
    groups: dict[int, tuple[list[int], list[int]]] = {}
    for x in range(n1 + n2):
        g = groups.setdefault(find(x), ([], []))
        (g[0] if x < n1 else g[1]).append(x if x < n1 else x - n1)
    comps = sorted((tuple(l1), tuple(l2)) for l1, l2 in groups.values())
    if any(not l1 or not l2 for l1, l2 in comps):
        raise NotSimple3Level("a middle-layer vertex is isolated")
    a = tuple(len(c[0]) for c in comps)
    b = tuple(len(c[1]) for c in comps)

    # layer-1 vertex i of n3 owns source edge i (edges are ordered by tail)
    src_vul = {i for i, e in enumerate(n3.source_edges) if e in n3.vulnerable}
    new_vul = []
    pos = 0
    for l1, _ in comps:
        new_vul += [pos + k for k, v in enumerate(l1) if v in src_vul]
        pos += len(l1)
    net2 = netgraph.from_level_matrices(LevelMatrices.two_level(a, b), new_vul)
    return Associated(net2, a, b, tuple(comps), len(new_vul) == sum(a))


def two_level_upper(assoc: Associated, t: int, q: int | None = None) -> BoundReport:
    """Best available upper bound for an associated 2-level network."""
    if assoc.vulnerable_all:
        fam = bounds.match_family(assoc.a, assoc.b, t)
        if fam is not None:
            return bounds.family_strict_upper(fam[0], fam[1], q)
        rep = bounds.singleton_2level(assoc.a, assoc.b, t)
    else:
        rep = bounds.singleton_bound(assoc.network, t)
    return BoundReport(
        "singleton", rep.value, witness=rep.witness, rule="singleton (no family match)"
    )


def _frontier_first(net: Network, pairs):
    """Order pairs so that those whose first cut holds every vulnerable edge come first."""
    vul = net.vulnerable

    def key(p):
        c1, c2, term = p
        inside = len(vul & c1)
        return (0 if vul <= c1 else 1, -inside, len(c1), sorted(c1), len(c2), sorted(c2), term)

    return sorted(pairs, key=key)


def auto_pairs(net: Network, max_pairs: int = DEFAULT_MAX_PAIRS) -> list[CutPair]:
    """Preceding pairs of minimal cuts, frontier-covering first cuts first."""
    raw = []
    for term in net.terminals:
        cuts = netgraph.enumerate_minimal_cuts(net, term)
        for c1 in cuts:
            for c2 in cuts:
                if netgraph.cut_precedes(net, c1, c2):
                    raw.append((c1, c2, term))
    return [CutPair(c1, c2, t) for c1, c2, t in _frontier_first(net, raw)[:max_pairs]]


def evaluate_pair(net: Network, pair: CutPair, t: int, q: int | None = None) -> ReductionChain:
    chain = ReductionChain()
    chain.add("input", net, {})
    chain.add(
        "cut-pair",
        None,
        {
            "terminal": pair.terminal,
            "cut1": sorted(pair.cut1),
            "cut2": sorted(pair.cut2),
            "heuristic": not net.vulnerable <= pair.cut1,
        },
    )
    ind = induce_3level(net, pair)
    chain.add(
        "induced-3level",
        ind.network,
        {"layer1_edges": list(ind.layer1), "layer2_edges": list(ind.layer2)},
    )
    assoc = associate_2level(ind.network)
    chain.add(
        "associated-2level",
        assoc.network,
        {
            "a": list(assoc.a),
            "b": list(assoc.b),
            "components": [
                {
                    "cut1_edges": [ind.layer1[i] for i in l1],
                    "cut2_edges": [ind.layer2[j] for j in l2],
                }
                for l1, l2 in assoc.components
            ],
        },
    )
    chain.bound = two_level_upper(assoc, t, q)
    return chain


def double_cut_bound(
    net: Network,
    t: int,
    pairs: Iterable[CutPair] | str = "auto",
    q: int | None = None,
    max_pairs: int = DEFAULT_MAX_PAIRS,
) -> tuple[BoundReport, ReductionChain]:
    """Minimum over cut pairs of the 2-level bound reached through the reductions.

    Errors outside the first cut are ignored, which only helps the code, so
    every pair yields a valid upper bound.
    """
    if isinstance(pairs, str):
        pairs = auto_pairs(net, max_pairs)
    best: tuple[BoundReport, ReductionChain] | None = None
    for pair in pairs:
        chain = evaluate_pair(net, pair, t, q)
        if best is None or chain.bound.key() < best[0].key():
            best = (chain.bound, chain)
    if best is None:
        raise InvalidCutPair("no preceding cut pair available")
    rep, chain = best
    out = BoundReport(
        "double-cut",
        rep.value,
        strict=rep.strict,
        exact=False,
        witness={"pair": chain.stages[1]["mapping"], "rule": rep.rule},
        rule=rep.rule,
    )
    chain.bound = out
    return out, chain
