"""Network data model: validation, edge order, cuts, precedence and level structure.

Edges are identified by their index in ``Network.edges``. Parallel edges are
allowed and are distinct objects. After validation the edge list is a linear
extension of the precedence order: if edge ``e`` precedes edge ``f`` then
``e <= f``.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx

from .errors import (
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
    Unreachable,
    UnreachableTerminal,
)

DEFAULT_MAX_VERTICES = 12


@dataclass(frozen=True)
class Network:
    """A validated single-source multicast network.

    Build instances through :func:`validate` (or :func:`from_level_matrices`);
    the constructor itself does not check anything.
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    source: str
    terminals: tuple[str, ...]
    vulnerable: frozenset[int] = frozenset()

    @cached_property
    def in_edges(self) -> dict[str, tuple[int, ...]]:
        d: dict[str, list[int]] = {v: [] for v in self.vertices}
        for i, (_, h) in enumerate(self.edges):
            d[h].append(i)
        return {v: tuple(es) for v, es in d.items()}

    @cached_property
    def out_edges(self) -> dict[str, tuple[int, ...]]:
        d: dict[str, list[int]] = {v: [] for v in self.vertices}
        for i, (tl, _) in enumerate(self.edges):
            d[tl].append(i)
        return {v: tuple(es) for v, es in d.items()}

    @cached_property
    def intermediates(self) -> tuple[str, ...]:
        """Intermediate vertices in topological order."""
        skip = {self.source, *self.terminals}
        return tuple(v for v in self.vertices if v not in skip)

    @property
    def source_edges(self) -> tuple[int, ...]:
        return self.out_edges[self.source]

    @cached_property
    def reach(self) -> dict[str, frozenset[str]]:
        """Vertices reachable from each vertex (including itself)."""
        out: dict[str, frozenset[str]] = {}
        for v in reversed(self.vertices):
            acc = {v}
            for e in self.out_edges[v]:
                acc |= out[self.edges[e][1]]
            out[v] = frozenset(acc)
        return out

    def with_vulnerable(self, vulnerable: Iterable[int]) -> "Network":
        vul = frozenset(int(e) for e in vulnerable)
        _check_edge_ids(self, vul)
        return Network(self.vertices, self.edges, self.source, self.terminals, vul)

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "source": self.source,
            "terminals": list(self.terminals),
            "edges": [list(e) for e in self.edges],
            "vulnerable": sorted(self.vulnerable),
        }


def _check_edge_ids(net: Network, ids: Iterable[int]) -> None:
    m = len(net.edges)
    for e in ids:
        if not 0 <= e < m:
            raise InvalidNetwork(f"edge id {e} out of range 0..{m - 1}")


def validate(
    vertices: Sequence[str],
    edges: Sequence[Sequence[str]],
    source: str,
    terminals: Iterable[str],
    vulnerable: Iterable[int] = (),
    *,
    return_mapping: bool = False,
):
    """Check a raw description and return a :class:`Network`.

    Vertices are put in topological order (Kahn's algorithm, ties broken by
    the position in ``vertices``) and edges are stably sorted by the rank of
    their tail, which gives a linear extension of edge precedence.
    ``vulnerable`` holds ids into the *given* edge list. With
    ``return_mapping`` the result is ``(network, mapping)`` where
    ``mapping[old_id] = new_id``.
    """
    vertices = [str(v) for v in vertices]
    terminals = [str(v) for v in terminals]
    source = str(source)
    edges = [(str(a), str(b)) for a, b in edges]
    if len(set(vertices)) != len(vertices):
        raise InvalidNetwork("duplicate vertex names")
    vset = set(vertices)
    if not terminals:
        raise EmptyTerminalSet("at least one terminal is required")
    if len(set(terminals)) != len(terminals):
        raise InvalidNetwork("duplicate terminals")
    for v in [source, *terminals]:
        if v not in vset:
            raise InvalidNetwork(f"unknown vertex {v!r}")
    if source in terminals:
        raise InvalidNetwork("the source cannot be a terminal")
    for a, b in edges:
        if a not in vset or b not in vset:
            raise InvalidNetwork(f"edge ({a}, {b}) uses an unknown vertex")
        if a == b:
            raise CyclicGraph(f"self-loop at {a}")
    vul = [int(e) for e in vulnerable]
    for e in vul:
        if not 0 <= e < len(edges):
            raise InvalidNetwork(f"vulnerable edge id {e} out of range")

    if any(b == source for _, b in edges):
        raise SourceHasInEdges(f"source {source!r} has incoming edges")
    tset = set(terminals)
    if any(a in tset for a, _ in edges):
        raise TerminalHasOutEdges("terminals must not have outgoing edges")

    pos = {v: i for i, v in enumerate(vertices)}
    indeg = {v: 0 for v in vertices}
    succ: dict[str, list[str]] = {v: [] for v in vertices}
    for a, b in edges:
        indeg[b] += 1
        succ[a].append(b)
    heap = [(pos[v], v) for v in vertices if indeg[v] == 0]
    heapq.heapify(heap)
    order: list[str] = []
    while heap:
        _, v = heapq.heappop(heap)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, (pos[w], w))
    if len(order) != len(vertices):
        raise CyclicGraph("the graph contains a directed cycle")

    rank = {v: i for i, v in enumerate(order)}
    perm = sorted(range(len(edges)), key=lambda i: (rank[edges[i][0]], i))
    mapping = {old: new for new, old in enumerate(perm)}
    new_edges = tuple(edges[i] for i in perm)
    net = Network(
        vertices=tuple(order),
        edges=new_edges,
        source=source,
        terminals=tuple(sorted(terminals, key=rank.__getitem__)),
        vulnerable=frozenset(mapping[e] for e in vul),
    )

    from_s = net.reach[source]
    for tv in net.terminals:
        if tv not in from_s:
            raise UnreachableTerminal(f"terminal {tv!r} is not reachable from the source")
    for v in net.intermediates:
        if v not in from_s or not (net.reach[v] & tset):
            raise DanglingIntermediate(f"vertex {v!r} is not on any source-terminal path")
    return (net, mapping) if return_mapping else net


def from_dict(d: dict, *, return_mapping: bool = False):
    return validate(
        d["vertices"],
        d["edges"],
        d["source"],
        d["terminals"],
        d.get("vulnerable", ()),
        return_mapping=return_mapping,
    )


def _check_terminal(net: Network, terminal: str) -> None:
    if terminal not in net.terminals:
        raise NotATerminal(f"{terminal!r} is not a terminal")


def min_cut(net: Network, v: str, w: str) -> int:
    """Minimum number of edges separating ``v`` from ``w`` (unit-capacity max-flow)."""
    if v not in net.reach or w not in net.reach[v]:
        raise Unreachable(f"{w!r} is not reachable from {v!r}")
    if v == w:
        raise Unreachable("endpoints must differ")
    g = nx.DiGraph()
    g.add_nodes_from(net.vertices)
    for a, b in net.edges:
        if g.has_edge(a, b):
            g[a][b]["capacity"] += 1
        else:
            g.add_edge(a, b, capacity=1)
    value, _ = nx.maximum_flow(g, v, w)
    return int(value)


def relevant_edges(net: Network, terminal: str) -> frozenset[int]:
    """Edges lying on at least one path from the source to ``terminal``."""
    from_s = net.reach[net.source]
    return frozenset(
        i
        for i, (a, b) in enumerate(net.edges)
        if a in from_s and terminal in net.reach[b]
    )


def disconnects(net: Network, cut: Iterable[int], terminal: str) -> bool:
    """True if removing ``cut`` leaves no source-terminal path."""
    removed = set(cut)
    seen = {net.source}
    stack = [net.source]
    while stack:
        v = stack.pop()
        for e in net.out_edges[v]:
            if e in removed:
                continue
            h = net.edges[e][1]
            if h not in seen:
                seen.add(h)
                stack.append(h)
    return terminal not in seen


def enumerate_minimal_cuts(
    net: Network, terminal: str, max_vertices: int = DEFAULT_MAX_VERTICES
) -> list[frozenset[int]]:
    """All inclusion-minimal edge-cuts between the source and ``terminal``.

    Every minimal cut equals the boundary of the set of vertices still
    reachable from the source after removing it, so scanning boundaries
    delta(W) over all W containing the source and not the terminal (restricted
    to edges on source-terminal paths) and keeping the minimal ones is
    exhaustive. The result is sorted by (size, sorted ids).
    """
    _check_terminal(net, terminal)
    if len(net.vertices) > max_vertices:
        raise TooManyVertices(
            f"{len(net.vertices)} vertices exceed the cut-enumeration limit {max_vertices}"
        )
    rel = relevant_edges(net, terminal)
    free = [v for v in net.vertices if v not in (net.source, terminal)]
    found: set[frozenset[int]] = set()
    for bits in range(1 << len(free)):
        w = {net.source} | {free[i] for i in range(len(free)) if bits >> i & 1}
        cut = frozenset(
            i for i in rel if net.edges[i][0] in w and net.edges[i][1] not in w
        )
        found.add(cut)
    minimal = [c for c in found if not any(o < c for o in found)]
    return sorted(minimal, key=lambda c: (len(c), sorted(c)))


def precedes(net: Network, e: int, f: int) -> bool:
    """True if some directed path starts with edge ``e`` and ends with edge ``f``."""
    if e == f:
        return True
    return net.edges[f][0] in net.reach[net.edges[e][1]]


def immediate_predecessors(net: Network, f: int, e1: Iterable[int]) -> frozenset[int]:
    """Edges of ``e1`` preceding ``f`` with no other ``e1`` edge in between."""
    e1 = list(e1)
    before = [e for e in e1 if precedes(net, e, f)]
    out = set()
    for e in before:
        if not any(g != e and precedes(net, e, g) and precedes(net, g, f) for g in before):
            out.add(e)
    return frozenset(out)


def cut_precedes(net: Network, e1: Iterable[int], e2: Iterable[int]) -> bool:
    """True if every path from the source to an edge of ``e2`` meets ``e1``."""
    e1 = set(e1)
    seen = {net.source}
    stack = [net.source]
    while stack:
        v = stack.pop()
        for e in net.out_edges[v]:
            if e in e1:
                continue
            h = net.edges[e][1]
            if h not in seen:
                seen.add(h)
                stack.append(h)
    return all(f in e1 or net.edges[f][0] not in seen for f in e2)


@dataclass(frozen=True)
class CutPair:
    cut1: frozenset[int]
    cut2: frozenset[int]
    terminal: str

    def check(self, net: Network) -> None:
        _check_terminal(net, self.terminal)
        _check_edge_ids(net, self.cut1 | self.cut2)
        for name, c in (("cut1", self.cut1), ("cut2", self.cut2)):
            if not disconnects(net, c, self.terminal):
                raise InvalidCutPair(f"{name} does not separate the source from {self.terminal}")
        if not cut_precedes(net, self.cut1, self.cut2):
            raise InvalidCutPair("cut1 does not precede cut2")


@dataclass(frozen=True)
class LevelMatrices:
    """Adjacency-count matrices between consecutive layers of an m-level network."""

    m: int
    matrices: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if self.m != len(self.matrices) or self.m < 1:
            raise DimensionMismatch("m must equal the number of matrices")
        for k, mat in enumerate(self.matrices):
            if not mat or len({len(r) for r in mat}) != 1 or not mat[0]:
                raise DimensionMismatch(f"matrix {k + 1} is ragged or empty")
            if k and len(self.matrices[k - 1][0]) != len(mat):
                raise DimensionMismatch(f"matrix {k + 1} rows do not match previous columns")
            if any(x < 0 for r in mat for x in r):
                raise DimensionMismatch("entries must be nonnegative")
        if len(self.matrices[0]) != 1:
            raise DimensionMismatch("the first layer is the single source")

    @classmethod
    def of(cls, *mats: Sequence[Sequence[int]]) -> "LevelMatrices":
        return cls(len(mats), tuple(tuple(tuple(int(x) for x in r) for r in m) for m in mats))

    @classmethod
    def two_level(cls, a: Sequence[int], b: Sequence[int]) -> "LevelMatrices":
        if len(a) != len(b):
            raise DimensionMismatch("degree lists differ in length")
        return cls.of([list(a)], [[x] for x in b])

    def is_simple_two_level(self) -> bool:
        return self.m == 2 and len(self.matrices[1][0]) == 1

    def is_simple_three_level(self) -> bool:
        if self.m != 3 or len(self.matrices[2][0]) != 1:
            return False
        return all(x == 1 for x in self.matrices[0][0]) and all(
            r[0] == 1 for r in self.matrices[2]
        )

    def degrees(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(a, b) for a simple 2-level network."""
        if not self.is_simple_two_level():
            raise DimensionMismatch("not a simple 2-level network")
        return tuple(self.matrices[0][0]), tuple(r[0] for r in self.matrices[1])


def detect_levels(net: Network) -> LevelMatrices | None:
    """Layer structure of ``net``, or None if it is not layered.

    A network is layered when the vertices split into S, V_1, ..., V_m = T
    with every edge joining consecutive layers.
    """
    depth = {net.source: 0}
    for v in net.vertices:
        if v == net.source:
            continue
        ds = {depth[net.edges[e][0]] + 1 for e in net.in_edges[v]}
        if len(ds) != 1:
            return None
        depth[v] = ds.pop()
    m = max(depth[t] for t in net.terminals)
    if any(depth[t] != m for t in net.terminals):
        return None
    if any(depth[v] == m for v in net.intermediates):
        return None
    layers = [[v for v in net.vertices if depth[v] == k] for k in range(m + 1)]
    mats = []
    for k in range(1, m + 1):
        row_pos = {v: i for i, v in enumerate(layers[k - 1])}
        col_pos = {v: j for j, v in enumerate(layers[k])}
        mat = [[0] * len(layers[k]) for _ in layers[k - 1]]
        for a, b in net.edges:
            if a in row_pos and b in col_pos:
                mat[row_pos[a]][col_pos[b]] += 1
        mats.append(mat)
    return LevelMatrices.of(*mats)


def from_level_matrices(lm: LevelMatrices, vulnerable: str | Iterable[int] = ()) -> Network:
    """Build the layered network described by ``lm``.

    Intermediate vertices are named V1, V2, ... layer by layer; the terminal
    is T (or T1, T2, ... when there are several). ``vulnerable="source"``
    marks every source edge.
    """
    sizes = [1] + [len(m[0]) for m in lm.matrices]
    names: list[list[str]] = [["S"]]
    count = 0
    for k in range(1, lm.m):
        names.append([f"V{count + j + 1}" for j in range(sizes[k])])
        count += sizes[k]
    nt = sizes[-1]
    names.append(["T"] if nt == 1 else [f"T{j + 1}" for j in range(nt)])
    edges = []
    for k, mat in enumerate(lm.matrices):
        for i, row in enumerate(mat):
            for j, c in enumerate(row):
                edges += [(names[k][i], names[k + 1][j])] * c
    if isinstance(vulnerable, str):
        if vulnerable != "source":
            raise InvalidNetwork(f"unknown vulnerable spec {vulnerable!r}")
        vulnerable = range(sum(lm.matrices[0][0]))
    return validate(list(itertools.chain(*names)), edges, "S", names[-1], vulnerable)


def two_level_network(a: Sequence[int], b: Sequence[int]) -> Network:
    """Simple 2-level network ([a], [b]) with every source edge vulnerable."""
    return from_level_matrices(LevelMatrices.two_level(a, b), "source")
