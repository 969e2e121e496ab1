"""Network codes, forward evaluation, and the channels they induce.

Node functions act on batches: a function with in-degree ``k`` and
out-degree ``m`` maps an integer array of shape (N, k) to shape (N, m).
Coordinates follow the global edge order of the network.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import netgraph
from .channel import Channel
from .errors import (
    ArityMismatch,
    ErrorOutsideVulnerableSet,
    FieldMismatch,
    InvalidInput,
    NotATerminal,
    NotPreceding,
)
from .gf import Field, MdsCode, SyndromeDecoder, field_ops
from .netgraph import Network

TABLE_LIMIT = 1 << 22
SERIALIZE_TABLE_LIMIT = 1 << 16
CHUNK_ROWS = 1 << 18


def mixed_radix(x: np.ndarray, q: int) -> np.ndarray:
    """Row index of each row of ``x`` read as a big-endian base-q number."""
    x = np.asarray(x, dtype=np.int64)
    idx = np.zeros(x.shape[0], dtype=np.int64)
    for j in range(x.shape[1]):
        idx = idx * q + x[:, j]
    return idx


def all_words(q: int, n: int) -> np.ndarray:
    """Every word of length n over range(q), in lexicographic order, shape (q**n, n)."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.indices((q,) * n).reshape(n, -1).T
    return np.ascontiguousarray(grid, dtype=np.int64)


class NodeFunction:
    q: int
    in_arity: int
    out_arity: int

    def __call__(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def table(self) -> np.ndarray:
        if self.q**self.in_arity > TABLE_LIMIT:
            raise InvalidInput("function domain too large to tabulate")
        return self(all_words(self.q, self.in_arity))

    def apply(self, word: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(v) for v in self(np.asarray([word], dtype=np.int64))[0])

    def to_json(self) -> dict:
        t = self.table()
        return {
            "kind": "table",
            "in": self.in_arity,
            "out": self.out_arity,
            "table": {
                ",".join(map(str, w)): [int(v) for v in row]
                for w, row in zip(all_words(self.q, self.in_arity).tolist(), t)
            },
        }


class TableFunction(NodeFunction):
    """Explicit lookup table indexed by the big-endian base-q value of the input."""

    def __init__(self, q: int, in_arity: int, out_arity: int, table):
        self.q, self.in_arity, self.out_arity = q, in_arity, out_arity
        t = np.asarray(table, dtype=np.int64).reshape(q**in_arity, out_arity)
        if t.size and (t.min() < 0 or t.max() >= q):
            raise InvalidInput("table entries outside the alphabet")
        self._table = t

    @classmethod
    def from_callable(cls, q: int, in_arity: int, out_arity: int, fn: Callable) -> "TableFunction":
        rows = [tuple(fn(tuple(w))) for w in itertools.product(range(q), repeat=in_arity)]
        return cls(q, in_arity, out_arity, rows)

    def __call__(self, x):
        return self._table[mixed_radix(x, self.q)]

    def table(self):
        return self._table


class LinearFunction(NodeFunction):
    """y = M x over GF(q); ``matrix`` has shape (out, in)."""

    def __init__(self, field: Field, matrix):
        self.field = field
        self.q = field.q
        self.matrix = np.asarray(matrix, dtype=np.int64).reshape(np.shape(matrix))
        self.out_arity, self.in_arity = self.matrix.shape

    def __call__(self, x):
        x = np.asarray(x, dtype=np.int64)
        if self.in_arity == 0 or self.out_arity == 0:
            return np.zeros((x.shape[0], self.out_arity), dtype=np.int64)
        return self.field.matmul(x, self.matrix.T)

    def to_json(self):
        return {"kind": "linear", "matrix": self.matrix.tolist()}


class RSDecoderFunction(NodeFunction):
    """Syndrome-decode the inputs at ``positions`` and emit the message on the first k outputs."""

    def __init__(self, code: MdsCode, in_arity: int, out_arity: int, positions: Sequence[int] | None = None):
        self.code = code
        self.q = code.field.q
        self.in_arity, self.out_arity = in_arity, out_arity
        self.positions = tuple(range(code.n)) if positions is None else tuple(positions)
        if len(self.positions) != code.n or code.k > out_arity:
            raise ArityMismatch("decoder does not fit the node degrees")
        self._decoder = SyndromeDecoder(code)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.int64)
        out = np.zeros((x.shape[0], self.out_arity), dtype=np.int64)
        if self.code.k:
            out[:, : self.code.k] = self._decoder(x[:, list(self.positions)])
        return out

    def to_json(self):
        return {
            "kind": "rs-decoder",
            "q": self.q,
            "n": self.code.n,
            "k": self.code.k,
            "points": list(self.code.points),
            "in": self.in_arity,
            "out": self.out_arity,
            "positions": list(self.positions),
        }


def function_from_json(d: dict, q: int) -> NodeFunction:
    kind = d.get("kind")
    if kind == "table":
        k, m = int(d["in"]), int(d["out"])
        rows = []
        for w in itertools.product(range(q), repeat=k):
            key = ",".join(map(str, w))
            if key not in d["table"]:
                raise InvalidInput(f"table is missing input {key}")
            rows.append(d["table"][key])
        return TableFunction(q, k, m, rows)
    if kind == "linear":
        return LinearFunction(field_ops(q), d["matrix"])
    if kind == "rs-decoder":
        code = MdsCode(field_ops(q), int(d["n"]), int(d["k"]), tuple(d["points"]))
        return RSDecoderFunction(code, int(d["in"]), int(d["out"]), d["positions"])
    raise InvalidInput(f"unknown node function kind {kind!r}")


@dataclass
class NetworkCode:
    """One function per intermediate node, over the alphabet range(q)."""

    q: int
    functions: dict[str, NodeFunction]

    def check(self, net: Network) -> None:
        for v in net.intermediates:
            f = self.functions.get(v)
            if f is None:
                raise ArityMismatch(f"no function for node {v!r}")
            if (f.in_arity, f.out_arity) != (len(net.in_edges[v]), len(net.out_edges[v])):
                raise ArityMismatch(
                    f"node {v!r}: function is {f.in_arity}->{f.out_arity}, node is "
                    f"{len(net.in_edges[v])}->{len(net.out_edges[v])}"
                )
            if f.q != self.q:
                raise ArityMismatch(f"node {v!r} uses alphabet {f.q}, code uses {self.q}")

    def to_json(self) -> dict:
        return {"alphabet": self.q, "nodes": {v: f.to_json() for v, f in self.functions.items()}}

    @classmethod
    def from_json(cls, d: dict) -> "NetworkCode":
        q = int(d["alphabet"])
        return cls(q, {v: function_from_json(f, q) for v, f in d["nodes"].items()})


@dataclass
class LinearNetworkCode:
    field: Field
    matrices: dict[str, np.ndarray]


def expand_linear(lin: LinearNetworkCode, q: int | None = None) -> NetworkCode:
    """Table form of a linear network code."""
    if q is not None and q != lin.field.q:
        raise FieldMismatch(f"alphabet {q} does not match GF({lin.field.q})")
    out = {}
    for v, m in lin.matrices.items():
        f = LinearFunction(lin.field, m)
        if lin.field.q**f.in_arity <= TABLE_LIMIT:
            f = TableFunction(lin.field.q, f.in_arity, f.out_arity, f.table())
        out[v] = f
    return NetworkCode(lin.field.q, out)


def forwarding_code(net: Network, q: int) -> NetworkCode:
    """Each node copies input i to output i and pads with zeros."""
    f = field_ops(q)
    mats = {}
    for v in net.intermediates:
        k, m = len(net.in_edges[v]), len(net.out_edges[v])
        mats[v] = np.eye(m, k, dtype=np.int64)
    return NetworkCode(q, {v: LinearFunction(f, mat) for v, mat in mats.items()})


# ---------------------------------------------------------------- error patterns


@dataclass(frozen=True)
class PatternSet:
    """All error patterns with support of size 0..t inside ``edges``, any values.

    Row i of ``pos``/``val`` lists the corrupted edges and substituted symbols of
    pattern i, padded with -1. Patterns are ordered by support size, then
    support (lexicographic), then values (lexicographic); pattern 0 is the
    empty pattern.
    """

    edges: tuple[int, ...]
    t: int
    q: int
    pos: np.ndarray
    val: np.ndarray

    @classmethod
    def build(cls, edges: Iterable[int], t: int, q: int) -> "PatternSet":
        edges = tuple(sorted(set(edges)))
        tt = min(t, len(edges))
        pos_parts, val_parts = [], []
        for w in range(tt + 1):
            vals = all_words(q, w)
            for supp in itertools.combinations(edges, w):
                p = np.full((len(vals), tt), -1, dtype=np.int64)
                v = np.zeros((len(vals), tt), dtype=np.int64)
                p[:, :w] = supp
                v[:, :w] = vals
                pos_parts.append(p)
                val_parts.append(v)
        return cls(edges, t, q, np.concatenate(pos_parts), np.concatenate(val_parts))

    def __len__(self) -> int:
        return len(self.pos)

    def pattern(self, i: int) -> dict[int, int]:
        return {int(e): int(v) for e, v in zip(self.pos[i], self.val[i]) if e >= 0}


def count_patterns(m: int, t: int, q: int) -> int:
    return sum(math.comb(m, w) * q**w for w in range(min(t, m) + 1))


# ---------------------------------------------------------------- evaluation


def forward(
    net: Network,
    code: NetworkCode,
    words: np.ndarray,
    pos: np.ndarray | None = None,
    val: np.ndarray | None = None,
) -> np.ndarray:
    """Edge values for a batch of source words under row-aligned error patterns.

    Returns an (N, |E|) array. Each edge carries its tail's output (the source
    word for source edges), replaced by the substituted symbol when the edge
    is corrupted; downstream nodes read the replaced values.
    """
    words = np.asarray(words, dtype=np.int64)
    n = words.shape[0]
    src = net.source_edges
    if words.shape[1] != len(src):
        raise ArityMismatch(f"source word length {words.shape[1]} != {len(src)}")
    vals = np.zeros((n, len(net.edges)), dtype=np.int64)
    vals[:, list(src)] = words
    cols = [] if pos is None else list(range(pos.shape[1]))

    def corrupt(edge_ids):
        for c in cols:
            hit = np.isin(pos[:, c], edge_ids)
            if hit.any():
                vals[hit, pos[hit, c]] = val[hit, c]

    corrupt(list(src))
    for v in net.intermediates:
        ins, outs = list(net.in_edges[v]), list(net.out_edges[v])
        vals[:, outs] = code.functions[v](vals[:, ins])
        corrupt(outs)
    return vals


def evaluate(
    net: Network,
    code: NetworkCode,
    source_word: Sequence[int],
    err: Mapping[int, int] | None = None,
    vulnerable: Iterable[int] | None = None,
) -> dict[int, int]:
    """Symbol carried by every edge for one source word and one error pattern."""
    code.check(net)
    err = dict(err or {})
    vul = net.vulnerable if vulnerable is None else frozenset(vulnerable)
    bad = [e for e in err if e not in vul]
    if bad:
        raise ErrorOutsideVulnerableSet(f"edges {bad} are not vulnerable")
    for s in err.values():
        if not 0 <= s < code.q:
            raise InvalidInput(f"symbol {s} outside the alphabet")
    k = len(err)
    pos = np.array([list(err)], dtype=np.int64).reshape(1, k)
    val = np.array([list(err.values())], dtype=np.int64).reshape(1, k)
    vals = forward(net, code, np.asarray([source_word]), pos, val)[0]
    return {i: int(x) for i, x in enumerate(vals)}


def row_codes(x: np.ndarray, q: int) -> np.ndarray:
    """Injective int64 encoding of rows (base-q); falls back to byte strings when too long."""
    x = np.asarray(x, dtype=np.int64)
    if q ** x.shape[1] < 1 << 62:
        return mixed_radix(x, q)
    b = np.ascontiguousarray(x.astype(np.uint8))
    return b.view(np.dtype((np.void, x.shape[1]))).ravel()


def decode_row(code: int, q: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        code, r = divmod(int(code), q)
        out.append(r)
    return tuple(reversed(out))


def terminal_codes(
    net: Network,
    code: NetworkCode,
    terminal: str,
    words: np.ndarray,
    patterns: PatternSet,
    chunk_rows: int = CHUNK_ROWS,
) -> Iterable[tuple[int, np.ndarray]]:
    """Yield (first word index, codes) blocks; codes has shape (block, |patterns|)."""
    words = np.asarray(words, dtype=np.int64)
    p = len(patterns)
    ins = list(net.in_edges[terminal])
    step = max(1, chunk_rows // p)
    for start in range(0, len(words), step):
        w = words[start : start + step]
        rows = np.repeat(w, p, axis=0)
        pos = np.tile(patterns.pos, (len(w), 1))
        val = np.tile(patterns.val, (len(w), 1))
        vals = forward(net, code, rows, pos, val)
        yield start, row_codes(vals[:, ins], code.q).reshape(len(w), p)


def _check_terminal(net: Network, terminal: str) -> None:
    if terminal not in net.terminals:
        raise NotATerminal(f"{terminal!r} is not a terminal")


def induced_channel(
    net: Network,
    code: NetworkCode,
    terminal: str,
    t: int,
    vulnerable: Iterable[int] | None = None,
) -> Channel:
    """Channel from source words to the values on in(terminal) under <= t errors on U."""
    _check_terminal(net, terminal)
    code.check(net)
    q = code.q
    vul = net.vulnerable if vulnerable is None else frozenset(vulnerable)
    patterns = PatternSet.build(vul, t, q)
    k = len(net.in_edges[terminal])
    s = len(net.source_edges)
    words = all_words(q, s)
    inputs = [tuple(w) for w in words.tolist()]

    if len(words) * len(patterns) <= 4 * CHUNK_ROWS and q**k < 1 << 62:
        table = {}
        for start, codes in terminal_codes(net, code, terminal, words, patterns):
            for i, row in enumerate(codes):
                table[inputs[start + i]] = [decode_row(c, q, k) for c in np.unique(row)]
        return Channel(inputs, table)

    def fan(x):
        (_, codes), = terminal_codes(net, code, terminal, np.asarray([x]), patterns)
        return [decode_row(c, q, k) for c in np.unique(codes[0])]

    return Channel(inputs, fan)


def _forward_fixed(net: Network, code: NetworkCode, n: int, fixed: dict[int, np.ndarray]) -> np.ndarray:
    """Forward pass where the edges in ``fixed`` carry given values and other source edges carry 0."""
    vals = np.zeros((n, len(net.edges)), dtype=np.int64)
    for e in net.source_edges:
        if e in fixed:
            vals[:, e] = fixed[e]
    for v in net.intermediates:
        ins, outs = list(net.in_edges[v]), list(net.out_edges[v])
        if all(e in fixed for e in outs):
            for e in outs:
                vals[:, e] = fixed[e]
            continue
        vals[:, outs] = code.functions[v](vals[:, ins])
        for e in outs:
            if e in fixed:
                vals[:, e] = fixed[e]
    return vals


def transfer_channel(
    net: Network,
    code: NetworkCode,
    e1: Iterable[int],
    e2: Iterable[int],
    t: int,
    vulnerable: Iterable[int] | None = None,
) -> Channel:
    """Channel from values on the edges of ``e1`` to values on the edges of ``e2``.

    Up to ``t`` coordinates of the input lying on vulnerable edges are
    corrupted. Each edge f of ``e2`` is then computed by a forward pass in
    which its immediate predecessors in ``e1`` carry the (corrupted) input
    values and every other edge of ``e1`` carries 0, so f depends on its
    immediate predecessors only. Inputs and outputs are tuples ordered by
    edge id.
    """
    code.check(net)
    e1 = sorted(set(e1))
    e2 = sorted(set(e2))
    if not netgraph.cut_precedes(net, e1, e2):
        raise NotPreceding("the first edge set does not precede the second")
    q = code.q
    vul = net.vulnerable if vulnerable is None else frozenset(vulnerable)
    coord = {e: i for i, e in enumerate(e1)}
    preds = {}
    for f in e2:
        p = netgraph.immediate_predecessors(net, f, e1)
        assert p, f"edge {f} has no immediate predecessor"
        preds[f] = p
    patterns = PatternSet.build([coord[e] for e in e1 if e in vul], t, q)
    inputs_arr = all_words(q, len(e1))
    inputs = [tuple(w) for w in inputs_arr.tolist()]

    def outputs_for(ys: np.ndarray) -> np.ndarray:
        cols = []
        for f in e2:
            fixed = {e: (ys[:, coord[e]] if e in preds[f] else 0) for e in e1}
            cols.append(_forward_fixed(net, code, len(ys), fixed)[:, f])
        return np.stack(cols, axis=1) if cols else np.zeros((len(ys), 0), np.int64)

    def corrupt(x: np.ndarray) -> np.ndarray:
        ys = np.repeat(x[None, :], len(patterns), axis=0)
        for c in range(patterns.pos.shape[1]):
            hit = patterns.pos[:, c] >= 0
            ys[hit, patterns.pos[hit, c]] = patterns.val[hit, c]
        return ys

    def fan(x):
        out = outputs_for(corrupt(np.asarray(x, dtype=np.int64)))
        return {tuple(r) for r in out.tolist()}

    return Channel(inputs, fan)
