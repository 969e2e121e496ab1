"""Exhaustive search for the largest unambiguous code over all network codes.

For each candidate network code the per-terminal fan-outs of every source
word are tabulated, the pairs of words that collide at some terminal form a
conflict graph, and its maximum independent set is the best outer code for
that network code.

Symmetry: relabeling the symbols on an edge is a bijection, so it changes
neither collisions at the terminals nor what downstream nodes can compute.
Each output column of a node table is therefore enumerated as a
restricted-growth string (first occurrences appear in order 0, 1, 2, ...),
one representative per relabeling class. For linear codes the analogue is
scaling a row of the coefficient matrix, so rows are normalized to have
leading coefficient 1.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import time
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .channel import OuterCode, log_q, max_independent_set
from .errors import BudgetExceeded, DomainTooLarge, NotPrimePower
from .gf import field_ops, prime_power
from .netcode import (
    LinearFunction,
    NetworkCode,
    PatternSet,
    TableFunction,
    all_words,
    forward,
    row_codes,
)
from .netgraph import Network


@dataclass(frozen=True)
class SearchBudget:
    max_codes: int = 2_000_000
    max_inputs: int = 10_000
    time_limit: float | None = None
    symmetry: bool = True

    def __post_init__(self):
        if self.max_codes < 1 or self.max_inputs < 1:
            raise ValueError("budget limits must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time limit must be positive")


@dataclass
class CapacityCertificate:
    instance: dict
    max_code_size: int
    code: dict | None
    words: list[list[int]]
    exhaustive: bool
    linear: bool = False
    codes_examined: int = 0
    codes_total: int = 0

    @property
    def q(self) -> int:
        return self.instance["alphabet"]

    @property
    def value(self) -> float:
        return log_q(self.max_code_size, self.q)

    @property
    def key(self) -> str:
        return instance_key(self.instance, self.linear)

    def to_json(self) -> dict:
        return {
            "instance": self.instance,
            "key": self.key,
            "max_code_size": self.max_code_size,
            "capacity": self.value,
            "proved_optimal": self.exhaustive,
            "linear": self.linear,
            "codes_examined": self.codes_examined,
            "codes_total": self.codes_total,
            "witness": {"code": self.code, "outer": self.words},
        }

    @classmethod
    def from_json(cls, d: dict) -> "CapacityCertificate":
        return cls(
            d["instance"],
            int(d["max_code_size"]),
            d["witness"]["code"],
            d["witness"]["outer"],
            bool(d["proved_optimal"]),
            bool(d.get("linear", False)),
            int(d.get("codes_examined", 0)),
            int(d.get("codes_total", 0)),
        )

    def scheme(self):
        """The witness as a verifiable scheme."""
        from .instances import parse_instance
        from .schemes import OuterWords, Scheme

        inst = parse_instance(self.instance)
        net = inst.network
        code = NetworkCode.from_json(self.code)
        outer = OuterWords(inst.q, len(net.source_edges), explicit=self.words)
        return Scheme("search-witness", net, outer, code, inst.t, self.max_code_size)

    def reverify(self) -> bool:
        from .schemes import verify

        return verify(self.scheme()).passed


def instance_dict(net: Network, q: int, t: int) -> dict:
    d = net.to_dict()
    d["alphabet"] = q
    d["t"] = t
    return d


def instance_key(instance: dict, linear: bool) -> str:
    blob = json.dumps({"instance": instance, "linear": linear}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


# ---------------------------------------------------------------- enumeration


@lru_cache(maxsize=None)
def restricted_growth(length: int, q: int) -> np.ndarray:
    """All sequences s of ``length`` symbols with s[i] <= 1 + max(s[:i]) and values < q."""
    out = []

    def rec(prefix, top):
        if len(prefix) == length:
            out.append(prefix)
            return
        for s in range(min(top + 2, q)):
            rec(prefix + (s,), max(top, s))

    rec((), -1)
    return np.asarray(out, dtype=np.int64).reshape(len(out), length)


def _node_tables(q: int, k: int, m: int, symmetry: bool) -> list[np.ndarray]:
    n = q**k
    cols = restricted_growth(n, q) if symmetry else all_words(q, n)
    return [np.stack(c, axis=1) if m else np.zeros((n, 0), np.int64)
            for c in itertools.product(cols, repeat=m)]


def _normalized_rows(q: int, k: int) -> np.ndarray:
    rows = all_words(q, k)
    keep = []
    for r in rows:
        nz = np.flatnonzero(r)
        if len(nz) == 0 or r[nz[0]] == 1:
            keep.append(r)
    return np.asarray(keep, dtype=np.int64).reshape(len(keep), k) if keep else rows[:0]


def _node_matrices(q: int, k: int, m: int, symmetry: bool) -> list[np.ndarray]:
    rows = _normalized_rows(q, k) if symmetry else all_words(q, k)
    return [np.asarray(c, dtype=np.int64).reshape(m, k) for c in itertools.product(rows, repeat=m)]


def _restricted_growth_count(length: int, q: int) -> int:
    # sum of Stirling numbers of the second kind S(length, j), j <= q
    s = [1] + [0] * q
    for _ in range(length):
        s = [0] + [j * s[j] + s[j - 1] for j in range(1, q + 1)]
    return sum(s)


def count_codes(net: Network, q: int, linear: bool = False, symmetry: bool = True) -> int:
    """Number of network codes the search would visit."""
    total = 1
    for v in net.intermediates:
        k, m = len(net.in_edges[v]), len(net.out_edges[v])
        if linear:
            per = (((q**k - 1) // (q - 1) + 1) if symmetry else q**k) ** m
        else:
            per = (_restricted_growth_count(q**k, q) if symmetry else q ** (q**k)) ** m
        total *= per
    return total


# ---------------------------------------------------------------- per-code work


class _Workspace:
    """Source words and error patterns expanded once, reused for every code."""

    def __init__(self, net: Network, q: int, t: int, max_inputs: int):
        self.net, self.q = net, q
        s = len(net.source_edges)
        if q**s > max_inputs:
            raise DomainTooLarge(f"{q**s} source words exceed the input limit {max_inputs}")
        self.words = all_words(q, s)
        self.patterns = PatternSet.build(net.vulnerable, t, q)
        p = len(self.patterns)
        self.rows = np.repeat(self.words, p, axis=0)
        self.pos = np.tile(self.patterns.pos, (len(self.words), 1))
        self.val = np.tile(self.patterns.val, (len(self.words), 1))
        self.n = len(self.words)
        self.p = p
        self.owner = np.repeat(np.arange(self.n), p)

    def terminal_outputs(self, code: NetworkCode) -> list[np.ndarray]:
        vals = forward(self.net, code, self.rows, self.pos, self.val)
        return [
            row_codes(vals[:, list(self.net.in_edges[T])], self.q).reshape(self.n, self.p)
            for T in self.net.terminals
        ]

    def packing_limit(self, outs: list[np.ndarray]) -> int:
        """Largest k such that k disjoint fan-outs could fit, minimized over terminals."""
        best = self.n
        for codes in outs:
            s = np.sort(codes, axis=1)
            sizes = np.sort((s[:, 1:] != s[:, :-1]).sum(axis=1) + 1)
            space = len(np.unique(codes))
            best = min(best, int(np.searchsorted(np.cumsum(sizes), space, side="right")))
        return best

    def conflicts(self, outs: list[np.ndarray]) -> list[int]:
        conf = np.zeros((self.n, self.n), dtype=bool)
        for codes in outs:
            _, inv = np.unique(codes.ravel(), return_inverse=True)
            inc = np.zeros((self.n, inv.max() + 1), dtype=np.float32)
            inc[self.owner, inv] = 1.0
            conf |= (inc @ inc.T) > 0
        np.fill_diagonal(conf, False)
        packed = np.packbits(conf, axis=1, bitorder="little")
        return [int.from_bytes(r.tobytes(), "little") for r in packed]

    def best_words(self, code: NetworkCode, lower: int = 0, greedy: bool = False) -> list[int] | None:
        outs = self.terminal_outputs(code)
        if self.packing_limit(outs) <= lower:
            return None
        return max_independent_set(self.conflicts(outs), lower=lower, greedy=greedy)


def best_code_for(
    net: Network, q: int, t: int, code: NetworkCode, budget: SearchBudget | None = None
) -> OuterCode:
    """Largest outer code that is unambiguous at every terminal for a fixed network code."""
    budget = budget or SearchBudget()
    code.check(net)
    ws = _Workspace(net, q, t, budget.max_inputs)
    idx = ws.best_words(code) or [0]
    return OuterCode(tuple(tuple(int(x) for x in ws.words[i]) for i in idx))


# ---------------------------------------------------------------- drivers


def _cache_path(cache_dir, key: str) -> Path | None:
    if cache_dir is None:
        return None
    return Path(cache_dir) / f"{key}.json"


def default_cache_dir() -> Path:
    env = os.environ.get("ADVNET_CACHE_DIR")
    return Path(env) if env else Path.home() / ".cache" / "advnet"


def _search(net, q, t, budget, linear, cache_dir, greedy=False):
    budget = budget or SearchBudget()
    inst = instance_dict(net, q, t)
    key = instance_key(inst, linear)
    path = _cache_path(cache_dir, key)
    if path is not None and path.is_file():
        cert = CapacityCertificate.from_json(json.loads(path.read_text()))
        if cert.exhaustive:
            return cert

    total = count_codes(net, q, linear, budget.symmetry)
    if total > budget.max_codes:
        raise BudgetExceeded(f"{total} network codes exceed the budget {budget.max_codes}")
    ws = _Workspace(net, q, t, budget.max_inputs)
    nodes = list(net.intermediates)
    if linear:
        f = field_ops(q)
        choices = [
            _node_matrices(q, len(net.in_edges[v]), len(net.out_edges[v]), budget.symmetry)
            for v in nodes
        ]

        def build(combo):
            return NetworkCode(q, {v: LinearFunction(f, m) for v, m in zip(nodes, combo)})
    else:
        choices = [
            _node_tables(q, len(net.in_edges[v]), len(net.out_edges[v]), budget.symmetry)
            for v in nodes
        ]

        def build(combo):
            return NetworkCode(
                q,
                {
                    v: TableFunction(q, len(net.in_edges[v]), len(net.out_edges[v]), tab)
                    for v, tab in zip(nodes, combo)
                },
            )

    start = time.monotonic()
    best_size, best_code, best_words = 0, None, []
    examined = 0
    for combo in itertools.product(*choices):
        code = build(combo)
        examined += 1
        found = ws.best_words(code, lower=best_size, greedy=greedy)
        if found is not None:
            best_size, best_code, best_words = len(found), code, found
            if best_size == ws.n:
                break
        if budget.time_limit is not None and time.monotonic() - start > budget.time_limit:
            cert = _certificate(inst, ws, best_size, best_code, best_words, False, linear, examined, total)
            raise BudgetExceeded("time limit reached", certificate=cert)
    cert = _certificate(inst, ws, best_size, best_code, best_words, not greedy, linear, examined, total)
    if path is not None and not greedy:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(cert.to_json(), indent=1, sort_keys=True))
    return cert


def _certificate(inst, ws, size, code, words, exhaustive, linear, examined, total):
    return CapacityCertificate(
        inst,
        max(size, 1),
        None if code is None else code.to_json(),
        [ws.words[i].tolist() for i in (words or [0])],
        exhaustive,
        linear,
        examined,
        total,
    )


def exact_capacity(
    net: Network,
    q: int,
    t: int,
    budget: SearchBudget | None = None,
    cache_dir=None,
    greedy: bool = False,
) -> CapacityCertificate:
    """Largest unambiguous code over all network codes and outer codes.

    With ``greedy`` each network code gets a greedy outer code instead of a
    maximum one, and the certificate is a lower bound only.
    """
    return _search(net, q, t, budget, False, cache_dir, greedy)


def exact_linear_capacity(
    net: Network,
    q: int,
    t: int,
    budget: SearchBudget | None = None,
    cache_dir=None,
    greedy: bool = False,
) -> CapacityCertificate:
    """Same search restricted to linear network codes over GF(q); outer codes stay arbitrary."""
    if prime_power(q) is None:
        raise NotPrimePower(f"{q} is not a prime power")
    return _search(net, q, t, budget, True, cache_dir, greedy)
