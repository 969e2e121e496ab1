"""Explicit coding schemes (outer code + network code) and their verification.

Every constructor returns a :class:`Scheme` whose unambiguity can be checked
by :func:`verify`. Two verification routes exist:

* ``exhaustive``: evaluate every (codeword, error pattern) pair, hash the
  terminal outputs, and look for an output reached from two codewords.
* ``coset``: for a linear outer code and node functions that commute with
  adding codewords (linear maps and complete syndrome decoders), the fan-out
  of x is L(x) + Omega(0). Unambiguity then reduces to L being injective on
  the code and distinct elements of Omega(0) lying in distinct cosets of
  L(code). Only Omega(0) has to be enumerated.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from . import bounds, instances
from .channel import log_q
from .errors import FieldTooSmall, InvalidInput, NotTwoLevel, ParameterOutOfRange
from .gf import Field, MdsCode, field_ops
from .netcode import (
    LinearFunction,
    LinearNetworkCode,
    NetworkCode,
    PatternSet,
    RSDecoderFunction,
    TableFunction,
    all_words,
    forward,
    row_codes,
    terminal_codes,
)
from .netgraph import Network, detect_levels, two_level_network

ALARM = 0


@dataclass
class OuterWords:
    """An outer code given by explicit words, or by a generator matrix over GF(q)."""

    q: int
    length: int
    explicit: np.ndarray | None = None
    generator: np.ndarray | None = None

    def __post_init__(self):
        if self.explicit is None and self.generator is None:
            raise InvalidInput("outer code needs words or a generator")
        if self.explicit is not None:
            self.explicit = np.asarray(self.explicit, dtype=np.int64).reshape(-1, self.length)
            if len(self.explicit) == 0:
                raise InvalidInput("outer code must be nonempty")
            if len(np.unique(self.explicit, axis=0)) != len(self.explicit):
                raise InvalidInput("duplicate codewords")

    @property
    def dimension(self) -> int | None:
        return None if self.generator is None else int(self.generator.shape[0])

    def __len__(self) -> int:
        if self.explicit is not None:
            return len(self.explicit)
        return self.q ** self.generator.shape[0]

    @cached_property
    def words(self) -> np.ndarray:
        if self.explicit is not None:
            return self.explicit
        f = field_ops(self.q)
        k = self.generator.shape[0]
        if k == 0:
            return np.zeros((1, self.length), dtype=np.int64)
        return f.matmul(all_words(self.q, k), self.generator)

    def word_tuples(self) -> list[tuple[int, ...]]:
        return [tuple(w) for w in self.words.tolist()]

    def contains_symbol(self, s: int) -> bool:
        return bool((self.words == s).any())

    def to_json(self) -> dict:
        if self.generator is not None:
            return {"generator": self.generator.tolist(), "length": self.length}
        return {"words": self.explicit.tolist(), "length": self.length}

    @classmethod
    def from_json(cls, d: dict, q: int) -> "OuterWords":
        n = int(d["length"])
        if "generator" in d:
            return cls(q, n, generator=np.asarray(d["generator"], dtype=np.int64).reshape(-1, n))
        return cls(q, n, explicit=d["words"])


@dataclass
class Scheme:
    name: str
    network: Network
    outer: OuterWords
    code: NetworkCode
    t: int
    claimed_code_size: int
    decoders: dict[str, Callable] = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    linear: LinearNetworkCode | None = None

    @property
    def q(self) -> int:
        return self.code.q

    @property
    def rate(self) -> float:
        return log_q(self.claimed_code_size, self.q)

    def to_json(self) -> dict:
        inst = instances.Instance(self.network, self.q, self.t, {})
        return {
            "name": self.name,
            "instance": inst.to_dict(),
            "code": self.code.to_json(),
            "outer": self.outer.to_json(),
            "claimed_code_size": self.claimed_code_size,
            "details": self.details,
        }

    @classmethod
    def from_json(cls, d: dict) -> "Scheme":
        inst = instances.parse_instance(d["instance"])
        code = NetworkCode.from_json(d["code"])
        if code.q != inst.q:
            raise InvalidInput("certificate alphabet mismatch")
        return cls(
            d.get("name", "certificate"),
            inst.network,
            OuterWords.from_json(d["outer"], inst.q),
            code,
            inst.t,
            int(d["claimed_code_size"]),
            details=d.get("details", {}),
        )

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)


@dataclass
class VerificationReport:
    passed: bool
    size: int
    rate: float
    method: str
    terminals: dict[str, bool]
    witness: dict | None = None
    claimed_ok: bool = True

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "code_size": self.size,
            "rate": self.rate,
            "method": self.method,
            "terminals": self.terminals,
            "claimed_size_matches": self.claimed_ok,
            "witness": self.witness,
        }


# ------------------------------------------------------------ verification


def _exhaustive_terminal(net, code, terminal, words, patterns):
    """None if unambiguous at ``terminal``, else (word i, word j, output code)."""
    all_codes, owners = [], []
    for start, codes in terminal_codes(net, code, terminal, words, patterns):
        s = np.sort(codes, axis=1)
        keep = np.ones_like(s, dtype=bool)
        keep[:, 1:] = s[:, 1:] != s[:, :-1]
        all_codes.append(s[keep])
        owners.append(np.repeat(np.arange(start, start + len(s)), keep.sum(axis=1)))
    flat = np.concatenate(all_codes)
    own = np.concatenate(owners)
    order = np.argsort(flat, kind="stable")
    fs = flat[order]
    dup = np.flatnonzero(fs[1:] == fs[:-1])
    if len(dup) == 0:
        return None
    k = dup[0]
    return int(own[order[k]]), int(own[order[k + 1]]), fs[k]


def _pattern_reaching(net, code, terminal, word, patterns, target):
    (_, codes), = terminal_codes(net, code, terminal, word[None, :], patterns)
    return patterns.pattern(int(np.flatnonzero(codes[0] == target)[0]))


def _equivariant(code: NetworkCode) -> bool:
    return all(isinstance(f, (LinearFunction, RSDecoderFunction)) for f in code.functions.values())


def _coset_terminal(net, code, terminal, outer, patterns, field_: Field):
    """Coset-route check at one terminal; returns None or a witness dict."""
    q = code.q
    ins = list(net.in_edges[terminal])
    g = outer.generator
    k = g.shape[0]
    images = forward(net, code, g)[:, ins] if k else np.zeros((0, len(ins)), np.int64)
    if k and field_.rank(images) < k:
        return {"reason": "outer code is not mapped injectively to the terminal"}
    parity = field_.nullspace(images) if k else np.eye(len(ins), dtype=np.int64)
    zero = np.zeros((1, len(net.source_edges)), dtype=np.int64)
    omega = []
    for _, codes in terminal_codes(net, code, terminal, zero, patterns):
        omega.append(np.unique(codes[0]))
    uniq = np.unique(np.concatenate(omega))
    vecs = np.zeros((len(uniq), len(ins)), dtype=np.int64)
    rest = uniq.copy()
    for j in range(len(ins) - 1, -1, -1):
        rest, vecs[:, j] = np.divmod(rest, q)
    if len(parity) == 0:
        synd = np.zeros(len(uniq), dtype=np.int64)
    else:
        synd = row_codes(field_.matmul(vecs, parity.T), q)
    su, inv, counts = np.unique(synd, return_inverse=True, return_counts=True)
    if len(su) == len(uniq):
        return None
    clash = np.flatnonzero(counts > 1)[0]
    i, j = np.flatnonzero(inv == clash)[:2]
    return {
        "reason": "two error outputs differ by the image of a nonzero codeword",
        "outputs": [vecs[i].tolist(), vecs[j].tolist()],
    }


def _spot_check_equivariance(net, code, outer, patterns, terminal, rng, samples=256) -> bool:
    """Random check of out(x with e substituted) = out(x) + out(0 with the matching additive error).

    Substituting symbol v on source coordinate j of x is the same as adding
    v - x_j there, so the zero-word run uses that difference.
    """
    f = field_ops(code.q)
    words = outer.words if len(outer) <= 4096 else None
    g = outer.generator
    ins = list(net.in_edges[terminal])
    idx = rng.integers(0, len(patterns), size=samples)
    if words is not None:
        xs = words[rng.integers(0, len(words), size=samples)]
    else:
        msgs = rng.integers(0, code.q, size=(samples, g.shape[0]))
        xs = f.matmul(msgs, g)
    pos, val = patterns.pos[idx], patterns.val[idx]
    col = {e: i for i, e in enumerate(net.source_edges)}
    diff = val.copy()
    for c in range(pos.shape[1]):
        hit = pos[:, c] >= 0
        cur = xs[hit, [col[int(e)] for e in pos[hit, c]]]
        diff[hit, c] = f.sub(val[hit, c], cur)
    lhs = forward(net, code, xs, pos, val)[:, ins]
    clean = forward(net, code, xs)[:, ins]
    err = forward(net, code, np.zeros_like(xs), pos, diff)[:, ins]
    return bool((lhs == f.add(clean, err)).all())


def verify(
    scheme: Scheme,
    t: int | None = None,
    method: str = "auto",
    vulnerable=None,
) -> VerificationReport:
    """Check that the outer code is unambiguous at every terminal."""
    net, code, outer = scheme.network, scheme.code, scheme.outer
    code.check(net)
    t = scheme.t if t is None else t
    vul = net.vulnerable if vulnerable is None else frozenset(vulnerable)
    patterns = PatternSet.build(vul, t, code.q)
    size = len(outer)
    if method == "auto":
        coset_ok = (
            outer.generator is not None
            and _equivariant(code)
            and vul <= set(net.source_edges)
        )
        method = "coset" if coset_ok and size * len(patterns) > 20_000_000 else "exhaustive"
    results, witness = {}, None
    for terminal in net.terminals:
        if method == "exhaustive":
            words = outer.words
            hit = _exhaustive_terminal(net, code, terminal, words, patterns)
            ok = hit is None
            if not ok and witness is None:
                i, j, y = hit
                witness = {
                    "terminal": terminal,
                    "words": [words[i].tolist(), words[j].tolist()],
                    "errors": [
                        _pattern_reaching(net, code, terminal, words[i], patterns, y),
                        _pattern_reaching(net, code, terminal, words[j], patterns, y),
                    ],
                }
        elif method == "coset":
            if outer.generator is None or not _equivariant(code):
                raise InvalidInput("coset verification needs a linear outer code and equivariant nodes")
            if not vul <= set(net.source_edges):
                raise InvalidInput("coset verification needs every vulnerable edge at the source")
            rng = np.random.default_rng(0)
            if not _spot_check_equivariance(net, code, outer, patterns, terminal, rng):
                raise AssertionError("node functions are not translation-equivariant on this code")
            w = _coset_terminal(net, code, terminal, outer, patterns, field_ops(code.q))
            ok = w is None
            if not ok and witness is None:
                witness = {"terminal": terminal, **w}
        else:
            raise InvalidInput(f"unknown verification method {method!r}")
        results[terminal] = ok
    passed = all(results.values())
    return VerificationReport(
        passed=passed,
        size=size,
        rate=log_q(size, code.q),
        method=method,
        terminals=results,
        witness=witness,
        claimed_ok=size == scheme.claimed_code_size,
    )


# ------------------------------------------------------------ helpers


def _table(q: int, k: int, m: int, fn) -> TableFunction:
    return TableFunction.from_callable(q, k, m, fn)


def _repetition(q: int, n: int, symbols) -> OuterWords:
    return OuterWords(q, n, explicit=[[x] * n for x in symbols])


def _agree_or_alarm(x):
    return x[0] if all(v == x[0] for v in x) else ALARM


def _majority(xs: Sequence[int]) -> int:
    c = Counter(xs)
    top = max(c.values())
    return min(s for s, n in c.items() if n == top)


def _prefer_clean(y):
    a, b = y
    if a == b or b == ALARM:
        return a
    if a == ALARM:
        return b
    return a


def _require_q(q: int, low: int = 2) -> None:
    if q < low:
        raise ParameterOutOfRange(f"alphabet size must be at least {low}")


# ------------------------------------------------------------ family schemes


def scheme_diamond(q: int) -> Scheme:
    """Alarm scheme on the Diamond network, t = 1, code size q - 1.

    V1 forwards, V2 forwards when its two inputs agree and sends the alarm
    symbol 0 otherwise; 0 is never sent by the source.
    """
    _require_q(q)
    net = instances.diamond()
    code = NetworkCode(q, {
        "V1": _table(q, 1, 1, lambda x: x),
        "V2": _table(q, 2, 1, lambda x: (_agree_or_alarm(x),)),
    })
    return Scheme(
        "diamond", net, _repetition(q, 3, range(1, q)), code, 1, q - 1,
        decoders={"T": lambda y: y[1] if y[1] != ALARM else y[0]},
    )


def scheme_mirrored_diamond(q: int) -> Scheme:
    """Both nodes forward on agreement, else alarm; every repetition word is used."""
    _require_q(q)
    net = instances.mirrored_diamond()
    f = _table(q, 2, 1, lambda x: (_agree_or_alarm(x),))
    code = NetworkCode(q, {"V1": f, "V2": f})
    return Scheme(
        "mirrored-diamond", net, _repetition(q, 4, range(q)), code, 1, q,
        decoders={"T": _prefer_clean},
    )


def scheme_a2(q: int) -> Scheme:
    """Six-fold repetition on ([2,4],[2,2]) against t = 2."""
    _require_q(q)
    net = instances.family_network("A", 2)

    def v2(x):
        sym, n = Counter(x).most_common(1)[0]
        return (sym, sym) if n >= 3 else (0, 1)

    code = NetworkCode(q, {"V1": _table(q, 2, 2, lambda x: x), "V2": _table(q, 4, 2, v2)})
    return Scheme(
        "a2", net, _repetition(q, 6, range(q)), code, 2, q,
        decoders={"T": lambda y: y[2] if y[2] == y[3] else y[0]},
    )


@dataclass(frozen=True)
class ShellLabels:
    """Labelling of A^(t+1) used by the second node of ([t,t+1],[t,t]).

    Words within distance h = t // 2 of the constant word (j,...,j) get label
    j * (h + 1) + distance; all other words get the label q * (h + 1). Labels
    are written as base-q words of length t in lexicographic order.
    """

    q: int
    t: int

    @property
    def h(self) -> int:
        return self.t // 2

    @property
    def leftover(self) -> int:
        return self.q * (self.h + 1)

    def label(self, w: Sequence[int]) -> int:
        for j in range(self.q):
            d = sum(v != j for v in w)
            if d <= self.h:
                return j * (self.h + 1) + d
        return self.leftover

    def encode(self, label: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.t):
            label, r = divmod(label, self.q)
            out.append(r)
        return tuple(reversed(out))

    def decode(self, y: Sequence[int]) -> int:
        v = 0
        for s in y:
            v = v * self.q + s
        return v


def _c_case1_map(x):
    w = tuple(x)
    ones = sum(w)
    if ones == 0:
        return (0, 0)
    if ones == 3:
        return (1, 1)
    return (0, 1) if ones == 1 else (1, 0)


def _c_case1_decode(y):
    x, lab = y[:2], tuple(y[2:])
    if lab == (0, 0):
        return 0
    if lab == (1, 1):
        return 1
    j = 0 if lab == (0, 1) else 1
    return j if sum(v == j for v in x) >= 1 else _majority(x)


def scheme_c_t(q: int, t: int) -> Scheme:
    """(2t+1)-fold repetition on ([t,t+1],[t,t]) with a shell-labelling second node."""
    if t < 2:
        raise ParameterOutOfRange("this construction needs t >= 2")
    _require_q(q)
    net = instances.family_network("C", t)
    if q == 2 and t == 2:
        f2 = _table(q, 3, 2, _c_case1_map)
        decode = _c_case1_decode
    else:
        lab = ShellLabels(q, t)
        if lab.leftover + 1 > q**t:
            raise ParameterOutOfRange("not enough labels for the shells")
        f2 = _table(q, t + 1, t, lambda x: lab.encode(lab.label(x)))

        def decode(y, lab=lab, t=t):
            x, label = list(y[:t]), lab.decode(y[t:])
            if label >= lab.leftover:
                return _majority(x)
            j, i = divmod(label, lab.h + 1)
            if i == 0 or sum(v == j for v in x) >= i:
                return j
            return _majority(x)

    code = NetworkCode(q, {"V1": _table(q, t, t, lambda x: x), "V2": f2})
    return Scheme(
        "c", net, _repetition(q, 2 * t + 1, range(q)), code, t, q,
        decoders={"T": decode}, details={"t": t},
    )


def scheme_d_t(q: int, t: int) -> Scheme:
    """4t-fold repetition on ([2t,2t],[1,1]); nodes send a strict majority or the alarm."""
    _require_q(q)
    if t < 1:
        raise ParameterOutOfRange("t must be positive")
    net = instances.family_network("D", t)

    def node(x):
        sym, n = Counter(x).most_common(1)[0]
        return (sym,) if n > t else (ALARM,)

    f = _table(q, 2 * t, 1, node)
    code = NetworkCode(q, {"V1": f, "V2": f})
    return Scheme(
        "d", net, _repetition(q, 4 * t, range(q)), code, t, q,
        decoders={"T": _prefer_clean}, details={"t": t},
    )


def scheme_opening_network(q: int) -> Scheme:
    """Alarm scheme on the two-terminal relay network, t = 1, size q - 1 at both terminals."""
    _require_q(q)
    net = instances.two_terminal_relay()

    def pair(x):
        s = _agree_or_alarm(x)
        return (s, s)

    def relay(x):
        live = [v for v in x if v != ALARM]
        if len(live) == 1 or (len(live) == 2 and live[0] == live[1]):
            return (live[0],)
        return (ALARM,)

    code = NetworkCode(q, {
        "V1": _table(q, 2, 2, pair),
        "V2": _table(q, 2, 2, pair),
        "V3": _table(q, 2, 1, relay),
        "V4": _table(q, 1, 2, lambda x: (x[0], x[0])),
    })
    trust = lambda y: y[0] if y[0] != ALARM else y[1]  # noqa: E731
    return Scheme(
        "relay", net, _repetition(q, 4, range(1, q)), code, 1, q - 1,
        decoders={"T1": trust, "T2": trust},
    )


# ------------------------------------------------------------ MDS-based schemes


def _two_level(a, b) -> Network:
    if a is None or b is None:
        raise NotTwoLevel("degree lists a and b are required")
    a, b = list(map(int, a)), list(map(int, b))
    if len(a) != len(b) or not a or min(a + b) < 1:
        raise NotTwoLevel("degree lists must be nonempty, positive and of equal length")
    return two_level_network(a, b)


def _field_for(q: int, lengths: Sequence[int]) -> Field:
    need = max([2, *lengths])
    if q < need:
        raise FieldTooSmall(f"alphabet {q} is too small; need q >= {need}", need)
    return field_ops(q)


def _assemble(q, a, lengths_and_positions, field_: Field) -> tuple[np.ndarray, list[MdsCode]]:
    """Block generator matrix placing each MDS code on its source positions."""
    rows = []
    codes = []
    total = sum(a)
    for n, k, positions in lengths_and_positions:
        code = MdsCode(field_, n, k)
        codes.append(code)
        if k == 0:
            continue
        block = np.zeros((k, total), dtype=np.int64)
        block[:, list(positions)] = code.generator
        rows.append(block)
    g = np.concatenate(rows) if rows else np.zeros((0, total), dtype=np.int64)
    return g, codes


def _offsets(a):
    off = [0]
    for x in a:
        off.append(off[-1] + x)
    return off


def scheme_thm61(a, b, t: int, q: int) -> Scheme:
    """Partition-based MDS scheme on a simple 2-level network, source edges vulnerable.

    Nodes with a_i >= b_i + 2t decode a local [b_i+2t, b_i] code. The rest
    follows whichever of two branches carries more symbols: (X) nodes with
    2t < a_i < b_i + 2t decode a local [a_i, a_i-2t] code while nodes with
    a_i <= b_i forward under one global MDS code; (Y) those two groups both
    forward (at most b_i symbols each) under one global MDS code. Unused
    inputs and outputs carry 0.
    """
    net = _two_level(a, b)
    a, b = list(map(int, a)), list(map(int, b))
    prof = bounds.partition_profile(a, b, t)
    off = _offsets(a)
    use_x = prof.X >= prof.Y
    parts = []  # (n, k, source positions)
    for i in prof.I1:
        parts.append((b[i] + 2 * t, b[i], range(off[i], off[i] + b[i] + 2 * t)))
    i2_len = sum(a[i] for i in prof.I2)
    if use_x:
        for i in prof.I3_tilde:
            parts.append((a[i], a[i] - 2 * t, range(off[i], off[i] + a[i])))
        if i2_len > 2 * t:
            pos = [p for i in prof.I2 for p in range(off[i], off[i] + a[i])]
            parts.append((i2_len, i2_len - 2 * t, pos))
    else:
        pos = [p for i in prof.I2 for p in range(off[i], off[i] + a[i])]
        pos += [p for i in prof.I3 for p in range(off[i], off[i] + b[i])]
        parts.append((len(pos), len(pos) - 2 * t, pos))
    field_ = _field_for(q, [n for n, k, _ in parts if k > 0])
    g, _ = _assemble(q, a, parts, field_)

    funcs = {}
    for i in range(len(a)):
        name = f"V{i + 1}"
        zero = LinearFunction(field_, np.zeros((b[i], a[i]), dtype=np.int64))
        fwd = LinearFunction(field_, np.eye(b[i], a[i], dtype=np.int64))
        if i in prof.I1:
            funcs[name] = RSDecoderFunction(MdsCode(field_, b[i] + 2 * t, b[i]), a[i], b[i])
        elif use_x and i in prof.I3_tilde:
            funcs[name] = RSDecoderFunction(MdsCode(field_, a[i], a[i] - 2 * t), a[i], b[i])
        elif use_x and i in prof.I2 and i2_len > 2 * t:
            funcs[name] = fwd
        elif not use_x and (i in prof.I2 or i in prof.I3) and parts[-1][1] > 0:
            funcs[name] = fwd
        else:
            funcs[name] = zero
    code = NetworkCode(q, funcs)
    exponent = sum(b[i] for i in prof.I1) + max(prof.X, prof.Y)
    assert g.shape[0] == exponent, (g.shape, exponent)
    outer = OuterWords(q, sum(a), generator=g)
    return Scheme(
        "partition-mds", net, outer, code, t, q**exponent,
        details={"a": a, "b": b, "profile": prof.to_json(), "branch": "X" if use_x else "Y"},
    )


def scheme_prop63(a, b, t: int, q: int) -> Scheme:
    """Trim each node to min(a_i, b_i) lines, forward, and protect with one global MDS code."""
    net = _two_level(a, b)
    a, b = list(map(int, a)), list(map(int, b))
    off = _offsets(a)
    pos = [p for i in range(len(a)) for p in range(off[i], off[i] + min(a[i], b[i]))]
    n = len(pos)
    k = max(0, n - 2 * t)
    field_ = _field_for(q, [n] if k else [])
    g, _ = _assemble(q, a, [(n, k, pos)] if k else [], field_)
    mats = {f"V{i + 1}": np.eye(b[i], a[i], dtype=np.int64) for i in range(len(a))}
    lin = LinearNetworkCode(field_, mats)
    code = NetworkCode(q, {v: LinearFunction(field_, m) for v, m in mats.items()})
    outer = OuterWords(q, sum(a), generator=g)
    return Scheme(
        "trimmed-mds", net, outer, code, t, q**k, details={"a": a, "b": b}, linear=lin
    )


scheme_partition_mds = scheme_thm61
scheme_trimmed_mds = scheme_prop63

SCHEMES = {
    "diamond": lambda q, t, a, b: scheme_diamond(q),
    "mirrored-diamond": lambda q, t, a, b: scheme_mirrored_diamond(q),
    "a2": lambda q, t, a, b: scheme_a2(q),
    "c": lambda q, t, a, b: scheme_c_t(q, t),
    "d": lambda q, t, a, b: scheme_d_t(q, t),
    "relay": lambda q, t, a, b: scheme_opening_network(q),
    "partition-mds": lambda q, t, a, b: scheme_thm61(a, b, t, q),
    "trimmed-mds": lambda q, t, a, b: scheme_prop63(a, b, t, q),
}


def two_level_degrees(net: Network) -> tuple[list[int], list[int]]:
    lm = detect_levels(net)
    if lm is None or not lm.is_simple_two_level():
        raise NotTwoLevel("network is not a simple 2-level network")
    a, b = lm.degrees()
    return list(a), list(b)
