"""Upper and lower bounds on 1-shot capacity, packing checks, and BSC curves.

Rates are measured in alphabet symbols (log base q of the code size).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import netgraph
from .errors import OutOfRange, PreconditionViolated, UnknownFamily
from .netgraph import Network


@dataclass(frozen=True)
class BoundReport:
    """A named bound. ``strict`` means the capacity is strictly below ``value``."""

    name: str
    value: float
    strict: bool = False
    exact: bool = False
    witness: dict = field(default_factory=dict)
    assumptions: tuple[str, ...] = ()
    rule: str = ""

    def __str__(self) -> str:
        v = int(self.value) if float(self.value).is_integer() else round(self.value, 9)
        return f"< {v}" if self.strict else f"{v}"

    def key(self) -> tuple[float, int]:
        """Sort key: smaller means a tighter upper bound."""
        return (round(self.value, 12), 0 if self.strict else 1)

    def max_code_size(self, q: int) -> int:
        """Largest code size compatible with this upper bound."""
        bound = q**self.value
        top = math.floor(bound + 1e-9)
        if self.strict and abs(bound - round(bound)) < 1e-9:
            top = round(bound) - 1
        return top

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "display": str(self),
            "strict": self.strict,
            "exact": self.exact,
            "rule": self.rule,
            "witness": self.witness,
            "assumptions": list(self.assumptions),
        }


# ---------------------------------------------------------------- Singleton


def cut_value(cut, vulnerable, t: int) -> int:
    cut = set(cut)
    inside = len(cut & set(vulnerable))
    return len(cut) - inside + max(0, inside - 2 * t)


def singleton_bound(
    net: Network, t: int, vulnerable=None, max_vertices: int = netgraph.DEFAULT_MAX_VERTICES
) -> BoundReport:
    """min over terminals and cuts E' of |E' \\ U| + max(0, |E' & U| - 2t)."""
    vul = net.vulnerable if vulnerable is None else frozenset(vulnerable)
    best = None
    for term in net.terminals:
        for cut in netgraph.enumerate_minimal_cuts(net, term, max_vertices):
            v = cut_value(cut, vul, t)
            if best is None or v < best[0]:
                best = (v, term, sorted(cut))
    v, term, cut = best
    return BoundReport("singleton", v, witness={"terminal": term, "cut": cut}, rule="edge-cut")


def singleton_2level(a: Sequence[int], b: Sequence[int], t: int) -> BoundReport:
    """min over partitions P1 | P2 of sum_{P1} b_i + max(0, sum_{P2} a_i - 2t)."""
    n = len(a)
    best = None
    for bits in range(1 << n):
        p1 = [i for i in range(n) if bits >> i & 1]
        p2 = [i for i in range(n) if not bits >> i & 1]
        v = sum(b[i] for i in p1) + max(0, sum(a[i] for i in p2) - 2 * t)
        if best is None or v < best[0]:
            best = (v, p1, p2)
    v, p1, p2 = best
    return BoundReport("singleton-2level", v, witness={"P1": p1, "P2": p2}, rule="partition")


def full_adversary_value(net: Network, t: int) -> BoundReport:
    """max(0, mu - 2t) with mu the smallest source-terminal min-cut (every edge vulnerable)."""
    cuts = {term: netgraph.min_cut(net, net.source, term) for term in net.terminals}
    mu = min(cuts.values())
    return BoundReport(
        "full-adversary",
        max(0, mu - 2 * t),
        exact=True,
        witness={"min_cuts": cuts},
        assumptions=("every edge vulnerable", "alphabet is a sufficiently large field"),
        rule="every edge vulnerable: min-cut - 2t",
    )


# ---------------------------------------------------------------- lower bounds


@dataclass(frozen=True)
class PartitionProfile:
    I1: tuple[int, ...]
    I2: tuple[int, ...]
    I3: tuple[int, ...]
    I3_tilde: tuple[int, ...]
    X: int
    Y: int

    def to_json(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.__dict__.items()}


def partition_profile(a: Sequence[int], b: Sequence[int], t: int) -> PartitionProfile:
    """Split nodes by how their in-degree compares to b_i and b_i + 2t.

    I1 takes precedence over I2 (they can only overlap when t = 0).
    """
    n = len(a)
    i1 = tuple(i for i in range(n) if a[i] >= b[i] + 2 * t)
    i2 = tuple(i for i in range(n) if a[i] <= b[i] and i not in i1)
    i3 = tuple(i for i in range(n) if i not in i1 and i not in i2)
    i3t = tuple(i for i in i3 if a[i] > 2 * t)
    sa2 = sum(a[i] for i in i2)
    x = sum(a[i] - 2 * t for i in i3t) + max(0, sa2 - 2 * t)
    y = max(0, sa2 + sum(b[i] for i in i3) - 2 * t)
    return PartitionProfile(i1, i2, i3, i3t, x, y)


def lower_thm61(a: Sequence[int], b: Sequence[int], t: int) -> BoundReport:
    prof = partition_profile(a, b, t)
    v = sum(b[i] for i in prof.I1) + max(prof.X, prof.Y)
    return BoundReport(
        "partition-lower",
        v,
        witness=prof.to_json(),
        assumptions=("q >= longest MDS length used",),
        rule="lower bound",
    )


def lower_prop63(a: Sequence[int], b: Sequence[int], t: int) -> BoundReport:
    v = max(0, sum(min(x, y) for x, y in zip(a, b)) - 2 * t)
    return BoundReport(
        "trimmed-lower", v, assumptions=("q >= sum of min(a_i, b_i)",), rule="lower bound"
    )


# ---------------------------------------------------------------- families


lower_partition = lower_thm61
lower_trimmed = lower_prop63


def match_family(a: Sequence[int], b: Sequence[int], t: int) -> tuple[str, int] | None:
    """Identify ([a],[b]) with adversary t as a member of a named 2-node family.

    Matching ignores node order. A1 is checked first since B1, C1 and E1
    coincide with it.
    """
    if len(a) != 2:
        return None
    pairs = sorted(zip(a, b))
    candidates = []
    if t >= 1:
        candidates += [("A", t), ("C", t), ("D", t), ("E", t)]
    if t == 1:
        candidates += [("B", s) for s in range(1, max(a) + 1)]
    from .instances import family_degrees

    for fam, p in candidates:
        if fam == "C" and p < 2:
            continue
        fa, fb = family_degrees(fam, p)
        if sorted(zip(fa, fb)) == pairs:
            return fam, p
    return None


def family_strict_upper(family: str, param: int, q: int | None = None) -> BoundReport:
    """Sharpest known statement for each family (rates in base q).

    A1: exactly log_q(q-1); A_t: < t; B_s: < s; C_t (t >= 2): exactly 1;
    D_t: exactly 1; E_t: < 1.
    """
    fam = family.upper()
    if fam not in "ABCDE" or len(fam) != 1:
        raise UnknownFamily(f"unknown family {family!r}")
    w = {"family": fam, "param": param}
    if fam == "A" and param == 1:
        if q is None:
            return BoundReport("family", 1, strict=True, witness=w, rule="family A1 (q unknown)")
        return BoundReport("family", math.log(q - 1, q) if q > 2 else 0.0, exact=True, witness=w, rule="family A1")
    if fam == "A":
        return BoundReport("family", param, strict=True, witness=w, rule="family A")
    if fam == "B":
        return BoundReport("family", param, strict=True, witness=w, rule="family B")
    if fam == "C":
        if param < 2:
            raise UnknownFamily("family C needs t >= 2")
        return BoundReport("family", 1, exact=True, witness=w, rule="family C")
    if fam == "D":
        return BoundReport("family", 1, exact=True, witness=w, rule="family D")
    return BoundReport("family", 1, strict=True, witness=w, rule="family E")


# ---------------------------------------------------------------- packing


@dataclass(frozen=True)
class PackingReport:
    lhs: int
    rhs: int
    form: str

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    def to_json(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "holds": self.holds, "form": self.form}


def _ball(center: Sequence[int], radius: int, q: int) -> np.ndarray:
    n = len(center)
    rows = [list(center)]
    for w in range(1, min(radius, n) + 1):
        for supp in itertools.combinations(range(n), w):
            for vals in itertools.product(range(1, q), repeat=w):
                r = list(center)
                for p, d in zip(supp, vals):
                    r[p] = (r[p] + d) % q
                rows.append(r)
    return np.asarray(rows, dtype=np.int64).reshape(len(rows), n)


def _node_blocks(scheme):
    from .schemes import two_level_degrees

    net = scheme.network
    a, b = two_level_degrees(net)
    if set(net.vulnerable) != set(net.source_edges):
        raise PreconditionViolated("packing bounds assume every source edge is vulnerable")
    off = [0]
    for x in a:
        off.append(off[-1] + x)
    funcs = [scheme.code.functions[v] for v in net.intermediates]
    return a, b, off, funcs


def _joint_map(funcs, js, a, q):
    def apply(x):
        outs = []
        pos = 0
        for j in js:
            outs.append(funcs[j](x[:, pos : pos + a[j]]))
            pos += a[j]
        return np.concatenate(outs, axis=1) if outs else np.zeros((len(x), 0), np.int64)

    return apply


def _packing(scheme, t, r, kind, form, max_domain):
    from .netcode import all_words, row_codes

    a, b, off, funcs = _node_blocks(scheme)
    n = len(a)
    q = scheme.q
    if not 0 <= r <= n or any(a[i] > b[i] for i in range(r)):
        raise PreconditionViolated("the first r nodes must satisfy a_i <= b_i")
    rest = list(range(r, n))
    words = scheme.outer.words
    groups = [[j] for j in rest] if form == "product" else ([rest] if rest else [])

    preimage_codes = {}
    if kind == "second":
        for gi, g in enumerate(groups):
            dom = sum(a[j] for j in g)
            if q**dom > max_domain:
                raise PreconditionViolated(f"domain q^{dom} too large for preimage counting")
            allw = all_words(q, dom)
            img = row_codes(_joint_map(funcs, g, a, q)(allw), q)
            vals, counts = np.unique(img, return_counts=True)
            preimage_codes[gi] = dict(zip(vals.tolist(), counts.tolist()))

    def size_term(x, radius):
        prod = 1
        for gi, g in enumerate(groups):
            center = np.concatenate([x[off[j] : off[j] + a[j]] for j in g])
            ball = _ball(center, radius, q)
            img = np.unique(row_codes(_joint_map(funcs, g, a, q)(ball), q))
            if kind == "first":
                prod *= len(img)
            else:
                counts = preimage_codes[gi]
                prod *= sum(counts[int(c)] for c in img)
        return prod

    lhs = 0
    cache: dict[int, int] = {}
    for ts in itertools.product(*(range(min(t, a[i]) + 1) for i in range(r))):
        if sum(ts) > t:
            continue
        weight = 1
        for i, ti in zip(range(r), ts):
            weight *= math.comb(a[i], ti) * (q - 1) ** ti
        radius = t - sum(ts)
        if radius not in cache:
            cache[radius] = sum(size_term(x, radius) for x in words)
        lhs += weight * cache[radius]
    rhs = q ** (sum(b) if kind == "first" else sum(a))
    return PackingReport(lhs, rhs, form)


def first_packing_check(scheme, t: int, r: int, form: str = "joint") -> PackingReport:
    """Downstream packing inequality for a simple 2-level scheme.

    The first ``r`` nodes (a_i <= b_i) are treated as identities and counted
    through shells; the remaining nodes contribute image sizes of Hamming
    balls. ``form="joint"`` takes one ball in the combined input of all
    remaining nodes, which is the exact count. ``form="product"`` multiplies
    per-node ball image sizes; it agrees with the joint form when at most
    one node remains and can only be larger otherwise.
    """
    return _packing(scheme, t, r, "first", form, 0)


def second_packing_check(
    scheme, t: int, r: int, form: str = "joint", max_domain: int = 1 << 20
) -> PackingReport:
    """Upstream packing inequality: preimages of ball images must fit in q^(sum a)."""
    return _packing(scheme, t, r, "second", form, max_domain)


def ball_preimages(scheme, x: Sequence[int], radius: int):
    """(joint preimage, product of per-node preimages) of the image of a ball around ``x``.

    Both are returned as sets of source words; they differ in general.
    """
    from .netcode import all_words

    a, b, off, funcs = _node_blocks(scheme)
    q = scheme.q
    n = len(a)
    ball = _ball(list(x), radius, q)
    allw = all_words(q, sum(a))
    joint = _joint_map(funcs, list(range(n)), a, q)
    img = {tuple(r) for r in joint(ball).tolist()}
    full = joint(allw)
    joint_pre = {tuple(w) for w, y in zip(allw.tolist(), full.tolist()) if tuple(y) in img}
    per_node = []
    for j in range(n):
        part = ball[:, off[j] : off[j] + a[j]]
        imj = {tuple(r) for r in funcs[j](part).tolist()}
        dom = all_words(q, a[j])
        per_node.append([tuple(w) for w, y in zip(dom.tolist(), funcs[j](dom).tolist()) if tuple(y) in imj])
    product = {tuple(itertools.chain(*ws)) for ws in itertools.product(*per_node)}
    return joint_pre, product


# ---------------------------------------------------------------- BSC curves


def binary_entropy(p: float) -> float:
    if p <= 0 or p >= 1:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def bsc_level_capacity(generalization: int, scenario: int, n: int, p: float) -> float:
    """Closed-form capacities of the two BSC network generalizations."""
    if not 0 <= p <= 0.5:
        raise OutOfRange("p must lie in [0, 0.5]")
    if generalization not in (1, 2) or scenario not in (1, 2):
        raise OutOfRange("generalization and scenario must be 1 or 2")
    if n < 2:
        raise OutOfRange("n must be at least 2")
    c = 1 - binary_entropy(p)
    if generalization == 1:
        if scenario == 1:
            return min(n - 1, n * c)
        return c + min(n - 2, (n - 1) * c)
    if scenario == 1:
        return min(2 * n, 3 * n * c)
    return n * c + min(n, 2 * n * c)


def gap_interval(generalization: int, n: int, p: float) -> bool:
    """True when the entropy lies in the open interval where the scenarios differ."""
    h = binary_entropy(p)
    top = 1 / (n - 1) if generalization == 1 else 0.5
    return 0 < h < top


def curve_rows(generalization: int, n: int, pstep: float = 0.01) -> list[tuple[float, float, float, float]]:
    """(p, scenario 1, scenario 2, gap) for p = 0, pstep, ..., 0.5."""
    steps = int(round(0.5 / pstep))
    rows = []
    for i in range(steps + 1):
        p = round(min(0.5, i * pstep), 12)
        s1 = bsc_level_capacity(generalization, 1, n, p)
        s2 = bsc_level_capacity(generalization, 2, n, p)
        rows.append((p, s1, s2, s1 - s2))
    return rows


def curves_csv(generalization: int, n: int, pstep: float = 0.01) -> str:
    lines = ["p,scenario1,scenario2,gap"]
    for p, s1, s2, g in curve_rows(generalization, n, pstep):
        lines.append(f"{p:.9f},{s1:.9f},{s2:.9f},{g:.9f}")
    return "\n".join(lines) + "\n"
