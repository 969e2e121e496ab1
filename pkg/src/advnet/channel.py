"""Finite adversarial channels given by fan-out sets, and their 1-shot capacity.

A channel maps each input ``x`` to the nonempty set of outputs the receiver
may see. A code is unambiguous when fan-outs of distinct codewords are
disjoint; the 1-shot capacity is the log of the largest such code, i.e. the
independence number of the confusability graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import DomainTooLarge, SpaceMismatch, WordOutsideDomain

DEFAULT_INPUT_LIMIT = 2000


class Channel:
    """Fan-out map on a finite input space.

    ``fanout`` is either a mapping ``x -> iterable of outputs`` or a callable.
    Fan-outs are memoized as frozensets. ``outputs`` optionally fixes the
    output space; when omitted it is the union of all fan-outs.
    """

    def __init__(
        self,
        inputs: Iterable[Hashable],
        fanout: Mapping | Callable[[Hashable], Iterable[Hashable]],
        outputs: Iterable[Hashable] | None = None,
    ):
        self.inputs = tuple(inputs)
        self._index = {x: i for i, x in enumerate(self.inputs)}
        if len(self._index) != len(self.inputs):
            raise ValueError("duplicate inputs")
        self._fn = fanout.__getitem__ if isinstance(fanout, Mapping) else fanout
        self._memo: dict[Hashable, frozenset] = {}
        self._outputs = None if outputs is None else frozenset(outputs)

    def __contains__(self, x) -> bool:
        return x in self._index

    def fanout(self, x) -> frozenset:
        if x not in self._index:
            raise WordOutsideDomain(f"{x!r} is not a channel input")
        got = self._memo.get(x)
        if got is None:
            got = frozenset(self._fn(x))
            if not got:
                raise ValueError(f"empty fan-out for {x!r}")
            self._memo[x] = got
        return got

    @property
    def outputs(self) -> frozenset:
        if self._outputs is None:
            acc = set()
            for x in self.inputs:
                acc |= self.fanout(x)
            self._outputs = frozenset(acc)
        return self._outputs

    def is_deterministic(self) -> bool:
        return all(len(self.fanout(x)) == 1 for x in self.inputs)

    def table(self) -> dict:
        return {x: self.fanout(x) for x in self.inputs}

    def __eq__(self, other) -> bool:
        if not isinstance(other, Channel):
            return NotImplemented
        return set(self.inputs) == set(other.inputs) and all(
            self.fanout(x) == other.fanout(x) for x in self.inputs
        )

    def __repr__(self) -> str:
        return f"Channel(|X|={len(self.inputs)})"


@dataclass(frozen=True)
class OuterCode:
    words: tuple

    def __post_init__(self):
        if not self.words:
            raise ValueError("an outer code must be nonempty")
        if len(set(self.words)) != len(self.words):
            raise ValueError("duplicate codewords")

    @classmethod
    def of(cls, words: Iterable) -> "OuterCode":
        return cls(tuple(sorted(set(words))))

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)


def find_collision(ch: Channel, code: Iterable) -> tuple | None:
    """First (x, x2, y) with y in both fan-outs, or None if ``code`` is unambiguous."""
    seen: dict = {}
    for x in code:
        for y in ch.fanout(x):
            other = seen.setdefault(y, x)
            if other != x:
                return other, x, y
    return None


def is_unambiguous(ch: Channel, code: Iterable) -> bool:
    return find_collision(ch, code) is None


def confusability(ch: Channel, inputs: Sequence | None = None) -> list[int]:
    """Adjacency bitmasks: bit j of entry i is set when inputs i and j are confusable."""
    inputs = ch.inputs if inputs is None else tuple(inputs)
    by_output: dict = {}
    for i, x in enumerate(inputs):
        for y in ch.fanout(x):
            by_output.setdefault(y, []).append(i)
    adj = [0] * len(inputs)
    for group in by_output.values():
        if len(group) > 1:
            mask = 0
            for i in group:
                mask |= 1 << i
            for i in group:
                adj[i] |= mask
    return [a & ~(1 << i) for i, a in enumerate(adj)]


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def greedy_independent_set(adj: Sequence[int]) -> list[int]:
    """Repeatedly take a minimum-degree vertex of the remaining graph."""
    alive = (1 << len(adj)) - 1
    chosen = []
    while alive:
        v = min(_bits(alive), key=lambda i: ((adj[i] & alive).bit_count(), i))
        chosen.append(v)
        alive &= ~(adj[v] | (1 << v))
    return sorted(chosen)


def max_independent_set(
    adj: Sequence[int], lower: int = 0, greedy: bool = False
) -> list[int] | None:
    """Maximum independent set by branch and bound.

    Works on the complement graph as a maximum-clique search with a greedy
    colouring bound. Only sets strictly larger than ``lower`` are searched
    for; None is returned when no such set exists. With ``greedy`` the
    greedy solution is returned without proof of optimality.
    """
    n = len(adj)
    full = (1 << n) - 1
    comp = [full & ~a & ~(1 << i) for i, a in enumerate(adj)]
    start = greedy_independent_set(adj)
    if greedy:
        return start if len(start) > lower else None
    best: list[int] = start if len(start) > lower else []
    best_size = max(lower, len(best))

    def colour_order(p: int):
        order, colours = [], []
        c = 0
        rest = p
        while rest:
            c += 1
            q = rest
            while q:
                low = q & -q
                v = low.bit_length() - 1
                q &= ~low & ~comp[v]
                rest &= ~low
                order.append(v)
                colours.append(c)
        return order, colours

    def expand(chosen: list[int], p: int):
        nonlocal best, best_size
        order, colours = colour_order(p)
        for k in range(len(order) - 1, -1, -1):
            if len(chosen) + colours[k] <= best_size:
                return
            v = order[k]
            chosen.append(v)
            np_ = p & comp[v]
            if np_:
                expand(chosen, np_)
            elif len(chosen) > best_size:
                best, best_size = sorted(chosen), len(chosen)
            chosen.pop()
            p &= ~(1 << v)

    expand([], full)
    return best if best else None


@dataclass(frozen=True)
class CapacityResult:
    value: float
    code: OuterCode
    size: int
    exact: bool
    base: float = 2

    def __iter__(self):
        yield self.value
        yield self.code


def log_q(size: int, q: int) -> float:
    """log base q, exact when size is a power of q."""
    k = round(math.log(size, q))
    if q**k == size:
        return float(k)
    return math.log2(size) if q == 2 else math.log(size, q)


def one_shot_capacity(
    ch: Channel,
    base: float = 2,
    limit: int = DEFAULT_INPUT_LIMIT,
    greedy: bool = False,
) -> CapacityResult:
    """log_base of the largest unambiguous code, with a witness code.

    Unpacks as ``(value, code)``. ``exact`` is False when ``greedy`` was used.
    """
    if len(ch.inputs) > limit:
        raise DomainTooLarge(f"{len(ch.inputs)} inputs exceed the limit {limit}")
    adj = confusability(ch)
    idx = max_independent_set(adj, greedy=greedy) or [0]
    code = OuterCode(tuple(ch.inputs[i] for i in idx))
    return CapacityResult(log_q(len(idx), base), code, len(idx), not greedy, base)


def finer_than(ch1: Channel, ch2: Channel) -> bool:
    """True if every fan-out of ``ch1`` is contained in the matching fan-out of ``ch2``."""
    if set(ch1.inputs) != set(ch2.inputs):
        raise SpaceMismatch("channels have different input spaces")
    if ch1._outputs is not None and ch2._outputs is not None and ch1._outputs != ch2._outputs:
        raise SpaceMismatch("channels have different output spaces")
    return all(ch1.fanout(x) <= ch2.fanout(x) for x in ch1.inputs)


def concatenate(ch1: Channel, ch2: Channel) -> Channel:
    """Channel whose fan-out is the union of ``ch2`` fan-outs over ``ch1``'s fan-out."""
    missing = [y for y in ch1.outputs if y not in ch2]
    if missing:
        raise SpaceMismatch(f"output {missing[0]!r} of the first channel is not an input of the second")

    def fan(x):
        acc = set()
        for y in ch1.fanout(x):
            acc |= ch2.fanout(y)
        return acc

    out = ch2._outputs
    return Channel(ch1.inputs, fan, out)


def identity_channel(inputs: Iterable) -> Channel:
    inputs = tuple(inputs)
    return Channel(inputs, lambda x: (x,), inputs)


def hamming_channel(q: int, n: int, t: int) -> Channel:
    """Words of length ``n`` over range(q); fan-out is the Hamming ball of radius ``t``."""
    import itertools

    words = list(itertools.product(range(q), repeat=n))

    def ball(x):
        return [y for y in words if sum(a != b for a, b in zip(x, y)) <= t]

    return Channel(words, ball, words)
