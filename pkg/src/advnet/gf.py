"""Small finite fields GF(q), q <= 256, and Reed-Solomon codes over them.

Elements are the integers 0..q-1. For prime q they are residues; for q = p^m
the integer's base-p digits are polynomial coefficients (digit i is the
coefficient of x^i) reduced modulo a primitive polynomial found by search.
All arithmetic goes through lookup tables so it vectorizes over numpy arrays.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .errors import DecodeFailure, LengthMismatch, NotPrimePower

MAX_Q = 256
BRUTE_FORCE_MAX_N = 8


def prime_power(q: int) -> tuple[int, int] | None:
    """(p, m) with q = p**m, or None."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    m, r = 0, q
    while r % p == 0:
        r //= p
        m += 1
    return (p, m) if r == 1 else None


def _polymulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    m = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, m - 1, -1):
        c = prod[d]
        if c:
            for k in range(m + 1):
                prod[d - m + k] = (prod[d - m + k] - c * mod[k]) % p
    return (prod + [0] * m)[:m]


def _find_primitive(p: int, m: int) -> tuple[int, ...]:
    """First monic degree-m polynomial (low coefficients counted up) whose root x generates GF(p^m)*."""
    order = p**m - 1
    one = [1] + [0] * (m - 1)
    x = [0, 1] + [0] * (m - 2)
    for low in itertools.product(range(p), repeat=m):
        if low[0] == 0:
            continue
        poly = list(low) + [1]
        cur, k = one, 0
        while True:
            cur = _polymulmod(cur, x, poly, p)
            k += 1
            if cur == one or k > order:
                break
        if k == order:
            return tuple(poly)
    raise AssertionError("no primitive polynomial found")


class Field:
    """GF(q) with table-driven vectorized arithmetic."""

    def __init__(self, q: int):
        pm = prime_power(q) if q <= MAX_Q else None
        if pm is None:
            raise NotPrimePower(f"{q} is not a prime power <= {MAX_Q}")
        self.q = q
        self.p, self.m = pm
        if self.m == 1:
            self.modulus = None
            r = np.arange(q)
            self.add_table = ((r[:, None] + r[None, :]) % q).astype(np.int64)
            self.mul_table = ((r[:, None] * r[None, :]) % q).astype(np.int64)
        else:
            self.modulus = _find_primitive(self.p, self.m)
            self.add_table, self.mul_table = self._extension_tables()
        self.neg_table = np.argmin(self.add_table, axis=1).astype(np.int64)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.flatnonzero(self.mul_table[a] == 1)[0])
        self.inv_table = inv
        self.sub_table = self.add_table[:, self.neg_table]

    def _extension_tables(self):
        p, m, q = self.p, self.m, self.q
        digits = [[(a // p**i) % p for i in range(m)] for a in range(q)]

        def to_int(d):
            return sum(c * p**i for i, c in enumerate(d))

        add = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                add[a, b] = to_int([(x + y) % p for x, y in zip(digits[a], digits[b])])
        mul = np.zeros((q, q), dtype=np.int64)
        poly = list(self.modulus)
        for a in range(q):
            for b in range(a, q):
                v = to_int(_polymulmod(digits[a], digits[b], poly, p))
                mul[a, b] = mul[b, a] = v
        return add, mul

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("GF", self.q))

    # scalar / elementwise operations (work on ints and integer arrays)
    def add(self, a, b):
        return self.add_table[a, b]

    def sub(self, a, b):
        return self.sub_table[a, b]

    def mul(self, a, b):
        return self.mul_table[a, b]

    def neg(self, a):
        return self.neg_table[a]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("0 has no inverse")
        return self.inv_table[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        r = 1
        for _ in range(k):
            r = int(self.mul_table[r, a])
        return r

    # linear algebra over the field
    def matmul(self, a, b) -> np.ndarray:
        """Matrix product; ``a`` is (N, k) and ``b`` is (k, n)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for j in range(a.shape[1]):
            out = self.add_table[out, self.mul_table[a[:, j : j + 1], b[j][None, :]]]
        return out

    def rref(self, a) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form and pivot columns."""
        m = np.array(a, dtype=np.int64, copy=True)
        rows, cols = m.shape if m.ndim == 2 else (0, 0)
        pivots: list[int] = []
        r = 0
        for c in range(cols):
            nz = [i for i in range(r, rows) if m[i, c]]
            if not nz:
                continue
            i = nz[0]
            m[[r, i]] = m[[i, r]]
            m[r] = self.mul_table[self.inv_table[m[r, c]], m[r]]
            for i in range(rows):
                if i != r and m[i, c]:
                    m[i] = self.sub_table[m[i], self.mul_table[m[i, c], m[r]]]
            pivots.append(c)
            r += 1
            if r == rows:
                break
        return m, pivots

    def rank(self, a) -> int:
        a = np.asarray(a)
        if a.size == 0:
            return 0
        return len(self.rref(a)[1])

    def nullspace(self, a) -> np.ndarray:
        """Basis (as rows) of {v : a @ v = 0}."""
        a = np.atleast_2d(np.asarray(a, dtype=np.int64))
        n = a.shape[1]
        r, piv = self.rref(a)
        free = [c for c in range(n) if c not in piv]
        basis = []
        for f in free:
            v = np.zeros(n, dtype=np.int64)
            v[f] = 1
            for i, pc in enumerate(piv):
                v[pc] = self.neg_table[r[i, f]]
            basis.append(v)
        return np.array(basis, dtype=np.int64).reshape(len(basis), n)

    def inverse(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        k = a.shape[0]
        aug = np.concatenate([a, np.eye(k, dtype=np.int64)], axis=1)
        r, piv = self.rref(aug)
        if piv[:k] != list(range(k)):
            raise ZeroDivisionError("singular matrix")
        return r[:, k:]

    def solve_left(self, g, w) -> np.ndarray | None:
        """Some z with z @ g = w, or None."""
        g = np.asarray(g, dtype=np.int64)
        w = np.asarray(w, dtype=np.int64)
        aug = np.concatenate([g.T, w.reshape(-1, 1)], axis=1)
        r, piv = self.rref(aug)
        k = g.shape[0]
        if k in piv:
            return None
        z = np.zeros(k, dtype=np.int64)
        for i, pc in enumerate(piv):
            z[pc] = r[i, k]
        return z


@lru_cache(maxsize=None)
def field_ops(q: int) -> Field:
    return Field(q)


@dataclass(frozen=True)
class MdsCode:
    """Reed-Solomon evaluation code: message polynomials of degree < k at n points."""

    field: Field
    n: int
    k: int
    points: tuple[int, ...] | None = None

    def __post_init__(self):
        if not 0 <= self.k <= self.n:
            raise LengthMismatch("need 0 <= k <= n")
        if self.n > self.field.q:
            raise LengthMismatch(f"length {self.n} exceeds the field size {self.field.q}")
        if self.points is None:
            object.__setattr__(self, "points", tuple(range(self.n)))
        if len(set(self.points)) != self.n:
            raise LengthMismatch("evaluation points must be n distinct elements")

    @property
    def distance(self) -> int:
        return self.n - self.k + 1

    @property
    def radius(self) -> int:
        return (self.n - self.k) // 2

    @cached_property
    def generator(self) -> np.ndarray:
        f = self.field
        return np.array(
            [[f.pow(x, i) for x in self.points] for i in range(self.k)], dtype=np.int64
        ).reshape(self.k, self.n)

    @cached_property
    def parity_check(self) -> np.ndarray:
        return self.field.nullspace(self.generator) if self.k else np.eye(self.n, dtype=np.int64)

    @cached_property
    def info_inverse(self) -> np.ndarray:
        """Inverse of the first k generator columns (maps a codeword prefix to its message)."""
        if self.k == 0:
            return np.zeros((0, 0), dtype=np.int64)
        return self.field.inverse(self.generator[:, : self.k])

    def encode(self, message) -> np.ndarray:
        msg = np.asarray(message, dtype=np.int64)
        if msg.shape[-1] != self.k:
            raise LengthMismatch(f"message length {msg.shape[-1]} != {self.k}")
        flat = msg.reshape(-1, self.k)
        out = self.field.matmul(flat, self.generator) if self.k else np.zeros((len(flat), self.n), np.int64)
        return out.reshape(msg.shape[:-1] + (self.n,))

    def message_of(self, codeword) -> np.ndarray:
        c = np.asarray(codeword, dtype=np.int64).reshape(-1, self.n)
        if self.k == 0:
            return np.zeros((len(c), 0), dtype=np.int64)
        return self.field.matmul(c[:, : self.k], self.info_inverse)

    @cached_property
    def _all_codewords(self) -> np.ndarray:
        msgs = np.array(list(itertools.product(range(self.field.q), repeat=self.k)), dtype=np.int64)
        return msgs.reshape(-1, self.k), self.encode(msgs.reshape(-1, self.k))

    def decode_brute(self, received) -> np.ndarray:
        """Unique codeword within the decoding radius, by exhaustive comparison."""
        y = np.asarray(received, dtype=np.int64)
        if y.shape != (self.n,):
            raise LengthMismatch(f"received length {y.shape} != ({self.n},)")
        msgs, words = self._all_codewords
        dist = (words != y[None, :]).sum(axis=1)
        hit = np.flatnonzero(dist <= self.radius)
        if len(hit) != 1:
            raise DecodeFailure("no codeword within the decoding radius")
        return msgs[hit[0]]

    def decode_bw(self, received) -> np.ndarray:
        """Berlekamp-Welch decoding up to the decoding radius."""
        f = self.field
        y = np.asarray(received, dtype=np.int64)
        if y.shape != (self.n,):
            raise LengthMismatch(f"received length {y.shape} != ({self.n},)")
        e, k = self.radius, self.k
        xs = list(self.points)
        if k == 0:
            if np.count_nonzero(y) > e:
                raise DecodeFailure("too many errors")
            return np.zeros(0, dtype=np.int64)
        # unknowns: Q_0..Q_{e+k-1}, E_0..E_{e-1}; equation Q(x) - y E(x) = y x^e
        rows, rhs = [], []
        for x, yi in zip(xs, y):
            row = [f.pow(x, j) for j in range(e + k)]
            row += [int(f.neg(f.mul(int(yi), f.pow(x, j)))) for j in range(e)]
            rows.append(row)
            rhs.append(int(f.mul(int(yi), f.pow(x, e))))
        aug = np.concatenate([np.array(rows, dtype=np.int64), np.array(rhs, dtype=np.int64)[:, None]], axis=1)
        r, piv = f.rref(aug)
        nvar = 2 * e + k
        if nvar in piv:
            raise DecodeFailure("key equation has no solution")
        sol = np.zeros(nvar, dtype=np.int64)
        for i, pc in enumerate(piv):
            sol[pc] = r[i, nvar]
        qpoly = [int(v) for v in sol[: e + k]]
        epoly = [int(v) for v in sol[e + k :]] + [1]
        quot, rem = _polydivmod(f, qpoly, epoly)
        if any(rem) or any(quot[k:]):
            raise DecodeFailure("error locator does not divide")
        msg = np.array((quot + [0] * k)[:k], dtype=np.int64)
        if np.count_nonzero(self.encode(msg) != y) > e:
            raise DecodeFailure("decoded word too far from received word")
        return msg

    def decode(self, received) -> np.ndarray:
        if self.n <= BRUTE_FORCE_MAX_N and self.field.q**self.k <= 1 << 16:
            return self.decode_brute(received)
        return self.decode_bw(received)


def _polydivmod(f: Field, num: Sequence[int], den: Sequence[int]):
    """Polynomial division with coefficient lists in increasing degree."""
    num = list(num)
    den = list(den)
    while len(den) > 1 and den[-1] == 0:
        den.pop()
    if len(num) < len(den):
        return [0], num
    lead_inv = int(f.inv(den[-1]))
    quot = [0] * (len(num) - len(den) + 1)
    for d in range(len(num) - len(den), -1, -1):
        c = int(f.mul(num[d + len(den) - 1], lead_inv))
        quot[d] = c
        if c:
            for i, a in enumerate(den):
                num[d + i] = int(f.sub(num[d + i], f.mul(c, a)))
    return quot, num[: len(den) - 1]


def rs_encode(code: MdsCode, message) -> np.ndarray:
    return code.encode(message)


def rs_decode(code: MdsCode, received) -> np.ndarray:
    return code.decode(received)


class SyndromeDecoder:
    """Vectorized complete syndrome decoder for an :class:`MdsCode`.

    Error patterns of weight up to the radius are corrected. Every other
    syndrome is attributed to the unique error supported on the last n-k
    positions, which leaves the message part untouched. This choice makes the
    decoder translation-equivariant: decode(c + y) = msg(c) + decode(y) for
    every codeword c.
    """

    def __init__(self, code: MdsCode):
        self.code = code
        f = code.field
        n, k, r = code.n, code.k, code.radius
        self.h = code.parity_check
        keys, deltas = [], []
        for w in range(1, r + 1):
            for supp in itertools.combinations(range(n), w):
                vals = np.array(list(itertools.product(range(1, f.q), repeat=w)), dtype=np.int64)
                errs = np.zeros((len(vals), n), dtype=np.int64)
                errs[:, list(supp)] = vals
                keys.append(self._syndrome_codes(errs))
                deltas.append(code.message_of(errs) if k else np.zeros((len(errs), 0), np.int64))
        if keys:
            keys_a = np.concatenate(keys)
            deltas_a = np.concatenate(deltas)
            order = np.argsort(keys_a, kind="stable")
            self._keys = keys_a[order]
            self._deltas = deltas_a[order]
        else:
            self._keys = np.zeros(0, dtype=np.int64)
            self._deltas = np.zeros((0, k), dtype=np.int64)

    def _syndrome_codes(self, y: np.ndarray) -> np.ndarray:
        f = self.code.field
        s = f.matmul(y, self.h.T) if len(self.h) else np.zeros((len(y), 0), np.int64)
        codes = np.zeros(len(y), dtype=np.int64)
        for j in range(s.shape[1]):
            codes = codes * f.q + s[:, j]
        return codes

    def __call__(self, y) -> np.ndarray:
        """Messages for received words ``y`` of shape (N, n)."""
        y = np.asarray(y, dtype=np.int64)
        code = self.code
        f = code.field
        msg = code.message_of(y)
        if len(self._keys) == 0:
            return msg
        s = self._syndrome_codes(y)
        pos = np.searchsorted(self._keys, s)
        pos = np.minimum(pos, len(self._keys) - 1)
        hit = self._keys[pos] == s
        delta = np.where(hit[:, None], self._deltas[pos], 0)
        return f.sub(msg, delta)
