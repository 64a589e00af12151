"""Binary codes with a verified minimum distance.

Vertices are mapped to codewords; the bipartite router splits edges by the
first coordinate where the endpoints' codewords differ.  Codes are built
from random linear codes (generator rows drawn from the bit oracle) and
the distance is always checked by brute force before a code is returned.
For short lengths a greedy Gilbert-Varshamov search is the fallback.

Codewords are held as Python ints; bit ``i`` (1-based) of codeword ``w`` is
``(w >> (i - 1)) & 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CodeSearchFailed, InvalidParams, OutOfRange, ParseError
from .randomness import BitOracle, consumer_offset

_POP8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)
GV_MAX_LENGTH = 20


def popcount_u64(x: np.ndarray) -> np.ndarray:
    """Per-element popcount of a uint64 array."""
    b = np.ascontiguousarray(x, dtype=np.uint64).view(np.uint8).reshape(*np.shape(x), 8)
    return _POP8[b].sum(axis=-1, dtype=np.int64)


@dataclass(frozen=True)
class BinaryCode:
    length: int
    codeword_count: int
    min_distance: int
    delta_code: Fraction
    table: tuple[int, ...]
    generator: tuple[int, ...] | None = None

    def word(self, v: int) -> int:
        if not 1 <= v <= self.codeword_count:
            raise OutOfRange(f"vertex {v} outside [1, {self.codeword_count}]")
        return self.table[v - 1]

    def bit(self, v: int, i: int) -> int:
        return (self.word(v) >> (i - 1)) & 1

    @classmethod
    def unchecked(cls, length: int, words, delta_code=Fraction(0)) -> "BinaryCode":
        """Wrap an arbitrary codeword table without verification (fault injection)."""
        words = tuple(int(w) for w in words)
        return cls(length, len(words), pairwise_min_distance_words(words, length), Fraction(delta_code), words)


def encode(code: BinaryCode, v: int) -> tuple[int, ...]:
    w = code.word(v)
    return tuple((w >> i) & 1 for i in range(code.length))


def hamming(a: int, b: int) -> int:
    return bin(a ^ b).count("1")


def _span_min_weight(rows: tuple[int, ...], t: int) -> int:
    """Minimum weight of a nonzero codeword in the row span (Gray-code walk)."""
    k = len(rows)
    if k == 0:
        return t
    best = t
    w = 0
    for i in range(1, 1 << k):
        w ^= rows[(i & -i).bit_length() - 1]
        c = bin(w).count("1")
        if c < best:
            best = c
            if c == 0:
                break
    return best


def pairwise_min_distance_words(words, t: int) -> int:
    """Minimum pairwise Hamming distance by a full scan; ``t`` for fewer than two words."""
    if len(words) < 2:
        return t
    if t > 64:
        return min(hamming(a, b) for i, a in enumerate(words) for b in words[i + 1:])
    arr = np.array(words, dtype=np.uint64)
    best = t
    for i in range(len(arr) - 1):
        d = int(popcount_u64(arr[i + 1:] ^ arr[i]).min())
        best = min(best, d)
        if best == 0:
            break
    return best


def pairwise_min_distance(code: BinaryCode) -> int:
    return pairwise_min_distance_words(code.table, code.length)


def min_distance(code: BinaryCode) -> int:
    """Exact minimum distance.

    Linear codes: minimum weight over the whole span of the generator, which
    bounds every pair of codewords in use.  Explicit codes: pairwise scan.
    """
    if code.codeword_count < 2:
        return code.length
    if code.generator is not None:
        return _span_min_weight(code.generator, code.length)
    return pairwise_min_distance(code)


def _linear_attempt(n: int, t: int, need: int, oracle: BitOracle, attempt: int):
    k = max(1, (n - 1).bit_length())
    words = oracle.words(consumer_offset(attempt) >> 6, k).tolist()
    mask = (1 << t) - 1
    rows = tuple(int(w) & mask for w in words)
    d = _span_min_weight(rows, t)
    if d < need:
        return None
    table = []
    for msg in range(n):
        w = 0
        for j in range(k):
            if (msg >> j) & 1:
                w ^= rows[j]
        table.append(w)
    return rows, d, tuple(table)


def _gv_greedy(n: int, t: int, need: int, oracle: BitOracle):
    """Greedy code over all 2^t words visited in a seeded random order."""
    order = np.arange(1 << t, dtype=np.uint64)
    keys = oracle.words(consumer_offset(1 << 20) >> 6, 1 << t)
    order = order[np.argsort(keys, kind="stable")]
    blocked = np.zeros(1 << t, dtype=bool)
    every = np.arange(1 << t, dtype=np.uint64)
    chosen = []
    for w in order:
        if blocked[w]:
            continue
        chosen.append(int(w))
        if len(chosen) == n:
            return tuple(chosen)
        blocked |= popcount_u64(every ^ w) < need
    return None


def build_code(n: int, t: int, delta_code, seed: int, attempts: int = 64) -> BinaryCode:
    """Code of ``n`` codewords of length ``t`` with distance >= ceil(delta_code * t)."""
    delta_code = Fraction(delta_code).limit_denominator(1 << 20) if isinstance(delta_code, float) else Fraction(delta_code)
    if t < 1 or n < 1 or not 0 <= delta_code <= 1:
        raise InvalidParams("need t >= 1, n >= 1 and delta_code in [0, 1]")
    # distance >= 1 is what makes encoding injective
    need = max(1, math.ceil(delta_code * t))
    if n > (1 << t):
        raise CodeSearchFailed(f"{n} codewords do not fit in {t} bits")
    if n == 1:
        return BinaryCode(t, 1, t, delta_code, (0,))
    oracle = BitOracle(seed)
    for attempt in range(attempts):
        got = _linear_attempt(n, t, need, oracle, attempt)
        if got is not None:
            rows, d, table = got
            return BinaryCode(t, n, d, delta_code, table, rows)
    if t <= GV_MAX_LENGTH:
        table = _gv_greedy(n, t, need, oracle)
        if table is not None:
            return BinaryCode(t, n, pairwise_min_distance_words(table, t), delta_code, table)
    raise CodeSearchFailed(f"no code with n={n}, t={t}, distance >= {need} after {attempts} attempts")


def serialize_code(code: BinaryCode) -> str:
    width = (code.length + 3) // 4
    out = [f"c t={code.length} n={code.codeword_count} dmin={code.min_distance}"]
    if code.generator is not None:
        out += [f"g {r:0{width}x}" for r in code.generator]
    else:
        out += [f"{w:0{width}x}" for w in code.table]
    return "\n".join(out) + "\n"


def parse_code(text: str, delta_code=Fraction(0)) -> BinaryCode:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("c "):
        raise ParseError("code text must start with 'c t=.. n=.. dmin=..'", 1)
    try:
        hdr = dict(tok.split("=", 1) for tok in lines[0].split()[1:])
        t, n, dmin = int(hdr["t"]), int(hdr["n"]), int(hdr["dmin"])
    except (KeyError, ValueError):
        raise ParseError("bad code header", 1) from None
    body = lines[1:]
    if body and body[0].startswith("g "):
        rows = tuple(int(ln.split()[1], 16) for ln in body)
        table = []
        for msg in range(n):
            w = 0
            for j, r in enumerate(rows):
                if (msg >> j) & 1:
                    w ^= r
            table.append(w)
        code = BinaryCode(t, n, dmin, Fraction(delta_code), tuple(table), rows)
    else:
        table = tuple(int(ln, 16) for ln in body)
        if len(table) != n:
            raise ParseError(f"expected {n} codewords, got {len(table)}")
        code = BinaryCode(t, n, dmin, Fraction(delta_code), table)
    if min_distance(code) != dmin:
        raise ParseError("stored dmin does not match the codewords")
    return code
