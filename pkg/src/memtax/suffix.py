"""Suffix-array machinery backing the augmented FM-index.

All structures are plain (uncompressed) arrays: an int64 suffix array and
LCP array of length n+1 (one row for the implicit end-of-file sentinel,
code 0, smaller than every text symbol), sparse tables for range-min /
range-max positions, nearest-smaller-value arrays over the LCP, and
per-symbol sorted position lists giving rank/select on the BWT.
"""
from __future__ import annotations

import numpy as np

from .collection import EOF_CODE


def build_suffix_array(codes) -> np.ndarray:
    """Suffix array of codes with the implicit EOF sentinel appended.

    Returns a permutation of 0..len(codes) (int64); entry 0 is always the
    sentinel position len(codes).  Prefix doubling with stable integer
    argsort (LSD radix in numpy), so each round is linear and the whole
    construction is O(n log n).
    """
    codes = np.asarray(codes, dtype=np.int64)
    if codes.size == 0:
        raise ValueError("text must be non-empty")
    if codes.min() <= EOF_CODE:
        raise ValueError("text codes must be greater than the EOF code")
    s = np.empty(len(codes) + 1, dtype=np.int64)
    s[:-1] = codes
    s[-1] = EOF_CODE
    n = len(s)
    rank = s
    k = 1
    while True:
        key2 = np.full(n, -1, dtype=np.int64)
        key2[: n - k] = rank[k:]
        order = np.argsort(key2, kind="stable")
        order = order[np.argsort(rank[order], kind="stable")]
        neq = (rank[order[1:]] != rank[order[:-1]]) | (key2[order[1:]] != key2[order[:-1]])
        new_rank = np.empty(n, dtype=np.int64)
        new_rank[order[0]] = 0
        new_rank[order[1:]] = np.cumsum(neq)
        rank = new_rank
        if rank[order[-1]] == n - 1:
            return order
        k *= 2
        assert k < 2 * n


def build_lcp_array(codes, sa: np.ndarray) -> np.ndarray:
    """LCP array via Kasai's algorithm; lcp[0] = 0, lcp[i] = |lcp| of the
    (i-1)-th and i-th sorted suffixes of codes + sentinel."""
    s = [int(c) for c in codes]
    s.append(EOF_CODE)
    n = len(s)
    sa_l = [int(x) for x in sa]
    rank = [0] * n
    for i, p in enumerate(sa_l):
        rank[p] = i
    lcp = [0] * n
    h = 0
    for p in range(n):
        r = rank[p]
        if r == 0:
            h = 0
            continue
        q = sa_l[r - 1]
        while p + h < n and q + h < n and s[p + h] == s[q + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return np.asarray(lcp, dtype=np.int64)


def derive_bwt(codes, sa: np.ndarray) -> np.ndarray:
    """BWT over codes + sentinel: bwt[i] = text[sa[i]-1], EOF when sa[i] = 0."""
    s = np.empty(len(sa), dtype=np.int32)
    s[:-1] = np.asarray(codes, dtype=np.int32)
    s[-1] = EOF_CODE
    return s[(np.asarray(sa) - 1) % len(s)]


class IndexedSequence:
    """A symbol sequence with per-symbol rank and select.

    Rank/select are served from one sorted position list per symbol, the
    sparse equivalent of one indicator bit sequence per alphabet symbol.
    """

    def __init__(self, symbols: np.ndarray, alphabet_size: int):
        symbols = np.asarray(symbols, dtype=np.int32)
        if symbols.size and (symbols.min() < 0 or symbols.max() >= alphabet_size):
            raise ValueError("symbol out of declared alphabet range")
        self.symbols = symbols
        self.alphabet_size = alphabet_size
        order = np.argsort(symbols, kind="stable")
        uniq, starts = np.unique(symbols[order], return_index=True)
        bounds = np.append(starts, len(symbols))
        self._positions: dict[int, np.ndarray] = {
            int(u): np.sort(order[bounds[i]: bounds[i + 1]]).astype(np.int64)
            for i, u in enumerate(uniq)
        }
        self._empty = np.empty(0, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.symbols)

    def access(self, i: int) -> int:
        return int(self.symbols[i])

    def positions(self, c: int) -> np.ndarray:
        return self._positions.get(c, self._empty)

    def count(self, c: int) -> int:
        return len(self.positions(c))

    def rank(self, c: int, i: int) -> int:
        """Occurrences of c in symbols[0..i)."""
        return int(np.searchsorted(self.positions(c), i, side="left"))

    def select(self, c: int, j: int) -> int:
        """Position of the j-th (0-based) occurrence of c."""
        pos = self.positions(c)
        if not 0 <= j < len(pos):
            raise IndexError(f"select({c}, {j}) out of range")
        return int(pos[j])

    def symbol_counts(self) -> np.ndarray:
        out = np.zeros(self.alphabet_size, dtype=np.int64)
        for c, pos in self._positions.items():
            out[c] = len(pos)
        return out


class RangeExtremes:
    """Sparse-table RMQ giving the leftmost position of the minimum and/or
    maximum over any inclusive range of a fixed array."""

    def __init__(self, values, kinds=("min", "max")):
        self.values = np.asarray(values)
        n = len(self.values)
        if n == 0:
            raise ValueError("cannot index an empty array")
        self._tables: dict[str, list[np.ndarray]] = {}
        for kind in kinds:
            base = np.arange(n, dtype=np.int64)
            levels = [base]
            j = 1
            while (1 << j) <= n:
                half = 1 << (j - 1)
                prev = levels[-1]
                a = prev[: n - (1 << j) + 1]
                b = prev[half: half + len(a)]
                if kind == "min":
                    take_b = self.values[b] < self.values[a]
                else:
                    take_b = self.values[b] > self.values[a]
                levels.append(np.where(take_b, b, a))
                j += 1
            self._tables[kind] = levels

    def position(self, lo: int, hi: int, kind: str = "min") -> int:
        """Leftmost position attaining the extreme over [lo, hi] inclusive."""
        if lo > hi:
            raise ValueError(f"empty range [{lo}, {hi}]")
        if not (0 <= lo and hi < len(self.values)):
            raise ValueError(f"range [{lo}, {hi}] out of bounds")
        levels = self._tables[kind]
        j = (hi - lo + 1).bit_length() - 1
        a = int(levels[j][lo])
        b = int(levels[j][hi - (1 << j) + 1])
        va, vb = self.values[a], self.values[b]
        if kind == "min":
            return b if vb < va else a
        return b if vb > va else a

    def argmin(self, lo: int, hi: int) -> int:
        return self.position(lo, hi, "min")

    def argmax(self, lo: int, hi: int) -> int:
        return self.position(lo, hi, "max")


def range_extreme(r: RangeExtremes, lo: int, hi: int, kind: str) -> int:
    return r.position(lo, hi, kind)


def previous_smaller_values(values) -> np.ndarray:
    """psv[i] = greatest j < i with values[j] < values[i], else -1."""
    vals = [int(v) for v in values]
    out = np.empty(len(vals), dtype=np.int64)
    stack: list[int] = []
    for i, v in enumerate(vals):
        while stack and vals[stack[-1]] >= v:
            stack.pop()
        out[i] = stack[-1] if stack else -1
        stack.append(i)
    return out


def next_smaller_values(values) -> np.ndarray:
    """nsv[i] = least j > i with values[j] < values[i], else len(values)."""
    vals = [int(v) for v in values]
    n = len(vals)
    out = np.empty(n, dtype=np.int64)
    stack: list[int] = []
    for i in range(n - 1, -1, -1):
        while stack and vals[stack[-1]] >= vals[i]:
            stack.pop()
        out[i] = stack[-1] if stack else n
        stack.append(i)
    return out
