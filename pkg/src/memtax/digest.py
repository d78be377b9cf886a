"""Minimizer digests of genomes, collections and reads.

A k-mer maps to the integer whose base-4 digits are its bases with A=0,
C=1, G=2, T=3, least significant digit first.  An affine hash
(a*x + b) mod m orders the k-mers inside each window of w consecutive
k-mer starts; the leftmost minimum of every window is marked, and the
digest is the sequence of marked k-mers' values in position order.  The
symbols of a digest are the k-mer values themselves, not their hashes;
the hash only picks the minimizers.  For k = 3 the 64 values render as
the ASCII characters 37..100.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .collection import (FIRST_SYMBOL_CODE, SEP_CODE, Alphabet, BASES,
                         GenomeCollection, SeparatedText)
from .errors import ValidationError

DEFAULT_HASH = (2544, 3937, 8863)


@dataclass(frozen=True)
class DigestParams:
    k: int = 3
    w: int = 10
    a: int = DEFAULT_HASH[0]
    b: int = DEFAULT_HASH[1]
    m: int = DEFAULT_HASH[2]

    def __post_init__(self):
        if self.k < 1 or self.w < 1 or self.m <= 0:
            raise ValidationError("digest parameters must satisfy k >= 1, w >= 1, m > 0")

    @property
    def hash_params(self) -> tuple[int, int, int]:
        return self.a, self.b, self.m

    @property
    def is_injective_on_kmers(self) -> bool:
        """The hash separates all 4^k values when they fit below m and
        gcd(a, m) = 1; holds for the default (2544 x + 3937) mod 8863."""
        return 4**self.k <= self.m and math.gcd(self.a, self.m) == 1

    def to_provenance(self) -> dict:
        return {"mode": "digest", "k": self.k, "w": self.w,
                "hash": [self.a, self.b, self.m]}


_BASE_DIGIT = {c: i for i, c in enumerate(BASES)}


def kmer_value(s: str) -> int:
    """Integer value of a k-mer, first character least significant."""
    x = 0
    for j, c in enumerate(s):
        try:
            x += _BASE_DIGIT[c] * 4**j
        except KeyError:
            raise ValidationError(f"non-base symbol {c!r} in k-mer") from None
    return x


def hash_value(params: DigestParams, x: int) -> int:
    return (params.a * x + params.b) % params.m


def _kmer_values(s: str, k: int) -> np.ndarray:
    digits = np.empty(len(s), dtype=np.int64)
    for i, c in enumerate(s):
        d = _BASE_DIGIT.get(c)
        if d is None:
            raise ValidationError(f"non-base symbol {c!r} in sequence")
        digits[i] = d
    nk = len(s) - k + 1
    vals = np.zeros(nk, dtype=np.int64)
    for t in range(k):
        vals += digits[t: t + nk] * 4**t
    return vals


def digest_sequence(s: str, params: DigestParams) -> list[int]:
    """Minimizer digest of one string as a list of k-mer values; empty when
    fewer than w k-mers fit."""
    return [v for v, _ in digest_with_positions(s, params)]


def digest_with_positions(s: str, params: DigestParams) -> list[tuple[int, int]]:
    """(value, k-mer start) pairs of the marked minimizers, position order."""
    k, w = params.k, params.w
    nk = len(s) - k + 1
    if nk < w:
        return []
    vals = _kmer_values(s, k)
    hashes = ((params.a * vals + params.b) % params.m).tolist()
    marked: list[int] = []
    dq: deque[int] = deque()
    for j in range(nk):
        # strict pops keep the earliest index of equal hashes in front
        while dq and hashes[dq[-1]] > hashes[j]:
            dq.pop()
        dq.append(j)
        i = j - w + 1  # window of k-mer starts [i, j]
        if i < 0:
            continue
        while dq[0] < i:
            dq.popleft()
        if not marked or marked[-1] != dq[0]:
            marked.append(dq[0])
    return [(int(vals[j]), j) for j in marked]


class Digest(SeparatedText):
    def __init__(self, codes, alphabet, provenance, params: DigestParams):
        super().__init__(codes, alphabet, provenance)
        self.params = params

    def values(self) -> list[list[int]]:
        """Per-genome lists of k-mer values (separators stripped)."""
        out: list[list[int]] = []
        for s, e in self.genome_spans():
            out.append([int(c) - FIRST_SYMBOL_CODE for c in self.codes[s:e]])
        return out


def digest_collection(collection: GenomeCollection, params: DigestParams) -> Digest:
    """Concatenated per-genome digests, one '$' after each genome, exactly
    parallel to the separated base text."""
    alphabet = Alphabet(kind="digest", k=params.k)
    codes: list[int] = []
    for g in collection.genomes:
        codes.extend(FIRST_SYMBOL_CODE + v for v in digest_sequence(g, params))
        codes.append(SEP_CODE)
    return Digest(np.asarray(codes, dtype=np.int32), alphabet,
                  params.to_provenance(), params)


def render_ascii(source) -> str:
    """ASCII form of a digest (k = 3 only): value v is chr(37 + v); '$' and
    '#' render verbatim.  Accepts a Digest/kernelized digest or raw values."""
    if isinstance(source, SeparatedText):
        if source.alphabet.kind != "digest" or source.alphabet.k != 3:
            raise ValidationError("ASCII rendering is defined for k = 3 digests only")
        return source.text()
    vals = [int(v) for v in source]
    if any(not 0 <= v < 64 for v in vals):
        raise ValidationError("ASCII rendering is defined for k = 3 digests only")
    return "".join(chr(37 + v) for v in vals)
