"""Order-k_max string kernels of separated texts.

The kernel keeps, for every distinct k_max-length window that fits inside a
single genome, the characters of that window's first and last occurrence in
the whole text, plus every separator.  Each maximal omitted run strictly
between two kept ordinary symbols collapses to one '#'; omitted runs
adjacent to a separator (or to the start of the text) are deleted outright,
since queries never contain separators.  Genomes shorter than k_max hold no
window at all and are kept verbatim, preserving the k-mer guarantee for
every k up to k_max.

Works unchanged on base texts and on minimizer digests: both are integer
code sequences with the same separator codes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .collection import FIRST_SYMBOL_CODE, HASH_CODE, SEP_CODE, SeparatedText
from .errors import ValidationError


@dataclass(frozen=True)
class KernelParams:
    k_max: int

    def __post_init__(self):
        if self.k_max < 1:
            raise ValidationError("k_max must be at least 1")


class Kernel(SeparatedText):
    def __init__(self, codes, alphabet, provenance, params: KernelParams):
        super().__init__(codes, alphabet, provenance)
        self.params = params


def _kernel_provenance(source: dict, k_max: int) -> dict:
    if source.get("mode") == "digest":
        out = dict(source)
        out["mode"] = "digest-kernel"
        out["k_max"] = k_max
        return out
    return {"mode": "kernel", "k_max": k_max}


def build_katka_kernel(st: SeparatedText, params: KernelParams) -> Kernel:
    codes = st.codes
    n = len(codes)
    k = params.k_max
    keep_delta = np.zeros(n + 1, dtype=np.int32)
    verbatim = np.zeros(n, dtype=bool)

    # pass 1: hash every in-genome window to its first and last start
    first: dict[bytes, int] = {}
    last: dict[bytes, int] = {}
    width = 1 if st.alphabet.size <= 256 else 4
    dtype = np.uint8 if width == 1 else np.uint32
    for s, e in st.genome_spans():
        if e - s < k:
            verbatim[s:e] = True
            continue
        seg = codes[s:e].astype(dtype).tobytes()
        for i in range(e - s - k + 1):
            w = seg[i * width: (i + k) * width]
            p = s + i
            if w not in first:
                first[w] = p
            last[w] = p

    # pass 2: paint kept windows into a coverage mask
    for table in (first, last):
        for p in table.values():
            keep_delta[p] += 1
            keep_delta[p + k] -= 1
    keep = np.cumsum(keep_delta[:n]) > 0
    keep |= verbatim

    out: list[int] = []
    pending_gap = False
    prev_emitted_sep = True  # text start behaves like a separator boundary
    code_list = codes.tolist()
    keep_list = keep.tolist()
    for i in range(n):
        c = code_list[i]
        if c == SEP_CODE:
            out.append(SEP_CODE)
            pending_gap = False
            prev_emitted_sep = True
        elif keep_list[i]:
            if pending_gap and not prev_emitted_sep:
                out.append(HASH_CODE)
            out.append(c)
            pending_gap = False
            prev_emitted_sep = False
        else:
            pending_gap = True

    return Kernel(np.asarray(out, dtype=np.int32), st.alphabet,
                  _kernel_provenance(st.provenance, k), params)


def kernel_size_report(kernel: SeparatedText) -> tuple[int, int, int]:
    """(kept ordinary symbols, '#' count, '$' count) of a kernel text."""
    codes = kernel.codes
    hashes = int(np.count_nonzero(codes == HASH_CODE))
    seps = int(np.count_nonzero(codes == SEP_CODE))
    kept = int(np.count_nonzero(codes >= FIRST_SYMBOL_CODE))
    return kept, hashes, seps
