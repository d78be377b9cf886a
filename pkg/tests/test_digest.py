import math
import random

import pytest

from memtax import (DigestParams, GenomeCollection, ValidationError,
                    digest_collection, digest_sequence, hash_value,
                    kmer_value, render_ascii)
from memtax.digest import digest_with_positions

from conftest import P


def test_kmer_value_examples():
    assert kmer_value("AGC") == 24
    assert kmer_value("AAA") == 0
    assert kmer_value("GTT") == 62
    with pytest.raises(ValidationError):
        kmer_value("ANA")


def test_hash_examples():
    p = DigestParams()
    assert hash_value(p, 24) == 2952
    assert hash_value(p, 0) == 3937
    assert hash_value(p, 62) == 2131


def test_default_hash_injective_on_3mers():
    p = DigestParams()
    assert math.gcd(p.a, p.m) == 1
    assert p.is_injective_on_kmers
    seen = {hash_value(p, x) for x in range(64)}
    assert len(seen) == 64


def test_digest_first_genome(golden_genomes):
    d = digest_sequence(golden_genomes[0], DigestParams())
    assert len(d) == 21
    assert render_ascii(d) == "=c<J_cA\\2X<G2@'cKNJX5"
    assert render_ascii(d[:3]) == "=c<"


def test_digest_too_short_is_empty():
    p = DigestParams()  # needs k + w - 1 = 12 bases
    assert digest_sequence("ACGTACGTACG", p) == []
    assert digest_sequence("ACGTACGTACGT", p) != []


def test_digest_of_read_renders_Q_dot():
    assert render_ascii(digest_sequence(P, DigestParams())) == "Q."


def test_collection_digest_matches_rendering(golden_collection, golden_digest_text):
    d = digest_collection(golden_collection, DigestParams())
    assert render_ascii(d) == golden_digest_text
    assert d.genome_count == 16
    non_sep = sum(len(v) for v in d.values())
    assert non_sep == 287


def test_collection_digest_short_genome():
    d = digest_collection(GenomeCollection(genomes=["ACGT"]), DigestParams())
    assert render_ascii(d) == "$"


def test_render_ascii_bounds_and_guard():
    assert render_ascii([0]) == "%"
    assert render_ascii([63]) == "d"
    with pytest.raises(ValidationError):
        render_ascii([64])
    d = digest_collection(GenomeCollection(genomes=["A" * 30]), DigestParams(k=4))
    with pytest.raises(ValidationError):
        render_ascii(d)


def test_window_soundness_random():
    rng = random.Random(4242)
    for _ in range(50):
        k = rng.randint(1, 4)
        w = rng.randint(1, 8)
        params = DigestParams(k=k, w=w)
        s = "".join(rng.choice("ACGT") for _ in range(rng.randint(1, 120)))
        pairs = digest_with_positions(s, params)
        nk = len(s) - k + 1
        if nk < w:
            assert pairs == []
            continue
        hashes = [hash_value(params, kmer_value(s[j:j + k])) for j in range(nk)]
        marked = {pos for _, pos in pairs}
        window_minima = set()
        for i in range(nk - w + 1):
            window = hashes[i:i + w]
            j = i + min(range(w), key=lambda t: (window[t], t))
            window_minima.add(j)
        assert marked == window_minima
        # order and value agreement
        assert [pos for _, pos in pairs] == sorted(marked)
        for value, pos in pairs:
            assert value == kmer_value(s[pos:pos + k])


def test_containment_direction_random(golden_collection, golden_digest_index):
    # exact substrings whose digest occurs must bracket the true genomes
    rng = random.Random(99)
    params = DigestParams()
    for _ in range(60):
        g = rng.randrange(16)
        genome = golden_collection.genomes[g]
        ln = rng.randint(14, 40)
        start = rng.randrange(len(genome) - ln + 1)
        q = digest_sequence(genome[start:start + ln], params)
        if not q:
            continue
        iv = golden_digest_index.find_interval(q)
        if iv.is_empty:
            continue
        first, last = golden_digest_index.genome_range(iv)
        assert first <= g <= last


def test_general_k_digest_queryable():
    rng = random.Random(5)
    genomes = ["".join(rng.choice("ACGT") for _ in range(400)) for _ in range(3)]
    coll = GenomeCollection(genomes=genomes)
    params = DigestParams(k=5, w=4)
    d = digest_collection(coll, params)
    assert d.alphabet.size == 3 + 4**5
    from memtax import build_index, compute_mem_table
    ix = build_index(d)
    q = digest_sequence(genomes[1][50:200], params)
    table = compute_mem_table(ix, q)
    assert table.records
    from memtax import longest_mems
    top = longest_mems(table)
    assert all(r.first_genome <= 1 <= r.last_genome for r in top)
