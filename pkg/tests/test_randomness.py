import math
from collections import Counter
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import chisquare

from helpers import naive_gf_mul
from strandcolor import randomness as R
from strandcolor.errors import InvalidParams, PrefixOnly


# -- bit oracle -----------------------------------------------------------

def test_oracle_is_deterministic():
    a, b = R.BitOracle(42), R.BitOracle(42)
    assert [a.bit(i) for i in range(200)] == [b.bit(i) for i in range(200)]
    assert R.oracle_bit(a, 12345) == R.oracle_bit(b, 12345)


def test_oracle_mean_is_balanced():
    words = R.BitOracle(7).words(0, 1 << 14)   # 2^20 bits
    ones = int(np.unpackbits(words.view(np.uint8)).sum())
    assert 0.49 <= ones / (64 << 14) <= 0.51


def test_oracle_avalanche_between_neighbouring_seeds():
    a, b = R.BitOracle(1000), R.BitOracle(1000 ^ 1)
    idx = np.arange(10_000)
    dist = int((a.bits(idx) != b.bits(idx)).sum())
    assert 4500 <= dist <= 5500


def test_vector_bits_match_scalar_bits():
    o = R.BitOracle(3)
    idx = [0, 1, 63, 64, 65, 1000, R.consumer_offset(5) + 17]
    assert o.bits(idx).tolist() == [o.bit(i) for i in idx]
    assert o.words(10, 4).tolist() == [o.word(j) for j in range(10, 14)]


def test_consumer_ranges_are_disjoint():
    assert R.consumer_offset(1) - R.consumer_offset(0) == 1 << 40
    with pytest.raises(InvalidParams):
        R.consumer_offset(-1)


def test_derive_seed_separates_labels():
    seeds = {R.derive_seed(5, *path) for path in [(), (1,), (2,), (1, 2), (2, 1), (1, 1)]}
    assert len(seeds) == 6
    assert R.derive_seed(5, 1) == R.derive_seed(5, 1)


def test_stream_randbelow_is_uniform():
    rng = R.random_stream(11)
    counts = Counter(rng.randbelow(6) for _ in range(60_000))
    assert chisquare([counts[k] for k in range(6)]).pvalue > 1e-3


def test_stream_counts_bits():
    rng = R.random_stream(1)
    rng.take_bits(5)
    rng.take_bits(70)
    assert rng.bits_consumed == 75


# -- binary field ----------------------------------------------------------

@pytest.mark.parametrize("h", range(1, 21))
def test_gf_mul_matches_schoolbook(h):
    mod = R.gf_modulus(h)
    rng = np.random.default_rng(h)
    for a, b in rng.integers(0, 1 << h, size=(50, 2)).tolist():
        assert R.gf_mul(a, b, h) == naive_gf_mul(a, b, h, mod)


@pytest.mark.parametrize("h", range(2, 15))
def test_field_polynomial_is_primitive(h):
    # x generates the multiplicative group iff the order of x is exactly 2^h - 1
    order = (1 << h) - 1
    x, p = 2, 1
    for k in range(1, order + 1):
        p = R.gf_mul(p, x, h)
        if p == 1:
            assert k == order
            break
    else:
        pytest.fail("x has no finite order")


@pytest.mark.parametrize("h", [5, 12, 24])
def test_vector_field_multiply_agrees(h):
    rng = np.random.default_rng(0)
    a = rng.integers(0, 1 << h, size=200)
    b = rng.integers(0, 1 << h, size=200)
    got = R._gf_mul_vec(a, b, h)
    assert got.tolist() == [R.gf_mul(int(x), int(y), h) for x, y in zip(a, b)]


def test_polyhash_is_horner_of_its_coefficients():
    h = 8
    p = R.PolyHash(h, [3, 5, 7])
    mod = R.gf_modulus(h)
    for x in range(256):
        x2 = naive_gf_mul(x, x, h, mod)
        want = 3 ^ naive_gf_mul(5, x, h, mod) ^ naive_gf_mul(7, x2, h, mod)
        assert p.evaluate(x) == want
        assert p.bit(x) == want & 1


def test_polyhash_from_oracle_is_reproducible_and_vectorized():
    a = R.PolyHash.from_oracle(10, 6, R.BitOracle(9), 128)
    b = R.PolyHash.from_oracle(10, 6, R.BitOracle(9), 128)
    assert a.coefficients == b.coefficients and a.degree == 5
    pts = list(range(1024))
    assert a.bits_many(pts).tolist() == [a.bit(x) for x in pts]


def test_polyhash_pairwise_bits_are_balanced():
    # a degree-1 polynomial is 2-wise independent: check joint bits at two fixed points
    counts = Counter()
    for seed in range(4000):
        p = R.PolyHash.from_oracle(6, 2, R.BitOracle(seed))
        counts[p.bit(3), p.bit(17)] += 1
    assert chisquare([counts[k] for k in [(0, 0), (0, 1), (1, 0), (1, 1)]]).pvalue > 1e-3


# -- permutations -----------------------------------------------------------

def test_explicit_permutation_of_one():
    p = R.explicit_uniform_permutation(1, R.BitOracle(0))
    assert p.forward(1) == 1 and p.inverse(1) == 1


def test_explicit_permutation_is_stable():
    a = R.explicit_uniform_permutation(3, R.BitOracle(77), 64)
    b = R.explicit_uniform_permutation(3, R.BitOracle(77), 64)
    assert a.forward_many([1, 2, 3]) == b.forward_many([1, 2, 3])


def test_explicit_permutation_is_uniform_over_s4():
    counts = Counter(tuple(R.explicit_uniform_permutation(4, R.BitOracle(s)).forward_many([1, 2, 3, 4]))
                     for s in range(100_000))
    assert len(counts) == 24
    assert chisquare([counts[p] for p in permutations(range(1, 5))]).pvalue > 1e-3


def test_lazy_permutation_of_one_and_full_prefix():
    assert R.lazy_uniform_permutation(1, R.BitOracle(0)).forward(1) == 1
    p = R.lazy_uniform_permutation(50, R.BitOracle(4))
    assert sorted(p.forward(i) for i in range(1, 51)) == list(range(1, 51))
    assert p.evaluated == 50


def test_lazy_permutation_has_no_inverse():
    with pytest.raises(PrefixOnly):
        R.lazy_uniform_permutation(8, R.BitOracle(0)).inverse(1)


def test_lazy_first_value_is_uniform():
    counts = Counter(R.LazyUniformPermutation(8, R.BitOracle(s)).forward(1) for s in range(100_000))
    assert chisquare([counts[k] for k in range(1, 9)]).pvalue > 1e-3


@pytest.mark.parametrize("C", [16, 100, 1024])
def test_lazy_permutation_bit_budget(C):
    for p_len in (1, C // 4, C // 2):
        used = []
        for seed in range(30):
            p = R.LazyUniformPermutation(C, R.BitOracle(seed))
            p.forward(p_len)
            used.append(p.bits_consumed)
        bound = 4 * p_len * math.log2(C) * C / (C - p_len)
        assert np.mean(used) <= bound


def test_lazy_prefix_is_memoized():
    p = R.LazyUniformPermutation(20, R.BitOracle(2))
    first = p.forward(5)
    bits = p.bits_consumed
    assert p.forward(5) == first and p.forward(3) == p.forward(3)
    assert p.bits_consumed == bits


def test_thorp_rounds_formula():
    assert R.thorp_rounds(3, 1e-3) == math.ceil(2 * (27 + 3 * math.log(1000)))
    assert R.thorp_rounds(1, 0.5, round_scale=1.0) == math.ceil(1 + math.log(2))
    with pytest.raises(InvalidParams):
        R.thorp_rounds(0, 0.1)


def test_single_gate_network():
    ident = R.ThorpPermutation(1, 1, R.FixedGates([0]))
    swap = R.ThorpPermutation(1, 1, R.FixedGates([1]))
    assert [ident.forward(i) for i in (1, 2)] == [1, 2]
    assert [swap.forward(i) for i in (1, 2)] == [2, 1]


def test_thorp_round_is_a_riffle():
    # all gates 0: top card p goes to 2p, bottom card half+g goes to 2g+1
    p = R.ThorpPermutation(3, 1, R.FixedGates([0] * 4))
    assert p.forward_many(range(1, 9)) == [1, 3, 5, 7, 2, 4, 6, 8]


@pytest.mark.parametrize("d, source", [(d, "oracle") for d in range(1, 8)] + [(d, "poly") for d in range(1, 5)])
def test_thorp_round_trip(d, source):
    p = R.thorp_permutation(d, 1e-3, 2, R.BitOracle(d), gate_source=source)
    C = 1 << d
    fwd = p.forward_many(range(1, C + 1))
    assert sorted(fwd) == list(range(1, C + 1))
    assert p.inverse_many(fwd) == list(range(1, C + 1))
    for i in range(1, C + 1, max(1, C // 8)):
        assert p.inverse(p.forward(i)) == i and p.forward(p.inverse(i)) == i
        assert p.forward(i) == fwd[i - 1]


def test_thorp_gate_source_validation():
    with pytest.raises(InvalidParams):
        R.thorp_permutation(2, 1e-3, 2, R.BitOracle(0), gate_source="nope")
    with pytest.raises(InvalidParams):
        R.thorp_permutation(2, 1e-3, 0, R.BitOracle(0))


def test_batch_thorp_matches_scalar():
    seeds = list(range(120))
    for d in (1, 2, 3):
        for pos in (1, (1 << d)):
            got = R.thorp_forward_batch(d, 1e-3, 2, seeds, pos)
            want = [R.thorp_permutation(d, 1e-3, 2, R.BitOracle(s)).forward(pos) for s in seeds]
            assert got.tolist() == want


@pytest.mark.parametrize("C", [3, 5, 12, 100])
def test_cycle_walk_restricts_to_a_bijection(C):
    d = (C - 1).bit_length()
    base = R.thorp_permutation(d, 1e-3, 2, R.BitOracle(C), gate_source="oracle")
    p = R.CycleWalkPermutation(base, C)
    fwd = [p.forward(i) for i in range(1, C + 1)]
    assert sorted(fwd) == list(range(1, C + 1))
    assert [p.inverse(c) for c in fwd] == list(range(1, C + 1))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 300), st.integers(0, 2**63), st.integers(0, 5))
def test_explicit_permutation_round_trip(C, seed, consumer):
    p = R.explicit_uniform_permutation(C, R.BitOracle(seed), R.consumer_offset(consumer))
    fwd = p.forward_many(range(1, C + 1))
    assert sorted(fwd) == list(range(1, C + 1))
    assert p.inverse_many(fwd) == list(range(1, C + 1))
    assert p.block(1, C) == fwd


def test_permutation_rejects_out_of_range():
    p = R.ExplicitPermutation.identity(4)
    with pytest.raises(Exception):
        p.forward(5)
    with pytest.raises(Exception):
        p.forward(0)
