from fractions import Fraction
from itertools import combinations
import math

import pytest
from hypothesis import given, settings, strategies as st

from strandcolor import codes as K
from strandcolor.errors import CodeSearchFailed, InvalidParams, OutOfRange, ParseError


def scan_distance(code):
    # independent of the library: pairwise over tuples from encode
    words = [K.encode(code, v) for v in range(1, code.codeword_count + 1)]
    return min(sum(a != b for a, b in zip(x, y)) for x, y in combinations(words, 2))


def test_full_distance_pair_is_complementary():
    c = K.build_code(2, 8, 1, 0)
    assert c.min_distance == 8
    assert [a ^ b for a, b in zip(K.encode(c, 1), K.encode(c, 2))] == [1] * 8


def test_repetition_code_encodes_as_expected():
    rep = K.BinaryCode.unchecked(8, [0, 0xFF], 1)
    assert K.encode(rep, 1) == (0,) * 8
    assert K.encode(rep, 2) == (1,) * 8
    assert K.min_distance(rep) == 8


def test_sixteen_words_of_length_sixteen():
    c = K.build_code(16, 16, Fraction(1, 4), 3)
    assert scan_distance(c) >= 4
    assert scan_distance(c) == c.min_distance or c.generator is not None


@pytest.mark.parametrize("t", [1, 3, 8])
def test_pigeonhole_rejects_too_many_words(t):
    with pytest.raises(CodeSearchFailed):
        K.build_code((1 << t) + 1, t, 0, 0)


def test_unreachable_distance_fails():
    with pytest.raises(CodeSearchFailed):
        K.build_code(64, 8, Fraction(3, 4), 0)


def test_bad_params():
    with pytest.raises(InvalidParams):
        K.build_code(4, 0, 0, 0)
    with pytest.raises(InvalidParams):
        K.build_code(4, 8, 2, 0)


def test_single_codeword_has_distance_t():
    c = K.build_code(1, 12, Fraction(1, 2), 0)
    assert K.min_distance(c) == 12
    assert K.min_distance(K.BinaryCode.unchecked(5, [3])) == 5


def test_random_linear_distance_matches_pairwise_scan():
    c = K.build_code(64, 32, Fraction(1, 8), 9)
    assert c.generator is not None
    assert K.pairwise_min_distance(c) == scan_distance(c)
    # span minimum bounds the pairs; equal when every message is used
    assert K.min_distance(c) == scan_distance(c)


def test_encode_is_stable_and_checked():
    c = K.build_code(10, 16, Fraction(1, 8), 2)
    assert K.encode(c, 4) == K.encode(c, 4)
    assert c.bit(4, 3) == K.encode(c, 4)[2]
    with pytest.raises(OutOfRange):
        K.encode(c, 11)
    with pytest.raises(OutOfRange):
        c.word(0)


def test_serialized_code_round_trips():
    lin = K.build_code(20, 24, Fraction(1, 8), 4)
    again = K.parse_code(K.serialize_code(lin), Fraction(1, 8))
    assert again.table == lin.table and again.min_distance == lin.min_distance
    explicit = K.BinaryCode.unchecked(6, [1, 2, 4, 8])
    text = K.serialize_code(explicit)
    assert text.splitlines()[0] == "c t=6 n=4 dmin=2"
    assert K.parse_code(text).table == explicit.table


@pytest.mark.parametrize("text", [
    "",
    "x t=4\n",
    "c t=4 n=2\n1\n2\n",
    "c t=4 n=3 dmin=2\n1\n2\n",
    "c t=4 n=2 dmin=3\n1\n2\n",
])
def test_parse_code_rejects_bad_text(text):
    with pytest.raises(ParseError):
        K.parse_code(text)


def test_gv_fallback_reaches_dense_short_codes():
    # a linear code needs 2^k >= n words; GV search handles what linear tries miss
    c = K.build_code(20, 10, Fraction(3, 10), 1, attempts=0)
    assert c.generator is None
    assert scan_distance(c) >= 3 and len(set(c.table)) == 20


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 40), st.integers(8, 40), st.sampled_from([Fraction(0), Fraction(1, 8), Fraction(1, 5)]),
       st.integers(0, 10**6))
def test_built_codes_meet_their_distance(n, t, dc, seed):
    try:
        c = K.build_code(n, t, dc, seed)
    except CodeSearchFailed:
        return
    assert c.min_distance >= max(1, math.ceil(dc * t))
    assert scan_distance(c) >= c.min_distance
    assert len(set(c.table)) == n


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, (1 << 12) - 1), min_size=2, max_size=30))
def test_pairwise_scan_agrees_with_tuple_scan(words):
    code = K.BinaryCode.unchecked(12, words)
    assert K.min_distance(code) == scan_distance(code)
