import pytest
from hypothesis import given, settings, strategies as st

from strandcolor import stream as S
from strandcolor.errors import ParseError
from strandcolor.harness import run
from strandcolor.transcript import format_color, format_transcript, parse_color, parse_transcript


def test_color_text():
    assert format_color((1, 0, 12)) == "1:0:12"
    assert parse_color("1:0:12") == (1, 0, 12)
    with pytest.raises(ParseError):
        parse_color("1:-2")
    with pytest.raises(ParseError):
        parse_color("a")


def test_small_transcript_text():
    res = run("greedy", S.edge_stream(3, 2, [(1, 2), (2, 3)]))
    text = format_transcript(res.transcript)
    assert text.splitlines() == [
        "h n=3 delta=2 mode=ea algo=greedy profile=desk seed=0 regime=main",
        "a 1 1 2 1",
        "a 2 2 3 2",
        "f",
        "s palette=2 state_bits_peak=9 errors=0",
    ]


def test_aborts_survive_the_round_trip():
    res = run("conj-ea", S.gen_star_stream(5), overrides={"pool_cap": 0})
    assert not res.ok
    again = parse_transcript(format_transcript(res.transcript))
    assert again.aborts == res.transcript.aborts and again.aborts[0].startswith("PoolMemoryCap")
    assert again.errors == 1 and not again.finalized


@pytest.mark.parametrize("text", [
    "",
    "a 1 1 2 1\n",
    "h n=2 delta=1 mode=ea\n",
    "h n=2 delta=1 mode=ea algo=greedy seed=x\n",
    "h n=2 delta=1 mode=ea algo=greedy\na 1 1 2\n",
    "h n=2 delta=1 mode=ea algo=greedy\ns palette=1\n",
    "h n=2 delta=1 mode=ea algo=greedy\nq\n",
])
def test_bad_transcripts(text):
    with pytest.raises(ParseError):
        parse_transcript(text)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["greedy", "tradeoff", "det-ea", "w-rand-ea"]), st.integers(2, 16), st.integers(1, 5),
       st.integers(0, 10**6))
def test_round_trip(algo, n, delta, seed):
    t = run(algo, S.gen_random_multigraph_stream(n, delta, 0.3, seed), seed=seed).transcript
    again = parse_transcript(format_transcript(t))
    assert again == t
