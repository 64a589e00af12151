# Walk through the colorers on one stream and compare colors against state.
# Run: python demos/online_colorers.py

import math

from strandcolor import ALGORITHMS, run, stream, verify

# a random multigraph: 64 vertices, max degree 32, about a third repeats
s = stream.gen_random_multigraph_stream(64, 32, 0.3, seed=7)
print(stream.format_header(s.header), "edges:", s.m)

# every algorithm takes the same stream; vertex-arrival ones get it regrouped
for algo in ALGORITHMS:
    res = run(algo, s, seed=1)
    bad = verify.check_proper(res.stream, res.transcript)
    used = verify.palette_stats(res.transcript).distinct
    print(f"{algo:12s} regime={res.colorer.regime:7s} colors={used:5d} "
          f"bound={res.colorer.palette_bound():7d} state_bits={res.state_bits_peak:7d} "
          f"violations={len(bad)}")

# greedy keeps 2*delta - 1 bits per vertex, rand-ea a window of s bits with s ~ 16 sqrt(delta log(n/failure)).
# At this size the window is still the wider of the two; it only wins past delta ~ 64 log2(n/failure).
n, d = 96, 64
big = stream.gen_random_multigraph_stream(n, d, 0.0, seed=3)
g = run("greedy", big)
r = run("rand-ea", big, seed=3)
print("greedy bits", g.state_bits_peak, " rand-ea bits", r.state_bits_peak,
      " n*sqrt(delta) =", int(n * math.sqrt(d)))

# the transcript is plain text: one line per edge, colors as colon-joined tuples
from strandcolor import format_transcript
print("\n".join(format_transcript(run("tradeoff", stream.gen_path_stream(5)).transcript).splitlines()[:4]))
