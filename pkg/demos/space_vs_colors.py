# Sweep the group size of the tradeoff wrapper.
# Colors grow with the group size. With greedy inside, state stays flat: the contracted graph has
# fewer vertices but each bitmap covers s*delta colors. The saving needs an inner colorer whose
# state grows slower than its max degree.
# Run: python demos/space_vs_colors.py

from strandcolor import run, stream, verify
from strandcolor.cli import bench_rows, format_bench_csv

s = stream.gen_random_multigraph_stream(128, 16, 0.2, seed=11)

print("group  colors  bound  state_bits")
for g in (1, 2, 4, 8, 16):
    res = run("tradeoff", s, overrides={"group_size": g})
    used = verify.palette_stats(res.transcript).distinct
    print(f"{g:5d}  {used:6d}  {res.colorer.palette_bound():5d}  {res.state_bits_peak:10d}")

# the same numbers come out of the bench driver as CSV
streams = {"mg128": s, "star": stream.gen_star_stream(65)}
print(format_bench_csv(bench_rows(["greedy", "conj-ea", "det-ea"], streams, [1, 2, 3])), end="")
