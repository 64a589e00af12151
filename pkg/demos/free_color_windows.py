# How a vertex remembers its free colors with a few bits.
# Run: python demos/free_color_windows.py

from strandcolor import randomness as R
from strandcolor.structures import FreeColorTracker

# a permutation of the palette [C]; the vertex only ever looks at one block of it
C, s, delta = 16, 8, 4
sigma = R.explicit_uniform_permutation(C, R.BitOracle(2024))
print("sigma:", sigma.forward_many(range(1, C + 1)))

t = FreeColorTracker(C, s, delta, sigma)
print("threshold:", t.threshold, "blocks:", t.blocks)   # moves on after s*delta/C = 2 removals

for step in range(4):
    free = sorted(t.current_set())
    c = free[0]
    t.remove_and_update(c)
    print(f"take {c:2d} from {free}  -> block {t.b}, slots left {sorted(t.H)}")

# a Thorp network gives the same interface without storing the permutation
net = R.thorp_permutation(4, 1e-3, 2, R.BitOracle(5), gate_source="oracle")
print("thorp rounds:", net.rounds, "image:", net.forward_many(range(1, 17)))
assert net.inverse_many(net.forward_many(range(1, 17))) == list(range(1, 17))

# palettes that are not a power of two: walk the cycle until the value lands in range
cw = R.CycleWalkPermutation(net, 11)
print("cycle-walked to [11]:", [cw.forward(i) for i in range(1, 12)])

# lazy permutations pay random bits only for the prefix they reveal
lazy = R.LazyUniformPermutation(1 << 20, R.BitOracle(1))
print("first five of a 2^20 permutation:", [lazy.forward(i) for i in range(1, 6)],
      "bits:", lazy.bits_consumed)
