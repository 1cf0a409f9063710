"""
Sampling graphs and measuring neighbourhood growth
==================================================

Each pair is an independent Bernoulli trial. Pairs are visited in
lexicographic order and each consumes one double of the stream, so a seed
pins the whole graph. Small vertex sets should have outside neighbourhoods
of size roughly n*p*|S|.
"""

import warnings

from irgraph import Homogeneous, RngStream, build_assignment, expansion_statistics, sample_graph

n = 4096
p = n ** -0.5
a = build_assignment(Homogeneous(p), n)
g = sample_graph(a, RngStream(master_seed=1))
print(g, f"expected edges {p * n * (n - 1) / 2:.0f}")

# Same seed, same graph.
assert sample_graph(a, RngStream(1)) == g

with warnings.catch_warnings():
    warnings.simplefilter("ignore")  # s = 8 is past 1/(10p) and gets flagged
    rows = expansion_statistics(a, g, sizes=[1, 2, 4, 8], trials_per_size=200, rng=RngStream(2))
for row in rows:
    lo, hi = row.interval
    print(f"s={row.s}: median N_out {row.quantiles['q50']:.0f}, band [{lo:.1f}, {hi:.1f}], "
          f"inside {row.in_interval_fraction:.2f}, small-set regime {row.in_regime}")
