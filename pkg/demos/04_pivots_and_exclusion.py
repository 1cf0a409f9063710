"""
Pivot generations and single-vertex exclusion
=============================================

From a maximal path, the first generation of pivots is every vertex that
can become the head after one rotation. Later generations rotate the
stored paths of earlier pivots. The sets grow by roughly a factor n*p per
generation, which is why a removed vertex almost always touches one.
"""

import math

from irgraph import (Homogeneous, RngStream, SearchBudget, build_assignment, exclusion_experiment,
                     longest_path_search, pivot_generations, pivot_interval, sample_graph)

n = 2048
p = 2 / math.sqrt(n)
g = sample_graph(build_assignment(Homogeneous(p), n), RngStream(11))
path = longest_path_search(g, SearchBudget(rng=RngStream(12)))
piv = pivot_generations(g, path, k=2)
band = pivot_interval(n, p, 1, 1.0, 1.0)
print(f"pivot counts per generation: {piv.counts}; first-generation band "
      f"[{band['lower']:.1f}, {band['upper']:.1f}]")

# Every pivot carries a replayable rotation sequence back to the start path.
x = piv.generations[1][0]
print(f"pivot {x}: chord vertices {piv.rotation_sequence(x)}, head of replayed path {piv.path_of(x).head}")

# Remove a vertex, find a long path without it, and ask whether it sees a pivot.
g1024 = sample_graph(build_assignment(Homogeneous(2 / 32), 1024), RngStream(13))
for j in (0, 500, 1023):
    rep = exclusion_experiment(g1024, j, SearchBudget(rng=RngStream(14, j)), k=2)
    print(f"j={j}: pivots {rep.total_pivots}, adjacent to {rep.adjacent_pivots} of them")
