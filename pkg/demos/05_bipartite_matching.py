"""
Bipartite matchings and the two-edge swap
=========================================

Split the vertices in half and keep only cross pairs. A maximum matching on
that bipartite graph is perfect whenever at most one vertex is left over.
If two vertices w and v are both uncovered, a swap replaces a matched edge
(u, y) with (u, v) and (w, y). On a maximum matching this can never apply.
"""

import math

from irgraph import (Homogeneous, Matching, RngStream, augment_with_pair, bootstrap_experiment,
                     build_assignment, maximum_matching)
from irgraph.sampler import SampledGraph

# The swap on four vertices: left {0, 1}, right {2, 3}.
g = SampledGraph.from_edges(4, [(0, 2), (0, 3), (1, 2)], ((0, 1), (2, 3)))
print("swap:", augment_with_pair(Matching(((0, 2),)), g, w=1, v=3).edges)
print("maximum:", maximum_matching(g).edges)

n = 256
p = math.log(n) / math.sqrt(n)
rep = bootstrap_experiment(build_assignment(Homogeneous(p), n), trials=100, rng=RngStream(21))
print(f"n={n}, p={p:.4f}: perfect {rep.perfect['frequency']:.2f} "
      f"(95% {rep.perfect['wilson95'][0]:.3f}..{rep.perfect['wilson95'][1]:.3f}), "
      f"swap applied {rep.swap_applies} of {rep.pair_checks} checks")
