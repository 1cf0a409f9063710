"""
Rotations and the rotation-extension search
===========================================

A rotation uses a chord from the head of a path to an interior vertex:
the prefix up to that vertex is reversed and a new head (the pivot)
appears. Repeating the same chord undoes it. The search alternates greedy
extension with breadth-first exploration of rotated endpoints.
"""

from irgraph import (Homogeneous, PathState, RngStream, SearchBudget, build_assignment,
                     exact_hamiltonian_path, posa_rotate, run_search, sample_graph)
from irgraph.sampler import SampledGraph

g = SampledGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 3)])
path = PathState([0, 1, 2, 3, 4], 5)
rotated = posa_rotate(path, g, 3)
print(path.seq, "->", rotated.seq, "pivot", rotated.head)
print("rotate again:", posa_rotate(rotated, g, 3).seq)

# On G(n, p) with p = n^(-1/2) the search finds Hamiltonian paths quickly.
for n in (1024, 4096):
    graph = sample_graph(build_assignment(Homogeneous(n ** -0.5), n), RngStream(7))
    res = run_search(graph, SearchBudget(rng=RngStream(8)))
    print(f"n={n}: path with {len(res.path)} vertices, hamiltonian={res.hamiltonian}, "
          f"rotations {res.rotations_used}")

# For small graphs an exact bitmask search settles the question.
small = sample_graph(build_assignment(Homogeneous(0.3), 14), RngStream(3))
exact = exact_hamiltonian_path(small)
heur = run_search(small, SearchBudget(max_restarts=50, rng=RngStream(4)))
print("exact:", None if exact is None else exact.seq, "| search hamiltonian:", heur.hamiltonian)
