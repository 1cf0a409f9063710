"""Bipartite maximum matching, the two-edge swap and the bootstrap experiment."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .prob_model import ProbabilityAssignment
from .rng import RngStream
from .sampler import SampledGraph, sample_bipartite
from .stats import proportion


@dataclass(frozen=True)
class Matching:
    """Vertex-disjoint edges, stored sorted. Bipartite matchings list ``(x, y)``
    with ``x`` on the left side."""

    edges: tuple

    def __post_init__(self):
        edges = tuple(sorted((int(a), int(b)) for a, b in self.edges))
        seen = set()
        for a, b in edges:
            if a == b or a in seen or b in seen:
                raise ValueError(f"edge ({a}, {b}) is not vertex-disjoint from the rest")
            seen.update((a, b))
        object.__setattr__(self, "edges", edges)

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def covered(self) -> frozenset:
        return frozenset(v for e in self.edges for v in e)

    def mate(self) -> dict:
        out = {}
        for a, b in self.edges:
            out[a] = b
            out[b] = a
        return out

    def is_valid(self, g: SampledGraph) -> bool:
        if not all(g.has_edge(a, b) for a, b in self.edges):
            return False
        if g.bipartition is not None:
            left = set(g.bipartition[0])
            return all(a in left and b not in left for a, b in self.edges)
        return True

    def to_text(self) -> str:
        """One ``x y`` line per edge, 1-indexed."""
        return "".join(f"{a + 1} {b + 1}\n" for a, b in self.edges)

    @classmethod
    def from_text(cls, text: str) -> "Matching":
        return cls(tuple((int(a) - 1, int(b) - 1) for a, b in (ln.split() for ln in text.splitlines() if ln.strip())))


def _sides(g: SampledGraph) -> tuple:
    if g.bipartition is None:
        raise ValueError("graph carries no bipartition")
    return g.bipartition


def maximum_matching(g: SampledGraph) -> Matching:
    """Hopcroft-Karp with a fixed scan order.

    Free left vertices are scanned in increasing label order, the layered
    graph is built breadth-first and augmenting paths are traced depth-first
    taking neighbours in increasing label order, so the result is a function
    of the graph alone.
    """
    X, Y = _sides(g)
    adj = g.adj
    mate = {}
    INF = len(X) + len(Y) + 1

    def bfs(dist):
        q = deque()
        for x in X:
            if x not in mate:
                dist[x] = 0
                q.append(x)
            else:
                dist[x] = INF
        found = INF
        while q:
            x = q.popleft()
            if dist[x] >= found:
                continue
            for y in adj[x]:
                x2 = mate.get(y)
                if x2 is None:
                    if found == INF:
                        found = dist[x] + 1
                elif dist[x2] == INF:
                    dist[x2] = dist[x] + 1
                    q.append(x2)
        return found != INF

    def augment(root, dist):
        # iterative DFS along the layers; ptr[x] is the next neighbour index to try
        stack = [root]
        via = []
        while stack:
            x = stack[-1]
            advanced = False
            while ptr[x] < len(adj[x]):
                y = adj[x][ptr[x]]
                ptr[x] += 1
                x2 = mate.get(y)
                if x2 is None:
                    via.append(y)
                    for xx, yy in zip(stack, via):
                        mate[xx] = yy
                        mate[yy] = xx
                    return True
                if dist[x2] == dist[x] + 1:
                    via.append(y)
                    stack.append(x2)
                    advanced = True
                    break
            if not advanced:
                dist[x] = INF
                stack.pop()
                if via:
                    via.pop()
        return False

    dist = {}
    while bfs(dist):
        ptr = {x: 0 for x in X}
        for x in X:
            if x not in mate:
                augment(x, dist)
    return Matching(tuple((x, mate[x]) for x in X if x in mate))


def augment_with_pair(m: Matching, g: SampledGraph, w: int, v: int) -> Optional[Matching]:
    """Grow ``m`` by one using the uncovered pair ``w`` (left), ``v`` (right).

    Either the direct edge ``(w, v)``, or the swap that replaces a matched
    ``(u, y)`` with ``(u, v)`` and ``(w, y)`` when both new edges exist
    (matched edges tried in sorted order). None means no matched edge admits
    the swap.
    """
    X, Y = _sides(g)
    covered = m.covered
    if w in covered or v in covered:
        raise ValueError("w and v must both be uncovered")
    if w not in set(X) or v not in set(Y):
        raise ValueError("w must be a left vertex and v a right vertex")
    if g.has_edge(w, v):
        return Matching(m.edges + ((w, v),))
    for u, y in m.edges:
        if g.has_edge(u, v) and g.has_edge(w, y):
            rest = tuple(e for e in m.edges if e != (u, y))
            return Matching(rest + ((u, v), (w, y)))
    return None


def is_perfect(m: Matching, n: int) -> bool:
    """All vertices but at most one are covered."""
    return 2 * len(m) >= n - 1


def bipartite_split(n: int) -> tuple:
    """Left side = first ceil(n/2) labels, right side = the rest."""
    half = (n + 1) // 2
    return tuple(range(half)), tuple(range(half, n))


@dataclass
class BootstrapReport:
    n: int
    z: int
    trials: int
    e_low: dict
    perfect: dict
    mean_matching_size: float
    pair_checks: int
    swap_applies: int
    generalized_split: bool
    notes: list

    def to_json(self) -> dict:
        return dict(self.__dict__)


def bootstrap_trial(a: ProbabilityAssignment, stream: RngStream, pairs_per_trial: int = 8) -> dict:
    """One trial of :func:`bootstrap_experiment`; the graph draws from ``stream``."""
    n = a.n
    X, Y = bipartite_split(n)
    g = sample_bipartite(a, (X, Y), stream)
    m = maximum_matching(g)
    checks = applies = 0
    covered = m.covered
    free_x = [x for x in X if x not in covered]
    free_y = [y for y in Y if y not in covered]
    if free_x and free_y:
        gen = stream.child(1).generator()
        for _ in range(pairs_per_trial):
            w = free_x[int(gen.integers(len(free_x)))]
            v = free_y[int(gen.integers(len(free_y)))]
            checks += 1
            applies += augment_with_pair(m, g, w, v) is not None
    return {"matching_size": len(m), "e_low": len(m) >= n // 4, "perfect": is_perfect(m, n),
            "swap_checks": checks, "swap_applies": applies}


def bootstrap_experiment(a: ProbabilityAssignment, trials: int, rng: RngStream,
                         pairs_per_trial: int = 8) -> BootstrapReport:
    """Half-size matching, then perfection, on the canonical bipartite split.

    Per trial: sample the bipartite subgraph on ``X = first n/2``,
    ``Y = rest``; take its maximum matching; record whether it has at least
    ``z = n/4`` edges and whether it is perfect; sample up to
    ``pairs_per_trial`` uncovered pairs ``(w, v)`` uniformly and check whether
    the two-edge swap applies (for a maximum matching it never may).
    Trial ``i`` draws from ``rng.child(i)``.
    """
    n = a.n
    rows = [bootstrap_trial(a, rng.child(t), pairs_per_trial) for t in range(trials)]
    notes = ["uncovered pairs are sampled uniformly rather than by a fixed enumeration"]
    if n % 4:
        notes.append(f"n={n} not divisible by 4: z=floor(n/4), left side = first ceil(n/2) vertices")
    return BootstrapReport(
        n=n, z=n // 4, trials=trials,
        e_low=proportion(sum(r["e_low"] for r in rows), trials),
        perfect=proportion(sum(r["perfect"] for r in rows), trials),
        mean_matching_size=float(np.mean([r["matching_size"] for r in rows])),
        pair_checks=sum(r["swap_checks"] for r in rows),
        swap_applies=sum(r["swap_applies"] for r in rows),
        generalized_split=bool(n % 4), notes=notes,
    )
