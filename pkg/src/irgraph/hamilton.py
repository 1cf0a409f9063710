"""Long paths by rotation-extension, pivot generations and an exact small-n oracle.

Positions are 0-based. For a path ``(s[0], ..., s[t-1])`` a rotation with
chord index ``a`` (``2 <= a <= t-1``, edge ``(s[0], s[a])`` present) returns
``(s[a-1], s[a-2], ..., s[0], s[a], ..., s[t-1])``; the new head ``s[a-1]``
is the pivot. Applying the same chord index again restores the input.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .matching import Matching
from .rng import RngStream
from .sampler import SampledGraph


class PathState:
    """Simple path with O(1) membership and position lookup.

    The vertices live in a buffer of size ``2n + 1`` between ``_head`` and
    ``_tail`` so the path can grow at either end without shifting; ``_pos``
    holds each vertex's buffer index or -1.
    """

    __slots__ = ("n", "_buf", "_pos", "_head", "_tail")

    def __init__(self, seq: Sequence[int], n: int):
        seq = [int(v) for v in seq]
        if not seq:
            raise ValueError("a path has at least one vertex")
        if len(set(seq)) != len(seq):
            raise ValueError("path vertices must be distinct")
        if min(seq) < 0 or max(seq) >= n:
            raise ValueError(f"path vertex out of range for n={n}")
        self.n = n
        self._buf = np.full(2 * n + 1, -1, dtype=np.int64)
        self._pos = np.full(n, -1, dtype=np.int64)
        self._head = n
        self._tail = n + len(seq)
        self._buf[self._head:self._tail] = seq
        self._pos[seq] = np.arange(self._head, self._tail)

    def copy(self) -> "PathState":
        new = PathState.__new__(PathState)
        new.n = self.n
        new._buf = self._buf.copy()
        new._pos = self._pos.copy()
        new._head = self._head
        new._tail = self._tail
        return new

    @property
    def seq(self) -> list:
        return self._buf[self._head:self._tail].tolist()

    def __len__(self) -> int:
        return self._tail - self._head

    @property
    def length(self) -> int:
        """Number of edges."""
        return self._tail - self._head - 1

    def __contains__(self, v: int) -> bool:
        return self._pos[v] >= 0

    def __eq__(self, other) -> bool:
        return isinstance(other, PathState) and self.seq == other.seq

    def __repr__(self) -> str:
        s = self.seq
        body = s if len(s) <= 12 else s[:5] + ["..."] + s[-5:]
        return f"PathState(len={len(s)}, {body})"

    @property
    def head(self) -> int:
        return int(self._buf[self._head])

    @property
    def tail(self) -> int:
        return int(self._buf[self._tail - 1])

    def position(self, v: int) -> int:
        """0-based position of ``v``, or -1 if it is not on the path."""
        p = self._pos[v]
        return int(p - self._head) if p >= 0 else -1

    def at(self, i: int) -> int:
        return int(self._buf[self._head + i])

    def vertex_set(self) -> set:
        return set(self.seq)

    def is_valid(self, g: SampledGraph) -> bool:
        s = self.seq
        if len(set(s)) != len(s):
            return False
        if any(self.position(v) != i for i, v in enumerate(s)):
            return False
        return all(g.has_edge(s[i], s[i + 1]) for i in range(len(s) - 1))

    # in-place primitives --------------------------------------------------

    def _rotate(self, a: int) -> None:
        h = self._head
        seg = self._buf[h:h + a][::-1].copy()
        self._buf[h:h + a] = seg
        self._pos[seg] = np.arange(h, h + a)

    def _reverse(self) -> None:
        h, t = self._head, self._tail
        seg = self._buf[h:t][::-1].copy()
        self._buf[h:t] = seg
        self._pos[seg] = np.arange(h, t)

    def _push_head(self, v: int) -> None:
        self._head -= 1
        self._buf[self._head] = v
        self._pos[v] = self._head

    def _push_tail(self, v: int) -> None:
        self._buf[self._tail] = v
        self._pos[v] = self._tail
        self._tail += 1


def posa_rotate(path: PathState, g: SampledGraph, chord_index: int) -> PathState:
    """Rotate at the head along the chord ``(head, path[chord_index])``."""
    t = len(path)
    a = int(chord_index)
    if a < 2:
        raise ValueError(f"chord index must be >= 2 (index 1 is the path edge), got {a}")
    if a >= t:
        raise ValueError(f"chord index {a} beyond path of {t} vertices")
    if not g.has_edge(path.head, path.at(a)):
        raise ValueError(f"({path.head}, {path.at(a)}) is not an edge")
    new = path.copy()
    new._rotate(a)
    return new


def _outside_neighbor(g: SampledGraph, path: PathState, v: int) -> int:
    pos = path._pos
    for w in g.adj[v]:
        if pos[w] < 0:
            return w
    return -1


def extend(path: PathState, g: SampledGraph) -> Optional[PathState]:
    """Extend by one vertex, head first, smallest-label outside neighbour.

    Returns None when neither endpoint has a neighbour off the path, i.e.
    both endpoint neighbourhoods are contained in the path.
    """
    w = _outside_neighbor(g, path, path.head)
    if w >= 0:
        new = path.copy()
        new._push_head(w)
        return new
    w = _outside_neighbor(g, path, path.tail)
    if w >= 0:
        new = path.copy()
        new._push_tail(w)
        return new
    return None


def is_maximal(path: PathState, g: SampledGraph) -> bool:
    return all(path.position(w) >= 0 for end in (path.head, path.tail) for w in g.adj[end])


def _greedy_extend(path: PathState, g: SampledGraph) -> None:
    while True:
        w = _outside_neighbor(g, path, path.head)
        if w < 0:
            break
        path._push_head(w)
    while True:
        w = _outside_neighbor(g, path, path.tail)
        if w < 0:
            break
        path._push_tail(w)


# ---------------------------------------------------------------------------
# Rotation-extension search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchBudget:
    max_rotations: int = 1_000_000
    max_restarts: int = 20
    rng: RngStream = RngStream(0)

    def __post_init__(self):
        if self.max_rotations < 1 or self.max_restarts < 0:
            raise ValueError("max_rotations must be positive and max_restarts non-negative")


@dataclass
class SearchResult:
    path: PathState
    rotations_used: int
    restarts_used: int

    @property
    def hamiltonian(self) -> bool:
        return len(self.path) == self.path.n

    def to_json(self, g: SampledGraph, seed: Optional[int] = None, pivot_counts=()) -> dict:
        return {"n": g.n, "m": g.edge_count, "seed": seed, "path_length": self.path.length,
                "hamiltonian": self.hamiltonian, "rotations_used": self.rotations_used,
                "restarts_used": self.restarts_used, "pivot_counts": list(pivot_counts)}


def _replay(origin: PathState, chords: list) -> PathState:
    gamma = origin.copy()
    for w in chords:
        gamma._rotate(gamma.position(w))
    return gamma


def _chain(nodes: list, idx: int) -> list:
    chords = []
    while nodes[idx][1] >= 0:
        chords.append(nodes[idx][2])
        idx = nodes[idx][1]
    chords.reverse()
    return chords


def _closure_extend(path: PathState, g: SampledGraph, allowance: int):
    """Breadth-first rotation closure of the head, tail held fixed.

    Returns ``(rotated_path_or_None, rotations)``. The returned path has a
    head with a neighbour off the path. Endpoints are tagged on first sight.
    """
    origin = path
    nodes = [(origin.head, -1, -1)]  # (endpoint, parent node, chord vertex)
    seen = {origin.head}
    queue = deque([0])
    rotations = 0
    while queue:
        idx = queue.popleft()
        gamma = _replay(origin, _chain(nodes, idx))
        v = gamma.head
        for w in g.adj[v]:
            a = gamma.position(w)
            if a < 2:
                continue
            rotations += 1
            x = gamma.at(a - 1)
            if x in seen:
                continue
            seen.add(x)
            nodes.append((x, idx, w))
            if _outside_neighbor(g, gamma, x) >= 0:
                gamma._rotate(a)
                return gamma, rotations
            queue.append(len(nodes) - 1)
            if rotations >= allowance:
                return None, rotations
    return None, rotations


def run_search(g: SampledGraph, budget: SearchBudget = SearchBudget()) -> SearchResult:
    """Rotation-extension search for a long path.

    From a random start vertex: extend greedily at both ends; when stuck,
    explore the rotation closure of the head (then of the tail) and extend
    as soon as some derived endpoint has a neighbour off the path. When both
    closures are exhausted, restart from a fresh random vertex, keeping the
    best path. Deterministic given ``budget.rng``; a heuristic, so the result
    is maximal but not necessarily of maximum length.
    """
    n = g.n
    if n == 0:
        raise ValueError("empty vertex set")
    gen = budget.rng.generator()
    best: Optional[PathState] = None
    rotations = 0
    restarts = 0
    for attempt in range(budget.max_restarts + 1):
        if attempt:
            restarts += 1
        path = PathState([int(gen.integers(n))], n)
        while True:
            _greedy_extend(path, g)
            if len(path) == n or rotations >= budget.max_rotations:
                break
            progressed = False
            for _ in range(2):
                rotated, used = _closure_extend(path, g, budget.max_rotations - rotations)
                rotations += used
                if rotated is not None:
                    path = rotated
                    progressed = True
                    break
                if rotations >= budget.max_rotations:
                    break
                path._reverse()
            if not progressed:
                break
        if best is None or len(path) > len(best):
            best = path
        if len(best) == n or rotations >= budget.max_rotations:
            break
    return SearchResult(best, rotations, restarts)


def longest_path_search(g: SampledGraph, budget: SearchBudget = SearchBudget()) -> PathState:
    return run_search(g, budget).path


# ---------------------------------------------------------------------------
# Pivot generations
# ---------------------------------------------------------------------------

@dataclass
class PivotGenerations:
    """Pivots ``P_1 .. P_k`` of a maximal path, rotating at its head.

    ``parents[x] = (v, w)`` records that ``x`` became an endpoint by rotating
    the stored path of ``v`` along the chord ``(v, w)``. The origin head has
    generation 0 and is never re-tagged. ``escapes`` lists pivots with a
    neighbour off the path, which a maximum-length path would not have.
    """

    generations: list
    origin: PathState
    parents: dict
    escapes: list = field(default_factory=list)

    @property
    def counts(self) -> list:
        return [len(gen) for gen in self.generations]

    def all_pivots(self) -> set:
        return set().union(*self.generations) if self.generations else set()

    def generation_of(self, x: int) -> int:
        for l, gen in enumerate(self.generations, start=1):
            if x in gen:
                return l
        return 0 if x == self.origin.head else -1

    def rotation_sequence(self, x: int) -> list:
        """Chord vertices leading from the origin path to the stored path of ``x``."""
        return _chain_from(self.parents, self.origin.head, x)

    def path_of(self, x: int) -> PathState:
        return _replay(self.origin, self.rotation_sequence(x))


def pivot_generations(g: SampledGraph, path: PathState, k: int) -> PivotGenerations:
    """Breadth-first pivot generations up to ``k`` from the head of ``path``.

    ``P_1`` holds ``path[a-1]`` for every neighbour ``path[a]``, ``a >= 2``,
    of the head. ``P_{l+1}`` applies the same rule to the stored path of each
    ``v`` in ``P_l`` (in increasing label order). First tag wins, so the
    generations are disjoint.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not is_maximal(path, g):
        raise ValueError("pivot generations need a maximal path (extend must return None)")
    origin = path.copy()
    tagged = {origin.head}
    parents: dict = {}
    escapes = []
    generations = []
    frontier = [origin.head]
    for _ in range(k):
        nxt = []
        for v in sorted(frontier):
            gamma = origin if v == origin.head else _replay(origin, _chain_from(parents, origin.head, v))
            for w in g.adj[v]:
                a = gamma.position(w)
                if a < 2:
                    continue
                x = gamma.at(a - 1)
                if x in tagged:
                    continue
                tagged.add(x)
                parents[x] = (v, w)
                nxt.append(x)
                if _outside_neighbor(g, gamma, x) >= 0:
                    escapes.append(x)
        generations.append(sorted(nxt))
        frontier = nxt
        if not nxt:
            generations.extend([] for _ in range(k - len(generations)))
            break
    return PivotGenerations(generations, origin, parents, escapes)


def _chain_from(parents: dict, root: int, x: int) -> list:
    chords = []
    while x != root:
        x, w = parents[x]
        chords.append(w)
    chords.reverse()
    return chords


# ---------------------------------------------------------------------------
# Single-vertex exclusion
# ---------------------------------------------------------------------------

@dataclass
class ExclusionReport:
    j: int
    path_length: int
    hamiltonian_in_gj: bool
    pivot_counts: list
    total_pivots: int
    adjacent_to_pivot: bool
    adjacent_pivots: int
    rotations_used: int
    restarts_used: int
    label: str = "heuristic longest path"

    def to_json(self) -> dict:
        return dict(self.__dict__)


def exclusion_experiment(g: SampledGraph, j: int, budget: SearchBudget, k: int) -> ExclusionReport:
    """Remove ``j``, search ``G_j`` for a long path, count its pivots, and test
    whether ``j`` is adjacent in ``g`` to at least one of them."""
    if not (0 <= j < g.n):
        raise ValueError(f"vertex {j} not in graph")
    gj, labels = g.without_vertex(j)
    if gj.n == 0:
        return ExclusionReport(j, 0, True, [0] * k, 0, False, 0, 0, 0)
    res = run_search(gj, budget)
    piv = pivot_generations(gj, res.path, k)
    pivots = {labels[x] for x in piv.all_pivots()}
    adjacent = len(pivots & g.nbr_sets[j])
    return ExclusionReport(
        j=j, path_length=res.path.length, hamiltonian_in_gj=res.hamiltonian,
        pivot_counts=piv.counts, total_pivots=len(pivots),
        adjacent_to_pivot=adjacent > 0, adjacent_pivots=adjacent,
        rotations_used=res.rotations_used, restarts_used=res.restarts_used,
    )


# ---------------------------------------------------------------------------
# Exact oracle and path -> matching
# ---------------------------------------------------------------------------

EXACT_MAX_N = 20


def exact_hamiltonian_path(g: SampledGraph) -> Optional[PathState]:
    """Hamiltonian path by bitmask dynamic programming, or None.

    ``reach[S]`` is the bitset of vertices ``w`` in ``S`` at which some path
    covering exactly ``S`` ends; ``w`` is in ``reach[S]`` iff
    ``reach[S - w]`` meets the neighbourhood of ``w``. Subsets are processed
    by popcount layer so every layer is a handful of vectorized updates.
    """
    n = g.n
    if n > EXACT_MAX_N:
        raise ValueError(f"exact oracle limited to n <= {EXACT_MAX_N}, got {n}")
    if n == 0:
        return None
    if n == 1:
        return PathState([0], 1)
    nbr = [sum(1 << w for w in g.adj[v]) for v in range(n)]
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    pop = np.zeros(size, dtype=np.int64)
    for v in range(n):
        pop += (masks >> v) & 1
    reach = np.zeros(size, dtype=np.int64)
    reach[1 << np.arange(n)] = 1 << np.arange(n)
    for layer in range(2, n + 1):
        idx = masks[pop == layer]
        for w in range(n):
            sel = idx[(idx >> w) & 1 == 1]
            hit = (reach[sel ^ (1 << w)] & nbr[w]) != 0
            reach[sel[hit]] |= 1 << w
    full = size - 1
    if reach[full] == 0:
        return None
    # walk back from the smallest feasible end
    seq = []
    mask = full
    end = int(np.flatnonzero([(int(reach[full]) >> v) & 1 for v in range(n)])[0])
    while True:
        seq.append(end)
        rest = mask ^ (1 << end)
        if rest == 0:
            break
        cand = int(reach[rest]) & nbr[end]
        end = (cand & -cand).bit_length() - 1
        mask = rest
    seq.reverse()
    return PathState(seq, n)


def path_to_matching(path: PathState) -> Matching:
    """Every other edge of the path, starting with the first."""
    s = path.seq
    return Matching(tuple((s[i], s[i + 1]) for i in range(0, len(s) - 1, 2)))
