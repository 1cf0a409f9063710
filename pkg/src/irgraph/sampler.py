"""Bernoulli realization of probability assignments and neighbourhood statistics."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .prob_model import ProbabilityAssignment
from .rng import as_generator

# rows are drawn in blocks of roughly this many pairs; the stream is identical
# to drawing every pair in one call
_BLOCK_PAIRS = 1 << 22


class SampledGraph:
    """Undirected simple graph with sorted adjacency lists.

    ``bipartition`` is either None or a pair ``(X, Y)`` of sorted vertex
    tuples covering ``0 .. n-1``.
    """

    def __init__(self, n: int, adj: Sequence[Sequence[int]], bipartition=None):
        self.n = n
        self.adj = [list(nb) for nb in adj]
        self.edge_count = sum(len(nb) for nb in self.adj) // 2
        self.bipartition = bipartition

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple], bipartition=None) -> "SampledGraph":
        nbrs = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, [sorted(s) for s in nbrs], bipartition)

    @classmethod
    def _from_arrays(cls, n: int, us: np.ndarray, vs: np.ndarray, bipartition=None) -> "SampledGraph":
        src = np.concatenate([us, vs])
        dst = np.concatenate([vs, us])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        bounds = np.searchsorted(src, np.arange(n + 1))
        dst_list = dst.tolist()
        adj = [dst_list[bounds[i]:bounds[i + 1]] for i in range(n)]
        return cls(n, adj, bipartition)

    def __repr__(self) -> str:
        return f"SampledGraph(n={self.n}, m={self.edge_count})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, SampledGraph) and self.n == other.n
                and self.adj == other.adj and self.bipartition == other.bipartition)

    @cached_property
    def nbr_sets(self) -> list:
        return [set(nb) for nb in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.nbr_sets[u]

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def edges(self):
        for u, nb in enumerate(self.adj):
            for v in nb:
                if u < v:
                    yield u, v

    def side(self, v: int) -> Optional[int]:
        """0 for the left side, 1 for the right side, None if not bipartite."""
        if self.bipartition is None:
            return None
        return 0 if v in self._left else 1

    @cached_property
    def _left(self) -> frozenset:
        return frozenset(self.bipartition[0])

    def without_vertex(self, j: int) -> tuple:
        """Induced subgraph on ``V minus {j}``, relabelled to ``0 .. n-2``.

        Returns ``(graph, labels)`` with ``labels[new] = old``.
        """
        labels = [v for v in range(self.n) if v != j]
        new = {old: i for i, old in enumerate(labels)}
        adj = [[new[w] for w in self.adj[old] if w != j] for old in labels]
        return SampledGraph(self.n - 1, adj), labels

    # -- edge-list text format (1-indexed) ----------------------------------

    def to_edgelist(self) -> str:
        lines = [f"{self.n} {self.edge_count}"]
        lines.extend(f"{u + 1} {v + 1}" for u, v in self.edges())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edgelist(cls, text: str) -> "SampledGraph":
        rows = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        if not rows or len(rows[0]) != 2:
            raise ValueError("header line must be 'n m'")
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(a) - 1, int(b) - 1) for a, b in rows[1:]]
        if len(edges) != m:
            raise ValueError(f"header promises {m} edges, found {len(edges)}")
        return cls.from_edges(n, edges)


def _validate_split(n: int, split) -> tuple:
    X, Y = (sorted(set(int(v) for v in side)) for side in split)
    if set(X) & set(Y):
        raise ValueError("bipartition sides overlap")
    if len(X) + len(Y) != n or set(X) | set(Y) != set(range(n)):
        raise ValueError("bipartition must cover every vertex exactly once")
    return tuple(X), tuple(Y)


def sample_graph(a: ProbabilityAssignment, rng, skip: bool = False) -> SampledGraph:
    """Draw every pair ``u < v`` independently with probability ``p(u, v)``.

    Draw discipline: pairs are visited in lexicographic order and pair number
    ``i`` consumes the ``i``-th double of the stream; the edge is present iff
    that double is ``< p(u, v)``. A seed therefore pins the whole graph.

    ``skip=True`` switches homogeneous assignments to geometric gap sampling:
    the gap to the next present pair (in the same lexicographic order) is drawn
    as ``Geometric(p)``. It has the same distribution but a different stream,
    and is refused for non-constant assignments.
    """
    gen = as_generator(rng)
    n = a.n
    if skip:
        p = a.constant_value()
        if p is None:
            raise ValueError("skip sampling needs a homogeneous assignment")
        us, vs = _skip_pairs(n, p, gen)
        return SampledGraph._from_arrays(n, us, vs)

    probs = a.probs
    us, vs = [], []
    u = 0
    while u < n - 1:
        # rows u .. stop-1 form one block
        stop, pairs = u, 0
        while stop < n - 1 and (pairs == 0 or pairs + (n - stop - 1) <= _BLOCK_PAIRS):
            pairs += n - stop - 1
            stop += 1
        draws = gen.random(pairs)
        off = 0
        for row in range(u, stop):
            width = n - row - 1
            hit = np.flatnonzero(draws[off:off + width] < probs[row, row + 1:])
            if hit.size:
                us.append(np.full(hit.size, row))
                vs.append(hit + row + 1)
            off += width
        u = stop
    if us:
        return SampledGraph._from_arrays(n, np.concatenate(us), np.concatenate(vs))
    return SampledGraph(n, [[] for _ in range(n)])


def _skip_pairs(n: int, p: float, gen: np.random.Generator):
    total = n * (n - 1) // 2
    if p <= 0.0:
        return np.array([], dtype=np.int64), np.array([], dtype=np.int64)
    if p >= 1.0:
        idx = np.arange(total)
    else:
        chunks, pos = [], -1
        expected = int(total * p + 10 * math.sqrt(total * p) + 16)
        while pos < total:
            gaps = gen.geometric(p, size=expected)
            steps = pos + np.cumsum(gaps)
            chunks.append(steps)
            pos = int(steps[-1])
        idx = np.concatenate(chunks)
        idx = idx[idx < total]
    # invert the lexicographic pair index: row u starts at u*n - u*(u+1)/2
    starts = np.arange(n) * n - np.arange(n) * (np.arange(n) + 1) // 2
    us = np.searchsorted(starts, idx, side="right") - 1
    vs = idx - starts[us] + us + 1
    return us, vs


def sample_bipartite(a: ProbabilityAssignment, split, rng) -> SampledGraph:
    """Draw only the cross pairs of ``split = (X, Y)``.

    Same discipline as :func:`sample_graph`, restricted to pairs with one
    endpoint on each side: these are visited in lexicographic ``(u, v)``
    order, ``u < v``, and each consumes one double.
    """
    X, Y = _validate_split(a.n, split)
    gen = as_generator(rng)
    n = a.n
    left = np.zeros(n, dtype=bool)
    left[list(X)] = True
    us, vs = [], []
    for u in range(n - 1):
        cand = np.arange(u + 1, n)
        cand = cand[left[cand] != left[u]]
        if cand.size == 0:
            continue
        hit = gen.random(cand.size) < a.probs[u, cand]
        if hit.any():
            us.append(np.full(int(hit.sum()), u))
            vs.append(cand[hit])
    if us:
        return SampledGraph._from_arrays(n, np.concatenate(us), np.concatenate(vs), (X, Y))
    return SampledGraph(n, [[] for _ in range(n)], (X, Y))


def neighborhood_out(g: SampledGraph, S) -> set:
    """Vertices outside ``S`` adjacent to at least one vertex of ``S``."""
    S = set(S)
    out = set()
    for u in S:
        out.update(g.adj[u])
    return out - S


@dataclass
class ExpansionRow:
    s: int
    draws: int
    quantiles: dict
    mean: float
    interval: tuple          # [c1*n*p*s/2, 4*c2*n*p*s]
    expected_interval: tuple  # [3*c1*n*p*s/4, c2*n*p*s]
    in_interval_fraction: float
    in_regime: bool

    def to_json(self) -> dict:
        return {"s": self.s, "draws": self.draws, "quantiles": self.quantiles, "mean": self.mean,
                "interval": list(self.interval), "expected_interval": list(self.expected_interval),
                "in_interval_fraction": self.in_interval_fraction, "in_regime": self.in_regime}


def expansion_statistics(a: ProbabilityAssignment, g: SampledGraph, sizes, trials_per_size: int,
                         rng, c1: float = 1.0, c2: float = 1.0, p: Optional[float] = None) -> list:
    """Empirical ``N_out(S)`` for uniformly random sets ``S`` of each size.

    ``p`` defaults to the mean off-diagonal probability of ``a``. Sizes above
    ``1/(10*c2*p)`` are outside the small-set regime; they are still measured
    but flagged and a warning is issued.
    """
    from .bounds import expected_nout_interval

    if p is None:
        p = a.mean_probability()
    gen = as_generator(rng)
    n = g.n
    regime = 1.0 / (10.0 * c2 * p)
    rows = []
    for s in sizes:
        s = int(s)
        if not (1 <= s <= n):
            raise ValueError(f"set size {s} outside 1..{n}")
        in_regime = s <= regime
        if not in_regime:
            warnings.warn(f"s={s} exceeds the small-set regime 1/(10*c2*p)={regime:.3g}", stacklevel=2)
        lo, hi = c1 * n * p * s / 2.0, 4.0 * c2 * n * p * s
        vals = np.empty(trials_per_size)
        for t in range(trials_per_size):
            S = gen.choice(n, size=s, replace=False)
            vals[t] = len(neighborhood_out(g, S.tolist()))
        qs = np.quantile(vals, [0.05, 0.25, 0.5, 0.75, 0.95])
        exp_iv = expected_nout_interval(n, p, s, c1, c2).values
        rows.append(ExpansionRow(
            s=s, draws=trials_per_size,
            quantiles={k: float(q) for k, q in zip(("q05", "q25", "q50", "q75", "q95"), qs)},
            mean=float(vals.mean()),
            interval=(lo, hi),
            expected_interval=(exp_iv["lower"], exp_iv["upper"]),
            in_interval_fraction=float(np.mean((vals >= lo) & (vals <= hi))),
            in_regime=in_regime,
        ))
    return rows
