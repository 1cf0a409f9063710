"""Edge-probability assignments and the goodness / niceness checkers.

Vertices are labelled ``0 .. n-1`` throughout the library; the text file
formats are 1-indexed where they say so.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .rng import RngStream, derive_seed

SLACK = 1e-12
NICE_EXACT_MAX_N = 14


# ---------------------------------------------------------------------------
# Assignment type
# ---------------------------------------------------------------------------

class ProbabilityAssignment:
    """Symmetric matrix of edge probabilities ``p(u, v)``.

    The diagonal is stored as zero and never read by any checker or sampler.
    The matrix is made read-only on construction.
    """

    def __init__(self, probs, family: Optional["AssignmentFamily"] = None, check: bool = True):
        probs = np.array(probs, dtype=float)
        if probs.ndim != 2 or probs.shape[0] != probs.shape[1]:
            raise ValueError(f"probability matrix must be square, got shape {probs.shape}")
        n = probs.shape[0]
        if n < 2:
            raise ValueError(f"need at least 2 vertices, got n={n}")
        np.fill_diagonal(probs, 0.0)
        if check:
            if not np.all(np.isfinite(probs)):
                raise ValueError("probabilities must be finite")
            if probs.min() < 0.0 or probs.max() > 1.0:
                raise ValueError("probabilities must lie in [0, 1]")
            if not np.array_equal(probs, probs.T):
                raise ValueError("probability matrix must be symmetric")
        probs.setflags(write=False)
        self.probs = probs
        self.n = n
        self.family = family

    def __repr__(self) -> str:
        return f"ProbabilityAssignment(n={self.n}, family={self.family!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, ProbabilityAssignment) and np.array_equal(self.probs, other.probs)

    def offdiag_rows(self) -> np.ndarray:
        """``(n, n-1)`` array; row ``u`` holds ``p(u, v)`` for ``v != u`` in label order."""
        n = self.n
        mask = ~np.eye(n, dtype=bool)
        return self.probs[mask].reshape(n, n - 1)

    def constant_value(self) -> Optional[float]:
        """The common value if every off-diagonal entry is equal, else None."""
        if self.n == 2:
            return float(self.probs[0, 1])
        iu = np.triu_indices(self.n, 1)
        vals = self.probs[iu]
        first = vals[0]
        return float(first) if np.all(vals == first) else None

    def mean_probability(self) -> float:
        iu = np.triu_indices(self.n, 1)
        return float(self.probs[iu].mean())

    def permuted(self, perm: Sequence[int]) -> "ProbabilityAssignment":
        """Relabel vertices: new vertex ``i`` is old vertex ``perm[i]``."""
        perm = np.asarray(perm)
        return ProbabilityAssignment(self.probs[np.ix_(perm, perm)])

    # -- dense matrix text format ------------------------------------------

    def to_text(self) -> str:
        lines = [str(self.n)]
        for row in self.probs:
            lines.append(" ".join(repr(float(x)) for x in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ProbabilityAssignment":
        rows = [ln.split() for ln in text.strip().splitlines()]
        if not rows or len(rows[0]) != 1:
            raise ValueError("first line must hold the vertex count n")
        n = int(rows[0][0])
        body = rows[1:]
        if len(body) != n or any(len(r) != n for r in body):
            raise ValueError(f"expected {n} rows of {n} values")
        return cls(np.array(body, dtype=float))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path) -> "ProbabilityAssignment":
        with open(path) as fh:
            return cls.from_text(fh.read())


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Homogeneous:
    p: float

    family = "homogeneous"


@dataclass(frozen=True)
class TwoBlock:
    """``p_in`` inside each block, ``p_out`` across. Default blocks: first ceil(n/2), rest."""

    p_in: float
    p_out: float
    sizes: Optional[tuple] = None

    family = "two_block"


@dataclass(frozen=True)
class BoundedPerturbation:
    """``p(u,v) = p * (1 + delta_uv)`` with ``delta_uv ~ U[-epsilon, epsilon]``."""

    p: float
    epsilon: float
    seed: int = 0

    family = "bounded_perturbation"


@dataclass(frozen=True)
class WeightProduct:
    """Chung-Lu style ``p(u,v) = min(w_u * w_v, cap)``."""

    weights: tuple
    cap: float = 1.0

    family = "weight_product"


AssignmentFamily = Union[Homogeneous, TwoBlock, BoundedPerturbation, WeightProduct]

_FAMILIES = {cls.family: cls for cls in (Homogeneous, TwoBlock, BoundedPerturbation, WeightProduct)}


def family_to_json(family: AssignmentFamily) -> dict:
    d = {"family": family.family}
    for k, v in asdict(family).items():
        d[k] = list(v) if isinstance(v, tuple) else v
    return d


def family_from_json(obj) -> AssignmentFamily:
    if isinstance(obj, str):
        obj = json.loads(obj)
    obj = dict(obj)
    tag = obj.pop("family", None)
    if tag not in _FAMILIES:
        raise ValueError(f"unknown family tag {tag!r}; expected one of {sorted(_FAMILIES)}")
    cls = _FAMILIES[tag]
    for key in ("sizes", "weights"):
        if obj.get(key) is not None:
            obj[key] = tuple(obj[key])
    try:
        return cls(**obj)
    except TypeError as exc:
        raise ValueError(f"bad parameters for family {tag!r}: {exc}") from None


def _check_unit(name: str, x: float) -> None:
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"{name}={x} outside [0, 1]")


def validate_family(family: AssignmentFamily, n: int) -> None:
    """Raise ValueError unless ``family`` can be materialized on ``n`` vertices."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if isinstance(family, Homogeneous):
        _check_unit("p", family.p)
    elif isinstance(family, TwoBlock):
        _check_unit("p_in", family.p_in)
        _check_unit("p_out", family.p_out)
        sizes = family.sizes or ((n + 1) // 2, n // 2)
        if sum(sizes) != n or any(s < 0 for s in sizes):
            raise ValueError(f"block sizes {sizes} do not partition n={n}")
    elif isinstance(family, BoundedPerturbation):
        p, eps = family.p, family.epsilon
        if eps < 0:
            raise ValueError(f"epsilon must be non-negative, got {eps}")
        _check_unit("p", p)
        if p * (1 + eps) > 1.0 or p * (1 - eps) < 0.0:
            raise ValueError(f"p*(1 +/- epsilon) leaves [0, 1] for p={p}, epsilon={eps}")
    elif isinstance(family, WeightProduct):
        if len(family.weights) != n:
            raise ValueError(f"need {n} weights, got {len(family.weights)}")
        if any(w < 0 for w in family.weights):
            raise ValueError("weights must be non-negative")
        _check_unit("cap", family.cap)
    else:
        raise TypeError(f"not an assignment family: {family!r}")


def build_assignment(family: AssignmentFamily, n: int, seed: int = 0) -> ProbabilityAssignment:
    """Materialize ``family`` on ``n`` vertices. Deterministic in ``(family, n, seed)``."""
    validate_family(family, n)
    if isinstance(family, Homogeneous):
        probs = np.full((n, n), float(family.p))
    elif isinstance(family, TwoBlock):
        sizes = family.sizes or ((n + 1) // 2, n // 2)
        label = np.repeat(np.arange(len(sizes)), sizes)
        probs = np.where(label[:, None] == label[None, :], family.p_in, family.p_out).astype(float)
    elif isinstance(family, BoundedPerturbation):
        p, eps = family.p, family.epsilon
        gen = RngStream(seed, derive_seed(family.seed, n)).generator()
        iu = np.triu_indices(n, 1)
        delta = gen.uniform(-eps, eps, size=iu[0].size)
        probs = np.zeros((n, n))
        probs[iu] = np.clip(p * (1.0 + delta), 0.0, 1.0)
        probs = probs + probs.T
    else:
        w = np.asarray(family.weights, dtype=float)
        probs = np.minimum(np.outer(w, w), family.cap)
    return ProbabilityAssignment(probs, family=family)


# ---------------------------------------------------------------------------
# Condition parameters and reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GoodnessParams:
    alpha: float
    c1: float
    c2: float
    p: float

    def __post_init__(self):
        if not (0 < self.alpha < 1):
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.c1 <= 0 or self.c2 <= 0:
            raise ValueError("c1 and c2 must be positive")
        if self.c1 > self.c2:
            raise ValueError(f"need c1 <= c2, got c1={self.c1}, c2={self.c2}")
        if not (0 < self.p < 1):
            raise ValueError(f"p must lie in (0, 1), got {self.p}")


@dataclass(frozen=True)
class NicenessParams:
    beta: float
    d1: float
    d2: float
    p: float

    def __post_init__(self):
        if not (0 < self.beta < 1):
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")
        if self.d1 <= 0 or self.d2 <= 0:
            raise ValueError("d1 and d2 must be positive")
        if not (0 < self.p < 1):
            raise ValueError(f"p must lie in (0, 1), got {self.p}")


HOLDS, FAILS, UNKNOWN = "Holds", "Fails", "Unknown"


@dataclass
class ConditionReport:
    verdict: str
    witness: Optional[dict] = None
    margin: float = math.inf
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "witness": self.witness,
                "margin": self.margin, "notes": list(self.notes)}


def _ceil(x: float) -> int:
    # guard against alpha*n landing a hair above an integer
    return int(math.ceil(x - 1e-12))


# ---------------------------------------------------------------------------
# Goodness
# ---------------------------------------------------------------------------

def _good_extremes(a: ProbabilityAssignment, r0: int):
    """Per-vertex min/max sums over sets of size r, for r = r0 .. n-1.

    Returns (order, lows, highs, rs) where order[u] sorts row u ascending
    (indices into the off-diagonal row) and lows/highs have shape (n, R).
    """
    n = a.n
    rows = a.offdiag_rows()
    order = np.argsort(rows, axis=1, kind="stable")
    srt = np.take_along_axis(rows, order, axis=1)
    prefix = np.concatenate([np.zeros((n, 1)), np.cumsum(srt, axis=1)], axis=1)
    total = prefix[:, -1:]
    rs = np.arange(r0, n)
    lows = prefix[:, rs]
    highs = total - prefix[:, n - 1 - rs]
    return order, lows, highs, rs


def _offdiag_labels(u: int, idx) -> list:
    # map positions in the off-diagonal row of u back to vertex labels
    return [int(i) + (1 if i >= u else 0) for i in idx]


def check_good(a: ProbabilityAssignment, params: GoodnessParams) -> ConditionReport:
    """Exact check of the two-sided goodness condition.

    For every vertex ``u`` and every size ``r`` from ``ceil(alpha*n)`` to
    ``n-1``, the extreme sums over ``S`` in ``V minus {u}`` are attained by
    the ``r`` smallest and ``r`` largest entries of row ``u``, so sorted
    prefix sums settle the condition without enumeration.
    """
    n = a.n
    r0 = _ceil(params.alpha * n)
    if r0 < 1:
        raise ValueError("ceil(alpha*n) must be at least 1")
    if r0 > n - 1:
        return ConditionReport(HOLDS, None, math.inf, [f"no admissible set size (ceil(alpha*n)={r0} > n-1)"])
    order, lows, highs, rs = _good_extremes(a, r0)
    lower_req = params.c1 * rs * params.p
    upper_req = params.c2 * rs * params.p

    with np.errstate(divide="ignore", invalid="ignore"):
        lo_ratio = lows / lower_req
        hi_ratio = np.where(highs > 0, upper_req / highs, np.inf)
    margin = float(min(lo_ratio.min(), hi_ratio.min()))

    lo_bad = lows < lower_req - SLACK
    hi_bad = highs > upper_req + SLACK
    if lo_bad.any() or hi_bad.any():
        # report the worst violation
        lo_score = np.where(lo_bad, lo_ratio, np.inf)
        hi_score = np.where(hi_bad, hi_ratio, np.inf)
        if lo_score.min() <= hi_score.min():
            u, ri = np.unravel_index(np.argmin(lo_score), lo_score.shape)
            r = int(rs[ri])
            S = _offdiag_labels(int(u), order[u, :r])
            bound, side, total = float(lower_req[ri]), "lower", float(lows[u, ri])
        else:
            u, ri = np.unravel_index(np.argmin(hi_score), hi_score.shape)
            r = int(rs[ri])
            S = _offdiag_labels(int(u), order[u, n - 1 - r:])
            bound, side, total = float(upper_req[ri]), "upper", float(highs[u, ri])
        witness = {"vertex": int(u), "r": r, "set": sorted(S), "side": side, "sum": total, "bound": bound}
        return ConditionReport(FAILS, witness, margin)
    return ConditionReport(HOLDS, None, margin)


def good_witness_violates(a: ProbabilityAssignment, params: GoodnessParams, witness: dict) -> bool:
    """Re-evaluate a check_good witness from scratch."""
    u, S = witness["vertex"], witness["set"]
    r = len(S)
    if u in S or r < _ceil(params.alpha * a.n):
        return False
    s = float(sum(a.probs[u, v] for v in S))
    if witness["side"] == "lower":
        return s < params.c1 * r * params.p - SLACK
    return s > params.c2 * r * params.p + SLACK


def fit_good_constants(a: ProbabilityAssignment, alpha: float, p: float) -> tuple:
    """Tightest ``(c1, c2)`` for which the assignment is ``(alpha, c1, c2, p)``-good."""
    if p <= 0:
        raise ValueError("reference p must be positive")
    n = a.n
    r0 = _ceil(alpha * n)
    if r0 < 1 or r0 > n - 1:
        raise ValueError(f"no admissible set size for alpha={alpha}, n={n}")
    _, lows, highs, rs = _good_extremes(a, r0)
    denom = rs * p
    return float((lows / denom).min()), float((highs / denom).max())


# ---------------------------------------------------------------------------
# Niceness
# ---------------------------------------------------------------------------

def _nice_sizes(n: int, beta: float) -> np.ndarray:
    r0 = _ceil(beta * n)
    rmax = (n - 2) // 2
    if r0 < 1:
        raise ValueError("ceil(beta*n) must be at least 1")
    if r0 > rmax:
        raise ValueError(f"two disjoint sets of size {r0} avoiding u, v do not fit in n={n}")
    return np.arange(r0, rmax + 1)


def _min_sums_excluding(probs, srt_prefix, rank, u: int, rs: np.ndarray) -> np.ndarray:
    """``A[v, r]`` = smallest sum of ``r`` entries of row ``u`` over ``V minus {u, v}``.

    ``srt_prefix[u]`` is the prefix-sum of row u's off-diagonal entries in
    ascending order and ``rank[u, v]`` the 0-based rank of v in that order.
    The r smallest avoiding v are the r smallest overall unless v is among
    them, in which case the (r+1)-th replaces v.
    """
    pre = srt_prefix[u]
    inside = rank[u][:, None] < rs[None, :]
    return np.where(inside, pre[rs + 1][None, :] - probs[u][:, None], pre[rs][None, :])


def _min_sum_avoiding(row: np.ndarray, avoid: set, r: int, n: int) -> tuple:
    idx = [w for w in np.argsort(row, kind="stable") if w not in avoid][:r]
    return float(row[idx].sum()), [int(w) for w in idx]


def _nice_exact_pair(probs, u: int, v: int, r: int) -> tuple:
    """Exact min over disjoint (S1, S2) of sum_S1 p(u,.) * sum_S2 p(.,v).

    For fixed S1 the first factor is a non-negative constant, so the best S2
    is the r cheapest entries of row v outside S1 (and outside {u, v}).
    """
    n = probs.shape[0]
    others = [w for w in range(n) if w != u and w != v]
    row_u, row_v = probs[u], probs[v]
    best = (math.inf, None, None)
    order_v = [w for w in np.argsort(row_v, kind="stable") if w != u and w != v]
    for S1 in itertools.combinations(others, r):
        s1 = float(row_u[list(S1)].sum())
        chosen = set(S1)
        S2 = [w for w in order_v if w not in chosen][:r]
        val = s1 * float(row_v[S2].sum())
        if val < best[0]:
            best = (val, list(S1), [int(w) for w in S2])
    return best


def check_nice(a: ProbabilityAssignment, params: NicenessParams) -> ConditionReport:
    """Check the one-sided niceness condition.

    The single-sum condition is exact via sorted prefix sums per ordered
    pair ``(u, v)``. The double sum factorizes into a product of two single
    sums; dropping the disjointness of ``S1`` and ``S2`` can only lower the
    minimum, so the relaxed product is a sound certificate for Holds. Triples
    the relaxation cannot certify get a greedy disjoint witness search, then
    exhaustive search when ``n <= 14``; otherwise the verdict is Unknown.
    """
    n = a.n
    probs = a.probs
    rs = _nice_sizes(n, params.beta)
    p, d1, d2 = params.p, params.d1, params.d2
    req1 = d1 * rs * p
    req2 = d2 * rs * p * p

    rows = a.offdiag_rows()
    order = np.argsort(rows, axis=1, kind="stable")
    srt = np.take_along_axis(rows, order, axis=1)
    prefix = np.concatenate([np.zeros((n, 1)), np.cumsum(srt, axis=1)], axis=1)
    # rank over full labels; the diagonal gets rank n (never inside a prefix)
    rank = np.full((n, n), n, dtype=np.int64)
    for u in range(n):
        labels = np.array(_offdiag_labels(u, order[u]))
        rank[u, labels] = np.arange(n - 1)

    margin = math.inf          # over everything certified
    relaxed_margin = math.inf  # includes triples the relaxation could not certify
    worst_fail = None
    suspects = []
    for u in range(n):
        A_u = _min_sums_excluding(probs, prefix, rank, u, rs)  # A_u[v, r]: row u avoiding v
        inside = rank[:, u][:, None] < rs[None, :]
        # A_T[v, r]: row v avoiding u
        A_T = np.where(inside, prefix[:, rs + 1] - probs[:, u][:, None], prefix[:, rs])
        A_u[u] = np.inf
        A_T[u] = np.inf

        ratio1 = A_u / req1
        margin = min(margin, float(ratio1.min()))
        bad1 = A_u < req1 - SLACK
        if bad1.any():
            # keep the most violated single-sum witness over all u
            v, ri = np.unravel_index(np.argmin(np.where(bad1, ratio1, np.inf)), bad1.shape)
            if worst_fail is None or ratio1[v, ri] < worst_fail[0]:
                r = int(rs[ri])
                val, S1 = _min_sum_avoiding(probs[u], {u, int(v)}, r, n)
                worst_fail = (float(ratio1[v, ri]), {
                    "condition": "single", "u": u, "v": int(v), "r": r, "S1": sorted(S1),
                    "sum": val, "bound": float(req1[ri])})

        relaxed = A_u * A_T
        ratio2 = relaxed / req2
        bad2 = relaxed < req2 - SLACK
        margin = min(margin, float(np.where(bad2, np.inf, ratio2).min()))
        relaxed_margin = min(relaxed_margin, float(ratio2.min()))
        for v, ri in zip(*np.nonzero(bad2)):
            suspects.append((u, int(v), int(ri)))

    if worst_fail is not None:
        return ConditionReport(FAILS, worst_fail[1], min(margin, relaxed_margin))
    if not suspects:
        return ConditionReport(HOLDS, None, margin)

    # Relaxation could not certify some triples: look for disjoint witnesses.
    unresolved = []
    for u, v, ri in suspects:
        r = int(rs[ri])
        bound = float(req2[ri])
        best = None
        for first, second, flip in ((u, v, False), (v, u, True)):
            # greedy: cheapest set for one factor, then cheapest disjoint set for the other
            s_a, A = _min_sum_avoiding(probs[first], {u, v}, r, n)
            s_b, B = _min_sum_avoiding(probs[second], {u, v, *A}, r, n)
            S1, S2 = (B, A) if flip else (A, B)
            val = s_a * s_b
            if best is None or val < best[0]:
                best = (val, S1, S2)
        if best[0] < bound - SLACK:
            w = {"condition": "double", "u": u, "v": v, "r": r, "S1": sorted(best[1]),
                 "S2": sorted(best[2]), "sum": best[0], "bound": bound}
            return ConditionReport(FAILS, w, min(margin, relaxed_margin, best[0] / bound))
        unresolved.append((u, v, r, bound))

    if n > NICE_EXACT_MAX_N:
        return ConditionReport(UNKNOWN, None, relaxed_margin,
                               [f"{len(unresolved)} (u, v, r) triples not certified by relaxation; "
                                f"exhaustive search disabled for n > {NICE_EXACT_MAX_N}"])

    for u, v, r, bound in unresolved:
        val, S1, S2 = _nice_exact_pair(probs, u, v, r)
        margin = min(margin, val / bound)
        if val < bound - SLACK:
            w = {"condition": "double", "u": u, "v": v, "r": r, "S1": sorted(S1),
                 "S2": sorted(S2), "sum": val, "bound": bound}
            return ConditionReport(FAILS, w, margin)
    return ConditionReport(HOLDS, None, margin, ["certified by exhaustive search"])


def nice_witness_violates(a: ProbabilityAssignment, params: NicenessParams, witness: dict) -> bool:
    """Re-evaluate a check_nice witness from scratch."""
    n, probs = a.n, a.probs
    u, v, r = witness["u"], witness["v"], witness["r"]
    S1 = set(witness["S1"])
    if u == v or len(S1) != r or u in S1 or v in S1 or r < _ceil(params.beta * n):
        return False
    s1 = sum(probs[u, w] for w in S1)
    if witness["condition"] == "single":
        return s1 < params.d1 * r * params.p - SLACK
    S2 = set(witness["S2"])
    if len(S2) != r or S1 & S2 or u in S2 or v in S2:
        return False
    s2 = sum(probs[w, v] for w in S2)
    return s1 * s2 < params.d2 * r * params.p ** 2 - SLACK
