"""Closed-form bounds and parameter constraints.

Each function returns a :class:`BoundReport`. Probability-valued outputs are
clamped to ``[0, 1]``; whenever a clamp bites the report says so in
``clamped`` and ``notes`` instead of silently hiding a vacuous bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional


@dataclass
class BoundReport:
    values: dict
    regime_ok: bool = True
    notes: list = field(default_factory=list)
    clamped: list = field(default_factory=list)

    def __getitem__(self, key):
        return self.values[key]

    def to_json(self) -> dict:
        return {"values": dict(self.values), "regime_ok": self.regime_ok,
                "notes": list(self.notes), "clamped": list(self.clamped)}

    def rows(self, label: str) -> list:
        """CSV rows ``(parameter set, quantity, value, regime_ok)``."""
        return [(label, k, v, self.regime_ok) for k, v in self.values.items()]


def _clamp(report: BoundReport, key: str, x: float) -> None:
    if x < 0.0 or x > 1.0:
        report.clamped.append(key)
        report.notes.append(f"{key}={x:.6g} clamped to [0, 1]")
        x = min(1.0, max(0.0, x))
    report.values[key] = x


def chernoff(mu: float, eta: float) -> float:
    """``2 exp(-eta^2 mu / 4)``: two-sided relative-deviation tail for Bernoulli sums."""
    if not (0.0 < eta < 0.5):
        raise ValueError(f"eta must lie in (0, 1/2), got {eta}")
    if mu <= 0:
        raise ValueError(f"mu must be positive, got {mu}")
    return 2.0 * math.exp(-eta * eta * mu / 4.0)


@dataclass(frozen=True)
class Theorem1Params:
    C: float
    k: int
    c1: float
    c2: float
    alpha: float
    n: int

    def __post_init__(self):
        if self.C <= 0 or self.c1 <= 0 or self.c2 <= 0 or self.alpha <= 0 or self.n <= 0:
            raise ValueError("C, c1, c2, alpha and n must be positive")
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k}")


def theorem1_admissible(tp: Theorem1Params, theta: Optional[float] = None) -> BoundReport:
    """Admissibility of ``(C, alpha)`` for the Hamiltonicity result.

    Reports ``p = C n^{-k/(k+1)}``, the constraints ``C <= 1/(10 c2)`` and
    ``alpha <= min(7/8, (C c1/8)^{k+1})``, the pivot-density constant
    ``D = (C c1/8)^{k+1}`` and the pivot-regime quantity ``p (8 c2 n p)^k``.
    The headline bound ``1 - exp(-theta n p)`` is only reported when the
    caller supplies ``theta``; the result asserts only that some theta exists.
    """
    C, k, c1, c2, alpha, n = tp.C, tp.k, tp.c1, tp.c2, tp.alpha, tp.n
    p = C * n ** (-k / (k + 1))
    c_max = 1.0 / (10.0 * c2)
    D = (C * c1 / 8.0) ** (k + 1)
    alpha_max = min(7.0 / 8.0, D)
    c_ok = C <= c_max * (1 + 1e-12)
    a_ok = alpha <= alpha_max * (1 + 1e-12)
    rep = BoundReport({
        "p": p,
        "np": n * p,
        "C_max": c_max,
        "alpha_max": alpha_max,
        "D": D,
        "pivot_regime": p * (8.0 * c2 * n * p) ** k,
    }, regime_ok=c_ok and a_ok)
    if not c_ok:
        rep.notes.append(f"C={C} exceeds 1/(10*c2)={c_max:.6g}")
    if not a_ok:
        rep.notes.append(f"alpha={alpha} exceeds alpha_max={alpha_max:.6g}")
    if theta is not None:
        _clamp(rep, "ham_lower_bound", 1.0 - math.exp(-theta * n * p))
    return rep


def expected_nout_interval(n: int, p: float, s: int, c1: float, c2: float) -> BoundReport:
    """``[3 c1 n p s / 4, c2 n p s]``; valid for ``1 <= s <= 1/(10 c2 p)``."""
    rep = BoundReport({"lower": 3.0 * c1 * n * p * s / 4.0, "upper": c2 * n * p * s})
    if not (1 <= s <= 1.0 / (10.0 * c2 * p)):
        rep.regime_ok = False
        rep.notes.append(f"s={s} outside 1..1/(10*c2*p)={1.0 / (10.0 * c2 * p):.6g}")
    return rep


def pivot_interval(n: int, p: float, l: int, c1: float, c2: float) -> BoundReport:
    """``[(c1 n p / 8)^l, (8 c2 n p)^l]`` for the ``l``-th pivot generation.

    ``regime_ok`` requires ``p (8 c2 n p)^l <= 1/(10 c2)``, the condition under
    which the neighbourhood estimates apply up to generation ``l``.
    """
    if l < 1:
        raise ValueError(f"generation must be >= 1, got {l}")
    np_ = n * p
    rep = BoundReport({"lower": (c1 * np_ / 8.0) ** l, "upper": (8.0 * c2 * np_) ** l})
    reg = p * (8.0 * c2 * np_) ** l
    if reg > 1.0 / (10.0 * c2):
        rep.regime_ok = False
        rep.notes.append(f"p*(8*c2*n*p)^l={reg:.6g} exceeds 1/(10*c2)={1.0 / (10.0 * c2):.6g}")
    return rep


def _logaddexp(a: float, b: float) -> float:
    hi, lo = max(a, b), min(a, b)
    return hi + math.log1p(math.exp(lo - hi))


def theorem2_failure(n: int, p: float, d1: float, d2: float, D: Optional[float] = None) -> BoundReport:
    """Failure quantity ``Q = 4^n exp(-d1 n^2 p/16) + exp(-d2 p^2 n/4)`` in log space.

    Values: ``log_first``, ``log_second``, ``log_Q``, ``Q`` (clamped, it bounds
    a probability), ``per_lower_bound = max(0, 1 - n^2 Q)`` and, when ``D`` is
    supplied, ``headline = 1 - exp(-D (log n)^2)``.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if not (0.0 < p < 1.0):
        raise ValueError(f"p must lie in (0, 1), got {p}")
    log_first = n * math.log(4.0) - d1 * n * n * p / 16.0
    log_second = -d2 * p * p * n / 4.0
    log_q = _logaddexp(log_first, log_second)
    rep = BoundReport({"log_first": log_first, "log_second": log_second, "log_Q": log_q})
    _clamp(rep, "Q", math.exp(min(log_q, 700.0)))
    log_nq = 2.0 * math.log(n) + log_q
    # 1 - n^2 Q, computed as -expm1 to keep precision when n^2 Q is tiny
    _clamp(rep, "per_lower_bound", -math.expm1(log_nq) if log_nq < 700.0 else -math.inf)
    if p < math.log(n) / math.sqrt(n):
        rep.regime_ok = False
        rep.notes.append(f"p={p:.6g} below log(n)/sqrt(n)={math.log(n) / math.sqrt(n):.6g}")
    if D is not None:
        rep.values["headline"] = -math.expm1(-D * math.log(n) ** 2)
    return rep
