"""
Closed-form bounds
==================

The explicit inequalities come out as plain numbers. The admissible
constants for the Hamiltonicity result are tiny, so at desk-scale n the
guaranteed regime is far from where Hamiltonicity is already visible.
"""

import math

from irgraph import (Theorem1Params, chernoff, expected_nout_interval, pivot_interval,
                     theorem1_admissible, theorem2_failure)

print("chernoff(64, 1/4) =", chernoff(64, 0.25), "vs 2/e =", 2 / math.e)

rep = theorem1_admissible(Theorem1Params(C=0.1, k=1, c1=1.0, c2=1.0, alpha=1e-4, n=4096))
print("largest admissible C gives n*p =", rep["np"], "and alpha_max =", rep["alpha_max"])

print("E N_out band, s=2:", expected_nout_interval(1000, 0.01, 2, 0.5, 2.0).values)
print("pivot band, n*p=64, l=2:", pivot_interval(1000, 0.064, 2, 1.0, 1.0).values)

# The failure quantity is evaluated in log space; 4^n alone would overflow.
for n in (256, 4096, 10**6):
    p = math.log(n) / math.sqrt(n)
    t2 = theorem2_failure(n, p, d1=1.0, d2=1.0)
    print(f"n={n}: log Q = {t2['log_Q']:.2f}, 1 - n^2 Q = {t2['per_lower_bound']:.6f}, "
          f"clamped {t2.clamped}")
