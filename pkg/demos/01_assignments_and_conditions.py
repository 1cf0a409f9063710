"""
Probability assignments and the two regularity conditions
=========================================================

An assignment gives every vertex pair its own edge probability. Two
conditions measure how far an assignment strays from the homogeneous case:
goodness (row sums over large sets stay within c1*r*p and c2*r*p) and
niceness (single and paired row sums over disjoint sets stay large).
"""

import numpy as np

from irgraph import (BoundedPerturbation, GoodnessParams, Homogeneous, NicenessParams,
                     ProbabilityAssignment, TwoBlock, build_assignment, check_good, check_nice, fit_good_constants)

# A homogeneous assignment is good with c1 = c2 = 1 by construction.
flat = build_assignment(Homogeneous(0.3), 10)
print("homogeneous:", check_good(flat, GoodnessParams(0.5, 1.0, 1.0, 0.3)).verdict)

# Perturbing every entry by up to 40% moves the tightest constants away from 1.
noisy = build_assignment(BoundedPerturbation(p=0.3, epsilon=0.4, seed=1), 10)
c1, c2 = fit_good_constants(noisy, alpha=0.5, p=0.3)
print(f"perturbed: tightest c1 = {c1:.4f}, c2 = {c2:.4f}")

# Constants just inside the fit hold; nudging c1 up by one part in 1e9 fails.
print(check_good(noisy, GoodnessParams(0.5, c1, c2, 0.3)).verdict,
      check_good(noisy, GoodnessParams(0.5, c1 * (1 + 1e-9), c2, 0.3)).verdict)

# A two-block model with denser blocks.
blocks = build_assignment(TwoBlock(p_in=0.4, p_out=0.2), 12)
print("two-block fit against p=0.2:", fit_good_constants(blocks, 0.5, 0.2))

# Zeroing a row breaks niceness, and the report names a violating witness.
probs = np.full((8, 8), 0.5)
probs[3, :] = probs[:, 3] = 0.0
rep = check_nice(ProbabilityAssignment(probs), NicenessParams(beta=0.25, d1=1.0, d2=1.0, p=0.5))
print("niceness with a dead vertex:", rep.verdict, rep.witness)
