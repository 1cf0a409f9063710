"""
Assigning channels by a gain threshold
======================================

Each user sees an independent fading gain on every channel and may only use
channels whose gain beats a threshold. The threshold fixes the edge
probability, so this is a bipartite random graph in disguise. Success means
every user gets its own channel.
"""

import math

from irgraph import ChannelScenario, Exponential, RngStream, simulate_assignment, success_probability

n = 256
boundary = math.log(math.sqrt(n) / math.log(n))
print(f"boundary threshold {boundary:.3f} keeps each pair with probability {math.exp(-boundary):.4f}")

one = simulate_assignment(ChannelScenario(n, Exponential(1.0), boundary), RngStream(31))
print(f"one draw: {one.matched_count} of {n} users served, weakest used gain {one.min_matched_gain:.3f}")

for lam in (1.0, 3.0, 3.5, 4.0, 4.5):
    est = success_probability(ChannelScenario(n, Exponential(1.0), lam), trials=100, master_seed=32)
    print(f"lambda={lam}: success {est['estimate']:.2f} "
          f"[{est['wilson95'][0]:.2f}, {est['wilson95'][1]:.2f}]")
