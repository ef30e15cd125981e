"""
Tracking iterated-logarithm fluctuations (a diagnostic, not a proof)
====================================================================

The martingale fluctuations of the lazy walk obey a law of the iterated
logarithm: (H_t - W a_t) / sqrt(2 W a_t log log (W a_t)) has limsup +1
and liminf -1.  Because log log grows absurdly slowly, no desk-scale
simulation can exhibit the limit -- at t = 1e6 with p = 1/2, W a_t is in
the hundreds, and log log of that is still below 2.

What we *can* check cheaply is that the tracker behaves sanely: the
running extrema are monotone, finite, and of order one, comfortably
inside (-3, 3) for typical trajectories.  That is all this output
claims.
"""

import lazywalk as lw
from lazywalk.walk import dyadic_checkpoints

prm = lw.WalkParams(p=0.5)
n = 10**6
cps = dyadic_checkpoints(n)

print("running extrema of the normalized deviation, dyadic checkpoints")
print("  seed   running max   running min")
for seed in (1, 2, 3, 4, 5):
    stat = lw.simulate_counting(prm, n, seed, checkpoints=cps)
    tr = lw.lil_tracker(stat)
    print(f"  {seed:4d}   {tr.running_max[-1]:11.4f}   "
          f"{tr.running_min[-1]:11.4f}")

# A closer look at one trajectory: the deviation wanders on the scale of
# the normalizer but the +-1 envelope is nowhere near saturated.
stat = lw.simulate_counting(prm, n, 1, checkpoints=cps)
tr = lw.lil_tracker(stat)
print("\ntrajectory detail (seed 1):")
print("  t          deviation   running max")
for t, d, hi in zip(tr.checkpoints[::4], tr.deviations[::4],
                    tr.running_max[::4]):
    print(f"  {t:<9d}  {d:+9.4f}   {hi:9.4f}")
print("\n(diagnostic only: the iterated-logarithm limit is not observable "
      "at this scale)")
