"""
The exact law of the lazy reinforced walk
=========================================

The walk either steps forward or rests; the chance of stepping forward
grows with the number of forward steps already taken.  In the laziest
regime (q = 0, s = 1) the forward count H_n after n steps has a law we
can compute exactly in two completely different ways:

  * a dynamic program over the count state, and
  * a polynomial recursion on the probability generating function.

This script computes both, shows that they coincide, and compares the
moments of the resulting law with the closed formulas built from the
gamma-ratio sequence a_n^(k).
"""

import numpy as np

import lazywalk as lw

p = 0.5
n = 50

# Two engines, one law.
pmf = lw.exact_pmf(n, lw.WalkParams(p=p))
alt = lw.pgf_pmf(n, p)
print(f"exact law of H_{n} at p = {p}")
print(f"  max |dp - pgf| over the support: {np.abs(pmf.mass - alt.mass).max():.3e}")
print(f"  mean = {pmf.mean():.6f}, variance = {pmf.variance():.6f}")

# The mean has a closed form rho n + (s - rho) Gamma(n + alpha) /
# (Gamma(1 + alpha) Gamma(n)); in the laziest regime it reduces to the
# gamma ratio a_n itself.
a_n = lw.gamma_ratio(n, p)
print(f"  closed-form mean a_n = {a_n:.6f}")

# Factorial moments are short alternating combinations of a_n^(k); raw
# moments follow through Stirling numbers.  Compare the first four
# orders against direct summation over the pmf.
tab = lw.moments_from_pmf(pmf, 4)
print("\n  k   closed factorial       pmf factorial          raw")
for k in range(1, 5):
    closed = lw.factorial_moment(n, k, p)
    print(f"  {k}   {closed:18.10f}   {tab.factorial[k - 1]:18.10f}"
          f"   {lw.raw_moment(n, k, p):14.6f}")

# The same quantities survive to n in the millions: the gamma-ratio
# recurrence never forms a large gamma value, so nothing overflows.
big = 10**6
print(f"\n  a_n at n = {big}: {lw.gamma_ratio(big, p):.6e}"
      f"   (log-gamma cross-check {lw.gamma_ratio_loggamma(big, p):.6e})")
