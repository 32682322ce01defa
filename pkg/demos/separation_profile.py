"""Separation distance and its relationship to total variation.

For lazy birth-and-death chains the worst separation over all start and
target states is attained at the endpoints: sep(t) = 1 - P^t(0,n)/pi(n).
The script verifies this on a moderate chain, shows the reversibility
symmetry of the endpoint ratio, and checks the two-sided bridge between
separation and total variation distance.
"""

import numpy as np

import bdchains as bd

chain = bd.lazy_srw(24)
evo = bd.Evolution(chain)

print("t, worst separation, endpoint value, argmax pair")
for t in (1, 10, 50, 200, 800):
    rep = bd.worst_separation(chain, t, evo=evo)
    print(f"{t:>5}  {rep.worst:.6f}  {rep.endpoint_value:.6f}  {rep.argmax_pair}")

print("\nendpoint ratio symmetry P^t(0,n)/pi(n) = P^t(n,0)/pi(0):",
      bd.separation_symmetry_check(chain, 100, evo=evo))

t_sep = bd.separation_time(chain, 0.25)
t_mix = bd.mixing_time(chain, 0.25, evo=evo)
print(f"\nt_sep(1/4) = {t_sep}, t_mix(1/4) = {t_mix}")
print(f"bracket t_sep/8 <= t_mix <= t_sep: "
      f"{t_sep / 8 <= t_mix <= t_sep}")

# the TV profile sits below the separation profile pointwise, and
# separation at 8t is controlled by TV at t
times = [1, 5, 10, 25, 50]
prof = bd.distance_profile(chain, times, include_sep=True)
print("\n t   d_tv      d_sep     32*d_tv^4 (bounds d_sep at 8t)")
for t, dtv, dsep in zip(prof.times, prof.d_tv, prof.d_sep):
    sep8 = bd.worst_separation(chain, 8 * int(t), evo=evo).worst
    print(f"{t:>3}  {dtv:.6f}  {dsep:.6f}  d_sep(8t)={sep8:.6f} "
          f"<= {32 * dtv ** 4:.6f}")

# unimodality of the likelihood ratio columns, a lazy-chain structure fact
checks = bd.likelihood_ratio_checks(chain, 40)
print("\nlikelihood ratio structure at t=40:", checks)
