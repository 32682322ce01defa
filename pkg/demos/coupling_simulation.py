"""Monte Carlo couplings against the exact distance profile.

Two couplings of a lazy chain with a stationary partner are simulated:

  * the fair-coin coupling, where each step one copy (chosen by a coin)
    takes a step of the doubled kernel 2P - I while the other holds, and
  * the delta-thinned coupling, which factors P = (1-delta) P' + delta I
    and drives both copies with anti-correlated move indicators.

Both preserve the order of the copies, so the probability they have not
met by time t upper-bounds the exact worst-case TV distance d(t).
"""

import numpy as np

import bdchains as bd

chain = bd.lazy_srw(12)
evo = bd.Evolution(chain)
config = bd.SimConfig(trials=20000, seed=42)

fair = bd.no_crossing_coupling(chain, 0, config)
print(f"fair-coin coupling: censored={fair.censored}, "
      f"order violations={fair.order_violations}")

print("\n t   exact d(t)   P(not coalesced)   3 sigma")
for t in (5, 20, 60, 150, 400):
    d = evo.worst_tv(t)[0]
    p, se = fair.non_coalescence(t)
    flag = "ok" if d <= p + 3 * se else "VIOLATED"
    print(f"{t:>4}  {d:.5f}      {p:.5f}            {3 * se:.5f}  {flag}")

# the delta coupling at delta = 1/2 reproduces the fair-coin construction
# draw for draw; smaller delta moves both copies more often
half = bd.delta_lazy_coupling(chain, 0, 0.5, config)
same = np.array_equal(half.coupling_times, fair.coupling_times)
print(f"\ndelta=1/2 coupling times identical to fair-coin: {same}")

quarter = bd.delta_lazy_coupling(chain, 0, 0.25, bd.SimConfig(20000, 7))
print(f"delta=0.25: mean steps per thinned move = "
      f"{quarter.mean_steps_per_move:.4f} (expect {1 / 0.75:.4f})")

# empirical hitting times agree with the exact law within Monte Carlo error
law = bd.hitting_pmf(chain, 0, chain.n)
sample = bd.empirical_hitting(chain, 0, chain.n, bd.SimConfig(20000, 11))
z = abs(sample.mean - law.expectation) / sample.mean_stderr
print(f"\nhitting time 0 -> {chain.n}: exact E = {law.expectation:.3f}, "
      f"empirical {sample.mean:.3f} +- {sample.mean_stderr:.3f} (z = {z:.2f})")

# empirical state distribution converges to the exact row of P^t
t = 50
emp = bd.empirical_distribution(chain, 0, t, 20000, bd.make_rng(3))
exact = bd.distribution_at(chain, 0, t)
print(f"TV(empirical, exact) at t={t}: {0.5 * np.abs(emp - exact).sum():.5f}")
