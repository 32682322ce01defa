"""Cutoff diagnostics across a family of growing chains.

A family shows cutoff when the mixing-time ratio t_mix(eps) / t_mix(1-eps)
tends to 1 for every eps, which happens exactly when the product
gap * t_mix(1/4) diverges.  At finite sizes we can only look at trends,
so this script scans two contrasting families:

  * the drifted walk (biased toward the right endpoint), where the product
    grows linearly and the ratios shrink toward 1, and
  * the lazy simple random walk, where the product stays bounded and the
    ratios stay away from 1.
"""

import numpy as np

import bdchains as bd

SIZES = [32, 64, 128, 256]
EPS = 0.1


def describe(name, generator):
    print(f"\n{name}")
    print(f"{'n':>5} {'gap*tmix':>10} {'ratio(0.1)':>11} {'norm window':>12}")
    report = bd.family_scan(generator, SIZES, [EPS])
    for row in report.rows:
        print(f"{row.n:>5} {row.product:>10.3f} {row.ratio[EPS]:>11.4f} "
              f"{row.normalized_window[EPS]:>12.4f}")
    for n, msg in report.failures.items():
        print(f"{n:>5} failed: {msg}")
    slope = bd.trend_slope(np.log([r.n for r in report.rows]),
                           [r.ratio[EPS] for r in report.rows])
    print(f"least-squares slope of ratio against log n: {slope:+.4f}")
    return report


biased = describe("drifted walk, p = 2/3", lambda n: bd.biased_walk(n, 2 / 3))
srw = describe("lazy simple random walk", bd.lazy_srw)

print("\nthe drifted ratios fall while the driftless ones do not:")
print("  biased ratios:", [round(r.ratio[EPS], 3) for r in biased.rows])
print("  srw ratios:   ", [round(r.ratio[EPS], 3) for r in srw.rows])

# the window inequality bounds how wide the mixing window can be in
# units of sqrt(t_rel * t_mix(1/4)), with an explicit constant
chain = bd.biased_walk(128, 2 / 3)
verdict = bd.window_bound_check(chain, EPS)
print(f"\nwindow bound at n=128, eps={EPS}: "
      f"lhs={verdict.lhs:.0f} <= rhs={verdict.rhs:.1f} "
      f"(c_eps={verdict.c_eps_used:.0f}) -> holds={verdict.holds}")

# per-chain inequality suite at a stricter level
suite = bd.lemma_suite(chain, 0.05)
print("\ninequality suite at eps=0.05:")
for check in suite.checks:
    status = "n/a" if not check.applicable else ("ok" if check.holds else "VIOLATED")
    print(f"  {check.name:<28} {status}")
