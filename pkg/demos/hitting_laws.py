"""Two independent routes to the law of an upward hitting time.

For a birth-and-death chain the time to hit state d from 0 (with d made
absorbing) is distributed as a sum of d independent geometric variables
whose failure parameters are the eigenvalues of the kernel restricted to
{0..d-1}.  The script computes the law both ways:

  * dynamic programming on the substochastic kernel, and
  * geometric convolution of the restriction spectrum,

then checks they agree and that the closed-form moments match.
"""

import numpy as np

import bdchains as bd

chain = bd.biased_walk(16, 0.6)
target = chain.n

dp = bd.hitting_pmf(chain, 0, target)
sp = bd.spectral_hitting(chain, target)

m = min(len(dp.pmf), len(sp.pmf))
print(f"dp pmf length {len(dp.pmf)}, spectral pmf length {len(sp.pmf)}")
print(f"sup difference on the overlap: {np.max(np.abs(dp.pmf[:m] - sp.pmf[:m])):.2e}")
print(f"expectation: dp {dp.expectation:.6f}  spectral {sp.expectation:.6f}")
print(f"variance:    dp {dp.variance:.6f}  spectral {sp.variance:.6f}")

# moments in closed form from the restriction eigenvalues
thetas = sp.thetas
print(f"\nrestriction eigenvalues (top 4): {np.sort(thetas)[::-1][:4].round(6)}")
print(f"sum 1/(1-theta)       = {np.sum(1 / (1 - thetas)):.6f}")
print(f"sum theta/(1-theta)^2 = {np.sum(thetas / (1 - thetas) ** 2):.6f}")

# the generating function evaluated at a point doubles as a sanity check
u = 0.5
series = float(np.sum(sp.pmf * u ** np.arange(len(sp.pmf))))
print(f"\npgf at u={u}: product form {bd.hitting_pgf(thetas, u):.12f}, "
      f"series {series:.12f}")

# a pure-birth chain with both parameters 1/2 has the negative binomial law
pure = bd.realize_eigenvalues([0.5, 0.5])
law = bd.spectral_hitting(pure, 2)
ts = np.arange(2, 10)
print("\npure-birth check, P(tau = t) vs (t-1)/2^t:")
for t in ts:
    print(f"  t={t}: {law.pmf[t]:.10f} vs {(t - 1) / 2.0 ** t:.10f}")

# variance bound relative to the restricted spectral gap
rep = bd.hitting_moment_bounds(chain, 0.1)
print(f"\nquantile state Q(0.9) = {rep.quantile}")
print(f"Var = {rep.variance:.3f} <= E/gap_restricted = "
      f"{rep.expectation / rep.gap_restricted:.3f}: "
      f"{rep.var_le_exp_over_restricted_gap}")
