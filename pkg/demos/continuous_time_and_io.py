"""Continuous-time smoothing, eigenvalue constructions, and the file format.

The continuous-time kernel H_t = e^{-t(I-P)} relates to the lazy discrete
kernel by H_t(lazy chain at time 2t) = H_t(original at time t); the script
checks the identity, shows the binomial approximation converging to the
uniformized row, builds a chain with a prescribed hitting spectrum, and
round-trips a chain through the JSON format.
"""

import json
import tempfile

import numpy as np

import bdchains as bd

chain = bd.biased_walk(20, 0.6)
lazy = bd.lazy_version(chain)

for t in (0.5, 2.0):
    a = bd.heat_kernel_row(chain, 0, t).weights
    b = bd.heat_kernel_row(lazy, 0, 2 * t).weights
    print(f"t={t}: sup |H_t - lazy H_2t| = {np.max(np.abs(a - b)):.2e}")

# binomial approximation error halves (or better) as the step count doubles
t = 3.0
exact = bd.heat_kernel_row(chain, 0, t).weights
prev = None
print("\nbinomial approximation of H_t, error by step count:")
for k in range(3, 9):
    m = 2 * int(np.ceil(t)) * 2 ** k
    err = float(np.max(np.abs(bd.binomial_heat_approx(chain, 0, t, m) - exact)))
    note = "" if prev is None else f"  (ratio {err / prev:.3f})"
    print(f"  m={m:>5}: {err:.3e}{note}")
    prev = err

# realize a prescribed restriction spectrum as a pure-birth chain
thetas = [0.8, 0.5, 0.2]
built = bd.realize_eigenvalues(thetas)
back = bd.spectral_hitting(built, built.n).thetas
print(f"\nprescribed eigenvalues {thetas} -> recovered {np.sort(back)[::-1]}")

# a two-point spectrum family tuned to hit a target expectation and t_rel
report = bd.tightness_family(h_m=64, t_r=4, n=20)
print(f"tightness family: {report.k_repeated} eigenvalues at "
      f"{report.lam:.4f}, {len(report.thetas) - report.k_repeated} at "
      f"{report.lam_prime:.4f}; E_0 tau_top = {report.expected_hit_top:.2f}")

# JSON round trip with decimal-string probabilities
with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
    bd.dump_chain(chain, fh.name)
    path = fh.name
loaded = bd.load_chain(path)
print(f"\nround trip exact: {np.array_equal(loaded.p, chain.p)}")
print("serialized head:", json.dumps(bd.chain_to_dict(chain))[:80], "...")
