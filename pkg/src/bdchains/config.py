"""Global numerical settings.

The structural tolerance governs every validation and classification
comparison in the package (row sums, detailed balance, laziness cuts,
unimodality plateaus).  It can be overridden through the BDCHAINS_TOL
environment variable without touching call sites.
"""

import os

DEFAULT_TOL = 1e-12

# Chains larger than this are rejected by the file readers unless the
# caller explicitly overrides the cap.
MAX_STATES = 10 ** 6 + 1


def structural_tol() -> float:
    return float(os.environ.get("BDCHAINS_TOL", DEFAULT_TOL))
