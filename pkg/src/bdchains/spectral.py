"""Spectrum of the chain kernel via its symmetric tridiagonal form.

The kernel of a birth-and-death chain is tridiagonal, and its spectrum
equals that of the symmetric tridiagonal matrix with the same diagonal
and off-diagonal entries sqrt(p_i * q_{i+1}); this holds for any sign
pattern because a tridiagonal spectrum depends on the off-diagonals only
through the products p_i * q_{i+1}.  Eigenvalues are computed by LAPACK's
Sturm-sequence bisection (stebz), which isolates each eigenvalue to
near machine accuracy; no eigenvectors are formed anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .chain import ChainSpec
from .config import structural_tol


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray  # sorted descending, all n+1 of them
    gap: float
    t_rel: float
    lambda2: float
    irreducible: bool
    ergodic: bool


def symmetrized_tridiagonal(chain: ChainSpec):
    """(diagonal, offdiagonal) of the pi-symmetrized kernel."""
    prod = chain.p[:-1] * chain.q[1:]
    if np.any(prod < 0):
        raise AssertionError("negative product under the square root")
    return chain.r.copy(), np.sqrt(prod)


def _tridiag_eigenvalues(d: np.ndarray, e: np.ndarray) -> np.ndarray:
    if len(d) == 1:
        return d.copy()
    return eigvalsh_tridiagonal(d, e, lapack_driver="stebz")


def eigenvalues(chain: ChainSpec) -> SpectrumReport:
    """All n+1 eigenvalues, spectral gap and relaxation time.

    For an irreducible chain the trivial eigenvalue is the maximal one and
    is removed by position (never by comparing against 1.0).  For a
    reducible chain the gap is reported over the full spectrum and the
    report carries irreducible=False as the warning.
    """
    d, e = symmetrized_tridiagonal(chain)
    evs = np.sort(_tridiag_eigenvalues(d, e))[::-1]
    irreducible = chain.flags.irreducible
    if len(evs) > 1:
        lam = float(np.max(np.abs(evs[1:])))
        lambda2 = float(evs[1])
    else:
        lam = 0.0
        lambda2 = float("nan")
    gap = max(1.0 - lam, 0.0)
    t_rel = 1.0 / gap if gap > 0 else float("inf")
    ergodic = irreducible and gap > structural_tol()
    return SpectrumReport(evs, gap, t_rel, lambda2, irreducible, ergodic)


def absorbing_submatrix_spectrum(chain: ChainSpec, ell: int) -> SpectrumReport:
    """Spectrum of the principal submatrix on rows/columns {0, .., ell-1}.

    This is the substochastic kernel obtained by making ell absorbing and
    restricting to the states below it; its gap is 1 minus its largest
    eigenvalue.
    """
    if not 0 < ell <= chain.n:
        raise ValueError(f"ell must lie in (0, n], got {ell}")
    d = chain.r[:ell]
    e = np.sqrt(chain.p[: ell - 1] * chain.q[1:ell])
    evs = np.sort(_tridiag_eigenvalues(np.asarray(d, dtype=float), e))[::-1]
    top = float(evs[0])
    gap = 1.0 - top
    t_rel = 1.0 / gap if gap > 0 else float("inf")
    return SpectrumReport(evs, gap, t_rel, float(evs[1]) if len(evs) > 1 else float("nan"),
                          False, False)
