"""Birth-and-death chain representation, validation and basic structure.

A chain lives on the states {0, ..., n} and moves at most one step per
transition.  It is stored as three probability vectors (birth p, death q,
holding r) of length n+1, with q[0] = 0 and p[n] = 0 (a state i with
r[i] = 1 is absorbing).  Distributions are plain numpy arrays of length
n+1 summing to one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .config import structural_tol


class ChainValidationError(ValueError):
    """Raised when the (p, q, r) triple is not a valid chain."""


class ReducibleChainError(ValueError):
    """Raised when an operation requires an irreducible chain."""


@dataclass(frozen=True)
class ChainFlags:
    irreducible: bool
    lazy: bool
    delta_lazy: float
    monotone: bool
    absorbing_states: frozenset


@dataclass(frozen=True)
class ChainSpec:
    p: np.ndarray
    q: np.ndarray
    r: np.ndarray
    flags: ChainFlags

    @property
    def n(self) -> int:
        return len(self.p) - 1

    def kernel(self) -> np.ndarray:
        """Dense transition matrix P(i, j)."""
        m = self.n + 1
        P = np.zeros((m, m))
        idx = np.arange(m)
        P[idx, idx] = self.r
        P[idx[:-1], idx[:-1] + 1] = self.p[:-1]
        P[idx[1:], idx[1:] - 1] = self.q[1:]
        return P


def classify(p: np.ndarray, q: np.ndarray, r: np.ndarray) -> ChainFlags:
    """Compute structural flags straight from the defining inequalities."""
    tol = structural_tol()
    n = len(p) - 1
    irreducible = bool(np.all(p[:-1] > 0.0) and np.all(q[1:] > 0.0))
    lazy = bool(np.all(r >= 0.5 - tol))
    delta_lazy = float(max(np.min(r), 0.0))
    monotone = bool(np.all(p[:-1] + q[1:] <= 1.0 + tol)) if n > 0 else True
    absorbing = frozenset(int(i) for i in np.nonzero(r >= 1.0 - tol)[0])
    return ChainFlags(irreducible, lazy, delta_lazy, monotone, absorbing)


def new_chain(p, q, r) -> ChainSpec:
    """Validate a (p, q, r) triple and return the chain with its flags.

    Rejects dimension mismatches, entries outside [0, 1], row sums away
    from 1, and nonzero q[0] / p[n]; every diagnostic names the offending
    index.
    """
    tol = structural_tol()
    p = np.asarray(p, dtype=float).copy()
    q = np.asarray(q, dtype=float).copy()
    r = np.asarray(r, dtype=float).copy()
    if p.ndim != 1 or q.ndim != 1 or r.ndim != 1:
        raise ChainValidationError("p, q, r must be one-dimensional vectors")
    if not (len(p) == len(q) == len(r)):
        raise ChainValidationError(
            f"dimension mismatch: len(p)={len(p)}, len(q)={len(q)}, len(r)={len(r)}"
        )
    if len(p) == 0:
        raise ChainValidationError("empty chain")
    if not (np.all(np.isfinite(p)) and np.all(np.isfinite(q)) and np.all(np.isfinite(r))):
        raise ChainValidationError("non-finite entry in p, q or r")
    n = len(p) - 1
    for name, v in (("p", p), ("q", q), ("r", r)):
        bad = np.nonzero((v < -tol) | (v > 1.0 + tol))[0]
        if bad.size:
            raise ChainValidationError(
                f"{name}[{int(bad[0])}] = {v[int(bad[0])]} outside [0, 1]"
            )
    rows = p + q + r
    bad = np.nonzero(np.abs(rows - 1.0) > tol)[0]
    if bad.size:
        i = int(bad[0])
        raise ChainValidationError(f"row {i} sums to {rows[i]}")
    if abs(q[0]) > tol:
        raise ChainValidationError(f"q[0] = {q[0]} must be 0")
    if abs(p[n]) > tol:
        raise ChainValidationError(f"p[{n}] = {p[n]} must be 0")
    q[0] = 0.0
    p[n] = 0.0
    for v in (p, q, r):
        np.clip(v, 0.0, 1.0, out=v)
        v.flags.writeable = False
    return ChainSpec(p, q, r, classify(p, q, r))


def from_conductances(edge_weights, loop_weights, loop_convention: str = "once") -> ChainSpec:
    """Build the reversible chain of a weighted path with self loops.

    P(i, j) = w(i, j) / w(i), where w(i) sums the incident edge weights
    plus the loop weight.  The loop is counted once by default; pass
    loop_convention="twice" for the graph-degree convention where a self
    loop contributes twice to w(i).
    """
    edges = np.asarray(edge_weights, dtype=float)
    loops = np.asarray(loop_weights, dtype=float)
    if len(loops) != len(edges) + 1:
        raise ChainValidationError(
            f"need len(loops) == len(edges) + 1, got {len(loops)} and {len(edges)}"
        )
    if np.any(edges < 0) or np.any(loops < 0):
        raise ChainValidationError("conductances must be non-negative")
    if loop_convention not in ("once", "twice"):
        raise ChainValidationError(f"unknown loop convention {loop_convention!r}")
    mult = 1.0 if loop_convention == "once" else 2.0
    n = len(edges)
    w = mult * loops.copy()
    w[:-1] += edges
    w[1:] += edges
    zero = np.nonzero(w == 0.0)[0]
    if zero.size:
        raise ChainValidationError(f"state {int(zero[0])} has zero total weight")
    p = np.zeros(n + 1)
    q = np.zeros(n + 1)
    p[:-1] = edges / w[:-1]
    q[1:] = edges / w[1:]
    r = 1.0 - p - q
    return new_chain(p, q, r)


def lazy_version(chain: ChainSpec) -> ChainSpec:
    """The chain with kernel (P + I) / 2; stationary distribution unchanged."""
    return new_chain(chain.p / 2.0, chain.q / 2.0, (chain.r + 1.0) / 2.0)


def stationary(chain: ChainSpec) -> np.ndarray:
    """Stationary distribution via the detailed-balance product formula.

    The cumulative products pi(i+1) = pi(i) p_i / q_{i+1} are formed in log
    space so chains with strong drift stay representable up to n ~ 1e5.
    """
    if not chain.flags.irreducible:
        raise ReducibleChainError("stationary distribution requires an irreducible chain")
    n = chain.n
    logpi = np.zeros(n + 1)
    if n > 0:
        logpi[1:] = np.cumsum(np.log(chain.p[:-1]) - np.log(chain.q[1:]))
    return np.exp(logpi - logsumexp(logpi))


def quantile_state(chain: ChainSpec, eps: float, side: str = "left") -> int:
    """Stationary quantile states.

    left: smallest k whose cumulative mass pi(0..k) reaches eps.
    right: largest k whose tail mass pi(k..n) reaches eps.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    pi = stationary(chain)
    if side == "left":
        cum = np.cumsum(pi)
        return int(np.argmax(cum >= eps))
    if side == "right":
        tail = np.cumsum(pi[::-1])[::-1]
        return int(len(pi) - 1 - np.argmax(tail[::-1] >= eps))
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def quantile_symmetry_report(chain: ChainSpec, eps: float) -> dict:
    """Check the identity Q(eps) = Q~(1 - eps), reporting ties instead of
    perturbing eps when some cumulative sum equals eps exactly."""
    tol = structural_tol()
    pi = stationary(chain)
    cum = np.cumsum(pi)
    left = quantile_state(chain, eps, "left")
    right = quantile_state(chain, 1.0 - eps, "right")
    tie = bool(
        np.any(np.abs(cum - eps) <= tol) or np.any(np.abs(cum - (1.0 - eps)) <= tol)
    )
    return {
        "eps": eps,
        "left": left,
        "right_complement": right,
        "symmetric": left == right,
        "tie_detected": tie,
    }


def detailed_balance_residual(chain: ChainSpec) -> float:
    """max_i |pi(i) p_i - pi(i+1) q_{i+1}|; zero for every valid chain."""
    pi = stationary(chain)
    if chain.n == 0:
        return 0.0
    return float(np.max(np.abs(pi[:-1] * chain.p[:-1] - pi[1:] * chain.q[1:])))
