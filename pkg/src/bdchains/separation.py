"""Separation distance, endpoint extremality, and the monotone/unimodal
structure of kernel columns and likelihood ratios."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec, ReducibleChainError, stationary
from .config import structural_tol
from .evolve import Evolution, HorizonExceededError, default_horizon, step_distribution


@dataclass(frozen=True)
class SeparationReport:
    t: int
    per_start: np.ndarray       # max_y (1 - P^t(x,y)/pi(y)) for each start x
    worst: float
    argmax_pair: tuple          # (start, target) attaining the worst value
    endpoint_value: float       # 1 - P^t(0,n)/pi(n)
    clipped: int                # entries below -tol before clipping to [0,1]


def _ratio_matrix(chain: ChainSpec, t: int, evo: Evolution = None):
    evo = evo or Evolution(chain)
    return evo.power(t) / evo.pi[None, :], evo


def separation_at(chain: ChainSpec, x: int, t: int, evo: Evolution = None) -> float:
    """max_y (1 - P^t(x, y) / pi(y)), clipped to [0, 1]."""
    if not chain.flags.irreducible:
        raise ReducibleChainError("separation requires an irreducible chain")
    R, _ = _ratio_matrix(chain, t, evo)
    val = 1.0 - float(R[x].min())
    return min(max(val, 0.0), 1.0)


def worst_separation(chain: ChainSpec, t: int, evo: Evolution = None) -> SeparationReport:
    """Full (x, y) scan; the endpoint value 1 - P^t(0,n)/pi(n) is recorded
    alongside for the lazy-chain extremality checks."""
    if not chain.flags.irreducible:
        raise ReducibleChainError("separation requires an irreducible chain")
    tol = structural_tol()
    R, evo = _ratio_matrix(chain, t, evo)
    sep = 1.0 - R
    per_start = sep.max(axis=1)
    x = int(np.argmax(per_start))
    y = int(np.argmax(sep[x]))
    worst = float(sep[x, y])
    clipped = int(np.sum(sep < -tol))
    worst = min(max(worst, 0.0), 1.0)
    endpoint = float(min(max(sep[0, chain.n], 0.0), 1.0))
    return SeparationReport(t, np.clip(per_start, 0.0, 1.0), worst, (x, y),
                            endpoint, clipped)


def separation_symmetry_check(chain: ChainSpec, t: int, evo: Evolution = None) -> bool:
    """Reversibility identity P^t(0,n)/pi(n) = P^t(n,0)/pi(0)."""
    R, _ = _ratio_matrix(chain, t, evo)
    return bool(abs(R[0, chain.n] - R[chain.n, 0]) <= 1e-12)


def separation_time(chain: ChainSpec, eps: float, horizon: int = None,
                    audit: bool = False) -> int:
    """Least t with worst-case separation <= eps.

    For lazy chains the worst separation equals the endpoint value, so a
    single row is evolved; audit=True re-checks each step with the full
    (x, y) scan.  Non-lazy chains always use the full scan.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if not chain.flags.irreducible:
        raise ReducibleChainError("separation time requires an irreducible chain")
    if horizon is None:
        horizon = default_horizon(chain)
    pi = stationary(chain)
    endpoint_only = chain.flags.lazy and not audit
    if endpoint_only:
        row = np.zeros(chain.n + 1)
        row[0] = 1.0
        for t in range(horizon + 1):
            if 1.0 - row[chain.n] / pi[chain.n] <= eps:
                return t
            row = step_distribution(chain, row)
        raise HorizonExceededError(f"separation stayed above {eps} for {horizon} steps")
    evo = Evolution(chain, pi=pi)
    for t in range(horizon + 1):
        if worst_separation(chain, t, evo=evo).worst <= eps:
            return t
    raise HorizonExceededError(f"separation stayed above {eps} for {horizon} steps")


def apply_kernel(chain: ChainSpec, f) -> np.ndarray:
    """The vector P f (action of the kernel on a function of the state)."""
    f = np.asarray(f, dtype=float)
    if len(f) != chain.n + 1:
        raise ValueError(f"f has length {len(f)}, chain has {chain.n + 1} states")
    out = chain.r * f
    out[:-1] += chain.p[:-1] * f[1:]
    out[1:] += chain.q[1:] * f[:-1]
    return out


def is_unimodal(v, tol: float = None):
    """(flag, mode): nondecreasing then nonincreasing with plateaus allowed;
    mode is the smallest maximizing index, None when not unimodal."""
    if tol is None:
        tol = structural_tol()
    v = np.asarray(v, dtype=float)
    if len(v) <= 2:
        return True, int(np.argmax(v))
    d = np.diff(v)
    rising = True
    for step in d:
        if rising:
            if step < -tol:
                rising = False
        else:
            if step > tol:
                return False, None
    return True, int(np.argmax(v))


def is_monotone_vector(v, decreasing: bool = False, tol: float = None) -> bool:
    if tol is None:
        tol = structural_tol()
    d = np.diff(np.asarray(v, dtype=float))
    return bool(np.all(d <= tol)) if decreasing else bool(np.all(d >= -tol))


@dataclass(frozen=True)
class LikelihoodRatioReport:
    t: int
    monotone_checks_apply: bool
    columns_to_zero_decreasing: bool      # P^t(k,0) >= P^t(k+1,0)
    ratio_from_zero_decreasing: bool      # P^t(0,k)/pi(k) nonincreasing in k
    unimodal_checks_apply: bool
    all_ratio_columns_unimodal: bool      # P^t(s,.)/pi unimodal for every s
    first_violation: tuple = None         # (check_name, index)


def likelihood_ratio_checks(chain: ChainSpec, t: int,
                            evo: Evolution = None) -> LikelihoodRatioReport:
    """Structure checks driven by the chain flags: monotone chains get the
    decreasing-likelihood checks, lazy chains additionally get unimodality
    of every row of P^t(s, .)/pi."""
    tol = structural_tol()
    evo = evo or Evolution(chain)
    Pt = evo.power(t)
    R = Pt / evo.pi[None, :]
    first = None
    mono_apply = chain.flags.monotone
    col0 = True
    ratio0 = True
    if mono_apply:
        d = np.diff(Pt[:, 0])
        bad = np.nonzero(d > tol)[0]
        col0 = bad.size == 0
        if not col0 and first is None:
            first = ("columns_to_zero_decreasing", int(bad[0]))
        d = np.diff(R[0])
        bad = np.nonzero(d > tol)[0]
        ratio0 = bad.size == 0
        if not ratio0 and first is None:
            first = ("ratio_from_zero_decreasing", int(bad[0]))
    uni_apply = chain.flags.lazy
    uni = True
    if uni_apply:
        for s in range(chain.n + 1):
            ok, _ = is_unimodal(R[s])
            if not ok:
                uni = False
                if first is None:
                    first = ("all_ratio_columns_unimodal", s)
                break
    return LikelihoodRatioReport(t, mono_apply, bool(col0), bool(ratio0),
                                 uni_apply, bool(uni), first)
