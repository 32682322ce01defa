"""Exact distribution evolution and distance profiles.

Single-distribution steps exploit the tridiagonal kernel (O(n) per step).
Worst-case scans over all starting states go through an Evolution object
that caches the repeated squares P^(2^k), so P^t for any t costs at most
popcount(t) dense multiplies; mixing times are then located by doubling
plus bisection, with an on-the-fly monotonicity audit of d(t) that falls
back to a linear scan if it ever trips.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import poisson

from .chain import ChainSpec, ReducibleChainError, stationary
from .config import structural_tol


class HorizonExceededError(RuntimeError):
    """The chain did not reach the requested distance within the horizon."""


def default_horizon(chain: ChainSpec) -> int:
    """Step budget for mixing searches.

    For ergodic chains the reversible eigenvalue bound
        d(t) <= (1/2) * pi_min^{-1/2} * lambda_*^t
    caps t_mix(eps) by t_rel * (ln(1/(2 eps)) + ln(1/pi_min)/2), so the
    budget covers every level down to eps = 1e-6 with slack; otherwise
    fall back to a flat per-state allowance.
    """
    base = 10 ** 4 * (chain.n + 1)
    from .spectral import eigenvalues

    rep = eigenvalues(chain)
    if not rep.ergodic or not np.isfinite(rep.t_rel):
        return base
    pi = stationary(chain)
    bound = rep.t_rel * (np.log(5e5) + 0.5 * np.log(1.0 / float(pi.min())))
    return max(base, 2 * int(np.ceil(bound)) + 10)


def step_distribution(chain: ChainSpec, dist: np.ndarray) -> np.ndarray:
    """One application of the kernel: dist @ P, in O(n)."""
    dist = np.asarray(dist, dtype=float)
    if len(dist) != chain.n + 1:
        raise ValueError(
            f"distribution has length {len(dist)}, chain has {chain.n + 1} states"
        )
    out = dist * chain.r
    out[1:] += dist[:-1] * chain.p[:-1]
    out[:-1] += dist[1:] * chain.q[1:]
    return out


def distribution_at(chain: ChainSpec, x: int, t: int) -> np.ndarray:
    """P^t(x, .) by t sequential steps."""
    if t < 0:
        raise ValueError("t must be non-negative")
    dist = np.zeros(chain.n + 1)
    dist[x] = 1.0
    for _ in range(t):
        dist = step_distribution(chain, dist)
    drift = abs(dist.sum() - 1.0)
    if drift > 1e-9:
        raise FloatingPointError(f"mass drift {drift} after {t} steps")
    return dist


def tv_distance(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    return 0.5 * float(np.abs(a - b).sum())


@dataclass
class Evolution:
    """Cached matrix-power evolution of a single chain."""

    chain: ChainSpec
    pi: np.ndarray = None
    _squares: list = field(default_factory=list)
    _d_cache: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.pi is None:
            self.pi = stationary(self.chain)
        self._squares = [self.chain.kernel()]

    def power(self, t: int) -> np.ndarray:
        """P^t from the binary decomposition of t."""
        if t < 0:
            raise ValueError("t must be non-negative")
        m = self.chain.n + 1
        if t == 0:
            return np.eye(m)
        while (1 << len(self._squares)) <= t:
            last = self._squares[-1]
            self._squares.append(last @ last)
        out = None
        k = 0
        while t:
            if t & 1:
                out = self._squares[k] if out is None else out @ self._squares[k]
            t >>= 1
            k += 1
        return out

    def worst_tv(self, t: int):
        """(d(t), argmax start), scanning every starting state."""
        if t in self._d_cache:
            return self._d_cache[t]
        Pt = self.power(t)
        tv = 0.5 * np.abs(Pt - self.pi[None, :]).sum(axis=1)
        x = int(np.argmax(tv))
        val = (float(tv[x]), x)
        self._d_cache[t] = val
        return val

    def pairwise_tv(self, t: int) -> float:
        """d-bar(t) = max over ordered pairs of TV between rows of P^t."""
        Pt = self.power(t)
        diffs = 0.5 * np.abs(Pt[:, None, :] - Pt[None, :, :]).sum(axis=2)
        return float(diffs.max())

    def _audit(self, samples: dict) -> bool:
        """d(t) must be non-increasing along the evaluated points."""
        ts = sorted(samples)
        vals = [samples[t] for t in ts]
        return all(vals[i + 1] <= vals[i] + 1e-12 for i in range(len(vals) - 1))

    def mixing_time(self, eps: float, horizon: int = None) -> int:
        """Least t with d(t) <= eps, by doubling + bisection.

        Monotonicity of d(t) is verified on every point evaluated; a
        violation triggers a linear scan from scratch.
        """
        if not 0.0 < eps < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {eps}")
        if horizon is None:
            horizon = default_horizon(self.chain)
        samples = {}

        def d(t):
            v = self.worst_tv(t)[0]
            samples[t] = v
            return v

        if d(0) <= eps:
            return 0
        hi = 1
        while d(hi) > eps:
            if hi > horizon:
                raise HorizonExceededError(
                    f"d(t) stayed above {eps} up to t = {hi} (horizon {horizon})"
                )
            hi *= 2
        lo = hi // 2  # d(lo) > eps >= d(hi)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if d(mid) <= eps:
                hi = mid
            else:
                lo = mid
        if self._audit(samples):
            return hi
        return self._mixing_time_linear(eps, horizon)

    def _mixing_time_linear(self, eps: float, horizon: int) -> int:
        dist = np.eye(self.chain.n + 1)
        for t in range(horizon + 1):
            tv = 0.5 * np.abs(dist - self.pi[None, :]).sum(axis=1)
            if float(tv.max()) <= eps:
                return t
            dist = (dist * self.chain.r
                    + np.pad(dist[:, :-1] * self.chain.p[:-1], ((0, 0), (1, 0)))
                    + np.pad(dist[:, 1:] * self.chain.q[1:], ((0, 0), (0, 1))))
        raise HorizonExceededError(f"chain did not mix to {eps} within {horizon} steps")


def worst_tv(chain: ChainSpec, t: int, evo: Evolution = None):
    """(max_x TV(P^t(x,.), pi), maximizing x) over all n+1 starts."""
    if not chain.flags.irreducible:
        raise ReducibleChainError("worst-case TV requires an irreducible chain")
    return (evo or Evolution(chain)).worst_tv(t)


def pairwise_tv(chain: ChainSpec, t: int, evo: Evolution = None) -> float:
    if not chain.flags.irreducible:
        raise ReducibleChainError("pairwise TV requires an irreducible chain")
    return (evo or Evolution(chain)).pairwise_tv(t)


def mixing_time(chain: ChainSpec, eps: float, horizon: int = None,
                evo: Evolution = None) -> int:
    return (evo or Evolution(chain)).mixing_time(eps, horizon)


@dataclass(frozen=True)
class HeatKernelRow:
    weights: np.ndarray
    truncation: int
    tail: float


def heat_kernel_row(chain: ChainSpec, x: int, t: float, tol: float = 1e-12) -> HeatKernelRow:
    """H_t(x, .) by uniformization: the Poisson(t) mixture of P^k(x, .).

    The series is truncated once the Poisson tail mass drops below tol;
    that tail is a certified sup-norm bound on the truncation error, and
    the result is renormalized.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = chain.n + 1
    dist = np.zeros(m)
    dist[x] = 1.0
    if t == 0:
        return HeatKernelRow(dist, 0, 0.0)
    kmax = int(poisson.isf(tol, t))
    weights = poisson.pmf(np.arange(kmax + 1), t)
    tail = float(poisson.sf(kmax, t))
    out = weights[0] * dist
    for k in range(1, kmax + 1):
        dist = step_distribution(chain, dist)
        out += weights[k] * dist
    out /= out.sum()
    return HeatKernelRow(out, kmax, tail)


def binomial_heat_approx(chain: ChainSpec, x: int, t: float, m: int) -> np.ndarray:
    """Row x of Q^m with Q = (1 - t/m) I + (t/m) P.

    For m >= 2t the kernel Q is lazy, so the unimodality structure of its
    columns is inherited from the lazy theory.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if m < 2 * t:
        raise ValueError(f"need m >= 2t, got m = {m}, t = {t}")
    c = t / m
    dist = np.zeros(chain.n + 1)
    dist[x] = 1.0
    for _ in range(m):
        dist = (1.0 - c) * dist + c * step_distribution(chain, dist)
    return dist


def binomial_kernel_chain(chain: ChainSpec, t: float, m: int) -> ChainSpec:
    """The chain with kernel Q = (1 - t/m) I + (t/m) P."""
    from .chain import new_chain

    if m < 2 * t:
        raise ValueError(f"need m >= 2t, got m = {m}, t = {t}")
    c = t / m
    return new_chain(c * chain.p, c * chain.q, (1.0 - c) + c * chain.r)


@dataclass(frozen=True)
class DistanceProfile:
    times: np.ndarray
    d_tv: np.ndarray
    d_sep: np.ndarray = None
    d_bar: np.ndarray = None


def distance_profile(chain: ChainSpec, times, include_sep: bool = False,
                     include_dbar: bool = False) -> DistanceProfile:
    """Worst-case distance profile over the given integer times."""
    from .separation import worst_separation

    evo = Evolution(chain)
    times = np.asarray(list(times), dtype=int)
    d_tv = np.array([evo.worst_tv(int(t))[0] for t in times])
    d_sep = None
    d_bar = None
    if include_sep:
        d_sep = np.array([worst_separation(chain, int(t), evo=evo).worst for t in times])
    if include_dbar:
        d_bar = np.array([evo.pairwise_tv(int(t)) for t in times])
    return DistanceProfile(times, d_tv, d_sep, d_bar)
