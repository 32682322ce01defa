"""Parametric chain generators, the eigenvalue-realization construction,
and the matched-window (tightness) family.

Any list of reals in [0, 1) is realized as the non-unit eigenvalues of a
pure-birth chain with an absorbing right endpoint: the kernel is upper
triangular, so its spectrum is read off the diagonal holding
probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec, lazy_version, new_chain


class InfeasibleFamilyError(ValueError):
    """The requested family parameters violate a feasibility inequality."""


@dataclass(frozen=True)
class FamilySpec:
    kind: str                  # lazy_srw | biased_walk | ehrenfest_like | pure_birth
    size: int
    params: dict = None


def lazy_srw(n: int) -> ChainSpec:
    """Lazy simple random walk: interior p = q = 1/4, reflecting ends."""
    p = np.full(n + 1, 0.25)
    q = np.full(n + 1, 0.25)
    q[0] = 0.0
    p[n] = 0.0
    return new_chain(p, q, 1.0 - p - q)


def biased_walk(n: int, beta: float) -> ChainSpec:
    """Lazy walk with rightward drift: interior p = beta/2, q = (1-beta)/2."""
    if not 0.5 < beta < 1.0:
        raise InfeasibleFamilyError(f"beta must lie in (1/2, 1), got {beta}")
    p = np.full(n + 1, beta / 2.0)
    q = np.full(n + 1, (1.0 - beta) / 2.0)
    q[0] = 0.0
    p[n] = 0.0
    return new_chain(p, q, 1.0 - p - q)


def ehrenfest_like(n: int) -> ChainSpec:
    """p_i = (n-i)/(2n), q_i = i/(2n); holding exactly 1/2 everywhere."""
    i = np.arange(n + 1, dtype=float)
    p = (n - i) / (2.0 * n)
    q = i / (2.0 * n)
    return new_chain(p, q, 1.0 - p - q)


def pure_birth(thetas) -> ChainSpec:
    """Climbing chain with holding probabilities thetas and absorbing top."""
    return realize_eigenvalues(thetas)


def generate(spec: FamilySpec) -> ChainSpec:
    params = spec.params or {}
    if spec.kind == "lazy_srw":
        return lazy_srw(spec.size)
    if spec.kind == "biased_walk":
        return biased_walk(spec.size, params["beta"])
    if spec.kind == "ehrenfest_like":
        return ehrenfest_like(spec.size)
    if spec.kind == "pure_birth":
        return pure_birth(params["thetas"])
    raise InfeasibleFamilyError(f"unknown family kind {spec.kind!r}")


def realize_eigenvalues(thetas) -> ChainSpec:
    """Pure-birth chain on {0..d} whose restriction spectrum is exactly
    the multiset {theta_i}: p_i = 1 - theta_i, r_i = theta_i, d absorbing."""
    thetas = np.asarray(thetas, dtype=float)
    if np.any(thetas < 0.0) or np.any(thetas >= 1.0):
        raise InfeasibleFamilyError("eigenvalues must lie in [0, 1)")
    d = len(thetas)
    p = np.append(1.0 - thetas, 0.0)
    q = np.zeros(d + 1)
    r = np.append(thetas, 1.0)
    return new_chain(p, q, r)


@dataclass(frozen=True)
class TightnessReport:
    chain: ChainSpec
    thetas: np.ndarray            # target eigenvalue list before perturbation
    k_repeated: int               # number of eigenvalues pinned at lam
    lam: float
    lam_prime: float
    expected_hit_top: float       # E_0 tau_n of the lazy perturbed chain
    t_rel: float
    variance_lower_bound: float   # floor(K) * lam / (1 - lam)^2


def tightness_family(h_m: float, t_r: float, n: int, perturb: float = 1e-4,
                     slack: float = 1e-9) -> TightnessReport:
    """Chain with prescribed mixing scale h_m and relaxation scale t_r.

    floor(K) eigenvalues sit at lam = 1 - 2/t_r with K = h_m / (2 t_r);
    the remaining n - floor(K) sit at the lam' that makes
    sum 1/(1 - lambda_i) = h_m / 2 exact.  The realizing pure-birth chain
    gets death probabilities perturb everywhere (making it irreducible
    when perturb > 0) and is returned in lazy form.
    """
    if t_r < 2.0 * (1.0 + slack):
        raise InfeasibleFamilyError(f"need t_r >= 2(1+slack), got t_r = {t_r}")
    if h_m > n * t_r:
        raise InfeasibleFamilyError(f"need h_m <= n*t_r = {n * t_r}, got h_m = {h_m}")
    if perturb < 0:
        raise InfeasibleFamilyError("perturb must be non-negative")
    K = h_m / (2.0 * t_r)
    k = int(np.floor(K))
    if k > n:
        raise InfeasibleFamilyError(f"floor(K) = {k} exceeds n = {n}")
    lam = 1.0 - 2.0 / t_r
    rest = n - k
    if rest == 0:
        lam_prime = float("nan")
        thetas = np.full(n, lam)
    else:
        budget = h_m / 2.0 - k / (1.0 - lam)
        if budget <= 0 or rest / budget > 1.0:
            raise InfeasibleFamilyError(
                f"lam' < 0: need h_m >= 4(n - floor(K)) = {4 * rest}, got h_m = {h_m}"
            )
        lam_prime = 1.0 - rest / budget
        if lam_prime > lam + 1e-12:
            raise InfeasibleFamilyError("lam' exceeds lam; h_m too large for this t_r")
        thetas = np.concatenate([np.full(k, lam), np.full(rest, lam_prime)])
    base = realize_eigenvalues(thetas)
    p = base.p.copy()
    q = base.q.copy()
    r = base.r.copy()
    if perturb > 0:
        q[1:] = perturb
        r = 1.0 - p - q
        if np.any(r < 0):
            raise InfeasibleFamilyError("perturb exceeds the smallest holding probability")
    perturbed = new_chain(p, q, r)
    lazy = lazy_version(perturbed)
    exp_hit = 2.0 * float(np.sum(1.0 / (1.0 - thetas)))  # lazy doubles the clock
    t_rel = 2.0 / (1.0 - float(np.max(thetas)))
    var_floor = k * lam / (1.0 - lam) ** 2
    return TightnessReport(lazy, thetas, k, lam, lam_prime, exp_hit, t_rel, var_floor)


def random_lazy_chain(n: int, rng: np.random.Generator,
                      min_move: float = 0.05) -> ChainSpec:
    """Random lazy irreducible chain: r >= 1/2 and every allowed move has
    probability at least min_move (keeps the gap bounded away from 0)."""
    r = rng.uniform(0.501, 0.9, n + 1)
    split = rng.uniform(min_move, 1.0 - min_move, n + 1)
    room = 1.0 - r
    p = room * split
    q = room * (1.0 - split)
    q[0] = 0.0
    p[n] = 0.0
    r = 1.0 - p - q
    p = np.maximum(p, 0.0)
    q = np.maximum(q, 0.0)
    p[:-1] = np.maximum(p[:-1], min_move * 0.1)
    q[1:] = np.maximum(q[1:], min_move * 0.1)
    r = 1.0 - p - q
    return new_chain(p, q, r)


def random_monotone_chain(n: int, rng: np.random.Generator) -> ChainSpec:
    """Random irreducible chain with p_i + q_{i+1} <= 1 (not necessarily lazy)."""
    p = rng.uniform(0.05, 0.95, n + 1)
    q = rng.uniform(0.05, 0.95, n + 1)
    q[0] = 0.0
    p[n] = 0.0
    # scale neighbouring pairs until every crossing sum is at most 1
    for i in range(n):
        s = p[i] + q[i + 1]
        if s > 1.0:
            p[i] /= s
            q[i + 1] /= s
    # rescale rows that overflow
    rows = p + q
    over = rows > 1.0
    if np.any(over):
        p[over] /= rows[over]
        q[over] /= rows[over]
    r = 1.0 - p - q
    return new_chain(p, q, r)
