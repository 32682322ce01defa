"""Hitting-time laws: absorbing-chain dynamic programming and the
spectral (sum-of-geometrics) representation, cross-validating each other.

For a chain restricted to {0..d} with d absorbing, the absorption time
from 0 has probability generating function
    u -> prod_j (1 - theta_j) u / (1 - theta_j u),
where the theta_j are the d non-unit eigenvalues of the restricted
kernel; when all theta_j are nonnegative the absorption time is the sum
of d independent geometric variables with those failure probabilities,
so E = sum 1/(1-theta_j) and Var = sum theta_j/(1-theta_j)^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec, ChainValidationError, new_chain, quantile_state, stationary
from .config import structural_tol
from .spectral import absorbing_submatrix_spectrum, eigenvalues


@dataclass(frozen=True)
class HittingLaw:
    pmf: np.ndarray          # P(tau = t) for t = 0 .. len(pmf)-1; None if refused
    tail: float              # survival mass beyond the truncation
    expectation: float
    variance: float
    thetas: np.ndarray = None            # geometric failure parameters, if spectral
    expectation_err: float = 0.0         # certified bound on the truncation error
    variance_err: float = 0.0
    diagnostic: str = ""


def absorbing_variant(chain: ChainSpec, target: int) -> ChainSpec:
    """The chain with the target state made absorbing; other rows unchanged."""
    if not 0 <= target <= chain.n:
        raise ValueError(f"target {target} out of range")
    p = chain.p.copy()
    q = chain.q.copy()
    r = chain.r.copy()
    p[target] = 0.0
    q[target] = 0.0
    r[target] = 1.0
    return new_chain(p, q, r)


def _reachable(chain: ChainSpec, start: int, target: int) -> bool:
    if start < target:
        return bool(np.all(chain.p[start:target] > 0))
    if start > target:
        return bool(np.all(chain.q[target + 1: start + 1] > 0))
    return True


def expected_hitting_time(chain: ChainSpec, start: int, target: int) -> float:
    """E_start[tau_target] by the one-step recurrence along the path.

    For k < m:  E_k tau_{k+1} = 1/p_k + (q_k / p_k) E_{k-1} tau_k, summed
    from start to target; the mirrored recurrence covers start > target.
    """
    if not _reachable(chain, start, target):
        raise ChainValidationError(f"state {target} unreachable from {start}")
    if start == target:
        return 0.0
    if start < target:
        total = 0.0
        e_up = 0.0  # E_{k-1} tau_k
        for k in range(target):
            e_up = (1.0 + chain.q[k] * e_up) / chain.p[k]
            if k >= start:
                total += e_up
        return total
    total = 0.0
    e_down = 0.0  # E_{k+1} tau_k
    for k in range(chain.n, target, -1):
        e_down = (1.0 + chain.p[k] * e_down) / chain.q[k]
        if k <= start:
            total += e_down
    return total


def _survival_tail_bound(chain: ChainSpec, v: np.ndarray, target: int):
    """Certified geometric bound on the survival mass after truncation.

    In the pi-weighted norm the substochastic evolution contracts by the
    top eigenvalue rho of the transient block, so
    P(tau > T + k) <= sqrt(pi(transient)) * ||v_T||_pi * rho^k.
    Requires an irreducible chain (pi must exist).
    """
    pi = stationary(chain)
    mask = v > 0
    if target > 0 and np.any(mask[:target]):
        lo = absorbing_submatrix_spectrum(chain, target)
        rho_lo = float(lo.eigenvalues[0])
    else:
        rho_lo = 0.0
    if target < chain.n and np.any(mask[target + 1:]):
        # mirror the chain to reuse the left-restriction solver
        mir = new_chain(chain.q[::-1], chain.p[::-1], chain.r[::-1])
        hi = absorbing_submatrix_spectrum(mir, chain.n - target)
        rho_hi = float(hi.eigenvalues[0])
    else:
        rho_hi = 0.0
    rho = max(rho_lo, rho_hi)
    norm = float(np.sqrt(np.sum(v[mask] ** 2 / pi[mask]))) if np.any(mask) else 0.0
    mass = float(np.sqrt(np.sum(pi[np.arange(chain.n + 1) != target])))
    return norm * mass, rho


def hitting_pmf(chain: ChainSpec, start: int, target: int,
                tail_tol: float = 1e-12, horizon: int = None) -> HittingLaw:
    """Exact pmf of tau_target from start via substochastic DP.

    Moments come from the truncated pmf plus a certified tail bound (for
    irreducible chains) driven by the transient-block spectral radius.

    The evolution runs in blocks: with B the transient block and a the
    one-step absorption vector, pmf(t0+k+1) = v_{t0} . B^k a, so a block
    of pmf values is a single matrix-vector product against the
    precomputed columns B^k a, and v advances by a dense power of B.
    """
    if tail_tol <= 0:
        raise ValueError("tail_tol must be positive")
    if start == target:
        raise ValueError("start must differ from target")
    if not _reachable(chain, start, target):
        raise ChainValidationError(f"state {target} unreachable from {start}")
    if horizon is None:
        horizon = 10 ** 9 if chain.flags.irreducible else 10 ** 4 * (chain.n + 1)
    p, q, r = chain.p, chain.q, chain.r

    def col_apply(x):
        # y = B x on column vectors, with the target row and column removed
        y = r * x
        y[:-1] += p[:-1] * x[1:]
        y[1:] += q[1:] * x[:-1]
        y[target] = 0.0
        return y

    a = np.zeros(chain.n + 1)             # a_i = P(i, target) for i != target
    if target > 0:
        a[target - 1] = p[target - 1]
    if target < chain.n:
        a[target + 1] = q[target + 1]

    block = 128
    block_cap = 8192
    W = np.empty((block, chain.n + 1))    # row k holds B^k a
    W[0] = a
    for k in range(1, block):
        W[k] = col_apply(W[k - 1])
    Bm = None                             # dense B^block, built on first advance

    def dense_power(base, doublings):
        out = base
        for _ in range(doublings):
            out = out @ out
        return out

    v = np.zeros(chain.n + 1)
    v[start] = 1.0
    chunks = [np.zeros(1)]
    esum = 1.0       # running sum of survival probabilities = E tau (truncated)
    e2sum = 1.0      # running sum of (2t+1) * P(tau > t) = E tau^2 (truncated)
    t = 0
    survival = 1.0
    lag = 0          # steps v is behind t when the loop exits mid-block
    while survival >= tail_tol and t < horizon:
        mm = min(len(W), horizon - t)
        pmf_blk = W[:mm] @ v
        surv_blk = survival - np.cumsum(pmf_blk)
        below = np.nonzero(surv_blk < tail_tol)[0]
        cut = int(below[0]) + 1 if below.size else mm
        ts = t + 1 + np.arange(cut)
        esum += float(surv_blk[:cut].sum())
        e2sum += float(((2 * ts + 1) * surv_blk[:cut]).sum())
        chunks.append(pmf_blk[:cut])
        survival = max(float(surv_blk[cut - 1]), 0.0)
        t += cut
        lag = cut
        if survival >= tail_tol and t < horizon and cut == mm:
            if Bm is None:
                B = chain.kernel()
                B[target, :] = 0.0
                B[:, target] = 0.0
                Bm = dense_power(B, int(np.log2(len(W))))
            v = v @ Bm
            lag = 0
            # re-anchor: subtraction alone accumulates a rounding floor
            survival = float(v.sum())
            if survival < tail_tol:
                break
            if len(W) < block_cap:       # escalate the block for long runs
                old = len(W)
                grown = np.empty((2 * old, chain.n + 1))
                grown[:old] = W
                for k in range(old, 2 * old):
                    grown[k] = col_apply(grown[k - 1])
                W = grown
                Bm = Bm @ Bm
    for _ in range(lag):                 # bring v up to the truncation point
        w = v * r
        w[1:] += v[:-1] * p[:-1]
        w[:-1] += v[1:] * q[1:]
        w[target] = 0.0
        v = w
    exp_err = var_err = float("inf")
    if chain.flags.irreducible:
        B, rho = _survival_tail_bound(chain, v, target)
        if rho < 1.0:
            geo = rho / (1.0 - rho)
            exp_err = B * geo
            # sum_{k>=1} (2(T+k)+1) * B * rho^k
            e2_err = B * ((2 * t + 1) * geo + 2.0 * rho / (1.0 - rho) ** 2)
            var_err = e2_err + 2.0 * (esum + exp_err) * exp_err
    pmf = np.concatenate(chunks)
    expectation = esum
    variance = e2sum - esum ** 2
    return HittingLaw(pmf, survival, expectation, variance,
                      expectation_err=exp_err, variance_err=var_err)


def _restriction_thetas(chain: ChainSpec, target: int) -> np.ndarray:
    """Non-unit eigenvalues of the chain restricted to {0..target} with
    target absorbing: the spectrum of the principal submatrix."""
    if target == 0:
        return np.array([])
    return absorbing_submatrix_spectrum(chain, target).eigenvalues


def geometric_convolution_pmf(thetas: np.ndarray, horizon: int) -> np.ndarray:
    """pmf of a sum of independent geometrics (support {1,2,...} each),
    truncated to times 0..horizon; deterministic association order.

    Convolving with a geometric(1-theta) pmf is the linear recursion
    out[t] = theta*out[t-1] + (1-theta)*in[t-1], done here as an IIR
    filter in O(horizon) per factor."""
    from scipy.signal import lfilter

    dist = np.zeros(horizon + 1)
    dist[0] = 1.0
    for theta in thetas:
        dist = lfilter([0.0, 1.0 - theta], [1.0, -theta], dist)
    return dist


def spectral_hitting(chain: ChainSpec, target: int,
                     tail_tol: float = 1e-12) -> HittingLaw:
    """Hitting law of tau_target from state 0 via the spectral representation.

    Moments always follow from the pgf; the pmf is assembled by geometric
    convolution, which is refused (with a diagnostic) if any restriction
    eigenvalue is negative.
    """
    if not 0 < target <= chain.n:
        raise ValueError(f"target must lie in (0, n], got {target}")
    if not _reachable(chain, 0, target):
        raise ChainValidationError(f"state {target} unreachable from 0")
    thetas = np.asarray(_restriction_thetas(chain, target), dtype=float)
    expectation = float(np.sum(1.0 / (1.0 - thetas)))
    variance = float(np.sum(thetas / (1.0 - thetas) ** 2))
    tol = structural_tol()
    if np.any(thetas < -tol):
        return HittingLaw(None, float("nan"), expectation, variance, thetas,
                          diagnostic="negative eigenvalue: geometric convolution refused; "
                                     "moments from the pgf")
    thetas_c = np.clip(thetas, 0.0, None)
    horizon = int(np.ceil(expectation + 10.0 * np.sqrt(max(variance, 0.0)))) + 1
    rho = float(np.max(thetas_c)) if thetas_c.size else 0.0
    if 0.0 < rho < 1.0:
        # Chernoff truncation point: P(tau > T) <= E[u^tau] u^-T for
        # 1 < u < 1/rho, evaluated in log space to dodge overflow
        cuts = []
        for f in (0.5, 0.75, 0.9, 0.95, 0.99):
            u = rho ** -f
            log_u = -f * np.log(rho)
            log_c = float(np.sum(np.log((1.0 - thetas_c) * u)
                                 - np.log1p(-thetas_c * u)))
            cuts.append(int(np.ceil((log_c - np.log(tail_tol)) / log_u)) + 1)
        horizon = max(min(cuts), int(expectation) + 2)
    pmf = geometric_convolution_pmf(thetas_c, horizon)
    tail = 1.0 - float(pmf.sum())
    while tail > tail_tol:
        horizon *= 2
        pmf = geometric_convolution_pmf(thetas_c, horizon)
        tail = 1.0 - float(pmf.sum())
    return HittingLaw(pmf, tail, expectation, variance, thetas)


def hitting_pgf(thetas, u: float) -> float:
    """prod_j (1 - theta_j) u / (1 - theta_j u); empty product is u^0 = 1."""
    thetas = np.asarray(thetas, dtype=float)
    if np.any(thetas < -1.0) or np.any(thetas >= 1.0):
        raise ValueError("thetas must lie in [-1, 1)")
    if thetas.size == 0:
        return 1.0
    denom = 1.0 - thetas * u
    if np.any(denom == 0.0):
        raise ZeroDivisionError("u coincides with a pole 1/theta_j")
    return float(np.prod((1.0 - thetas) * u / denom))


@dataclass(frozen=True)
class MomentBoundsReport:
    eps: float
    quantile: int
    expectation: float
    variance: float
    gap_restricted: float
    gap_full: float
    var_le_exp_over_restricted_gap: bool
    var_le_exp_over_eps_gap: bool


def hitting_moment_bounds(chain: ChainSpec, eps: float) -> MomentBoundsReport:
    """Variance bounds for tau_{Q(1-eps)} from 0.

    Checks Var <= E / gap_restricted (restriction gap) and the weaker
    Var <= E / (eps * gap) against the full-chain gap.
    """
    if not (chain.flags.lazy and chain.flags.irreducible):
        raise ChainValidationError("moment bounds are stated for lazy irreducible chains")
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    ell = quantile_state(chain, 1.0 - eps, "left")
    gap_full = eigenvalues(chain).gap
    tol = structural_tol()
    if ell == 0:
        return MomentBoundsReport(eps, 0, 0.0, 0.0, float("nan"), gap_full, True, True)
    thetas = _restriction_thetas(chain, ell)
    expectation = float(np.sum(1.0 / (1.0 - thetas)))
    variance = float(np.sum(thetas / (1.0 - thetas) ** 2))
    gap_restricted = 1.0 - float(np.max(thetas))
    ok1 = variance <= expectation / gap_restricted + tol
    ok2 = variance <= expectation / (eps * gap_full) + tol
    return MomentBoundsReport(eps, ell, expectation, variance,
                              gap_restricted, gap_full, bool(ok1), bool(ok2))
