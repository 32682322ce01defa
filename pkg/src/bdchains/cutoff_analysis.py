"""Family-level cutoff diagnostics and per-chain inequality suites.

The cutoff criterion is asymptotic, so at finite sizes the scan reports
trend statistics only: mixing-time ratios across an epsilon grid, the
gap * t_mix product, and windows normalized by sqrt(t_rel * t_mix(1/4)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chain import ChainSpec, quantile_state
from .config import structural_tol
from .evolve import Evolution, HorizonExceededError
from .hitting import absorbing_variant, expected_hitting_time
from .spectral import eigenvalues


@dataclass(frozen=True)
class ChainAnalysis:
    n: int
    gap: float
    t_rel: float
    t_mix: dict                 # eps -> t_mix(eps), includes 1/4 and 1-eps levels
    product: float              # gap * t_mix(1/4)
    window: dict                # eps -> t_mix(eps) - t_mix(1-eps)
    ratio: dict                 # eps -> t_mix(eps) / t_mix(1-eps)
    normalized_window: dict     # window / sqrt(t_rel * t_mix(1/4))


@dataclass(frozen=True)
class FamilyReport:
    rows: list
    failures: dict = field(default_factory=dict)   # size -> error message


def analyze_chain(chain: ChainSpec, eps_grid, evo: Evolution = None) -> ChainAnalysis:
    """All per-chain cutoff statistics for the given epsilon grid."""
    spec = eigenvalues(chain)
    evo = evo or Evolution(chain)
    levels = {0.25}
    for eps in eps_grid:
        levels.add(float(eps))
        levels.add(float(1.0 - eps))
    t_mix = {lvl: evo.mixing_time(lvl) for lvl in sorted(levels)}
    product = spec.gap * t_mix[0.25]
    scale = np.sqrt(spec.t_rel * max(t_mix[0.25], 1))
    window = {}
    ratio = {}
    norm = {}
    for eps in eps_grid:
        eps = float(eps)
        w = t_mix[eps] - t_mix[1.0 - eps]
        window[eps] = w
        ratio[eps] = t_mix[eps] / max(t_mix[1.0 - eps], 1)
        norm[eps] = w / scale
    return ChainAnalysis(chain.n, spec.gap, spec.t_rel, t_mix, product,
                         window, ratio, norm)


def family_scan(generator, sizes, eps_grid) -> FamilyReport:
    """One analysis row per size; per-row failures are recorded and the
    scan continues.  Rows are ordered by size."""
    rows = []
    failures = {}
    for n in sorted(sizes):
        try:
            rows.append(analyze_chain(generator(n), eps_grid))
        except (HorizonExceededError, ValueError) as exc:
            failures[n] = str(exc)
    return FamilyReport(rows, failures)


def trend_slope(xs, ys) -> float:
    """Least-squares slope of ys against xs."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    xc = xs - xs.mean()
    return float(np.dot(xc, ys - ys.mean()) / np.dot(xc, xc))


@dataclass(frozen=True)
class WindowVerdict:
    epsilon: float
    lhs: float                  # t_mix(eps) - t_mix(1-eps)
    rhs: float                  # c_eps * sqrt(t_rel * t_mix(1/4))
    c_eps_used: float
    holds: bool
    effective_regime: bool      # t_rel < eps^5 * t_mix(1/4)
    sharp_lhs: float = None     # t_mix(4 eps) - t_mix(1 - 2 eps), in regime
    sharp_rhs: float = None     # (6/eps) * sqrt(t_rel * t_mix(1/4))
    sharp_holds: bool = None


def window_constant(eps: float) -> float:
    """The explicit window constant: max of the two proof branches."""
    c1 = 24.0 * max(1.0 / eps, 64.0)
    c2 = max(np.log2(1.0 / eps) / eps ** 2.5, 64.0)
    return float(max(c1, c2))


def window_bound_check(chain: ChainSpec, eps: float,
                       evo: Evolution = None) -> WindowVerdict:
    """Window inequality t_mix(eps) - t_mix(1-eps) <= c_eps sqrt(t_rel t_mix(1/4)),
    plus the sharper (6/eps) form for the pair (4 eps, 1 - 2 eps) whenever the
    relaxation time is small enough for it to apply."""
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    if not (chain.flags.lazy and chain.flags.irreducible):
        raise ValueError("window bound is stated for lazy irreducible chains")
    spec = eigenvalues(chain)
    evo = evo or Evolution(chain)
    tmix_q = evo.mixing_time(0.25)
    lhs = evo.mixing_time(eps) - evo.mixing_time(1.0 - eps)
    c_eps = window_constant(eps)
    scale = np.sqrt(spec.t_rel * tmix_q)
    rhs = c_eps * scale
    effective = spec.t_rel < eps ** 5 * tmix_q
    sharp_lhs = sharp_rhs = sharp_holds = None
    if effective and eps < 1.0 / 16.0:
        sharp_lhs = evo.mixing_time(4.0 * eps) - evo.mixing_time(1.0 - 2.0 * eps)
        sharp_rhs = (6.0 / eps) * scale
        sharp_holds = bool(sharp_lhs <= sharp_rhs)
    return WindowVerdict(eps, float(lhs), float(rhs), c_eps, bool(lhs <= rhs),
                         bool(effective), sharp_lhs, sharp_rhs, sharp_holds)


@dataclass(frozen=True)
class LemmaCheck:
    name: str
    applicable: bool
    holds: bool = None
    slack: float = None         # rhs - lhs at the tightest point checked


@dataclass(frozen=True)
class LemmaSuiteReport:
    eps: float
    checks: list

    def violated(self) -> list:
        return [c for c in self.checks if c.applicable and c.holds is False]


def _survival_grid(chain: ChainSpec, target: int, ts) -> dict:
    """P_k(tau_target > t) for every start k at the requested times,
    via powers of the target-absorbed kernel."""
    A = absorbing_variant(chain, target)
    evo_a = Evolution(A, pi=np.zeros(chain.n + 1))
    out = {}
    for t in ts:
        At = evo_a.power(int(t))
        out[int(t)] = 1.0 - At[:, target]
    return out


def lemma_suite(chain: ChainSpec, eps: float, evo: Evolution = None,
                time_grid=None) -> LemmaSuiteReport:
    """Per-chain verification of the coupling, hitting-order, commute-time
    and spectral-lower-bound inequalities.

    (a) TV from 0 <= P_0(tau_{Q(1-eps)} > t) + eps on a time grid;
    (b) TV from any k <= P_k(tau_{Q(eps)} > t) + P_k(tau_{Q(1-eps)} > t) + 2 eps;
    (c) t_mix(1/4) <= 16 max{E_0 tau_{Q(1-eps)}, E_n tau_{Q(eps)}};
    (d) E_{Q(eps)} tau_{Q(1-eps)} <= (3/(2 eps)) sqrt(t_rel E_0 tau_{Q(1/2)}),
        applicable when t_rel < eps^4 E_0 tau_{Q(1-eps)};
    (e) t_mix(eps') >= (t_rel - 1) log(1/(2 eps')) at eps' in {eps, 0.25}.
    """
    if not (chain.flags.lazy and chain.flags.irreducible):
        raise ValueError("the lemma suite is stated for lazy irreducible chains")
    if not 0.0 < eps < 1.0 / 16.0:
        raise ValueError(f"eps must lie in (0, 1/16), got {eps}")
    tol = structural_tol()
    spec = eigenvalues(chain)
    evo = evo or Evolution(chain)
    q_hi = quantile_state(chain, 1.0 - eps, "left")
    q_lo = quantile_state(chain, eps, "left")
    e0_hi = expected_hitting_time(chain, 0, q_hi) if q_hi > 0 else 0.0
    en_lo = expected_hitting_time(chain, chain.n, q_lo) if q_lo < chain.n else 0.0
    checks = []

    if time_grid is None:
        scale = max(int(np.ceil(max(e0_hi, en_lo))), 4)
        time_grid = sorted({0, 1, scale // 4, scale // 2, scale, 2 * scale, 4 * scale})

    pi = evo.pi
    surv_hi = _survival_grid(chain, q_hi, time_grid)
    surv_lo = _survival_grid(chain, q_lo, time_grid)

    # (a): distance from the left endpoint against the right-quantile hit
    slack_a = float("inf")
    ok_a = True
    for t in time_grid:
        Pt = evo.power(int(t))
        lhs = 0.5 * float(np.abs(Pt[0] - pi).sum())
        rhs = float(surv_hi[int(t)][0]) + eps
        slack_a = min(slack_a, rhs - lhs)
        ok_a = ok_a and lhs <= rhs + tol
    checks.append(LemmaCheck("tv_from_0_hitting_bound", True, bool(ok_a), slack_a))

    # (b): union bound over both quantiles, every start
    slack_b = float("inf")
    ok_b = True
    for t in time_grid:
        Pt = evo.power(int(t))
        lhs = 0.5 * np.abs(Pt - pi[None, :]).sum(axis=1)
        rhs = surv_lo[int(t)] + surv_hi[int(t)] + 2.0 * eps
        slack_b = min(slack_b, float(np.min(rhs - lhs)))
        ok_b = ok_b and bool(np.all(lhs <= rhs + tol))
    checks.append(LemmaCheck("tv_from_k_union_bound", True, bool(ok_b), slack_b))

    # (c): mixing time against the endpoint hitting expectations
    tmix_q = evo.mixing_time(0.25)
    rhs_c = 16.0 * max(e0_hi, en_lo)
    checks.append(LemmaCheck("tmix_le_16_max_hitting", True,
                             bool(tmix_q <= rhs_c + tol), rhs_c - tmix_q))

    # (d): commute bound between the quantiles, in its stated regime
    applicable_d = spec.t_rel < eps ** 4 * e0_hi
    if applicable_d:
        commute = expected_hitting_time(chain, q_lo, q_hi) if q_lo < q_hi else 0.0
        q_med = quantile_state(chain, 0.5, "left")
        e0_med = expected_hitting_time(chain, 0, q_med) if q_med > 0 else 0.0
        rhs_d = (3.0 / (2.0 * eps)) * np.sqrt(spec.t_rel * e0_med)
        checks.append(LemmaCheck("quantile_commute_bound", True,
                                 bool(commute <= rhs_d + tol), float(rhs_d - commute)))
    else:
        checks.append(LemmaCheck("quantile_commute_bound", False))

    # (e): spectral lower bound on the mixing time
    ok_e = True
    slack_e = float("inf")
    for lvl in (eps, 0.25):
        tm = evo.mixing_time(lvl)
        bound = (spec.t_rel - 1.0) * np.log(1.0 / (2.0 * lvl))
        ok_e = ok_e and tm >= bound - tol
        slack_e = min(slack_e, tm - bound)
    checks.append(LemmaCheck("spectral_lower_bound", True, bool(ok_e), slack_e))

    return LemmaSuiteReport(eps, checks)


def submultiplicativity_check(chain: ChainSpec, eps: float,
                              evo: Evolution = None) -> bool:
    """t_mix(eps) <= t_mix(1/4) * ceil(log2(1/eps)) for eps < 1/4.

    The constant follows from d(k t) <= dbar(t)^k with dbar(t_mix(1/4))
    <= 2 d(t_mix(1/4)) <= 1/2, so k = ceil(log2(1/eps)) levels suffice.
    """
    if not 0.0 < eps < 0.25:
        raise ValueError("submultiplicativity bound applies for eps < 1/4")
    evo = evo or Evolution(chain)
    return evo.mixing_time(eps) <= evo.mixing_time(0.25) * int(
        np.ceil(np.log2(1.0 / eps))
    )
