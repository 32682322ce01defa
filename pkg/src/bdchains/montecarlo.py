"""Monte Carlo cross-checks: path sampling, hitting-time statistics, and
order-preserving couplings.

All randomness flows through a counter-based Philox generator keyed by the
seed, so runs are reproducible across platforms; per-step draws are
vectorized across trials rather than across steps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec, new_chain, stationary
from .config import structural_tol


@dataclass(frozen=True)
class SimConfig:
    trials: int
    seed: int
    horizon: int = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.horizon is not None and self.horizon < 1:
            raise ValueError("horizon must be at least 1")

    def rng(self) -> np.random.Generator:
        return make_rng(self.seed)

    def horizon_for(self, chain: ChainSpec) -> int:
        return self.horizon if self.horizon is not None else 10 ** 4 * (chain.n + 1)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))


def _step_states(chain: ChainSpec, x: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Advance states x with uniforms u by inverse CDF over {down, hold, up}:
    down on u < q, hold on u < q + r, up otherwise.  With a shared uniform
    this convention never lets ordered copies of a monotone chain cross."""
    down = u < chain.q[x]
    up = u >= chain.q[x] + chain.r[x]
    return x - down.astype(np.int64) + up.astype(np.int64)


def sample_path(chain: ChainSpec, x: int, horizon: int,
                rng: np.random.Generator) -> np.ndarray:
    """A single trajectory of length horizon+1 starting at x; each step
    consumes exactly one uniform variate."""
    if not 0 <= x <= chain.n:
        raise ValueError(f"start {x} out of range")
    u = rng.random(horizon)
    path = np.empty(horizon + 1, dtype=np.int64)
    path[0] = x
    state = np.array([x], dtype=np.int64)
    for t in range(horizon):
        state = _step_states(chain, state, u[t: t + 1])
        path[t + 1] = state[0]
    return path


def sample_states(chain: ChainSpec, start: int, t: int, trials: int,
                  rng: np.random.Generator) -> np.ndarray:
    """Positions of independent walkers after t steps, one per trial."""
    x = np.full(trials, start, dtype=np.int64)
    for _ in range(t):
        x = _step_states(chain, x, rng.random(trials))
    return x


def empirical_distribution(chain: ChainSpec, start: int, t: int, trials: int,
                           rng: np.random.Generator) -> np.ndarray:
    """Empirical pmf of P^t(start, .) from independent trials."""
    x = sample_states(chain, start, t, trials, rng)
    return np.bincount(x, minlength=chain.n + 1) / trials


@dataclass(frozen=True)
class HittingSample:
    times: np.ndarray          # per-trial hitting time, -1 when censored
    mean: float
    variance: float            # unbiased sample variance
    mean_stderr: float
    censored: int              # trials still unabsorbed at the horizon

    def histogram(self, length: int = None) -> np.ndarray:
        done = self.times[self.times >= 0]
        length = length or (int(done.max()) + 1 if done.size else 1)
        return np.bincount(done, minlength=length)[:length]


def empirical_hitting(chain: ChainSpec, start: int, target: int,
                      config: SimConfig) -> HittingSample:
    """Hitting times of `target` from `start` across independent trials.

    Trials that have not hit by the horizon are reported as censored and
    excluded from the moment estimates.
    """
    horizon = config.horizon_for(chain)
    rng = config.rng()
    trials = config.trials
    x = np.full(trials, start, dtype=np.int64)
    hit_at = np.full(trials, -1, dtype=np.int64)
    if start == target:
        hit_at[:] = 0
    t = 0
    while np.any(hit_at < 0) and t < horizon:
        active = hit_at < 0
        u = rng.random(trials)
        x[active] = _step_states(chain, x[active], u[active])
        t += 1
        hit_at[active & (x == target)] = t
    done = hit_at[hit_at >= 0].astype(float)
    mean = float(done.mean()) if done.size else float("nan")
    var = float(done.var(ddof=1)) if done.size > 1 else float("nan")
    stderr = float(np.sqrt(var / done.size)) if done.size > 1 else float("nan")
    return HittingSample(hit_at, mean, var, stderr, int(np.sum(hit_at < 0)))


@dataclass(frozen=True)
class CouplingResult:
    coupling_times: np.ndarray   # per-trial coalescence time, -1 when censored
    order_violations: int        # strict order swaps between consecutive steps
    censored: int
    mean_steps_per_move: float = float("nan")   # thinning multiplicity estimate

    def non_coalescence(self, t: int):
        """(estimate, binomial standard error) of P(not coalesced by t)."""
        times = self.coupling_times
        p = float(np.mean((times < 0) | (times > t)))
        se = float(np.sqrt(p * (1.0 - p) / len(times)))
        return p, se


def _sample_stationary(chain: ChainSpec, trials: int,
                       rng: np.random.Generator) -> np.ndarray:
    pi = stationary(chain)
    return rng.choice(chain.n + 1, size=trials, p=pi).astype(np.int64)


def no_crossing_coupling(chain: ChainSpec, x: int,
                         config: SimConfig) -> CouplingResult:
    """Coupling of a copy started at x with a partner started from
    stationarity, for a lazy chain.

    Each step a fair coin toss decides which copy takes one step of the
    doubled kernel 2P - I (a valid kernel by laziness); the other copy
    holds.  Only one copy moves per step and moves are by one state, so
    the copies can never strictly swap order; coalescence is declared at
    the first shared state, after which the copies run glued.  The order
    is audited every step rather than assumed.
    """
    if not chain.flags.lazy:
        raise ValueError("the no-crossing coupling requires a lazy chain")
    horizon = config.horizon_for(chain)
    rng = config.rng()
    trials = config.trials
    doubled = new_chain(2.0 * chain.p, 2.0 * chain.q, 2.0 * chain.r - 1.0)
    xs = np.full(trials, x, dtype=np.int64)
    ys = _sample_stationary(chain, trials, rng)
    met_at = np.full(trials, -1, dtype=np.int64)
    met_at[xs == ys] = 0
    sign = np.sign(xs - ys)
    violations = 0
    t = 0
    while np.any(met_at < 0) and t < horizon:
        active = met_at < 0
        coin = rng.random(trials) < 0.5
        v = rng.random(trials)
        move_x = active & coin
        move_y = active & ~coin
        xs[move_x] = _step_states(doubled, xs[move_x], v[move_x])
        ys[move_y] = _step_states(doubled, ys[move_y], v[move_y])
        t += 1
        new_sign = np.sign(xs - ys)
        violations += int(np.sum(active & (new_sign == -sign) & (new_sign != 0)))
        sign = np.where(active, new_sign, sign)
        met_at[active & (xs == ys)] = t
    return CouplingResult(met_at, violations, int(np.sum(met_at < 0)))


def thin_kernel(chain: ChainSpec, delta: float) -> ChainSpec:
    """The kernel P' with P = (1 - delta) P' + delta I; needs delta <= min r."""
    if not 0.0 <= delta < 1.0:
        raise ValueError(f"delta must lie in [0, 1), got {delta}")
    if delta > chain.flags.delta_lazy + structural_tol():
        raise ValueError(
            f"delta = {delta} exceeds the minimum holding probability "
            f"{chain.flags.delta_lazy}"
        )
    s = 1.0 - delta
    return new_chain(chain.p / s, chain.q / s, (chain.r - delta) / s)


def delta_lazy_coupling(chain: ChainSpec, x: int, delta: float,
                        config: SimConfig) -> CouplingResult:
    """Coupling through the thinned kernel P' = (P - delta I)/(1 - delta),
    partner started from stationarity.

    One activity uniform u per step drives anti-correlated move indicators:
    one copy takes a P' step iff u < 1 - delta, the other iff u >= delta,
    and a shared second uniform drives the P' moves.  Each copy's runs of
    holds between P' moves are geometric with mean 1/(1 - delta); the
    realized mean is reported.  At delta = 1/2 exactly one copy moves per
    step, recovering the fair-coin construction.  Crossings are counted,
    not assumed away; copies are glued on meeting.
    """
    if not 0.0 < delta <= chain.flags.delta_lazy + structural_tol():
        raise ValueError(
            f"delta must lie in (0, delta_lazy] = (0, {chain.flags.delta_lazy}]"
        )
    horizon = config.horizon_for(chain)
    rng = config.rng()
    trials = config.trials
    thin = thin_kernel(chain, delta)
    xs = np.full(trials, x, dtype=np.int64)
    ys = _sample_stationary(chain, trials, rng)
    met_at = np.full(trials, -1, dtype=np.int64)
    met_at[xs == ys] = 0
    sign = np.sign(xs - ys)
    violations = 0
    steps_total = 0
    moves_total = 0
    t = 0
    while np.any(met_at < 0) and t < horizon:
        active = met_at < 0
        u = rng.random(trials)
        v = rng.random(trials)
        move_x = active & (u < 1.0 - delta)
        move_y = active & (u >= delta)
        xs[move_x] = _step_states(thin, xs[move_x], v[move_x])
        ys[move_y] = _step_states(thin, ys[move_y], v[move_y])
        steps_total += int(np.sum(active))
        moves_total += int(np.sum(move_x))
        t += 1
        new_sign = np.sign(xs - ys)
        violations += int(np.sum(active & (new_sign == -sign) & (new_sign != 0)))
        sign = np.where(active, new_sign, sign)
        met_at[active & (xs == ys)] = t
    mult = steps_total / moves_total if moves_total else float("nan")
    return CouplingResult(met_at, violations, int(np.sum(met_at < 0)), mult)
