"""Best-arm identification under partial identifiability.

Three algorithms:

* ``run_simple`` pulls every arm the same precomputed number of times and
  returns the arm with the best empirical median.
* ``run_successive_elimination`` is the generic racing loop driven by an
  abstract estimator oracle with a known accuracy-per-round profile.
* ``run_contaminated_successive_elimination`` specializes the racing loop to
  contaminated arms: a warm-up phase buys the validity floor of the median
  concentration bound, later rounds top up samples so the running medians stay
  accurate at the shrinking per-round thresholds.

Because estimates are only identifiable up to a per-arm bias, correctness is
stated in terms of effective gaps: the best arm's pessimistic value minus a
rival's optimistic one.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .contamination import ContaminatedArm, EmpiricalQuantileShift, draw_batch
from .distributions import AdversaryModel, FamilyParams, contamination_bias, robust_moments
from .errors import NonUniqueMedianError, ParameterOutOfRangeError
from .estimators import EstimationParams, empirical_median, sample_size_median

__all__ = [
    "BanditInstance",
    "AlgoConfig",
    "BanditRunResult",
    "EffectiveGapReport",
    "effective_gaps",
    "run_simple",
    "simple_exploration_estimates",
    "SimpleRunOutcome",
    "run_successive_elimination",
    "run_contaminated_successive_elimination",
    "elimination_round_delta",
    "warmup_pulls",
    "RunningMedian",
]


@dataclass(frozen=True)
class BanditInstance:
    """A bank of contaminated arms sharing one contamination level and model."""

    arms: tuple[ContaminatedArm, ...]

    def __init__(self, arms):
        arms = tuple(arms)
        if not arms:
            raise ParameterOutOfRangeError("an instance needs at least one arm")
        eps = arms[0].eps
        model = arms[0].model
        if any(a.eps != eps or a.model is not model for a in arms):
            raise ParameterOutOfRangeError("all arms must share eps and adversary model")
        object.__setattr__(self, "arms", arms)

    @property
    def k(self) -> int:
        return len(self.arms)

    @property
    def eps(self) -> float:
        return self.arms[0].eps

    @property
    def model(self) -> AdversaryModel:
        return self.arms[0].model


@dataclass(frozen=True)
class AlgoConfig:
    """Run parameters shared by the bandit algorithms.

    ``threshold_variant`` selects the elimination-radius constant for the
    contaminated racing loop: "squared-slope" (default, consistent with the
    sample-size formulas) or "linear-slope" for measuring the alternative.
    """

    alpha: float
    delta: float
    family: FamilyParams
    eps0: float
    max_rounds: int = 10**6
    early_stop: bool = False
    threshold_variant: str = "squared-slope"

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ParameterOutOfRangeError(f"delta must lie in (0, 1), got {self.delta}")
        if self.alpha < 0:
            raise ParameterOutOfRangeError(f"alpha must be nonnegative, got {self.alpha}")
        if self.max_rounds < 1:
            raise ParameterOutOfRangeError("max_rounds must be positive")
        if self.threshold_variant not in ("squared-slope", "linear-slope"):
            raise ParameterOutOfRangeError(f"unknown threshold variant {self.threshold_variant!r}")

    def estimation_params(self, model: AdversaryModel) -> EstimationParams:
        return EstimationParams(eps0=self.eps0, family=self.family, model=model)


@dataclass(frozen=True)
class BanditRunResult:
    chosen_arm: int
    pulls_per_arm: tuple[int, ...]
    rounds: int
    elimination_trace: tuple[tuple[int, tuple[int, ...]], ...]
    terminated_by: str  # single-survivor | early-stop | round-cap

    @property
    def total_pulls(self) -> int:
        return sum(self.pulls_per_arm)


@dataclass(frozen=True)
class EffectiveGapReport:
    """Per-arm identifiable separation from the best arm.

    ``gaps[i]`` is None for the best arm itself. Arms whose effective gap is
    not strictly positive are statistically indistinguishable from the best
    arm and are listed in ``infeasible_arms``.
    """

    best_arm: int
    gaps: tuple[float | None, ...]
    medians: tuple[float, ...]
    mads: tuple[float, ...]
    biases: tuple[float, ...]

    @property
    def infeasible_arms(self) -> tuple[int, ...]:
        return tuple(
            i for i, g in enumerate(self.gaps) if g is not None and g <= 0.0
        )


def effective_gaps(instance: BanditInstance, family: FamilyParams) -> EffectiveGapReport:
    """Compute medians, per-arm biases and effective gaps of an instance."""
    medians = []
    mads = []
    for arm in instance.arms:
        moments = robust_moments(arm.dist)
        if not moments.median_unique:
            raise NonUniqueMedianError("effective gaps need unique medians for every arm")
        medians.append(moments.median)
        mads.append(moments.mad)
    biases = [
        contamination_bias(instance.eps, family.slope_bound, mad, instance.model)
        for mad in mads
    ]
    best = max(range(instance.k), key=lambda i: (medians[i], -i))
    pessimistic_best = medians[best] - biases[best]
    gaps: list[float | None] = []
    for i in range(instance.k):
        if i == best:
            gaps.append(None)
        else:
            gaps.append(pessimistic_best - (medians[i] + biases[i]))
    return EffectiveGapReport(
        best_arm=best,
        gaps=tuple(gaps),
        medians=tuple(medians),
        mads=tuple(mads),
        biases=tuple(biases),
    )


@dataclass(frozen=True)
class SimpleRunOutcome:
    result: BanditRunResult
    medians: tuple[float, ...]
    mads: tuple[float, ...]


def simple_exploration_estimates(
    instance: BanditInstance, config: AlgoConfig, rng: np.random.Generator
) -> SimpleRunOutcome:
    """Uniform exploration, retaining per-arm empirical medians and MADs.

    Every arm is pulled exactly the number of times needed to certify accuracy
    alpha/2 at confidence delta/k, so the total pull count is a deterministic
    function of the configuration.
    """
    if not config.alpha > 0:
        raise ParameterOutOfRangeError("uniform exploration needs alpha > 0")
    params = config.estimation_params(instance.model)
    n = sample_size_median(config.alpha / 2.0, config.delta / instance.k, params)
    medians = []
    mads = []
    for arm in instance.arms:
        xs = draw_batch(arm, n, rng)
        med = empirical_median(xs)
        medians.append(med)
        mads.append(empirical_median(np.abs(xs - med)))
    chosen = int(np.argmax(medians))
    result = BanditRunResult(
        chosen_arm=chosen,
        pulls_per_arm=(n,) * instance.k,
        rounds=1,
        elimination_trace=(),
        terminated_by="single-survivor",
    )
    return SimpleRunOutcome(result=result, medians=tuple(medians), mads=tuple(mads))


def run_simple(
    instance: BanditInstance, config: AlgoConfig, rng: np.random.Generator
) -> BanditRunResult:
    return simple_exploration_estimates(instance, config, rng).result


def elimination_round_delta(r: int, k: int, delta: float) -> float:
    """Per-round confidence share 6 delta / (pi^2 k r^2); sums to delta/k over rounds."""
    return 6.0 * delta / (math.pi**2 * k * r * r)


class _BufferedPuller:
    """Amortizes tiny per-round pulls into block draws.

    Safe whenever successive samples of the arm are iid, which holds for every
    strategy except the batch-aware prescient one (each of its contaminated
    values depends on the batch it was drawn with), so that one stays
    unbuffered.
    """

    __slots__ = ("arm", "rng", "_buffer", "_pos", "_block")

    def __init__(self, arm: ContaminatedArm, rng: np.random.Generator, block: int = 256):
        self.arm = arm
        self.rng = rng
        self._block = 0 if isinstance(arm.strategy, EmpiricalQuantileShift) else block
        self._buffer = np.empty(0)
        self._pos = 0

    def pull(self, n: int) -> np.ndarray:
        if self._block == 0:
            return draw_batch(self.arm, n, self.rng)
        available = self._buffer.size - self._pos
        if available >= n:
            out = self._buffer[self._pos : self._pos + n]
            self._pos += n
            return out
        parts = [self._buffer[self._pos :]] if available else []
        need = n - available
        self._buffer = draw_batch(self.arm, max(self._block, need), self.rng)
        self._pos = need
        parts.append(self._buffer[:need])
        return np.concatenate(parts) if len(parts) > 1 else parts[0]


class RunningMedian:
    """Two-heap running median matching ``empirical_median`` exactly.

    ``_low`` is a negated max-heap of the lower half, ``_high`` a min-heap of
    the upper half; the lower half holds the extra element for odd counts.
    """

    __slots__ = ("_low", "_high")

    def __init__(self):
        self._low: list[float] = []
        self._high: list[float] = []

    def push(self, value: float) -> None:
        value = float(value)
        low, high = self._low, self._high
        if low and value > -low[0]:
            heapq.heappush(high, value)
        else:
            heapq.heappush(low, -value)
        if len(low) > len(high) + 1:
            heapq.heappush(high, -heapq.heappop(low))
        elif len(high) > len(low):
            heapq.heappush(low, -heapq.heappop(high))

    def extend(self, values) -> None:
        for v in values:
            self.push(v)

    @property
    def count(self) -> int:
        return len(self._low) + len(self._high)

    @property
    def median(self) -> float:
        low, high = self._low, self._high
        if not low:
            raise ParameterOutOfRangeError("running median is empty")
        if len(low) > len(high):
            return -low[0]
        return 0.5 * (-low[0] + high[0])


def _race(
    k: int,
    pull_round: Callable[[list[int], int], dict[int, float]],
    radius_at: Callable[[int], float],
    pulls: list[int],
    max_rounds: int,
    stop_radius: float | None,
    initial_estimates: dict[int, float] | None = None,
) -> BanditRunResult:
    """Shared racing loop: per-round estimates, threshold eliminations, trace."""
    survivors = list(range(k))
    estimates: dict[int, float] = dict(initial_estimates or {})
    trace: list[tuple[int, tuple[int, ...]]] = []
    r = 0
    terminated_by = "single-survivor"
    while len(survivors) > 1:
        r += 1
        radius = radius_at(r)
        if stop_radius is not None and 2.0 * radius <= stop_radius:
            r -= 1
            terminated_by = "early-stop"
            break
        if r > max_rounds:
            r -= 1
            terminated_by = "round-cap"
            break
        estimates.update(pull_round(survivors, r))
        best_value = max(estimates[i] for i in survivors)
        keep = [i for i in survivors if estimates[i] >= best_value - 2.0 * radius]
        dropped = tuple(i for i in survivors if i not in keep)
        if dropped:
            trace.append((r, dropped))
        survivors = keep
    if survivors and estimates:
        chosen = max(survivors, key=lambda i: (estimates[i], -i))
    else:
        chosen = survivors[0]
    return BanditRunResult(
        chosen_arm=int(chosen),
        pulls_per_arm=tuple(pulls),
        rounds=r,
        elimination_trace=tuple(trace),
        terminated_by=terminated_by,
    )


def run_successive_elimination(
    estimator: Callable[[int, np.random.Generator], float],
    k: int,
    delta: float,
    c: float,
    rng: np.random.Generator,
    max_rounds: int = 10**6,
) -> BanditRunResult:
    """Generic racing loop over an abstract estimator oracle.

    ``estimator(i, rng)`` must draw one more sample for arm i and return the
    updated estimate; after r calls the estimate must be accurate to within
    the arm's bias plus sqrt(c log(1/delta') / r) at confidence 1 - delta'.
    Arms falling 2 radii behind the front-runner are eliminated. Hitting the
    round cap is reported in ``terminated_by``, never silently.
    """
    if k < 1:
        raise ParameterOutOfRangeError("need at least one arm")
    if not 0.0 < delta < 1.0:
        raise ParameterOutOfRangeError(f"delta must lie in (0, 1), got {delta}")
    if not c > 0:
        raise ParameterOutOfRangeError(f"c must be positive, got {c}")
    pulls = [0] * k
    if k == 1:
        return BanditRunResult(0, (0,), 0, (), "single-survivor")

    def pull_round(survivors: list[int], r: int) -> dict[int, float]:
        out = {}
        for i in survivors:
            out[i] = float(estimator(i, rng))
            pulls[i] += 1
        return out

    def radius_at(r: int) -> float:
        return math.sqrt(c * math.log(1.0 / elimination_round_delta(r, k, delta)) / r)

    return _race(k, pull_round, radius_at, pulls, max_rounds, stop_radius=None)


def warmup_pulls(k: int, delta: float, params: EstimationParams) -> int:
    """Initial pulls per arm buying the median bound's validity floor for all rounds."""
    floor_scale = 2.0 * params.median_margin() ** -2
    return math.ceil(floor_scale * math.log(math.pi**2 * k / (2.0 * delta)))


def run_contaminated_successive_elimination(
    instance: BanditInstance, config: AlgoConfig, rng: np.random.Generator
) -> BanditRunResult:
    """Racing loop on contaminated arms with running empirical medians.

    After the warm-up, round r adds 1 + ceil(2 N log((r+1)/r)) pulls per
    surviving arm (N the validity-floor scale), keeping every running median
    accurate to the round radius at the round's confidence share. In
    ``early_stop`` mode the loop returns the current front-runner once the
    elimination diameter drops to alpha/2.
    """
    k = instance.k
    params = config.estimation_params(instance.model)
    floor_scale = 2.0 * params.median_margin() ** -2
    warmup = warmup_pulls(k, config.delta, params)
    scale = config.family.slope_bound * config.family.mad_bound
    if config.threshold_variant == "squared-slope":
        radius_scale2 = 2.0 * scale**2
    else:
        radius_scale2 = 2.0 * config.family.slope_bound * config.family.mad_bound**2

    trackers = [RunningMedian() for _ in range(k)]
    pullers = [_BufferedPuller(arm, rng) for arm in instance.arms]
    pulls = [0] * k
    for i in range(k):
        trackers[i].extend(pullers[i].pull(warmup))
        pulls[i] += warmup

    if k == 1:
        return BanditRunResult(0, (warmup,), 0, (), "single-survivor")

    def pull_round(survivors: list[int], r: int) -> dict[int, float]:
        n_r = 1 + math.ceil(2.0 * floor_scale * math.log((r + 1.0) / r))
        out = {}
        for i in survivors:
            trackers[i].extend(pullers[i].pull(n_r))
            pulls[i] += n_r
            out[i] = trackers[i].median
        return out

    def radius_at(r: int) -> float:
        return math.sqrt(
            radius_scale2 * math.log(3.0 / elimination_round_delta(r, k, config.delta)) / r
        )

    stop_radius = config.alpha / 2.0 if config.early_stop else None
    warm_estimates = {i: trackers[i].median for i in range(k)}
    return _race(
        k, pull_round, radius_at, pulls, config.max_rounds, stop_radius, warm_estimates
    )
