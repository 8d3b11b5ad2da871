"""Empirical median/MAD and their contaminated-sample confidence machinery.

Sample-size formulas and confidence half-widths follow the concentration
bounds for robust-moment estimation under contamination: the reported
interval around an estimate is [estimate +- (bias + half_width)], where the
bias term is the unavoidable displacement an adversary at the configured
contamination bound can force, and the half-width shrinks at the usual
sqrt(log(1/delta) / n) rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import AdversaryModel, FamilyParams, contamination_bias
from .errors import (
    EmptyInputError,
    InfeasibleRegimeError,
    ParameterOutOfRangeError,
    TooFewSamplesError,
)

__all__ = [
    "empirical_median",
    "empirical_mad",
    "EstimationParams",
    "RobustEstimateReport",
    "sample_size_median",
    "sample_size_mad",
    "estimate_median_ci",
    "estimate_mad_ci",
]


def empirical_median(xs) -> float:
    """Middle order statistic; the average of the middle two for even lengths."""
    a = np.asarray(xs, dtype=float)
    n = a.size
    if n == 0:
        raise EmptyInputError("empirical median needs at least one sample")
    mid = n // 2
    if n % 2:
        return float(np.partition(a, mid)[mid])
    part = np.partition(a, [mid - 1, mid])
    return float(0.5 * (part[mid - 1] + part[mid]))


def empirical_mad(xs) -> float:
    """Empirical median of absolute deviations from the empirical median."""
    a = np.asarray(xs, dtype=float)
    if a.size == 0:
        raise EmptyInputError("empirical MAD needs at least one sample")
    return empirical_median(np.abs(a - empirical_median(a)))


@dataclass(frozen=True)
class EstimationParams:
    """Known contamination bound, family parameters and adversary model."""

    eps0: float
    family: FamilyParams
    model: AdversaryModel

    def __post_init__(self):
        if not 0.0 <= self.eps0 < 0.5:
            raise ParameterOutOfRangeError(f"eps0 must lie in [0, 1/2), got {self.eps0}")

    def effective_eps(self) -> float:
        """Quantile-level offset the adversary can force at the configured bound."""
        if self.model is AdversaryModel.MALICIOUS:
            return self.eps0
        return self.eps0 / (2.0 * (1.0 - self.eps0))

    def median_margin(self) -> float:
        margin = self.family.t_bar - self.effective_eps()
        if margin <= 0.0:
            raise InfeasibleRegimeError(
                f"eps0={self.eps0} leaves no quantile margin below t_bar={self.family.t_bar} "
                f"under the {self.model.value} model; median estimation is impossible"
            )
        return margin

    def mad_margin(self) -> float:
        cap = min(self.family.t_bar, 1.0 / self.family.slope_bound)
        margin = cap - self.effective_eps()
        if margin <= 0.0:
            raise InfeasibleRegimeError(
                f"eps0={self.eps0} leaves no quantile margin below "
                f"min(t_bar, 1/slope_bound)={cap} under the {self.model.value} model; "
                "MAD estimation is impossible"
            )
        return margin


def _check_level_args(error_level: float, delta: float) -> None:
    if not error_level > 0:
        raise ParameterOutOfRangeError(f"error level must be positive, got {error_level}")
    if not 0.0 < delta < 1.0:
        raise ParameterOutOfRangeError(f"delta must lie in (0, 1), got {delta}")


def sample_size_median(error_level: float, delta: float, params: EstimationParams) -> int:
    """Samples sufficient to estimate a median to bias + error_level at level delta."""
    _check_level_args(error_level, delta)
    margin = params.median_margin()
    scale = params.family.slope_bound * params.family.mad_bound
    numerator = 3.0 if params.model is AdversaryModel.MALICIOUS else 2.0
    n = 2.0 * max((scale / error_level) ** 2, margin**-2) * math.log(numerator / delta)
    return math.ceil(n)


def sample_size_mad(error_level: float, delta: float, params: EstimationParams) -> int:
    """Samples sufficient to estimate a MAD to its bias + error_level at level delta."""
    _check_level_args(error_level, delta)
    margin = params.mad_margin()
    ratio = params.family.mad_ratio
    scale = 4.0 * ratio * params.family.slope_bound * params.family.mad_bound
    numerator = 6.0 if params.model is AdversaryModel.MALICIOUS else 4.0
    n = 2.0 * max((scale / error_level) ** 2, margin**-2) * math.log(numerator / delta)
    return math.ceil(n)


@dataclass(frozen=True)
class RobustEstimateReport:
    """Point estimate with its unavoidable bias and confidence half-width."""

    statistic: str
    estimate: float
    bias: float
    half_width: float
    n: int
    model: AdversaryModel

    def interval(self) -> tuple[float, float]:
        radius = self.bias + self.half_width
        return self.estimate - radius, self.estimate + radius


def estimate_median_ci(
    xs, delta: float, params: EstimationParams, mad_used: float
) -> RobustEstimateReport:
    """Empirical median with its contamination bias and confidence half-width.

    ``mad_used`` is the MAD value the caller wants the widths expressed with:
    the true MAD in simulations, the uniform bound inside algorithms.
    """
    if not 0.0 < delta < 1.0:
        raise ParameterOutOfRangeError(f"delta must lie in (0, 1), got {delta}")
    a = np.asarray(xs, dtype=float)
    n = a.size
    margin = params.median_margin()
    numerator = 3.0 if params.model is AdversaryModel.MALICIOUS else 2.0
    log_term = math.log(numerator / delta)
    floor = 2.0 * margin**-2 * log_term
    if n < floor:
        raise TooFewSamplesError(f"need at least {math.ceil(floor)} samples, got {n}")
    bias = contamination_bias(params.eps0, params.family.slope_bound, mad_used, params.model)
    half_width = params.family.slope_bound * mad_used * math.sqrt(2.0 * log_term / n)
    return RobustEstimateReport(
        statistic="median",
        estimate=empirical_median(a),
        bias=bias,
        half_width=half_width,
        n=int(n),
        model=params.model,
    )


def estimate_mad_ci(
    xs, delta: float, params: EstimationParams, mad_used: float
) -> RobustEstimateReport:
    """Empirical MAD; the bias is inflated by one plus twice the MAD ratio."""
    if not 0.0 < delta < 1.0:
        raise ParameterOutOfRangeError(f"delta must lie in (0, 1), got {delta}")
    a = np.asarray(xs, dtype=float)
    n = a.size
    margin = params.mad_margin()
    ratio = params.family.mad_ratio
    numerator = 6.0 if params.model is AdversaryModel.MALICIOUS else 4.0
    log_term = math.log(numerator / delta)
    floor = 2.0 * margin**-2 * log_term
    if n < floor:
        raise TooFewSamplesError(f"need at least {math.ceil(floor)} samples, got {n}")
    bias = (1.0 + 2.0 * ratio) * contamination_bias(
        params.eps0, params.family.slope_bound, mad_used, params.model
    )
    half_width = (
        4.0 * ratio * params.family.slope_bound * mad_used * math.sqrt(2.0 * log_term / n)
    )
    return RobustEstimateReport(
        statistic="mad",
        estimate=empirical_mad(a),
        bias=bias,
        half_width=half_width,
        n=int(n),
        model=params.model,
    )
