"""How far can one CPT move before the classifier changes?

Intervals come from compiled diagrams: the root's equivalence interval bounds
the prior log-odds, and with attribute ``i`` compiled first, the interval of
the root's child along value ``e`` (shifted back by the prior) bounds the
weight of evidence of ``e``. Counts of distinct reachable classifiers come in
two forms: closed-form upper bounds and an exhaustive sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .compiler import CompilationResult, compile_classifier
from .interval import Interval, contains, offset
from .model import NaiveBayesModel, logistic
from .oracle import Margins, OracleGuardError  # noqa: F401  (re-exported)

#: prior sweeps enumerate at most this many instances (16 binary attributes)
SWEEP_LIMIT = 2**16


@dataclass(frozen=True)
class WeightSensitivity:
    attribute: str
    values: tuple[str, ...]
    current: tuple[float, ...]
    intervals: tuple[Interval, ...]
    # False when no point of the per-value box comes from an actual CPT
    realizable: bool


@dataclass(frozen=True)
class SensitivityReport:
    rho: float
    prior_log_odds: float
    prior_interval: Interval
    prior_prob_interval: tuple[float, float]
    weights: tuple[WeightSensitivity, ...] = field(default=())

    def to_dict(self) -> dict:
        def iv(i: Interval):
            return [i.lo, i.hi]

        return {
            "rho": self.rho,
            "prior": {
                "log_odds": self.prior_log_odds,
                "interval": iv(self.prior_interval),
                "prob_interval": list(self.prior_prob_interval),
                "slack": list(slack(self.prior_interval, self.prior_log_odds)),
            },
            "attributes": [
                {
                    "name": ws.attribute,
                    "realizable": ws.realizable,
                    "values": [
                        {
                            "value": v,
                            "weight": w,
                            "interval": iv(i),
                            "slack": list(slack(i, w)),
                        }
                        for v, w, i in zip(ws.values, ws.current, ws.intervals)
                    ],
                }
                for ws in self.weights
            ],
        }


def slack(interval: Interval, x: float) -> tuple[float, float]:
    """Distance from ``x`` down to the closed end and up to the open end."""
    return x - interval.lo, interval.hi - x


def prior_interval_from_odd(result: CompilationResult) -> Interval:
    return result.root_interval


def prior_prob_interval(interval: Interval) -> tuple[float, float]:
    return logistic(interval.lo), logistic(interval.hi)


def weight_intervals_for(model: NaiveBayesModel, rho: float, attribute: int) -> list[Interval]:
    """Allowed new weight for each value of ``attribute``, others held fixed.

    Compiles with the attribute first; the child reached along value ``e``
    carries log-odds ``prior + w_e``, so its interval shifted by ``-prior``
    bounds ``w_e``.
    """
    order = [attribute] + [i for i in range(model.n) if i != attribute]
    result = compile_classifier(model, rho, order)
    p = model.prior_log_odds
    if math.isinf(p):
        raise ValueError("weight intervals are undefined for an infinite prior")
    return [offset(i, -p) for i in result.root_child_intervals]


def _realizable(intervals: list[Interval]) -> bool:
    # new CPT rows both sum to one: all weights zero, or one value above zero
    # and a different one below
    if all(contains(i, 0.0) for i in intervals):
        return True
    up = [j for j, i in enumerate(intervals) if i.hi > 0]
    down = [j for j, i in enumerate(intervals) if i.lo < 0]
    return any(a != b for a in up for b in down)


def sensitivity_report(model: NaiveBayesModel, rho: float) -> SensitivityReport:
    result = compile_classifier(model, rho)
    prior_iv = prior_interval_from_odd(result)
    weights = []
    for i, attr in enumerate(model.attributes):
        ivs = weight_intervals_for(model, rho, i)
        weights.append(
            WeightSensitivity(
                attribute=attr.name,
                values=attr.values,
                current=model.weights[i],
                intervals=tuple(ivs),
                realizable=_realizable(ivs),
            )
        )
    return SensitivityReport(
        rho=rho,
        prior_log_odds=model.prior_log_odds,
        prior_interval=prior_iv,
        prior_prob_interval=prior_prob_interval(prior_iv),
        weights=tuple(weights),
    )


def count_prior_classifiers(cardinalities) -> int:
    """At most one classifier per instance crossing the threshold, plus one."""
    return math.prod(cardinalities) + 1


def count_weight_classifiers(k: int, b: int) -> int:
    """Upper bound on classifiers reachable by re-weighting one ``b``-valued
    attribute when the other attributes have ``k`` joint instantiations."""
    if k < 0 or b < 1:
        raise ValueError("need k >= 0 and b >= 1")
    return (k + 1) ** b - (k // 2) ** b - ((k + 1) // 2) ** b


def _suffix_sums(model: NaiveBayesModel, skip: int | None = None) -> np.ndarray:
    """Weight sums (no prior) of all instantiations, optionally leaving one attribute out."""
    arr = np.zeros(1)
    with np.errstate(invalid="ignore"):
        for i, ws in enumerate(model.weights):
            if i != skip:
                arr = (arr[:, None] + np.asarray(ws)[None, :]).ravel()
    return arr


def sweep_distinct_classifiers(
    model: NaiveBayesModel,
    rho: float,
    mode: str | int = "prior",
    *,
    restricted: bool = False,
) -> int:
    """Exhaustively count distinct classifiers reachable by one CPT.

    ``mode="prior"`` sweeps the prior over the real line: each distinct
    instance weight-sum is one breakpoint. An integer ``mode`` sweeps the
    weights of that attribute independently per value (a box), giving
    ``(d + 1) ** b`` classifiers for ``d`` distinct breakpoints of the other
    attributes. With ``restricted=True`` only weight vectors with at least
    one non-negative and one non-positive entry count, as a real CPT change
    requires.
    """
    if mode == "prior":
        if model.instance_count > SWEEP_LIMIT:
            raise OracleGuardError(model.instance_count)
        sums = _suffix_sums(model)
        return int(np.unique(sums[np.isfinite(sums)]).size) + 1
    attribute = int(mode)
    others = model.instance_count // model.attributes[attribute].cardinality
    if others > SWEEP_LIMIT:
        raise OracleGuardError(others)
    b = model.attributes[attribute].cardinality
    sums = _suffix_sums(model, skip=attribute)
    # instance with other-part s is positive iff w' >= rho - prior - s
    breaks = np.unique(rho - model.prior_log_odds - sums[np.isfinite(sums)])
    d = int(breaks.size)
    if not restricted:
        return (d + 1) ** b
    z = int(np.count_nonzero(breaks <= 0))
    return (d + 1) ** b - z**b - (d - z) ** b

