"""Exhaustive-enumeration ground truth.

Everything here visits every instance, so it is exponential in the number of
attributes and guarded by :data:`MAX_INSTANCES`. Log-odds are accumulated
with the same left fold (prior, then attributes in model order) as
:func:`nbodd.model.log_odds_of_instance`, so results are bit-identical to
per-instance evaluation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .interval import Interval
from .model import NaiveBayesModel

MAX_INSTANCES = 2**24
_BLOCK = 2**16


class OracleGuardError(RuntimeError):
    def __init__(self, size: int):
        self.size = size
        super().__init__(f"instance space has {size} instances, above the limit {MAX_INSTANCES}")


@dataclass(frozen=True)
class Margins:
    """Extreme log-odds of positive and negative instances.

    ``alpha`` is the smallest log-odds of a positive instance (``inf`` if
    none), ``beta`` the largest of a negative one (``-inf`` if none). The
    per-value versions restrict to instances containing that value.
    """

    alpha: float
    beta: float
    value_alpha: tuple[tuple[float, ...], ...]
    value_beta: tuple[tuple[float, ...], ...]


@dataclass(frozen=True)
class OracleReport:
    rho: float
    margins: Margins
    positive: int
    negative: int
    shape: tuple[int, ...] = ()
    log_odds: np.ndarray | None = None  # lexicographic instance order

    @property
    def labels(self) -> np.ndarray | None:
        return None if self.log_odds is None else (self.log_odds >= self.rho)

    def rows(self):
        """Yield ``(instance, log_odds, label)`` in lexicographic order."""
        if self.log_odds is None:
            raise ValueError("report was built without the instance table")
        for flat, x in enumerate(self.log_odds):
            yield tuple(int(j) for j in np.unravel_index(flat, self.shape)), float(x), int(x >= self.rho)


def guard(model: NaiveBayesModel, limit: int = MAX_INSTANCES) -> int:
    size = model.instance_count
    if size > limit:
        raise OracleGuardError(size)
    return size


def _fold(start: np.ndarray, weights) -> np.ndarray:
    arr = start
    for ws in weights:
        arr = (arr[:, None] + np.asarray(ws, dtype=float)[None, :]).ravel()
    return arr


def _split(model: NaiveBayesModel) -> int:
    """Number of leading attributes enumerated in Python; the rest are vectorized."""
    block, k = 1, model.n
    while k > 0 and block * model.attributes[k - 1].cardinality <= _BLOCK:
        k -= 1
        block *= model.attributes[k].cardinality
    return k


def iter_blocks(model: NaiveBayesModel):
    """Yield ``(prefix, log_odds_block)`` covering all instances lexicographically."""
    k = _split(model)
    prefix_ranges = [range(a.cardinality) for a in model.attributes[:k]]
    with np.errstate(invalid="ignore"):
        for prefix in itertools.product(*prefix_ranges):
            v = model.prior_log_odds
            for ws, j in zip(model.weights[:k], prefix):
                v += ws[j]
            yield prefix, _fold(np.array([v]), model.weights[k:])


def all_log_odds(model: NaiveBayesModel) -> np.ndarray:
    guard(model)
    return np.concatenate([block for _, block in iter_blocks(model)])


def enumerate_instances(model: NaiveBayesModel, rho: float, table: bool = True) -> OracleReport:
    """Classify every instance and compute global and per-value margins.

    With ``table=False`` only running extrema and counts are kept, so memory
    does not grow with the instance count.
    """
    guard(model)
    k = _split(model)
    tail_shape = tuple(a.cardinality for a in model.attributes[k:])
    alpha, beta = math.inf, -math.inf
    va = [[math.inf] * a.cardinality for a in model.attributes]
    vb = [[-math.inf] * a.cardinality for a in model.attributes]
    pos = neg = 0
    chunks = []
    for prefix, block in iter_blocks(model):
        if table:
            chunks.append(block)
        lab = block >= rho
        npos = int(lab.sum())
        pos += npos
        neg += block.size - npos
        pvals = np.where(lab, block, math.inf).reshape(tail_shape or (1,))
        nvals = np.where(lab, -math.inf, block).reshape(tail_shape or (1,))
        pmin, nmax = float(pvals.min()), float(nvals.max())
        alpha, beta = min(alpha, pmin), max(beta, nmax)
        for i, j in enumerate(prefix):
            va[i][j] = min(va[i][j], pmin)
            vb[i][j] = max(vb[i][j], nmax)
        for t in range(len(tail_shape)):
            axes = tuple(a for a in range(len(tail_shape)) if a != t)
            pm = pvals.min(axis=axes) if axes else pvals
            nm = nvals.max(axis=axes) if axes else nvals
            i = k + t
            for j in range(tail_shape[t]):
                va[i][j] = min(va[i][j], float(pm[j]))
                vb[i][j] = max(vb[i][j], float(nm[j]))
    margins = Margins(alpha, beta, tuple(map(tuple, va)), tuple(map(tuple, vb)))
    report = OracleReport(
        rho=rho,
        margins=margins,
        positive=pos,
        negative=neg,
        shape=tuple(model.cardinalities),
        log_odds=np.concatenate(chunks) if table else None,
    )
    return report


def oracle_classify_all(model: NaiveBayesModel, rho: float) -> np.ndarray:
    """Labels of all instances in lexicographic order, as a bool array."""
    return all_log_odds(model) >= rho


def _same_specs(m1: NaiveBayesModel, m2: NaiveBayesModel) -> None:
    if m1.attributes != m2.attributes:
        raise ValueError("models have different attribute specifications")


def oracle_equivalent(m1: NaiveBayesModel, m2: NaiveBayesModel, rho: float) -> bool:
    _same_specs(m1, m2)
    guard(m1)
    for (_, b1), (_, b2) in zip(iter_blocks(m1), iter_blocks(m2)):
        if not np.array_equal(b1 >= rho, b2 >= rho):
            return False
    return True


def oracle_disagreements(m1: NaiveBayesModel, m2: NaiveBayesModel, rho: float) -> int:
    _same_specs(m1, m2)
    return int(np.count_nonzero(oracle_classify_all(m1, rho) != oracle_classify_all(m2, rho)))


def prior_interval_from_margins(model: NaiveBayesModel, rho: float, margins: Margins) -> Interval:
    """``[prior + rho - alpha, prior + rho - beta)`` from exhaustive margins."""
    p = model.prior_log_odds
    return Interval(p + rho - margins.alpha, p + rho - margins.beta)


def weight_intervals_from_margins(
    model: NaiveBayesModel, rho: float, margins: Margins, attribute: int
) -> list[Interval]:
    return [
        Interval(w + rho - a, w + rho - b)
        for w, a, b in zip(
            model.weights[attribute], margins.value_alpha[attribute], margins.value_beta[attribute]
        )
    ]


def table_csv(model: NaiveBayesModel, report: OracleReport) -> str:
    """Full instance table as CSV: ``instance,log_odds,label``."""
    lines = ["instance,log_odds,label"]
    for idx, x, lab in report.rows():
        inst = ";".join(f"{a.name}={a.values[j]}" for a, j in zip(model.attributes, idx))
        lines.append(f"{inst},{x!r},{lab}")
    return "\n".join(lines) + "\n"

