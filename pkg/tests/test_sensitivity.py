from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import RHO_90, weights_model
from nbodd.compiler import compile_classifier
from nbodd.interval import Interval, contains
from nbodd.model import generate_random_model
from nbodd.oracle import (
    enumerate_instances,
    oracle_equivalent,
    prior_interval_from_margins,
    weight_intervals_from_margins,
)
from nbodd.sensitivity import (
    OracleGuardError,
    count_prior_classifiers,
    count_weight_classifiers,
    prior_interval_from_odd,
    prior_prob_interval,
    sensitivity_report,
    sweep_distinct_classifiers,
    weight_intervals_for,
)


def test_example_prior_interval(pregnancy):
    iv = prior_interval_from_odd(compile_classifier(pregnancy, RHO_90))
    assert iv.lo == pytest.approx(0.772, abs=1e-3)
    assert iv.hi == pytest.approx(3.479, abs=1e-3)
    lo, hi = prior_prob_interval(iv)
    assert lo == pytest.approx(0.684, abs=1e-3) and hi == pytest.approx(0.970, abs=1e-3)


def test_example_weight_intervals(pregnancy):
    pos, neg = weight_intervals_for(pregnancy, RHO_90, pregnancy.attribute_index("U"))
    assert (pos.lo, pos.hi) == pytest.approx((0.791, 3.498), abs=1e-3)
    assert (neg.lo, neg.hi) == pytest.approx((-3.294, 0.791), abs=1e-3)


def test_prob_interval_edges():
    assert prior_prob_interval(Interval.at_least(0.0)) == (0.5, 1.0)
    assert prior_prob_interval(Interval.full()) == (0.0, 1.0)


def test_no_attribute_interval():
    res = compile_classifier(weights_model(2.0, []), 0.5)
    assert prior_interval_from_odd(res) == Interval.at_least(0.5)


def test_single_neutral_attribute():
    m = weights_model(1.0, [(0.0, 0.0)])
    for iv in weight_intervals_for(m, 0.5, 0):
        assert contains(iv, 0.0) and iv.hi == math.inf


@pytest.mark.parametrize("seed", range(5))
def test_report_contains_current_parameters(seed):
    m = generate_random_model(6, [2, 3, 2, 2, 4, 2], seed=seed)
    report = sensitivity_report(m, 0.2)
    assert contains(report.prior_interval, m.prior_log_odds)
    for ws in report.weights:
        for w, iv in zip(ws.current, ws.intervals):
            assert contains(iv, w)


@pytest.mark.parametrize("seed", range(5))
def test_report_matches_margins(seed):
    m = generate_random_model(8, 2, seed=seed)
    rho = 0.0
    margins = enumerate_instances(m, rho).margins
    report = sensitivity_report(m, rho)
    want = prior_interval_from_margins(m, rho, margins)
    assert report.prior_interval.lo == pytest.approx(want.lo, abs=1e-9)
    assert report.prior_interval.hi == pytest.approx(want.hi, abs=1e-9)
    for i, ws in enumerate(report.weights):
        for got, exp in zip(ws.intervals, weight_intervals_from_margins(m, rho, margins, i)):
            assert got.lo == pytest.approx(exp.lo, abs=1e-9)
            assert got.hi == pytest.approx(exp.hi, abs=1e-9)


@pytest.mark.parametrize("seed", range(4))
def test_weight_change_inside_interval_keeps_classifier(seed):
    m = generate_random_model(6, 2, seed=seed)
    report = sensitivity_report(m, 0.0)
    for i, ws in enumerate(report.weights):
        for j, iv in enumerate(ws.intervals):
            new = list(m.weights[i])
            for x in (iv.lo + 1e-6, iv.hi - 1e-6):
                if math.isfinite(x):
                    new[j] = x
                    assert oracle_equivalent(m, m.with_weights(i, new), 0.0)
            for x in (iv.lo - 1e-6, iv.hi + 1e-6):
                if math.isfinite(x):
                    new[j] = x
                    assert not oracle_equivalent(m, m.with_weights(i, new), 0.0)


@pytest.mark.parametrize("seed", range(5))
def test_prior_interval_independent_of_order(seed):
    m = generate_random_model(7, [2, 3, 2, 2, 3, 2, 2], seed=seed)
    rng = np.random.default_rng(seed)
    base = compile_classifier(m, 0.0).root_interval
    for _ in range(10):
        iv = compile_classifier(m, 0.0, [int(i) for i in rng.permutation(7)]).root_interval
        assert iv.lo == pytest.approx(base.lo, abs=1e-12)
        assert iv.hi == pytest.approx(base.hi, abs=1e-12)


def test_prior_counts():
    assert count_prior_classifiers([2, 2, 2]) == 9
    assert count_prior_classifiers([]) == 2
    for n in range(1, 10):
        assert count_prior_classifiers([2] * n) == 2**n + 1


def test_weight_counts():
    assert count_weight_classifiers(4, 2) == 17
    for k in range(10):
        assert count_weight_classifiers(k, 1) == 1
    for n in range(2, 9):
        assert count_weight_classifiers(2 ** (n - 1), 2) == 2 ** (2 * n - 3) + 2**n + 1


def test_prior_sweep_generic_and_colliding():
    m = weights_model(0.0, [(1.0, -0.1), (0.37, -0.5), (0.05, 0.9)])
    assert sweep_distinct_classifiers(m, 0.0) == 9
    flat = weights_model(0.0, [(1.0, -1.0)] * 3)
    assert sweep_distinct_classifiers(flat, 0.0) < 9


@pytest.mark.parametrize("seed", range(10))
def test_sweeps_respect_bounds(seed):
    m = generate_random_model(5, 2, seed=seed)
    assert sweep_distinct_classifiers(m, 0.0) == count_prior_classifiers(m.cardinalities)
    k = m.instance_count // 2
    for i in range(m.n):
        assert sweep_distinct_classifiers(m, 0.0, i, restricted=True) <= count_weight_classifiers(k, 2)
        assert sweep_distinct_classifiers(m, 0.0, i) == (k + 1) ** 2


def test_example_counts(pregnancy):
    assert sweep_distinct_classifiers(pregnancy, RHO_90) == 9
    u = pregnancy.attribute_index("U")
    assert sweep_distinct_classifiers(pregnancy, RHO_90, u, restricted=True) == 17


def test_sweep_guard():
    with pytest.raises(OracleGuardError):
        sweep_distinct_classifiers(weights_model(0.0, [(0.1, -0.1)] * 17), 0.0)


def test_report_dict_is_json_ready(pregnancy):
    import json

    d = sensitivity_report(pregnancy, RHO_90).to_dict()
    assert d["prior"]["interval"][0] == pytest.approx(0.7715, abs=1e-3)
    assert [a["name"] for a in d["attributes"]] == ["U", "B", "S"]
    json.dumps(d)


def test_realizability_flag(pregnancy):
    from nbodd.sensitivity import _realizable

    assert all(ws.realizable for ws in sensitivity_report(pregnancy, RHO_90).weights)
    # every value must rise above zero: no pair of CPT rows does that
    assert not _realizable([Interval(0.5, 2.0), Interval(0.1, 1.0)])
    assert _realizable([Interval(0.5, 2.0), Interval(-1.0, 1.0)])
    assert _realizable([Interval(-1.0, 0.5)])
    assert not _realizable([Interval(0.1, 0.5)])
