from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import RHO_90, in_order
from nbodd.compiler import compile_classifier
from nbodd.model import AttributeSpec, classify, generate_random_model
from nbodd.odd import Odd, evaluate, iter_instances, node_count, reduce
from nbodd.ops import (
    FeatureCondition,
    OrderMismatchError,
    all_instances_satisfy,
    apply,
    complement,
    disagreement,
    equivalent,
    format_instance,
    iter_sink_instances,
    model_count,
)

BIN = ("v0", "v1")


def table(odd):
    return [evaluate(odd, e) for e in iter_instances(odd.cardinalities)]


def pair(seed, n=5, cards=None):
    """Two compiled diagrams over one order, from models sharing attributes."""
    rng = np.random.default_rng(seed)
    cards = cards or [int(c) for c in rng.integers(2, 4, size=n)]
    m1 = generate_random_model(n, cards, seed=seed)
    m2 = generate_random_model(n, cards, seed=seed + 1000)
    order = [int(i) for i in rng.permutation(n)]
    rho = float(rng.normal(scale=0.5))
    return compile_classifier(m1, rho, order).odd, compile_classifier(m2, rho, order).odd


def test_count_constant_sink():
    odd = Odd.constant([AttributeSpec(f"E{i}", BIN) for i in range(10)], 1)
    assert model_count(odd) == (1024, 0)


def test_count_example(pregnancy):
    res = compile_classifier(pregnancy, RHO_90)
    want = sum(classify(pregnancy, RHO_90, e) for e in itertools.product(range(2), repeat=3))
    assert model_count(res.odd) == (want, 8 - want)
    assert model_count(reduce(res.odd)) == (want, 8 - want)


@pytest.mark.parametrize("seed", range(20))
@pytest.mark.parametrize("op", ["and", "or", "xor"])
def test_apply_matches_pointwise(seed, op):
    d1, d2 = pair(seed)
    fn = {"and": lambda a, b: a & b, "or": lambda a, b: a | b, "xor": lambda a, b: a ^ b}[op]
    out = apply(d1, d2, op)
    assert table(out) == [fn(a, b) for a, b in zip(table(d1), table(d2))]


@pytest.mark.parametrize("seed", range(10))
def test_apply_identities(seed):
    d, _ = pair(seed)
    one = Odd.constant(d.order, 1)
    assert equivalent(apply(d, one, "and"), d)
    self_xor = apply(d, d, "xor")
    assert node_count(self_xor) == 1 and self_xor.nodes[0].label == 0
    assert table(complement(d)) == [1 - x for x in table(d)]


@pytest.mark.parametrize("seed", range(20))
def test_equivalence_and_disagreement(seed):
    d1, d2 = pair(seed)
    t1, t2 = table(d1), table(d2)
    diff = sum(a != b for a, b in zip(t1, t2))
    assert equivalent(d1, d2) == (diff == 0)
    assert equivalent(d1, d2) == (model_count(apply(d1, d2, "xor"))[0] == 0)
    count, witnesses = disagreement(d1, d2, limit=5)
    assert count == diff and len(witnesses) == min(5, diff)
    for w in witnesses:
        assert evaluate(d1, w) != evaluate(d2, w)


def test_equivalent_under_priors_in_interval(pregnancy):
    order = [0, 1, 2]
    base = compile_classifier(pregnancy.with_prior_log_odds(1.0), RHO_90, order).odd
    inside = compile_classifier(pregnancy.with_prior_log_odds(3.0), RHO_90, order).odd
    outside = compile_classifier(pregnancy.with_prior_log_odds(3.6), RHO_90, order).odd
    assert equivalent(base, inside)
    assert not equivalent(base, outside)
    count, witnesses = disagreement(base, outside)
    assert count >= 1
    assert all(evaluate(base, w) != evaluate(outside, w) for w in witnesses)


def test_complement_disagrees_everywhere():
    d, _ = pair(3)
    count, _ = disagreement(d, complement(d), limit=0)
    assert count == len(table(d))


def test_identical_diagrams_agree():
    d, _ = pair(4)
    assert disagreement(d, d) == (0, [])


def test_order_mismatch(pregnancy):
    a = compile_classifier(pregnancy, 0.0, [0, 1, 2]).odd
    b = compile_classifier(pregnancy, 0.0, [2, 1, 0]).odd
    with pytest.raises(OrderMismatchError):
        equivalent(a, b)
    with pytest.raises(OrderMismatchError):
        apply(a, b, "and")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([0, 1]))
def test_sink_instances_lexicographic_and_complete(seed, label):
    d, _ = pair(seed, n=4)
    want = [e for e in iter_instances(d.cardinalities) if evaluate(d, e) == label]
    assert list(iter_sink_instances(d, label)) == want
    assert list(iter_sink_instances(reduce(d), label)) == want


def test_format_instance(pregnancy):
    d = compile_classifier(pregnancy, 0.0, [0, 1, 2]).odd
    assert format_instance(d, [0, 1, 0]) == "U=+ve,B=-ve,S=+ve"


def brute_satisfy(odd, label, cond):
    return all(
        cond.holds(odd, e) for e in iter_instances(odd.cardinalities) if evaluate(odd, e) == label
    )


def test_satisfy_vacuous_and_constant():
    order = [AttributeSpec("E1", BIN)]
    cond = FeatureCondition.conj(("E1", "v0"))
    assert all_instances_satisfy(Odd.constant(order, 0), "positive", cond)
    assert not all_instances_satisfy(Odd.constant(order, 1), "positive", cond)


def test_satisfy_example(pregnancy):
    d = compile_classifier(pregnancy, RHO_90).odd
    cond = FeatureCondition.conj(("U", "+ve"))
    assert all_instances_satisfy(d, "positive", cond) == brute_satisfy(d, 1, cond)


@pytest.mark.parametrize("seed", range(40))
def test_satisfy_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    d, _ = pair(seed, n=4)
    red = reduce(d) if seed % 2 else d
    k = int(rng.integers(1, 4))
    attrs = rng.choice(4, size=k, replace=False)
    lits = [
        (red.order[a].name, red.order[a].values[int(rng.integers(red.order[a].cardinality))])
        for a in attrs
    ]
    for cond in (FeatureCondition("and", lits), FeatureCondition("or", lits)):
        for label, polarity in ((1, "positive"), (0, "negative")):
            assert all_instances_satisfy(red, polarity, cond) == brute_satisfy(red, label, cond)


def test_satisfy_rejects_unknown_literal(pregnancy):
    d = compile_classifier(pregnancy, RHO_90).odd
    with pytest.raises(ValueError):
        all_instances_satisfy(d, 1, FeatureCondition.conj(("X", "+ve")))
    with pytest.raises(ValueError):
        all_instances_satisfy(d, 1, FeatureCondition.conj(("U", "maybe")))


def test_condition_validation():
    with pytest.raises(ValueError):
        FeatureCondition("xor", ())
    with pytest.raises(ValueError):
        FeatureCondition.conj(("A", "x"), ("A", "y"))


def test_diagrams_from_models_evaluate_in_order(pregnancy):
    res = compile_classifier(pregnancy, RHO_90, [2, 0, 1])
    for e in itertools.product(range(2), repeat=3):
        assert evaluate(res.odd, in_order(e, res.order)) == classify(pregnancy, RHO_90, e)


@pytest.mark.parametrize("seed", range(10))
def test_truth_table_matches_evaluate(seed):
    from nbodd.ops import truth_table

    d, _ = pair(seed)
    for odd in (d, reduce(d)):
        t = truth_table(odd)
        assert t.shape == tuple(odd.cardinalities)
        assert [int(t[e]) for e in iter_instances(odd.cardinalities)] == table(odd)


def test_truth_table_constant():
    from nbodd.ops import truth_table

    odd = Odd.constant([AttributeSpec("A", BIN), AttributeSpec("B", ("x", "y", "z"))], 1)
    assert truth_table(odd).shape == (2, 3) and truth_table(odd).all()
