from __future__ import annotations

import numpy as np
import pytest

from conftest import weights_model
from nbodd.compiler import compile_classifier
from nbodd.model import ModelError, generate_random_model
from nbodd.ordering import OrderingHeuristic, evidential_impact, make_order, parse_order


def test_impact_values():
    assert evidential_impact(weights_model(0, [(2.0, -1.0)]), 0) == 3.0
    assert evidential_impact(weights_model(0, [(0.4, 0.4, 0.4)]), 0) == 0.0
    assert evidential_impact(weights_model(0, [(0.5, -0.2, 1.1)]), 0) == pytest.approx(1.3)


def test_binary_impact_is_absolute_difference():
    m = generate_random_model(6, 2, seed=1)
    for i, (a, b) in enumerate(m.weights):
        assert evidential_impact(m, i) == abs(a - b)


def test_descending_and_ascending():
    m = weights_model(0, [(3.0, 0.0), (1.0, 0.0), (2.0, 0.0)])
    assert make_order(m, "desc") == (0, 2, 1)
    assert make_order(m, "asc") == (1, 2, 0)


def test_ties_keep_index_order():
    m = weights_model(0, [(1.0, 0.0)] * 4)
    assert make_order(m, "asc") == (0, 1, 2, 3)
    assert make_order(m, "desc") == (0, 1, 2, 3)


def test_random_is_seeded_permutation():
    m = generate_random_model(12, 2, seed=0)
    a = make_order(m, OrderingHeuristic("random", seed=5))
    assert a == make_order(m, "random:5")
    assert sorted(a) == list(range(12))
    assert a != make_order(m, "random:6")
    assert make_order(m, "random") == make_order(m, "random:0")


def test_explicit_orders(pregnancy):
    assert make_order(pregnancy, "explicit:S,U,B") == (2, 0, 1)
    assert make_order(pregnancy, "explicit:2,0,1") == (2, 0, 1)
    with pytest.raises(ValueError):
        make_order(pregnancy, "explicit:0,0,1")
    with pytest.raises(ModelError):
        make_order(pregnancy, "explicit:U,B,X")


@pytest.mark.parametrize("flag", ["sideways", "explicit:", "asc:3", "random:x"])
def test_bad_flags(flag):
    with pytest.raises(ValueError):
        parse_order(flag)


def test_ascending_beats_random_on_average():
    asc, rnd = [], []
    for s in np.random.SeedSequence(42).spawn(30):
        m = generate_random_model(10, 2, seed=s)
        asc.append(compile_classifier(m, 0.0, make_order(m, "asc")).node_count)
        seed = int(s.generate_state(1)[0])
        rnd.append(compile_classifier(m, 0.0, make_order(m, f"random:{seed}")).node_count)
    assert np.mean(asc) < np.mean(rnd)
