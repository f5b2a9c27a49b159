from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

import nbodd
from nbodd.model import classify, load_model

RHO_90 = math.log(0.9 / 0.1)


@pytest.fixture(scope="session")
def pregnancy():
    return load_model(nbodd.example_model_path())


@pytest.fixture(scope="session")
def pregnancy_path():
    return nbodd.example_model_path()


def in_order(instance, order):
    """Model-indexed instance rearranged to diagram order."""
    return [instance[i] for i in order]


def all_model_instances(model):
    return itertools.product(*(range(c) for c in model.cardinalities))


def agrees_everywhere(model, rho, result) -> bool:
    return all(
        nbodd.evaluate(result.odd, in_order(inst, result.order)) == classify(model, rho, inst)
        for inst in all_model_instances(model)
    )


def random_mixed_model(seed: int, max_n: int = 6, max_card: int = 4):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, max_n + 1))
    cards = [int(c) for c in rng.integers(2, max_card + 1, size=n)]
    return nbodd.generate_random_model(n, cards, seed), rng


def weights_model(prior_log_odds, weights, strict_zero=False):
    """Model given directly in log-odds space; attributes E1.. with values v0.."""
    from nbodd.model import AttributeSpec, NaiveBayesModel

    attrs = tuple(
        AttributeSpec(f"E{i + 1}", tuple(f"v{j}" for j in range(len(ws))))
        for i, ws in enumerate(weights)
    )
    return NaiveBayesModel(
        class_name="C",
        class_values=("c", "cbar"),
        prior_log_odds=float(prior_log_odds),
        attributes=attrs,
        weights=tuple(tuple(float(w) for w in ws) for ws in weights),
        strict_zero=strict_zero,
    )
