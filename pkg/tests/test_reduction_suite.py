"""Reduction on learned models.

Models learned from categorical data shaped like common benchmark sets
(sparse class-conditional distributions, Laplace smoothing) plus the
tic-tac-toe endgames. Reduction removes few nodes from these diagrams.
"""

from __future__ import annotations

import numpy as np
import pytest

from nbodd.compiler import compile_classifier
from nbodd.datasets import SQUARES, tic_tac_toe_endgames
from nbodd.model import learn_from_rows
from nbodd.odd import reduce

SHAPES = {
    "votes": [3] * 16,
    "spect": [2] * 22,
    "breast": [10] * 9,
    "hepatitis": [2] * 13 + [4, 4, 4, 3, 3, 3],
}


def sampled_rows(cards, n_rows=500, seed=0):
    rng = np.random.default_rng(seed)
    y = rng.uniform(size=n_rows) < 0.5
    cols = []
    for b in cards:
        pc, pn = rng.dirichlet(np.full(b, 0.3), size=2)
        cols.append([rng.choice(b, p=pc if yy else pn) for yy in y])
    header = [f"a{i}" for i in range(len(cards))] + ["cls"]
    rows = [[f"v{col[r]}" for col in cols] + ["p" if y[r] else "n"] for r in range(n_rows)]
    return header, rows


def learned_models():
    yield "tic-tac-toe", learn_from_rows(
        [*SQUARES, "class"], [[*b, lab] for b, lab in tic_tac_toe_endgames()],
        "class", positive="positive",
    )
    for name, cards in SHAPES.items():
        header, rows = sampled_rows(cards)
        yield name, learn_from_rows(header, rows, "cls", positive="p")


@pytest.fixture(scope="module")
def shrinkage():
    out = {}
    for name, m in learned_models():
        res = compile_classifier(m, 0.0)
        red = reduce(res.odd)
        assert len(red.nodes) <= res.node_count <= res.bound
        out[name] = 1 - len(red.nodes) / res.node_count
    return out


def test_median_shrinkage_small(shrinkage):
    assert float(np.median(list(shrinkage.values()))) <= 0.05


def test_reduction_never_grows(shrinkage):
    assert all(0 <= s < 1 for s in shrinkage.values())
