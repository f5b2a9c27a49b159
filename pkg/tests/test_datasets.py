from __future__ import annotations

import csv
from collections import Counter

from nbodd.compiler import compile_classifier, size_bound
from nbodd.datasets import SQUARES, tic_tac_toe_endgames, write_tic_tac_toe_csv
from nbodd.model import learn_from_csv


def test_endgame_counts():
    boards = tic_tac_toe_endgames()
    assert len(boards) == 958
    assert Counter(label for _, label in boards) == {"positive": 626, "negative": 332}


def test_boards_are_legal():
    for board, _ in tic_tac_toe_endgames():
        xs, os_ = board.count("x"), board.count("o")
        assert xs - os_ in (0, 1)


def test_csv_and_learned_model(tmp_path):
    path = tmp_path / "ttt.csv"
    assert write_tic_tac_toe_csv(path) == 958
    with open(path, newline="") as fh:
        assert next(csv.reader(fh)) == [*SQUARES, "class"]
    m = learn_from_csv(path, "class", positive="positive")
    assert m.n == 9 and m.cardinalities == [3] * 9
    res = compile_classifier(m, 0.0)
    assert size_bound([3] * 9) == 247
    assert res.node_count <= 247
