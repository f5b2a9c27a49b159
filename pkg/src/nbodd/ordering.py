"""Attribute-order heuristics for compilation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import NaiveBayesModel

KINDS = ("random", "desc", "asc", "explicit")


@dataclass(frozen=True)
class OrderingHeuristic:
    kind: str
    seed: int | None = None
    permutation: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ordering heuristic {self.kind!r}")
        if self.kind == "explicit" and self.permutation is None:
            raise ValueError("explicit ordering needs a permutation")


def evidential_impact(model: NaiveBayesModel, attribute: int) -> float:
    """Spread of an attribute's weights: max minus min over its values."""
    ws = model.weights[attribute]
    return max(ws) - min(ws)


def make_order(
    model: NaiveBayesModel, heuristic: OrderingHeuristic | str = "asc"
) -> tuple[int, ...]:
    if isinstance(heuristic, str):
        heuristic = parse_order(heuristic, model)
    n = model.n
    if heuristic.kind == "explicit":
        perm = tuple(heuristic.permutation)
        if sorted(perm) != list(range(n)):
            raise ValueError(f"{perm} is not a permutation of {n} attributes")
        return perm
    if heuristic.kind == "random":
        rng = np.random.default_rng(heuristic.seed)
        return tuple(int(i) for i in rng.permutation(n))
    impacts = [evidential_impact(model, i) for i in range(n)]
    if heuristic.kind == "asc":
        return tuple(sorted(range(n), key=lambda i: (impacts[i], i)))
    return tuple(sorted(range(n), key=lambda i: (-impacts[i], i)))


def parse_order(flag: str, model: NaiveBayesModel | None = None) -> OrderingHeuristic:
    """Parse ``random:<seed> | desc | asc | explicit:<comma-list>``.

    Explicit lists may name attributes or give 0-based indices. A bare
    ``random`` uses seed 0 so the result is still reproducible.
    """
    kind, _, arg = flag.partition(":")
    if kind in ("asc", "desc") and not arg:
        return OrderingHeuristic(kind)
    if kind == "random":
        return OrderingHeuristic("random", seed=int(arg) if arg else 0)
    if kind == "explicit" and arg:
        perm = []
        for tok in arg.split(","):
            tok = tok.strip()
            if tok.isdigit():
                perm.append(int(tok))
            elif model is not None:
                perm.append(model.attribute_index(tok))
            else:
                raise ValueError(f"cannot resolve attribute {tok!r} without a model")
        return OrderingHeuristic("explicit", permutation=tuple(perm))
    raise ValueError(f"bad order flag {flag!r}")
