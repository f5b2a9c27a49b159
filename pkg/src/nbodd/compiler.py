"""Compile a naive Bayes classifier into an ordered decision diagram.

The compiler walks partial instantiations depth-first. Each depth ``k`` has a
cache of nodes keyed by the interval of prior log-odds values for which the
sub-classifier over the remaining attributes stays the same. A path whose
accumulated log-odds falls inside a cached interval reuses that node, so the
diagram has at most one node per equivalence class per depth.
"""

from __future__ import annotations

import bisect
import math
import time
from dataclasses import dataclass, field
from typing import Sequence

from .interval import Interval, contains, intersect, preimage
from .model import NaiveBayesModel, validate_model
from .odd import Odd, OddBuilder
from .ordering import make_order


class CompileError(ValueError):
    pass


class CacheInvariantError(RuntimeError):
    pass


class DepthCache:
    """Disjoint intervals sorted by lower endpoint, each mapped to a node."""

    __slots__ = ("_los", "_intervals", "_nodes")

    def __init__(self):
        self._los: list[float] = []
        self._intervals: list[Interval] = []
        self._nodes: list[int] = []

    def __len__(self) -> int:
        return len(self._nodes)

    def items(self) -> list[tuple[Interval, int]]:
        return list(zip(self._intervals, self._nodes))

    def find(self, x: float) -> int | None:
        i = bisect.bisect_right(self._los, x) - 1
        if i >= 0 and contains(self._intervals[i], x):
            return self._nodes[i]
        return None

    def store(self, interval: Interval, node: int) -> None:
        if interval.is_empty:
            raise CacheInvariantError(f"node {node} has an empty equivalence interval")
        i = bisect.bisect_right(self._los, interval.lo)
        if i > 0 and self._intervals[i - 1].hi > interval.lo:
            raise CacheInvariantError(
                f"interval {interval} overlaps cached {self._intervals[i - 1]}"
            )
        if i < len(self._los) and self._los[i] < interval.hi:
            raise CacheInvariantError(f"interval {interval} overlaps cached {self._intervals[i]}")
        self._los.insert(i, interval.lo)
        self._intervals.insert(i, interval)
        self._nodes.insert(i, node)


@dataclass
class CompilerState:
    """Everything one compilation mutates: caches, node arena, node intervals."""

    model: NaiveBayesModel
    rho: float
    order: tuple[int, ...]
    builder: OddBuilder
    caches: list[DepthCache]
    intervals: dict[int, Interval] = field(default_factory=dict)
    values: dict[int, float] = field(default_factory=dict)
    check: bool = False
    # weight rows permuted into compilation order
    weights: list[tuple[float, ...]] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.order)


@dataclass(frozen=True)
class CompilationResult:
    odd: Odd
    root_interval: Interval
    cache_sizes: tuple[int, ...]
    root_child_intervals: tuple[Interval, ...]
    order: tuple[int, ...]
    rho: float
    bound: int
    seconds: float
    node_intervals: tuple[Interval, ...] = field(repr=False)
    node_values: tuple[float, ...] = field(repr=False)

    @property
    def node_count(self) -> int:
        return len(self.odd.nodes)

    def stats(self) -> dict:
        return {
            "order": [self.odd.order[i].name for i in range(self.odd.n)],
            "rho": self.rho,
            "cache_sizes": list(self.cache_sizes),
            "nodes": self.node_count,
            "bound": self.bound,
            "root_interval": [self.root_interval.lo, self.root_interval.hi],
            "seconds": self.seconds,
        }


def find_in_cache(state: CompilerState, depth: int, x: float) -> int | None:
    return state.caches[depth].find(x)


def build_sub_odd(k: int, v: float, state: CompilerState) -> int:
    """Build the node for a path of length ``k`` with accumulated log-odds ``v``.

    Each child's interval, pulled back through that edge's weight, constrains
    the set of prior values for which this sub-classifier is unchanged; the
    node's interval is the intersection over all edges.
    """
    children = []
    node_interval = Interval.full()
    for w in state.weights[k]:
        v_child = v + w
        child = state.caches[k + 1].find(v_child)
        if child is None:
            if k + 1 == state.n:
                raise CacheInvariantError(f"sink intervals do not cover {v_child}")
            child = build_sub_odd(k + 1, v_child, state)
        children.append(child)
        node_interval = intersect(node_interval, preimage(state.intervals[child], w))
    node = state.builder.add(k, children)
    state.intervals[node] = node_interval
    state.values[node] = v
    if state.check and not contains(node_interval, v):
        raise CacheInvariantError(f"creating value {v} not in node interval {node_interval}")
    state.caches[k].store(node_interval, node)
    return node


def _check_infinities(model: NaiveBayesModel) -> None:
    values = [model.prior_log_odds] + [w for ws in model.weights for w in ws]
    signs = {x > 0 for x in values if math.isinf(x)}
    if len(signs) == 2:
        raise CompileError(
            "model mixes +inf and -inf parameters; some instance would sum to +inf + -inf"
        )


def compile_classifier(
    model: NaiveBayesModel,
    rho: float,
    order: Sequence[int] | None = None,
    *,
    check: bool = False,
) -> CompilationResult:
    """Compile the classifier ``log O(c|e) >= rho`` under an attribute order.

    ``order`` lists model attribute indices, first tested first; it defaults
    to ascending evidential impact. ``check`` verifies cache invariants on
    every insertion.
    """
    if math.isnan(rho) or math.isinf(rho):
        raise CompileError(f"threshold must be finite, got {rho}")
    validate_model(model).raise_if_invalid()
    _check_infinities(model)
    if order is None:
        order = make_order(model, "asc")
    order = tuple(order)
    if sorted(order) != list(range(model.n)):
        raise CompileError(f"order {order} is not a permutation of 0..{model.n - 1}")

    started = time.perf_counter()
    attrs = [model.attributes[i] for i in order]
    builder = OddBuilder(attrs)
    state = CompilerState(
        model=model,
        rho=rho,
        order=order,
        builder=builder,
        caches=[DepthCache() for _ in range(model.n + 1)],
        check=check,
        weights=[model.weights[i] for i in order],
    )
    one, zero = builder.sink(1), builder.sink(0)
    state.intervals[one] = Interval.at_least(rho)
    state.intervals[zero] = Interval.below(rho)
    state.caches[model.n].store(state.intervals[one], one)
    state.caches[model.n].store(state.intervals[zero], zero)

    v0 = model.prior_log_odds
    if model.n == 0:
        # cache 0 is the sink cache
        root = state.caches[0].find(v0)
    else:
        root = build_sub_odd(0, v0, state)

    odd, remap = builder.freeze(root)
    seconds = time.perf_counter() - started
    inverse = {new: old for old, new in remap.items()}
    node_intervals = tuple(state.intervals[inverse[i]] for i in range(len(odd.nodes)))
    node_values = tuple(state.values.get(inverse[i], math.nan) for i in range(len(odd.nodes)))
    root_node = builder.nodes[root]
    child_intervals = tuple(state.intervals[c] for c in root_node.children)
    # the unused sink is dropped by freeze but still occupies cache n
    cache_sizes = tuple(len(c) for c in state.caches)
    return CompilationResult(
        odd=odd,
        root_interval=state.intervals[root],
        cache_sizes=cache_sizes,
        root_child_intervals=child_intervals,
        order=order,
        rho=rho,
        bound=size_bound(model.cardinalities, order),
        seconds=seconds,
        node_intervals=node_intervals,
        node_values=node_values,
    )


def size_bound(cardinalities: Sequence[int], order: Sequence[int] | None = None) -> int:
    """Upper bound on compiled node count, sinks included.

    Sum over depths ``k = 0..n`` of ``min(prefix(k), suffix(k) + 1)`` where
    prefix/suffix are the instantiation counts of the first ``k`` and the
    remaining attributes. Python integers are exact, so no saturation.
    """
    cards = [cardinalities[i] for i in order] if order is not None else list(cardinalities)
    n = len(cards)
    suffix = [1] * (n + 1)
    for k in range(n - 1, -1, -1):
        suffix[k] = suffix[k + 1] * cards[k]
    total, prefix = 0, 1
    for k in range(n + 1):
        total += min(prefix, suffix[k] + 1)
        if k < n:
            prefix *= cards[k]
    return total
