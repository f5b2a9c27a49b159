"""Queries and combinations on compiled diagrams.

All binary operations require both diagrams to share one attribute order
(same names, same values, same positions). Diagrams may skip attributes;
counting and enumeration account for the skipped levels.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .odd import Odd, OddBuilder, reduce

OPS = {"and": operator.and_, "or": operator.or_, "xor": operator.xor}


class OrderMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class FeatureCondition:
    """A conjunction or disjunction of ``(attribute name, value name)`` literals."""

    connective: str
    literals: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if self.connective not in ("and", "or"):
            raise ValueError(f"connective must be 'and' or 'or', got {self.connective!r}")
        object.__setattr__(self, "literals", tuple(tuple(lit) for lit in self.literals))
        if self.connective == "and":
            names = [a for a, _ in self.literals]
            if len(set(names)) != len(names):
                raise ValueError("a conjunction may hold at most one literal per attribute")

    @classmethod
    def conj(cls, *literals: tuple[str, str]) -> FeatureCondition:
        return cls("and", literals)

    @classmethod
    def disj(cls, *literals: tuple[str, str]) -> FeatureCondition:
        return cls("or", literals)

    def holds(self, odd: Odd, instance: Sequence[int]) -> bool:
        names = {a.name: i for i, a in enumerate(odd.order)}
        tests = (odd.order[names[a]].values[instance[names[a]]] == v for a, v in self.literals)
        return all(tests) if self.connective == "and" else any(tests)


def check_same_order(d1: Odd, d2: Odd) -> None:
    if d1.order != d2.order:
        raise OrderMismatchError(
            "diagrams use different attribute orders or value sets; "
            "recompile both under one order"
        )


def model_count(odd: Odd) -> tuple[int, int]:
    """``(positive, negative)`` instance counts in one bottom-up pass.

    An edge skipping levels multiplies by the number of joint values of the
    skipped attributes. Python integers keep the counts exact.
    """
    # suffix[p] = instantiations of positions p..n-1
    cards = odd.cardinalities
    suffix = [1] * (len(cards) + 1)
    for p in range(len(cards) - 1, -1, -1):
        suffix[p] = suffix[p + 1] * cards[p]

    def skipped(lo: int, hi: int) -> int:
        return suffix[lo] // suffix[hi]

    counts: list[int] = []
    for node in odd.nodes:
        if node.is_sink:
            counts.append(node.label)
            continue
        i = node.attr
        counts.append(sum(counts[c] * skipped(i + 1, odd.position(c)) for c in node.children))
    positive = counts[odd.root] * skipped(0, odd.position(odd.root))
    return positive, suffix[0] - positive


def truth_table(odd: Odd) -> np.ndarray:
    """Labels of every instance as a bool array with one axis per position.

    Built bottom-up: a node's table stacks its children's tables, each
    broadcast over the levels its edge skips. Memory is the instance count.
    """
    cards = odd.cardinalities
    n = len(cards)
    tables: list[np.ndarray] = []

    def lift(t: np.ndarray, child_pos: int, pos: int) -> np.ndarray:
        # extend a table over positions child_pos.. to positions pos..
        return np.broadcast_to(t, tuple(cards[pos:child_pos]) + t.shape)

    for node in odd.nodes:
        if node.is_sink:
            tables.append(np.array(bool(node.label)))
            continue
        p = node.attr
        tables.append(np.stack([
            lift(tables[c], odd.position(c), p + 1) for c in node.children
        ]))
    return np.ascontiguousarray(lift(tables[odd.root], odd.position(odd.root), 0)).reshape(
        tuple(cards[:n])
    )


def apply(d1: Odd, d2: Odd, op: str) -> Odd:
    """Pointwise boolean combination, returned reduced."""
    check_same_order(d1, d2)
    fn = OPS[op]
    builder = OddBuilder(d1.order)
    memo: dict[tuple[int, int], int] = {}

    def go(u: int, v: int) -> int:
        key = (u, v)
        if key in memo:
            return memo[key]
        nu, nv = d1.nodes[u], d2.nodes[v]
        if nu.is_sink and nv.is_sink:
            out = builder.sink(fn(nu.label, nv.label))
        else:
            level = min(d1.position(u), d2.position(v))
            cu = nu.children if nu.attr == level else None
            cv = nv.children if nv.attr == level else None
            b = d1.order[level].cardinality
            out = builder.make(
                level,
                [go(cu[j] if cu else u, cv[j] if cv else v) for j in range(b)],
            )
        memo[key] = out
        return out

    return builder.freeze(go(d1.root, d2.root))[0]


def complement(odd: Odd) -> Odd:
    return apply(odd, Odd.constant(odd.order, 1), "xor")


def equivalent(d1: Odd, d2: Odd) -> bool:
    """Same function? Simultaneous descent over reduced forms, memoized on pairs."""
    check_same_order(d1, d2)
    r1, r2 = reduce(d1), reduce(d2)
    seen: set[tuple[int, int]] = set()
    stack = [(r1.root, r2.root)]
    while stack:
        u, v = stack.pop()
        if (u, v) in seen:
            continue
        seen.add((u, v))
        nu, nv = r1.nodes[u], r2.nodes[v]
        if nu.is_sink and nv.is_sink:
            if nu.label != nv.label:
                return False
            continue
        level = min(r1.position(u), r2.position(v))
        b = r1.order[level].cardinality
        for j in range(b):
            stack.append((
                nu.children[j] if nu.attr == level else u,
                nv.children[j] if nv.attr == level else v,
            ))
    return True


def iter_sink_instances(odd: Odd, label: int = 1) -> Iterator[tuple[int, ...]]:
    """Instances reaching the ``label`` sink, lexicographically by position then value."""
    n = odd.n
    target = odd.sink_id(label)
    if target is None:
        return
    # nodes that can reach the target sink
    live = [False] * len(odd.nodes)
    for i, node in enumerate(odd.nodes):
        live[i] = i == target or any(live[c] for c in node.children)

    prefix: list[int] = [0] * n

    def walk(node_id: int, pos: int) -> Iterator[tuple[int, ...]]:
        # pos: next attribute position to assign
        if pos == n:
            yield tuple(prefix)
            return
        node = odd.nodes[node_id]
        if node.attr == pos:
            for j, c in enumerate(node.children):
                if live[c]:
                    prefix[pos] = j
                    yield from walk(c, pos + 1)
        else:
            for j in range(odd.order[pos].cardinality):
                prefix[pos] = j
                yield from walk(node_id, pos + 1)

    if live[odd.root]:
        yield from walk(odd.root, 0)


def disagreement(d1: Odd, d2: Odd, limit: int = 10) -> tuple[int, list[tuple[int, ...]]]:
    xor = apply(d1, d2, "xor")
    count = model_count(xor)[0]
    witnesses = []
    if limit > 0:
        for inst in iter_sink_instances(xor, 1):
            witnesses.append(inst)
            if len(witnesses) >= limit:
                break
    return count, witnesses


def format_instance(odd: Odd, instance: Sequence[int]) -> str:
    return ",".join(f"{a.name}={a.values[j]}" for a, j in zip(odd.order, instance))


def _resolve(odd: Odd, cond: FeatureCondition) -> dict[int, set[int]]:
    """Map attribute position -> value indices named by the condition's literals."""
    names = {a.name: i for i, a in enumerate(odd.order)}
    out: dict[int, set[int]] = {}
    for attr, value in cond.literals:
        if attr not in names:
            raise ValueError(f"unknown attribute {attr!r}")
        pos = names[attr]
        values = odd.order[pos].values
        if value not in values:
            raise ValueError(f"attribute {attr!r} has no value {value!r}")
        out.setdefault(pos, set()).add(values.index(value))
    return out


def all_instances_satisfy(odd: Odd, polarity: str | int, cond: FeatureCondition) -> bool:
    """Does every positive (or negative) instance satisfy ``cond``?

    Answered by searching for a counterexample: an instance reaching the
    chosen sink that falsifies ``cond``. One memoized pass over the nodes.
    """
    label = {"positive": 1, "negative": 0, 1: 1, 0: 0}[polarity]
    lits = _resolve(odd, cond)
    target = odd.sink_id(label)
    if target is None:
        return True
    cards = odd.cardinalities
    n = odd.n

    if cond.connective == "or":
        # counterexample avoids every literal value; a level with no other
        # value left blocks every path through it
        allowed = [
            [j for j in range(cards[p]) if j not in lits.get(p, ())] for p in range(n)
        ]
        blocked = _prefix_counts([not a for a in allowed])

        def free(lo: int, hi: int) -> bool:
            return blocked[hi] == blocked[lo]

        reach = [False] * len(odd.nodes)
        for i, node in enumerate(odd.nodes):
            if node.is_sink:
                reach[i] = i == target
                continue
            p = node.attr
            reach[i] = any(
                reach[node.children[j]] and free(p + 1, odd.position(node.children[j]))
                for j in allowed[p]
            )
        return not (reach[odd.root] and free(0, odd.position(odd.root)))

    # conjunction: counterexample violates at least one literal, either on a
    # tested edge or by picking another value at a skipped level
    breakable = _prefix_counts([p in lits and cards[p] > 1 for p in range(n)])

    def can_violate(lo: int, hi: int) -> bool:
        return breakable[hi] > breakable[lo]

    reaching = [False] * len(odd.nodes)
    violating = [False] * len(odd.nodes)
    for i, node in enumerate(odd.nodes):
        if node.is_sink:
            reaching[i] = i == target
            continue
        p = node.attr
        for j, c in enumerate(node.children):
            if not reaching[c]:
                continue
            reaching[i] = True
            if violating[c] or (p in lits and j not in lits[p]) or can_violate(p + 1, odd.position(c)):
                violating[i] = True
    root = odd.root
    return not (violating[root] or (reaching[root] and can_violate(0, odd.position(root))))


def _prefix_counts(flags: Sequence[bool]) -> list[int]:
    out = [0]
    for f in flags:
        out.append(out[-1] + bool(f))
    return out
