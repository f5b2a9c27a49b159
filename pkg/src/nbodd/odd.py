"""Ordered decision diagrams over multi-valued attributes.

An :class:`Odd` is an immutable node store. Nodes are numbered in DFS
post-order from the root (children visited in value order), so children
always have smaller ids than their parents and the root is the last node.
Sinks are ordinary nodes with a 0/1 label and no attribute.

Attribute positions refer to the diagram's own ``order``, not to any
model's attribute indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import AttributeSpec


class OddError(ValueError):
    pass


class OddParseError(OddError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True, slots=True)
class OddNode:
    attr: int | None = None
    children: tuple[int, ...] = ()
    label: int | None = None

    @property
    def is_sink(self) -> bool:
        return self.attr is None


class Odd:
    __slots__ = ("_order", "_nodes", "_root")

    def __init__(self, order: Sequence[AttributeSpec], nodes: Sequence[OddNode], root: int):
        order = tuple(order)
        nodes = tuple(nodes)
        _check_structure(order, nodes, root)
        object.__setattr__(self, "_order", order)
        object.__setattr__(self, "_nodes", nodes)
        object.__setattr__(self, "_root", root)

    def __setattr__(self, name, value):
        raise AttributeError("Odd is immutable")

    @classmethod
    def constant(cls, order: Sequence[AttributeSpec], label: int) -> Odd:
        return cls(order, [OddNode(label=int(bool(label)))], 0)

    @property
    def order(self) -> tuple[AttributeSpec, ...]:
        return self._order

    @property
    def nodes(self) -> tuple[OddNode, ...]:
        return self._nodes

    @property
    def root(self) -> int:
        return self._root

    @property
    def n(self) -> int:
        return len(self._order)

    @property
    def cardinalities(self) -> list[int]:
        return [a.cardinality for a in self._order]

    def position(self, node_id: int) -> int:
        """Attribute position of a node; sinks sit at position ``n``."""
        attr = self._nodes[node_id].attr
        return self.n if attr is None else attr

    def sink_id(self, label: int) -> int | None:
        for i, node in enumerate(self._nodes):
            if node.is_sink and node.label == label:
                return i
        return None

    def __len__(self) -> int:
        return len(self._nodes)

    def __repr__(self) -> str:
        names = ",".join(a.name for a in self._order)
        return f"Odd(order=({names}), nodes={len(self._nodes)})"


def _check_structure(order, nodes, root):
    if not nodes:
        raise OddError("diagram has no nodes")
    if root != len(nodes) - 1:
        raise OddError("root must be the last node")
    seen_sinks = set()
    for i, node in enumerate(nodes):
        if node.is_sink:
            if node.label not in (0, 1):
                raise OddError(f"sink {i} has label {node.label!r}")
            if node.label in seen_sinks:
                raise OddError(f"duplicate {node.label}-sink")
            seen_sinks.add(node.label)
            continue
        if not 0 <= node.attr < len(order):
            raise OddError(f"node {i} tests unknown attribute position {node.attr}")
        if len(node.children) != order[node.attr].cardinality:
            raise OddError(
                f"node {i} has {len(node.children)} edges, attribute "
                f"{order[node.attr].name!r} has {order[node.attr].cardinality} values"
            )
        for c in node.children:
            if not 0 <= c < i:
                raise OddError(f"node {i} has edge to {c}, which is not an earlier node")
            child = nodes[c]
            if not child.is_sink and child.attr <= node.attr:
                raise OddError(
                    f"ordering violated: node {i} at position {node.attr} points to "
                    f"node {c} at position {child.attr}"
                )
    reachable = {root}
    for i in range(root, -1, -1):
        if i in reachable:
            reachable.update(nodes[i].children)
    if len(reachable) != len(nodes):
        raise OddError("diagram contains unreachable nodes")


class OddBuilder:
    """Mutable arena used to assemble a diagram before freezing it.

    ``add`` appends a node unconditionally. ``make`` hash-conses and skips
    redundant tests, so diagrams built only through ``make`` are reduced.
    """

    def __init__(self, order: Sequence[AttributeSpec]):
        self.order = tuple(order)
        self.nodes: list[OddNode] = []
        self._sinks: dict[int, int] = {}
        self._unique: dict[tuple[int, tuple[int, ...]], int] = {}

    def sink(self, label: int) -> int:
        label = int(bool(label))
        if label not in self._sinks:
            self._sinks[label] = len(self.nodes)
            self.nodes.append(OddNode(label=label))
        return self._sinks[label]

    def add(self, attr: int, children: Sequence[int]) -> int:
        self.nodes.append(OddNode(attr, tuple(children)))
        return len(self.nodes) - 1

    def make(self, attr: int, children: Sequence[int]) -> int:
        children = tuple(children)
        if all(c == children[0] for c in children):
            return children[0]
        key = (attr, children)
        nid = self._unique.get(key)
        if nid is None:
            nid = self._unique[key] = self.add(attr, children)
        return nid

    def position(self, node_id: int) -> int:
        attr = self.nodes[node_id].attr
        return len(self.order) if attr is None else attr

    def freeze(self, root: int) -> tuple[Odd, dict[int, int]]:
        """Keep the nodes reachable from ``root``, renumbered in post-order.

        Returns the diagram and the mapping from builder ids to diagram ids.
        """
        remap: dict[int, int] = {}
        out: list[OddNode] = []
        stack = [(root, False)]
        while stack:
            nid, expanded = stack.pop()
            if nid in remap:
                continue
            node = self.nodes[nid]
            if expanded or node.is_sink:
                remap[nid] = len(out)
                out.append(
                    node if node.is_sink
                    else OddNode(node.attr, tuple(remap[c] for c in node.children))
                )
                continue
            stack.append((nid, True))
            for c in reversed(node.children):
                if c not in remap:
                    stack.append((c, False))
        return Odd(self.order, out, remap[root]), remap


def evaluate(odd: Odd, instance: Sequence[int]) -> int:
    """Follow ``instance`` (value indices in the diagram's order) to a sink."""
    if len(instance) != odd.n:
        raise OddError(f"instance has {len(instance)} values, diagram has {odd.n} attributes")
    node = odd.nodes[odd.root]
    while not node.is_sink:
        node = odd.nodes[node.children[instance[node.attr]]]
    return node.label


def node_count(odd: Odd) -> int:
    return len(odd.nodes)


def reduce(odd: Odd) -> Odd:
    """Drop tests whose edges all lead to one child and merge duplicate nodes.

    One bottom-up pass; ids are already in post-order so a single sweep over
    the store sees every child before its parent.
    """
    builder = OddBuilder(odd.order)
    image: list[int] = []
    for node in odd.nodes:
        if node.is_sink:
            image.append(builder.sink(node.label))
        else:
            image.append(builder.make(node.attr, [image[c] for c in node.children]))
    return builder.freeze(image[odd.root])[0]


def is_reduced(odd: Odd) -> bool:
    seen = set()
    for node in odd.nodes:
        if node.is_sink:
            continue
        if len(set(node.children)) == 1:
            return False
        key = (node.attr, node.children)
        if key in seen:
            return False
        seen.add(key)
    return True


# --- text formats -----------------------------------------------------------


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(odd: Odd, name: str = "odd") -> str:
    lines = [f"digraph {name} {{"]
    for i, node in enumerate(odd.nodes):
        if node.is_sink:
            lines.append(f'  n{i} [shape=box, label="{node.label}"];')
        else:
            lines.append(f'  n{i} [shape=ellipse, label="{_dot_escape(odd.order[node.attr].name)}"];')
    for i, node in enumerate(odd.nodes):
        if node.is_sink:
            continue
        values = odd.order[node.attr].values
        for v, c in enumerate(node.children):
            lines.append(f'  n{i} -> n{c} [label="{_dot_escape(values[v])}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _check_token(s: str, what: str) -> None:
    if not s or any(ch.isspace() for ch in s) or ":" in s:
        raise OddError(f"{what} {s!r} cannot be written in the text format")


def serialize(odd: Odd) -> str:
    """Line-oriented text: ``order:`` header, ``values`` lines, then nodes, root last."""
    for a in odd.order:
        _check_token(a.name, "attribute name")
        for v in a.values:
            _check_token(v, "value name")
    lines = ["order: " + " ".join(a.name for a in odd.order)]
    lines += [f"values {a.name} " + " ".join(a.values) for a in odd.order]
    for i, node in enumerate(odd.nodes):
        if node.is_sink:
            lines.append(f"sink {i} {node.label}")
        else:
            attr = odd.order[node.attr]
            edges = " ".join(f"{attr.values[v]}:{c}" for v, c in enumerate(node.children))
            lines.append(f"node {i} {attr.name} {edges}")
    return "\n".join(lines) + "\n"


def deserialize(text: str) -> Odd:
    lines = [(k + 1, ln.strip()) for k, ln in enumerate(text.splitlines())]
    lines = [(k, ln) for k, ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0][1].startswith("order:"):
        raise OddParseError("expected 'order:' header", lines[0][0] if lines else 1)
    names = lines[0][1][len("order:"):].split()
    if len(set(names)) != len(names):
        raise OddParseError("duplicate attribute in order", lines[0][0])
    values: dict[str, tuple[str, ...]] = {}
    ids: dict[str, int] = {}
    raw: list[tuple[int, OddNode]] = []
    position = {name: i for i, name in enumerate(names)}
    for lineno, ln in lines[1:]:
        parts = ln.split()
        kind = parts[0]
        if kind == "values":
            if len(parts) < 3 or parts[1] not in position:
                raise OddParseError("malformed values line", lineno)
            values[parts[1]] = tuple(parts[2:])
        elif kind == "sink":
            if len(parts) != 3 or parts[2] not in ("0", "1"):
                raise OddParseError("malformed sink line", lineno)
            _declare(ids, parts[1], lineno)
            raw.append((lineno, OddNode(label=int(parts[2]))))
        elif kind == "node":
            if len(parts) < 4:
                raise OddParseError("malformed node line", lineno)
            attr = parts[2]
            if attr not in position:
                raise OddParseError(f"unknown attribute {attr!r}", lineno)
            if attr not in values:
                raise OddParseError(f"no values declared for attribute {attr!r}", lineno)
            edges = {}
            for tok in parts[3:]:
                val, sep, child = tok.rpartition(":")
                if not sep or val not in values[attr]:
                    raise OddParseError(f"bad edge {tok!r}", lineno)
                if child not in ids:
                    raise OddParseError(f"edge to undeclared node {child!r}", lineno)
                edges[values[attr].index(val)] = ids[child]
            if sorted(edges) != list(range(len(values[attr]))):
                raise OddParseError(f"node must have one edge per value of {attr!r}", lineno)
            _declare(ids, parts[1], lineno)
            children = tuple(edges[v] for v in range(len(values[attr])))
            for c in children:
                cnode = raw[c][1]
                if not cnode.is_sink and cnode.attr <= position[attr]:
                    raise OddParseError(
                        f"ordering violated: {attr!r} points to a node on "
                        f"{names[cnode.attr]!r}",
                        lineno,
                    )
            raw.append((lineno, OddNode(position[attr], children)))
        else:
            raise OddParseError(f"unknown record {kind!r}", lineno)
    missing = [name for name in names if name not in values]
    if missing:
        raise OddParseError(f"no values declared for {missing}")
    if not raw:
        raise OddParseError("no nodes declared")
    order = [AttributeSpec(name, values[name]) for name in names]
    builder = OddBuilder(order)
    builder.nodes = [node for _, node in raw]
    try:
        odd, _ = builder.freeze(len(raw) - 1)
    except OddError as exc:
        raise OddParseError(str(exc), raw[-1][0]) from None
    if len(odd.nodes) != len(raw):
        raise OddParseError("diagram contains nodes unreachable from the root", raw[-1][0])
    return odd


def _declare(ids: dict[str, int], token: str, lineno: int) -> None:
    if token in ids:
        raise OddParseError(f"node id {token!r} declared twice", lineno)
    ids[token] = len(ids)


def isomorphic(a: Odd, b: Odd) -> bool:
    """Structural identity up to node renumbering (same order, same shape)."""
    if a.order != b.order or len(a.nodes) != len(b.nodes):
        return False
    pairs = {}
    stack = [(a.root, b.root)]
    while stack:
        x, y = stack.pop()
        if x in pairs:
            if pairs[x] != y:
                return False
            continue
        pairs[x] = y
        nx, ny = a.nodes[x], b.nodes[y]
        if nx.attr != ny.attr or nx.label != ny.label or len(nx.children) != len(ny.children):
            return False
        stack.extend(zip(nx.children, ny.children))
    return len(set(pairs.values())) == len(pairs)


def iter_instances(cardinalities: Sequence[int]) -> Iterable[tuple[int, ...]]:
    return itertools.product(*(range(b) for b in cardinalities))
