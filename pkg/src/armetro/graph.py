"""Directed attribute graph built from simple rules, with source/intern/sink roles."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import NoSink, NoSource, SelfLoop, UnknownNode
from .rules import SimpleRule

SOURCE = "source"
INTERN = "intern"
SINK = "sink"


@dataclass(frozen=True)
class AttributeGraph:
    nodes: tuple[str, ...]
    edges: tuple[SimpleRule, ...]
    adjacency: np.ndarray = field(repr=False, compare=False)
    roles: dict = field(compare=False)
    _index: dict = field(repr=False, compare=False)
    _out: dict = field(repr=False, compare=False)
    _edge: dict = field(repr=False, compare=False)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def index(self, node: str) -> int:
        try:
            return self._index[node]
        except KeyError:
            raise UnknownNode(node) from None

    def nodes_with_role(self, role: str) -> list[str]:
        return [n for n in self.nodes if self.roles[n] == role]

    @property
    def sources(self) -> list[str]:
        return self.nodes_with_role(SOURCE)

    @property
    def sinks(self) -> list[str]:
        return self.nodes_with_role(SINK)

    @property
    def interns(self) -> list[str]:
        return self.nodes_with_role(INTERN)

    def edge(self, antecedent: str, consequent: str):
        """The edge ``antecedent => consequent`` or None."""
        return self._edge.get((antecedent, consequent))

    def has_edge(self, antecedent: str, consequent: str) -> bool:
        return (antecedent, consequent) in self._edge

    def out_degree(self, node: str) -> int:
        return len(self._out[node])

    def in_degree(self, node: str) -> int:
        return int(self.adjacency[:, self.index(node)].sum())

    def role_counts(self) -> dict:
        return {role: len(self.nodes_with_role(role)) for role in (SOURCE, INTERN, SINK)}


def build_attribute_graph(simple_rules: Sequence[SimpleRule], require_terminals: bool = True) -> AttributeGraph:
    """Assemble the graph; nodes appear in first-seen order, duplicate edges keep the first."""
    index: dict[str, int] = {}
    edges: list[SimpleRule] = []
    seen = set()
    for r in simple_rules:
        if r.antecedent == r.consequent:
            raise SelfLoop(f"self loop on {r.antecedent!r}")
        if r.lift is None:
            raise ValueError(f"rule {r} has no lift")
        if r.key in seen:
            continue
        seen.add(r.key)
        for tok in r.key:
            if tok not in index:
                index[tok] = len(index)
        edges.append(r)

    nodes = tuple(index)
    n = len(nodes)
    adjacency = np.zeros((n, n), dtype=bool)
    out: dict[str, list[SimpleRule]] = {tok: [] for tok in nodes}
    for r in edges:
        adjacency[index[r.antecedent], index[r.consequent]] = True
        out[r.antecedent].append(r)
    for tok in nodes:
        out[tok].sort(key=lambda e: index[e.consequent])

    indeg = adjacency.sum(axis=0)
    outdeg = adjacency.sum(axis=1)
    roles = {}
    for i, tok in enumerate(nodes):
        if indeg[i] == 0:
            roles[tok] = SOURCE
        elif outdeg[i] == 0:
            roles[tok] = SINK
        else:
            roles[tok] = INTERN

    if require_terminals:
        if SOURCE not in roles.values():
            raise NoSource("graph has no node with indegree zero")
        if SINK not in roles.values():
            raise NoSink("graph has no node with outdegree zero")

    return AttributeGraph(
        nodes=nodes,
        edges=tuple(edges),
        adjacency=adjacency,
        roles=roles,
        _index=index,
        _out={k: tuple(v) for k, v in out.items()},
        _edge={e.key: e for e in edges},
    )


def out_neighbors(graph: AttributeGraph, node: str) -> tuple[SimpleRule, ...]:
    if node not in graph._index:
        raise UnknownNode(node)
    return graph._out[node]


def lift_from_json(edge: dict) -> Fraction:
    if "lift_exact" in edge:
        return Fraction(edge["lift_exact"])
    return Fraction(repr(float(edge["lift"])))


def graph_to_dict(graph: AttributeGraph) -> dict:
    return {
        "nodes": list(graph.nodes),
        "edges": [
            {"ante": e.antecedent, "cons": e.consequent, "lift": float(e.lift), "lift_exact": str(e.lift)}
            for e in graph.edges
        ],
        "roles": {n: graph.roles[n] for n in graph.nodes},
    }


def graph_to_json(graph: AttributeGraph) -> str:
    return json.dumps(graph_to_dict(graph), indent=2, ensure_ascii=False) + "\n"


def graph_from_dict(doc: dict) -> AttributeGraph:
    edges = [SimpleRule(e["ante"], e["cons"], lift_from_json(e)) for e in doc["edges"]]
    # node order is recovered from edge order, which is how it was written
    return build_attribute_graph(edges)


def graph_from_json(text: str) -> AttributeGraph:
    return graph_from_dict(json.loads(text))


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(graph: AttributeGraph) -> str:
    shapes = {SOURCE: "box", INTERN: "ellipse", SINK: "doublecircle"}
    lines = ["digraph attributes {", "  rankdir=LR;"]
    for n in graph.nodes:
        lines.append(f"  {_q(n)} [shape={shapes[graph.roles[n]]}];")
    for e in graph.edges:
        lines.append(f"  {_q(e.antecedent)} -> {_q(e.consequent)} [label={_q(f'{float(e.lift):.4g}')}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
