"""Metro map data model and objective arithmetic.

A metro line is a chain of simple rules ``X1=>Y1, Y1=>Y2, ...`` running from a
source node to a sink node; a metro map is a small set of such lines with
distinct starting stops. The scalar fitness combines the mean lift of the
lines (coverage) with how much the lines overlap (structure quality).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .errors import Infeasible, InvalidConfig, TooFewLines
from .graph import SINK, SOURCE, AttributeGraph, lift_from_json
from .rules import SimpleRule

AS_PRINTED = "as_printed"
DIVERSITY = "diversity"
MIN_LINES = 2


@dataclass(frozen=True)
class ObjectiveConfig:
    tau: int = 10
    k_max: int = 10
    weight: float = 0.1
    # AS_PRINTED adds w*(1 - squality); DIVERSITY adds w*squality instead
    quality_term: str = AS_PRINTED

    def __post_init__(self):
        if int(self.tau) != self.tau or self.tau < 1:
            raise InvalidConfig(f"tau must be an integer >= 1, got {self.tau}")
        if int(self.k_max) != self.k_max or self.k_max < MIN_LINES:
            raise InvalidConfig(f"k_max must be an integer >= {MIN_LINES}, got {self.k_max}")
        if self.weight < 0:
            raise InvalidConfig(f"weight must be >= 0, got {self.weight}")
        if self.quality_term not in (AS_PRINTED, DIVERSITY):
            raise InvalidConfig(f"unknown quality_term {self.quality_term!r}")


@dataclass(frozen=True)
class MetroLine:
    rules: tuple[SimpleRule, ...]

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))

    def __len__(self):
        return len(self.rules)

    @property
    def stops(self) -> list[str]:
        if not self.rules:
            return []
        return [self.rules[0].antecedent] + [r.consequent for r in self.rules]

    @property
    def start(self) -> str:
        return self.rules[0].antecedent

    @property
    def end(self) -> str:
        return self.rules[-1].consequent

    @property
    def keys(self) -> list[tuple[str, str]]:
        return [r.key for r in self.rules]


@dataclass(frozen=True)
class MetroMap:
    lines: tuple[MetroLine, ...]
    fitness: Optional[float] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))

    def __len__(self):
        return len(self.lines)

    def with_fitness(self, value: Optional[float]) -> "MetroMap":
        return MetroMap(self.lines, value)


def line_from_stops(graph: AttributeGraph, stops: Sequence[str]) -> MetroLine:
    """Build a line from its stop list, taking each rule (and its lift) from ``graph``."""
    rules = []
    for a, b in zip(stops, stops[1:]):
        e = graph.edge(a, b)
        if e is None:
            raise Infeasible(f"no edge {a} => {b} in graph")
        rules.append(e)
    return MetroLine(tuple(rules))


def coverage_line(line: MetroLine) -> float:
    """Mean lift of the rules on the line."""
    return sum(float(r.lift) for r in line.rules) / len(line.rules)


def coverage_map(metro: MetroMap) -> float:
    """Mean of the per-line coverages."""
    if not metro.lines:
        raise TooFewLines("coverage of an empty map")
    return sum(coverage_line(line) for line in metro.lines) / len(metro.lines)


def squality(metro: MetroMap) -> float:
    """Average share of distinct rule pairs over unordered line pairs.

    For lines i, j this is |{(r, s) : r in i, s in j, r != s}| / (|i| |j|);
    since a line never repeats a rule, the count equals |i||j| - |i & j|.
    Pairs are unordered, so the sum is divided by C(n, 2).
    """
    n = len(metro.lines)
    if n < MIN_LINES:
        raise TooFewLines(f"structure quality needs >= 2 lines, got {n}")
    total = 0.0
    for a, b in combinations(metro.lines, 2):
        shared = len(set(a.keys) & set(b.keys))
        total += (len(a) * len(b) - shared) / (len(a) * len(b))
    return total / (n * (n - 1) / 2)


@dataclass(frozen=True)
class FeasibilityReport:
    violations: tuple[str, ...] = ()

    def __bool__(self):
        return not self.violations


def is_feasible(metro: MetroMap, cfg: ObjectiveConfig, graph: Optional[AttributeGraph] = None) -> FeasibilityReport:
    """Check every constraint; graph-dependent checks are skipped when ``graph`` is None."""
    v = []
    n = len(metro.lines)
    if n < MIN_LINES:
        v.append(f"map size: {n} lines < {MIN_LINES}")
    if n > cfg.k_max:
        v.append(f"map size: {n} lines > K={cfg.k_max}")
    starts = []
    for i, line in enumerate(metro.lines):
        if not line.rules:
            v.append(f"line {i}: empty")
            continue
        if len(line) > cfg.tau:
            v.append(f"line {i}: coherence, length {len(line)} > tau={cfg.tau}")
        for k in range(len(line) - 1):
            if line.rules[k].consequent != line.rules[k + 1].antecedent:
                v.append(f"line {i}: chaining broken between rules {k} and {k + 1}")
        stops = line.stops
        if len(set(stops)) != len(stops):
            v.append(f"line {i}: repeated stop")
        starts.append(line.start)
        if graph is not None:
            for r in line.rules:
                if not graph.has_edge(r.antecedent, r.consequent):
                    v.append(f"line {i}: rule {r} is not an edge of the graph")
            if graph.roles.get(line.start) != SOURCE:
                v.append(f"line {i}: starts at non-source {line.start!r}")
            if graph.roles.get(line.end) != SINK:
                v.append(f"line {i}: ends at non-sink {line.end!r}")
    if len(set(starts)) != len(starts):
        v.append("starting stops are not pairwise distinct")
    return FeasibilityReport(tuple(v))


def fitness(metro: MetroMap, cfg: ObjectiveConfig, graph: Optional[AttributeGraph] = None) -> float:
    """(coverage + w * (1 - squality)) * number_of_lines, maximised.

    With ``cfg.quality_term == "diversity"`` the bracket uses ``w * squality``.
    """
    report = is_feasible(metro, cfg, graph)
    if not report:
        raise Infeasible("; ".join(report.violations))
    q = squality(metro)
    term = 1.0 - q if cfg.quality_term == AS_PRINTED else q
    return (coverage_map(metro) + cfg.weight * term) * len(metro.lines)


def evaluate(metro: MetroMap, cfg: ObjectiveConfig, graph: Optional[AttributeGraph] = None) -> MetroMap:
    """Return ``metro`` carrying its fitness, or None-fitness if infeasible."""
    if not is_feasible(metro, cfg, graph):
        return metro.with_fitness(None)
    return metro.with_fitness(fitness(metro, cfg))


def map_to_dict(metro: MetroMap) -> dict:
    return {
        "fitness": metro.fitness,
        "lines": [
            {
                "stops": line.stops,
                "rules": [
                    {"ante": r.antecedent, "cons": r.consequent, "lift": float(r.lift), "lift_exact": str(r.lift)}
                    for r in line.rules
                ],
            }
            for line in metro.lines
        ],
    }


def map_to_json(metro: MetroMap) -> str:
    return json.dumps(map_to_dict(metro), indent=2, ensure_ascii=False) + "\n"


def map_from_dict(doc: dict) -> MetroMap:
    lines = []
    for entry in doc["lines"]:
        if "rules" in entry:
            rules = [SimpleRule(r["ante"], r["cons"], lift_from_json(r)) for r in entry["rules"]]
        else:
            # stop list only; lifts unknown, default 1
            stops = entry["stops"]
            rules = [SimpleRule(a, b, Fraction(1)) for a, b in zip(stops, stops[1:])]
        lines.append(MetroLine(tuple(rules)))
    return MetroMap(tuple(lines), doc.get("fitness"))


def map_from_json(text: str) -> MetroMap:
    return map_from_dict(json.loads(text))
