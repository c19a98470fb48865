"""Evolutionary construction of metro maps.

Individuals are variable-length :class:`~armetro.metromap.MetroMap` values.
Each generation every slot (target) gets a trial built by line-wise crossover
with a randomly chosen other member, followed by path-regrowing mutation; the
trial replaces its target when it is feasible and at least as fit.
"""
from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import InsufficientSources, InvalidConfig, NoPathWithinTau
from .graph import SOURCE, AttributeGraph, out_neighbors
from .metromap import MIN_LINES, MetroLine, MetroMap, ObjectiveConfig, evaluate, is_feasible

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EAConfig:
    population_size: int = 100
    max_generations: int = 100
    p_crossover: float = 0.5
    p_mutation: float = 0.01
    objective: ObjectiveConfig = field(default_factory=ObjectiveConfig)
    rng_seed: Optional[int] = None
    path_retries: int = 50
    mutation_retries: int = 10

    def __post_init__(self):
        if self.population_size < 2:
            raise InvalidConfig("population_size must be >= 2")
        if self.max_generations < 1:
            raise InvalidConfig("max_generations must be >= 1")
        for name in ("p_crossover", "p_mutation"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise InvalidConfig(f"{name} must lie in [0, 1]")
        if self.path_retries < 1 or self.mutation_retries < 1:
            raise InvalidConfig("retry budgets must be >= 1")


Rng = np.random.Generator


def _walk(graph: AttributeGraph, start: str, visited: set, max_steps: int, rng: Rng):
    """Uniform random walk from ``start`` over unvisited nodes until a sink.

    Returns the list of rules taken (empty if ``start`` is itself a sink), or
    None on a dead end or when ``max_steps`` is used up before reaching a sink.
    """
    visited = set(visited)
    visited.add(start)
    rules = []
    current = start
    while True:
        out = out_neighbors(graph, current)
        if not out:
            return rules
        if len(rules) >= max_steps:
            return None
        choices = [e for e in out if e.consequent not in visited]
        if not choices:
            return None
        e = choices[int(rng.integers(len(choices)))]
        rules.append(e)
        visited.add(e.consequent)
        current = e.consequent


def random_path(graph: AttributeGraph, source: str, tau: int, rng: Rng, retries: int = 50) -> MetroLine:
    """A random simple source-to-sink line with at most ``tau`` rules."""
    if graph.roles.get(source) != SOURCE:
        raise ValueError(f"{source!r} is not a source node")
    if tau < 1:
        raise ValueError("tau must be >= 1")
    for _ in range(retries):
        rules = _walk(graph, source, set(), tau, rng)
        if rules:
            return MetroLine(tuple(rules))
    raise NoPathWithinTau(f"no sink reached from {source!r} within {tau} steps after {retries} tries")


def _random_map(graph: AttributeGraph, sources: list, cfg: EAConfig, rng: Rng) -> MetroMap:
    tau = cfg.objective.tau
    upper = min(cfg.objective.k_max, len(sources))
    for _ in range(cfg.path_retries):
        n = int(rng.integers(MIN_LINES, upper + 1))
        lines = []
        for idx in rng.permutation(len(sources)):
            try:
                lines.append(random_path(graph, sources[idx], tau, rng, cfg.path_retries))
            except NoPathWithinTau:
                continue
            if len(lines) == n:
                break
        if len(lines) >= MIN_LINES:
            return MetroMap(tuple(lines))
    raise NoPathWithinTau(f"could not grow {MIN_LINES} lines from distinct sources within tau={tau}")


@dataclass
class Population:
    individuals: list
    generation: int = 0

    def fitness(self) -> np.ndarray:
        return np.array([m.fitness for m in self.individuals], dtype=float)

    def best(self) -> MetroMap:
        # first maximum, so ties resolve by slot order
        return self.individuals[int(np.argmax(self.fitness()))]


def initialize_population(graph: AttributeGraph, cfg: EAConfig, rng: Rng) -> Population:
    sources = graph.sources
    if len(sources) < MIN_LINES:
        raise InsufficientSources(f"need >= {MIN_LINES} source nodes, graph has {len(sources)}")
    individuals = []
    for _ in range(cfg.population_size):
        m = evaluate(_random_map(graph, sources, cfg, rng), cfg.objective, graph)
        assert m.fitness is not None, is_feasible(m, cfg.objective, graph).violations
        individuals.append(m)
    return Population(individuals, 0)


def crossover(target: MetroMap, parent: MetroMap, p_c: float, rng: Rng) -> MetroMap:
    """Take each line slot from the parent with probability ``p_c``.

    A slot the parent does not have is deleted. When a parent line and a
    target line end up with the same starting stop, the parent's wins.
    """
    picked = []  # (line, from_parent)
    for i, line in enumerate(target.lines):
        if rng.random() < p_c:
            if i < len(parent.lines):
                picked.append((parent.lines[i], True))
        else:
            picked.append((line, False))
    parent_starts = {line.start for line, from_parent in picked if from_parent}
    lines = [
        line for line, from_parent in picked
        if from_parent or line.start not in parent_starts
    ]
    return MetroMap(tuple(lines))


def mutate_line(line: MetroLine, graph: AttributeGraph, tau: int, rng: Rng, retries: int = 10) -> MetroLine:
    """Re-route ``line`` from a random position k: keep rules before k, pick a new
    consequent for the k-th antecedent and walk on to a sink."""
    L = len(line)
    k = int(rng.integers(1, L + 1))
    prefix = line.rules[:k - 1]
    x_k = line.rules[k - 1].antecedent
    visited = set(line.stops[:k])
    for _ in range(retries):
        choices = [e for e in out_neighbors(graph, x_k) if e.consequent not in visited]
        if not choices:
            break
        e = choices[int(rng.integers(len(choices)))]
        tail = _walk(graph, e.consequent, visited, tau - k, rng)
        if tail is not None:
            return MetroLine(prefix + (e,) + tuple(tail))
    log.debug("mutation at position %d of line starting %s could not regrow; kept", k, line.start)
    return line


def mutate(metro: MetroMap, graph: AttributeGraph, p_m: float, tau: int, rng: Rng, retries: int = 10) -> MetroMap:
    lines = []
    for line in metro.lines:
        if rng.random() < p_m:
            line = mutate_line(line, graph, tau, rng, retries)
        lines.append(line)
    return MetroMap(tuple(lines))


def select_survivor(target: MetroMap, trial: MetroMap, cfg: Optional[EAConfig] = None) -> MetroMap:
    """One-to-one selection for maximisation; ties favour the trial."""
    if trial.fitness is None:
        return target
    if trial.fitness >= target.fitness:
        return trial
    return target


@dataclass(eq=False)
class RunTrace:
    best_fitness: list = field(default_factory=list)
    mean_fitness: list = field(default_factory=list)
    slot_fitness: list = field(default_factory=list)
    best: Optional[MetroMap] = None
    evaluations: int = 0
    trials: int = 0
    infeasible_trials: int = 0
    seed: Optional[int] = None

    def record(self, population: Population):
        fit = population.fitness()
        self.slot_fitness.append(fit)
        self.best_fitness.append(float(fit.max()))
        self.mean_fitness.append(float(fit.mean()))
        champion = population.best()
        if self.best is None or champion.fitness > self.best.fitness:
            self.best = champion

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("generation,best_fitness,mean_fitness\n")
        for g, (b, m) in enumerate(zip(self.best_fitness, self.mean_fitness)):
            buf.write(f"{g},{b!r},{m!r}\n")
        return buf.getvalue()


def evolve(
    graph: AttributeGraph,
    cfg: EAConfig,
    rng: Optional[Rng] = None,
    on_generation: Optional[Callable[[int, Population], None]] = None,
) -> RunTrace:
    """Run the generational loop and return the trace with the best map seen."""
    if rng is None:
        rng = np.random.default_rng(cfg.rng_seed)
    obj = cfg.objective
    pop = initialize_population(graph, cfg, rng)
    trace = RunTrace(seed=cfg.rng_seed, evaluations=len(pop.individuals))
    trace.record(pop)
    if on_generation:
        on_generation(0, pop)

    np_ = cfg.population_size
    for gen in range(1, cfg.max_generations + 1):
        nxt = list(pop.individuals)
        for i, target in enumerate(pop.individuals):
            j = int(rng.integers(np_ - 1))
            if j >= i:
                j += 1
            trial = crossover(target, pop.individuals[j], cfg.p_crossover, rng)
            trial = mutate(trial, graph, cfg.p_mutation, obj.tau, rng, cfg.mutation_retries)
            trial = evaluate(trial, obj, graph)
            trace.trials += 1
            if trial.fitness is None:
                trace.infeasible_trials += 1
            else:
                trace.evaluations += 1
            nxt[i] = select_survivor(target, trial, cfg)
        pop = Population(nxt, gen)
        trace.record(pop)
        if on_generation:
            on_generation(gen, pop)
    return trace


def evolve_repeats(graph: AttributeGraph, cfg: EAConfig, repeats: int) -> list[RunTrace]:
    """Independent runs; run r uses seed ``rng_seed + r`` (wrapped to 64 bits)."""
    if cfg.rng_seed is None:
        raise InvalidConfig("repeated runs need an explicit seed")
    traces = []
    for r in range(repeats):
        seed = (cfg.rng_seed + r) % 2**64
        traces.append(evolve(graph, replace(cfg, rng_seed=seed)))
    return traces


def best_of(traces: list) -> RunTrace:
    """The run with the highest final fitness; earliest run wins ties."""
    best = 0
    for i, t in enumerate(traces):
        if t.best.fitness > traces[best].best.fitness:
            best = i
    return traces[best]
