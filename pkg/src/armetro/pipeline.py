"""End-to-end pipeline: mine -> filter -> graph -> evolve -> render.

Every stage reads and writes plain files in an output directory, so the
stages can be run one at a time or chained by :func:`run_pipeline`.
"""
from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from . import apriori, graph as graph_mod, metromap, render, rules as rules_mod
from .ea import EAConfig, RunTrace, best_of, evolve_repeats
from .errors import InvalidConfig, NoRulesMined
from .transactions import TransactionDB, load_transactions

log = logging.getLogger(__name__)

RULES_FILE = "rules.txt"
FILTERED_FILE = "filtered_rules.txt"
GRAPH_FILE = "graph.json"
TRACE_FILE = "trace.csv"
MAP_JSON = "map.json"
MAP_DOT = "map.dot"
MAP_SVG = "map.svg"
MANIFEST = "manifest.json"

MINE = "mine"
LOAD_RULES = "load_rules"


@dataclass
class PipelineConfig:
    input: Optional[str] = None
    format: str = "basket"
    mode: str = MINE
    rules: Optional[str] = None
    min_supp: Optional[str] = None
    min_conf: Optional[str] = None
    classes: Optional[list] = None
    tau: int = 10
    k_max: int = 10
    np: int = 100
    generations: int = 100
    pc: float = 0.5
    pm: float = 0.01
    weight: float = 0.1
    seed: Optional[int] = None
    repeats: int = 1
    out: str = "run"
    quality_term: str = metromap.AS_PRINTED

    def validate(self):
        if not self.input:
            raise InvalidConfig("an input dataset is required")
        if self.format not in ("basket", "tabular"):
            raise InvalidConfig(f"unknown format {self.format!r}")
        if self.mode == MINE:
            if self.min_supp is None or self.min_conf is None:
                raise InvalidConfig("mine mode needs --min-supp and --min-conf")
        elif self.mode == LOAD_RULES:
            if not self.rules:
                raise InvalidConfig("load_rules mode needs a rule file (--rules)")
        else:
            raise InvalidConfig(f"unknown mode {self.mode!r}")
        if self.repeats < 1:
            raise InvalidConfig("repeats must be >= 1")
        self.ea_config()  # range checks

    def thresholds(self) -> apriori.MiningThresholds:
        return apriori.MiningThresholds(self.min_supp, self.min_conf)

    def objective(self) -> metromap.ObjectiveConfig:
        return metromap.ObjectiveConfig(self.tau, self.k_max, self.weight, self.quality_term)

    def ea_config(self) -> EAConfig:
        return EAConfig(
            population_size=self.np,
            max_generations=self.generations,
            p_crossover=self.pc,
            p_mutation=self.pm,
            objective=self.objective(),
            rng_seed=self.seed,
        )

    @classmethod
    def from_mapping(cls, values: dict) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        clean = {}
        for key, value in values.items():
            key = key.replace("-", "_")
            if key == "min_support":
                key = "min_supp"
            elif key == "min_confidence":
                key = "min_conf"
            if key not in known:
                raise InvalidConfig(f"unknown config key {key!r}")
            clean[key] = value
        if isinstance(clean.get("classes"), str):
            clean["classes"] = [c.strip() for c in clean["classes"].split(",") if c.strip()]
        for key in ("min_supp", "min_conf"):
            if clean.get(key) is not None:
                clean[key] = str(clean[key])
        return cls(**clean)

    def to_dict(self) -> dict:
        return asdict(self)

    def hash(self) -> str:
        doc = self.to_dict()
        doc.pop("out")
        blob = json.dumps(doc, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def fresh_seed() -> int:
    return int(np.random.SeedSequence().entropy % 2**63)


def load_db(path, format: str) -> TransactionDB:
    with open(path, "rb") as fh:
        return load_transactions(fh, format)


def read_rule_file(path) -> list:
    with open(path, encoding="utf-8") as fh:
        return apriori.read_rules(fh)


def write_rule_file(path, rules) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        apriori.write_rules(rules, fh)


def _write(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# -- stages -----------------------------------------------------------------

def stage_mine(db: TransactionDB, thresholds, out: Path) -> list:
    rules = apriori.mine_rules(db, thresholds)
    write_rule_file(out / RULES_FILE, rules)
    return rules


def stage_filter(rules: list, classes: Optional[list], out: Path):
    if not rules:
        raise NoRulesMined("rule set is empty")
    if classes:
        cls = rules_mod.declared_class_attributes(rules, classes)
    else:
        cls = rules_mod.infer_class_attributes(rules)
    kept = rules_mod.filter_rules(rules, cls)
    write_rule_file(out / FILTERED_FILE, kept)
    return kept, cls


def stage_graph(filtered: list, db: TransactionDB, out: Path):
    simple = rules_mod.simplify_rules(filtered, db)
    g = graph_mod.build_attribute_graph(simple)
    _write(out / GRAPH_FILE, graph_mod.graph_to_json(g))
    return g, simple


def stage_evolve(g, cfg: EAConfig, repeats: int, out: Path) -> tuple[RunTrace, list]:
    traces = evolve_repeats(g, cfg, repeats)
    best = best_of(traces)
    _write(out / TRACE_FILE, best.to_csv())
    _write(out / MAP_JSON, metromap.map_to_json(best.best))
    return best, traces


def stage_render(metro: metromap.MetroMap, out: Path) -> None:
    svg = render.render_svg(metro)
    _write(out / MAP_DOT, render.render_dot(metro))
    _write(out / MAP_SVG, svg)


@dataclass
class PipelineResult:
    config: PipelineConfig
    manifest: dict
    best: Optional[metromap.MetroMap] = None
    traces: list = field(default_factory=list)


def run_pipeline(cfg: PipelineConfig) -> PipelineResult:
    """Run every stage and write all artifacts plus ``manifest.json`` into ``cfg.out``."""
    cfg.validate()
    if cfg.seed is None:
        cfg.seed = fresh_seed()
        log.info("no seed given, drew %d", cfg.seed)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)

    stats: dict = {}
    manifest = {"seed": cfg.seed, "config": cfg.to_dict(), "config_hash": cfg.hash(), "stats": stats}
    result = PipelineResult(cfg, manifest)

    def flush():
        _write(out / MANIFEST, json.dumps(manifest, indent=2, sort_keys=True) + "\n")

    try:
        db = load_db(cfg.input, cfg.format)
        stats["transactions"] = db.count
        stats["attributes"] = len(db.item_universe)
        if cfg.mode == MINE:
            rules = stage_mine(db, cfg.thresholds(), out)
        else:
            rules = read_rule_file(cfg.rules)
        stats["rules_all"] = len(rules)

        kept, cls = stage_filter(rules, cfg.classes, out)
        stats["rules_filtered"] = len(kept)
        stats["class_features"] = sorted(cls.features)
        stats["class_tokens"] = sorted(cls.tokens)
        stats["class_origin"] = cls.origin

        g, simple = stage_graph(kept, db, out)
        stats["simple_rules"] = len(simple)
        stats["graph"] = {"nodes": g.n_nodes, "edges": g.n_edges, **g.role_counts()}

        best, traces = stage_evolve(g, cfg.ea_config(), cfg.repeats, out)
        result.best, result.traces = best.best, traces
        stats["runs"] = [
            {"seed": t.seed, "best_fitness": t.best.fitness, "evaluations": t.evaluations}
            for t in traces
        ]
        stats["best_fitness"] = best.best.fitness
        stats["best_seed"] = best.seed
        stats["best_lines"] = len(best.best.lines)

        stage_render(best.best, out)
    except Exception as exc:
        manifest["error"] = {"type": type(exc).__name__, "message": str(exc)}
        flush()
        raise
    flush()
    return result
