"""Command line front end.

    armetro run     --input data.csv --format tabular --min-supp 0.3 --min-conf 0.8 --out run/
    armetro mine    --input data.csv --format tabular --min-supp 0.3 --min-conf 0.8 --out run/
    armetro filter  --rules run/rules.txt [--classes class] --out run/
    armetro graph   --rules run/filtered_rules.txt --input data.csv --format tabular --out run/
    armetro evolve  --graph run/graph.json --seed 7 --out run/
    armetro render  --map run/map.json --out run/

Settings can also come from a TOML file (``--config``); flags win.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import graph as graph_mod, metromap, pipeline
from .errors import ArmetroError, InvalidConfig

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

EXIT_USAGE = 2
EXIT_IO = 3


def _add(p, *names, **kw):
    kw.setdefault("default", argparse.SUPPRESS)
    p.add_argument(*names, **kw)


def _data_flags(p):
    _add(p, "--input", help="transaction dataset")
    _add(p, "--format", choices=("basket", "tabular"))


def _mine_flags(p):
    _add(p, "--min-supp", dest="min_supp", help="minimum support, e.g. 0.3 or 3/10")
    _add(p, "--min-conf", dest="min_conf", help="minimum confidence")


def _ea_flags(p):
    _add(p, "--tau", type=int, help="maximum metro line length (rules per line)")
    _add(p, "--k-max", dest="k_max", type=int, help="maximum number of metro lines")
    _add(p, "--np", type=int, help="population size")
    _add(p, "--generations", type=int)
    _add(p, "--pc", type=float, help="crossover probability")
    _add(p, "--pm", type=float, help="mutation probability")
    _add(p, "--weight", type=float, help="weight of the structure-quality term")
    _add(p, "--seed", type=int)
    _add(p, "--repeats", type=int, help="independent runs; the best one is kept")
    _add(p, "--quality-term", dest="quality_term", choices=(metromap.AS_PRINTED, metromap.DIVERSITY))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="armetro", description="Metro maps of association rules.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    _add(common, "--config", help="TOML file with settings")
    _add(common, "--out", help="output directory")

    p = sub.add_parser("run", parents=[common], help="full pipeline")
    _data_flags(p)
    _mine_flags(p)
    _add(p, "--rules", help="use this rule file instead of mining (load_rules mode)")
    _add(p, "--classes", help="comma-separated class features")
    _ea_flags(p)

    p = sub.add_parser("mine", parents=[common], help="Apriori rules -> rules.txt")
    _data_flags(p)
    _mine_flags(p)

    p = sub.add_parser("filter", parents=[common], help="class filtering -> filtered_rules.txt")
    _add(p, "--rules", help="rule file")
    _add(p, "--classes", help="comma-separated class features")

    p = sub.add_parser("graph", parents=[common], help="simplify + attribute graph -> graph.json")
    _add(p, "--rules", help="filtered rule file")
    _data_flags(p)

    p = sub.add_parser("evolve", parents=[common], help="EA -> trace.csv, map.json")
    _add(p, "--graph", help="graph.json")
    _ea_flags(p)

    p = sub.add_parser("render", parents=[common], help="map.json -> map.dot, map.svg")
    _add(p, "--map", help="map.json")
    return parser


def _settings(args) -> dict:
    values = {}
    if getattr(args, "config", None):
        with open(args.config, "rb") as fh:
            values.update(tomllib.load(fh))
    flags = {k: v for k, v in vars(args).items() if k not in ("config", "command", "verbose")}
    values.update(flags)
    return values


def _need(values: dict, key: str):
    if not values.get(key):
        raise InvalidConfig(f"--{key.replace('_', '-')} is required")
    return values[key]


def _split_extra(values: dict, *keys):
    extra = {}
    for key in keys:
        if key in values:
            extra[key] = values.pop(key)
    return extra


def _out_dir(cfg) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_run(values):
    if "rules" in values and "mode" not in values:
        values["mode"] = pipeline.LOAD_RULES
    cfg = pipeline.PipelineConfig.from_mapping(values)
    result = pipeline.run_pipeline(cfg)
    stats = result.manifest["stats"]
    print(
        f"best fitness {stats['best_fitness']:.6g} with {stats['best_lines']} lines "
        f"(seed {result.manifest['seed']}); artifacts in {cfg.out}"
    )


def cmd_mine(values):
    cfg = pipeline.PipelineConfig.from_mapping(values)
    _need(values, "input")
    db = pipeline.load_db(cfg.input, cfg.format)
    rules = pipeline.stage_mine(db, cfg.thresholds(), _out_dir(cfg))
    print(f"{len(rules)} rules -> {Path(cfg.out) / pipeline.RULES_FILE}")


def cmd_filter(values):
    extra = _split_extra(values, "rules")
    cfg = pipeline.PipelineConfig.from_mapping(values)
    rules = pipeline.read_rule_file(_need(extra, "rules"))
    kept, cls = pipeline.stage_filter(rules, cfg.classes, _out_dir(cfg))
    print(f"{len(rules)} rules, {len(kept)} after filtering on {sorted(cls.features)} ({cls.origin})")


def cmd_graph(values):
    extra = _split_extra(values, "rules")
    cfg = pipeline.PipelineConfig.from_mapping(values)
    _need(values, "input")
    db = pipeline.load_db(cfg.input, cfg.format)
    rules = pipeline.read_rule_file(_need(extra, "rules"))
    g, _ = pipeline.stage_graph(rules, db, _out_dir(cfg))
    counts = g.role_counts()
    print(f"{g.n_nodes} nodes, {g.n_edges} edges, "
          f"{counts['source']} source / {counts['intern']} intern / {counts['sink']} sink")


def cmd_evolve(values):
    extra = _split_extra(values, "graph")
    cfg = pipeline.PipelineConfig.from_mapping(values)
    if cfg.seed is None:
        cfg.seed = pipeline.fresh_seed()
        print(f"seed {cfg.seed}", file=sys.stderr)
    with open(_need(extra, "graph"), encoding="utf-8") as fh:
        g = graph_mod.graph_from_dict(json.load(fh))
    best, _ = pipeline.stage_evolve(g, cfg.ea_config(), cfg.repeats, _out_dir(cfg))
    print(f"best fitness {best.best.fitness:.6g} with {len(best.best.lines)} lines")


def cmd_render(values):
    extra = _split_extra(values, "map")
    cfg = pipeline.PipelineConfig.from_mapping(values)
    with open(_need(extra, "map"), encoding="utf-8") as fh:
        metro = metromap.map_from_dict(json.load(fh))
    pipeline.stage_render(metro, _out_dir(cfg))
    print(f"rendered {len(metro.lines)} lines -> {cfg.out}")


COMMANDS = {
    "run": cmd_run,
    "mine": cmd_mine,
    "filter": cmd_filter,
    "graph": cmd_graph,
    "evolve": cmd_evolve,
    "render": cmd_render,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        values = _settings(args)
        COMMANDS[args.command](values)
    except ArmetroError as exc:
        print(f"armetro: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, tomllib.TOMLDecodeError) as exc:
        print(f"armetro: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
