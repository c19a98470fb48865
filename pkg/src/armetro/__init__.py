"""Metro maps of association-rule information.

The pipeline: mine rules from transactions, filter out rules that use a class
attribute as an antecedent, split rules into single-antecedent/consequent
edges, build the attribute graph, evolve a set of high-lift source-to-sink
lines, and draw them as a metro map.
"""
from .apriori import (
    AssociationRule,
    MiningThresholds,
    generate_rules,
    mine_frequent_itemsets,
    mine_rules,
    read_rules,
    write_rules,
)
from .ea import EAConfig, RunTrace, crossover, evolve, initialize_population, mutate, random_path, select_survivor
from .graph import AttributeGraph, build_attribute_graph, out_neighbors
from .metromap import (
    MetroLine,
    MetroMap,
    ObjectiveConfig,
    coverage_line,
    coverage_map,
    fitness,
    is_feasible,
    map_from_json,
    map_to_json,
    squality,
)
from .render import find_interrelations, render_dot, render_svg
from .rules import ClassAttributeSet, SimpleRule, filter_rules, infer_class_attributes, simplify, simplify_rules
from .transactions import TransactionDB, confidence, lift, load_transactions, support

__version__ = "0.1.0"
