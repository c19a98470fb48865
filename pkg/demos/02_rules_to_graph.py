"""
From rules to an attribute graph
================================

The bundled weather table is mined, rules that use the class on their left
side are dropped, multi-item rules are split into simple pairs, and the
pairs become the edges of a directed graph.
"""
# %%
from importlib.resources import files

from armetro import (
    MiningThresholds,
    build_attribute_graph,
    filter_rules,
    infer_class_attributes,
    load_transactions,
    mine_rules,
    simplify_rules,
)

with files("armetro").joinpath("data/weather.csv").open("rb") as fh:
    db = load_transactions(fh, format="tabular")
print(len(db), "transactions over", len(db.item_universe), "attribute tokens")

# %%
rules = mine_rules(db, MiningThresholds("0.1", "0.8"))
print(len(rules), "rules")

# %%
# Without a declared class, the feature that most often forms a rule's whole
# right-hand side is taken as the class.
classes = infer_class_attributes(rules)
print("class features:", classes.features, "tokens:", sorted(classes.tokens))
kept = filter_rules(rules, classes)
print(len(kept), "rules left after filtering")

# %%
simple = simplify_rules(kept, db)
graph = build_attribute_graph(simple)
print(graph.n_nodes, "nodes,", graph.n_edges, "edges", graph.role_counts())
print("sources:", graph.sources)
print("sinks:", graph.sinks)
