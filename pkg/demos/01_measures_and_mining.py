"""
Measures and Apriori mining
===========================

Support, confidence and lift are computed as exact fractions, then Apriori
turns a small basket dataset into association rules.
"""
# %%
# A four-transaction toy database.
from armetro import MiningThresholds, TransactionDB, confidence, lift, mine_rules, support

db = TransactionDB.from_iterable([{"a", "b", "c"}, {"a", "b"}, {"a", "c"}, {"b", "c"}])
print("supp{a,b} =", support({"a", "b"}, db))
print("conf(a => b) =", confidence({"a"}, {"b"}, db))
print("lift(a => b) =", lift({"a"}, {"b"}, db))

# %%
# Counting goes through a boolean transactions-by-items matrix.
print(db.items)
print(db.matrix.astype(int))

# %%
# Mine every rule with support >= 1/4 and confidence >= 1/2.
# Thresholds accept fractions, decimal strings or floats.
rules = mine_rules(db, MiningThresholds("0.25", "0.5"))
for r in rules:
    print(sorted(r.antecedents), "=>", sorted(r.consequents), r.support, r.confidence)

# %%
# The rule file format round-trips through ``write_rules``/``read_rules``.
import io

from armetro import read_rules, write_rules

buf = io.StringIO()
write_rules(rules, buf)
print(buf.getvalue())
assert len(read_rules(io.StringIO(buf.getvalue()))) == len(rules)
