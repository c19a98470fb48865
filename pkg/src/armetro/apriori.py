"""Level-wise Apriori mining and rule generation, plus the rule file format.

A rule file holds one rule per line::

    ante1&ante2 => cons1&cons2 ; supp=0.5 ; conf=0.666666666667

with the tokens of each side sorted lexicographically.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import Iterable, Mapping, Sequence, TextIO

from .errors import InvalidThresholds, MalformedRule
from .transactions import TransactionDB

Itemset = frozenset


def as_fraction(value) -> Fraction:
    """Exact rational from an int/Fraction/str, or from a float via its decimal repr."""
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(str(value).strip())


@dataclass(frozen=True)
class MiningThresholds:
    min_support: Fraction
    min_confidence: Fraction

    def __post_init__(self):
        for name in ("min_support", "min_confidence"):
            try:
                value = as_fraction(getattr(self, name))
            except (ValueError, ZeroDivisionError):
                raise InvalidThresholds(f"{name} is not a number") from None
            if not 0 < value <= 1:
                raise InvalidThresholds(f"{name} must lie in (0, 1], got {value}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class AssociationRule:
    antecedents: frozenset[str]
    consequents: frozenset[str]
    support: Fraction
    confidence: Fraction

    def __post_init__(self):
        object.__setattr__(self, "antecedents", frozenset(self.antecedents))
        object.__setattr__(self, "consequents", frozenset(self.consequents))
        if not self.antecedents or not self.consequents:
            raise MalformedRule("rule sides must be non-empty")
        if self.antecedents & self.consequents:
            raise MalformedRule("rule sides must be disjoint")

    def sort_key(self):
        return (sorted(self.antecedents), sorted(self.consequents))

    def __str__(self):
        return format_rule(self)


def mine_frequent_itemsets(db: TransactionDB, min_support) -> dict[frozenset[str], Fraction]:
    """All itemsets with support >= ``min_support``, mapped to their exact support."""
    min_support = as_fraction(min_support)
    n = db.count
    frequent: dict[frozenset[str], Fraction] = {}

    level = {}
    for tok in sorted(db.item_universe):
        s = Fraction(db.count_containing((tok,)), n)
        if s >= min_support:
            level[frozenset((tok,))] = s
    k = 1
    while level:
        frequent.update(level)
        k += 1
        # join step on sorted (k-1)-prefixes, then prune by the subset property
        prev = sorted(tuple(sorted(s)) for s in level)
        candidates = []
        for i, a in enumerate(prev):
            for b in prev[i + 1:]:
                if a[:-1] != b[:-1]:
                    break
                cand = a + (b[-1],)
                if all(frozenset(sub) in level for sub in combinations(cand, k - 1)):
                    candidates.append(frozenset(cand))
        level = {}
        for cand in candidates:
            s = Fraction(db.count_containing(cand), n)
            if s >= min_support:
                level[cand] = s
    return frequent


def generate_rules(
    frequent: Mapping[frozenset[str], Fraction],
    db: TransactionDB,
    thresholds: MiningThresholds,
) -> list[AssociationRule]:
    """Split every frequent itemset of size >= 2 into all (X, Y) rules passing min_confidence."""
    rules = []
    # compare supp/n_x >= c_num/c_den by cross-multiplying, so the exact
    # Fraction is only built for rules that are kept
    c_num, c_den = thresholds.min_confidence.numerator, thresholds.min_confidence.denominator
    for itemset, supp in frequent.items():
        if len(itemset) < 2:
            continue
        items = sorted(itemset)
        for r in range(1, len(items)):
            for ante in combinations(items, r):
                x = frozenset(ante)
                n_x = frequent.get(x)
                # subsets of a frequent itemset are frequent; fall back to counting
                # if the caller handed over a partial map
                if n_x is None:
                    n_x = Fraction(db.count_containing(x), db.count)
                if supp.numerator * n_x.denominator * c_den >= c_num * n_x.numerator * supp.denominator:
                    rules.append(AssociationRule(x, itemset - x, supp, supp / n_x))
    rules.sort(key=AssociationRule.sort_key)
    return rules


def mine_rules(db: TransactionDB, thresholds: MiningThresholds) -> list[AssociationRule]:
    frequent = mine_frequent_itemsets(db, thresholds.min_support)
    return generate_rules(frequent, db, thresholds)


def _fmt_measure(value: Fraction) -> str:
    return f"{float(value):.12g}"


def _side(tokens: Iterable[str]) -> str:
    tokens = sorted(tokens)
    for tok in tokens:
        if "&" in tok or "=>" in tok or ";" in tok:
            raise MalformedRule(f"token {tok!r} cannot be written to a rule file")
    return "&".join(tokens)


def format_rule(rule: AssociationRule) -> str:
    return (
        f"{_side(rule.antecedents)} => {_side(rule.consequents)}"
        f" ; supp={_fmt_measure(rule.support)} ; conf={_fmt_measure(rule.confidence)}"
    )


def parse_rule(line: str, line_number: int = 0) -> AssociationRule:
    parts = [p.strip() for p in line.split(";")]
    if len(parts) != 3 or "=>" not in parts[0]:
        raise MalformedRule(f"line {line_number}: expected 'X => Y ; supp=.. ; conf=..'")
    lhs, _, rhs = parts[0].partition("=>")
    measures = {}
    for part in parts[1:]:
        key, eq, value = part.partition("=")
        if not eq:
            raise MalformedRule(f"line {line_number}: bad measure {part!r}")
        try:
            measures[key.strip()] = Fraction(value.strip())
        except ValueError:
            raise MalformedRule(f"line {line_number}: bad number {value!r}") from None
    if set(measures) != {"supp", "conf"}:
        raise MalformedRule(f"line {line_number}: need supp and conf")
    ante = [t.strip() for t in lhs.split("&")]
    cons = [t.strip() for t in rhs.split("&")]
    if not all(ante) or not all(cons):
        raise MalformedRule(f"line {line_number}: empty token")
    try:
        return AssociationRule(frozenset(ante), frozenset(cons), measures["supp"], measures["conf"])
    except MalformedRule as exc:
        raise MalformedRule(f"line {line_number}: {exc}") from None


def write_rules(rules: Sequence[AssociationRule], fh: TextIO) -> None:
    for rule in rules:
        fh.write(format_rule(rule) + "\n")


def read_rules(fh: TextIO) -> list[AssociationRule]:
    rules = []
    for number, line in enumerate(fh, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rules.append(parse_rule(line, number))
    return rules
