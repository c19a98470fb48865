"""Rule filtering and simplification into single-antecedent/single-consequent edges."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .apriori import AssociationRule
from .errors import EmptyAfterFilter, NoConsequentCandidate, NoRulesMined
from .transactions import TransactionDB, feature_of, lift


@dataclass(frozen=True)
class SimpleRule:
    antecedent: str
    consequent: str
    lift: Optional[Fraction] = None

    def __post_init__(self):
        if self.antecedent == self.consequent:
            raise ValueError(f"simple rule {self.antecedent!r} => itself")

    @property
    def key(self) -> tuple[str, str]:
        return (self.antecedent, self.consequent)

    def with_lift(self, value) -> "SimpleRule":
        return SimpleRule(self.antecedent, self.consequent, Fraction(value))

    def __str__(self):
        return f"{self.antecedent} => {self.consequent}"


@dataclass(frozen=True)
class ClassAttributeSet:
    """Class-like features and the tokens of those features used as final stops."""

    features: frozenset[str]
    tokens: frozenset[str]
    origin: str  # "declared" | "inferred"


def simplify(rule: AssociationRule) -> list[SimpleRule]:
    """All p*q (antecedent, consequent) pairs of ``rule``, lexicographic order."""
    return [
        SimpleRule(x, y)
        for x in sorted(rule.antecedents)
        for y in sorted(rule.consequents)
    ]


def _single_feature(tokens: Iterable[str]) -> Optional[str]:
    features = {feature_of(t) for t in tokens}
    return features.pop() if len(features) == 1 else None


def consequent_feature_counts(rules: Sequence[AssociationRule]) -> Counter:
    """Number of rules whose consequent side is made of one feature's tokens only."""
    counts = Counter()
    for rule in rules:
        f = _single_feature(rule.consequents)
        if f is not None:
            counts[f] += 1
    return counts


def _class_tokens(rules: Sequence[AssociationRule], features: frozenset[str]) -> frozenset[str]:
    # tokens of the class features that end up as a consequent of a retained rule
    tokens = set()
    for rule in rules:
        if any(feature_of(t) in features for t in rule.antecedents):
            continue
        tokens.update(t for t in rule.consequents if feature_of(t) in features)
    return frozenset(tokens)


def infer_class_attributes(rules: Sequence[AssociationRule]) -> ClassAttributeSet:
    """Pick the feature that forms the (single-feature) consequent of the most rules.

    Ties go to the lexicographically smaller feature name. A candidate only
    qualifies if some of its tokens survive filtering as consequents.
    """
    if not rules:
        raise NoRulesMined("no rules to infer class attributes from")
    counts = consequent_feature_counts(rules)
    for feature, _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
        features = frozenset((feature,))
        tokens = _class_tokens(rules, features)
        if tokens:
            return ClassAttributeSet(features, tokens, "inferred")
    raise NoConsequentCandidate(
        "no feature can anchor filtering: every candidate consequent also occurs "
        "as an antecedent in every rule that concludes it"
    )


def declared_class_attributes(rules: Sequence[AssociationRule], features: Iterable[str]) -> ClassAttributeSet:
    features = frozenset(f.strip() for f in features if f.strip())
    if not features:
        raise NoConsequentCandidate("empty class declaration")
    tokens = _class_tokens(rules, features)
    if not tokens:
        raise NoConsequentCandidate(
            f"declared classes {sorted(features)} never occur as a consequent of a retained rule"
        )
    return ClassAttributeSet(features, tokens, "declared")


def filter_rules(rules: Sequence[AssociationRule], classes: ClassAttributeSet) -> list[AssociationRule]:
    """Drop every rule that uses a class token as an antecedent; order is kept."""
    kept = [
        r for r in rules
        if not (r.antecedents & classes.tokens)
        and not any(feature_of(t) in classes.features for t in r.antecedents)
    ]
    if not kept:
        raise EmptyAfterFilter("no rule survives class filtering")
    return kept


def simplify_rules(rules: Sequence[AssociationRule], db: Optional[TransactionDB] = None) -> list[SimpleRule]:
    """Simplify every rule, drop repeated pairs (first wins), attach lift from ``db``."""
    seen = set()
    out = []
    for rule in rules:
        for s in simplify(rule):
            if s.key in seen:
                continue
            seen.add(s.key)
            if db is not None:
                s = s.with_lift(lift((s.antecedent,), (s.consequent,), db))
            out.append(s)
    return out
