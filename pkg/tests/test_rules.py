import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from armetro.apriori import AssociationRule
from armetro.errors import EmptyAfterFilter, NoConsequentCandidate, NoRulesMined
from armetro.rules import (
    SimpleRule,
    declared_class_attributes,
    filter_rules,
    infer_class_attributes,
    simplify,
    simplify_rules,
)
from armetro.transactions import feature_of, lift

F = frozenset
ONE = Fraction(1)


def rule(ante, cons):
    return AssociationRule(F(ante), F(cons), ONE, ONE)


def test_simplify_two_by_two():
    out = simplify(rule({"X1", "X2"}, {"Y1", "Y2"}))
    assert [(s.antecedent, s.consequent) for s in out] == [
        ("X1", "Y1"), ("X1", "Y2"), ("X2", "Y1"), ("X2", "Y2"),
    ]


def test_simplify_single():
    assert [s.key for s in simplify(rule({"X"}, {"Y"}))] == [("X", "Y")]


def test_simplify_three_by_one():
    assert len(simplify(rule({"X1", "X2", "X3"}, {"Y1"}))) == 3


@settings(max_examples=200)
@given(st.sets(st.integers(0, 30), min_size=2, max_size=12), st.data())
def test_simplify_size_is_p_times_q(tokens, data):
    tokens = sorted(f"t{t}" for t in tokens)
    p = data.draw(st.integers(1, len(tokens) - 1))
    ante, cons = tokens[:p], tokens[p:]
    out = simplify(rule(ante, cons))
    assert len(out) == len(ante) * len(cons)
    assert len({s.key for s in out}) == len(out)


def test_simple_rule_rejects_self_loop():
    with pytest.raises(ValueError):
        SimpleRule("a", "a")


# -- class inference ----------------------------------------------------------

def wine_like_rules():
    rules = []
    rules += [rule({f"a_{i}"}, {"class_1"}) for i in range(59)]
    rules += [rule({f"b_{i}"}, {"class_2"}) for i in range(71)]
    rules += [rule({f"c_{i}"}, {"class_3"}) for i in range(48)]
    # the rest have consequents spanning two features
    rules += [rule({f"d_{i}"}, {f"x_{i}", f"y_{i}"}) for i in range(100)]
    return rules


def test_infer_wine_counts():
    cls = infer_class_attributes(wine_like_rules())
    assert cls.features == {"class"}
    assert cls.tokens == {"class_1", "class_2", "class_3"}
    assert cls.origin == "inferred"


def test_infer_single_consequent():
    cls = infer_class_attributes([rule({"a_1"}, {"k_x"}), rule({"b_1"}, {"k_x"})])
    assert cls.features == {"k"}


def test_infer_tie_breaks_by_name():
    rules = [rule({f"p_{i}"}, {"zeta_1"}) for i in range(5)]
    rules += [rule({f"q_{i}"}, {"alpha_1"}) for i in range(5)]
    assert infer_class_attributes(rules).features == {"alpha"}


def test_infer_skips_feature_that_cannot_anchor():
    # 'k' wins the count but each rule concluding k_x also has a k token as antecedent
    rules = [rule({"k_y"}, {"k_x"}) for _ in range(3)] + [rule({"a_1"}, {"m_1"})]
    assert infer_class_attributes(rules).features == {"m"}


def test_infer_no_candidate():
    with pytest.raises(NoConsequentCandidate):
        infer_class_attributes([rule({"a_1"}, {"x_1", "y_1"})])
    with pytest.raises(NoRulesMined):
        infer_class_attributes([])


@pytest.mark.parametrize("seed", range(30))
def test_infer_matches_brute_count(seed):
    rnd = random.Random(seed)
    feats = ["f", "g", "h", "k"]
    toks = [f"{f}_{v}" for f in feats for v in range(3)]
    rules = []
    for _ in range(rnd.randint(1, 200)):
        chosen = rnd.sample(toks, rnd.randint(2, 4))
        p = rnd.randint(1, len(chosen) - 1)
        rules.append(rule(chosen[:p], chosen[p:]))
    # brute force: count per feature the rules whose whole consequent is that feature,
    # keep only features with a consequent token in some rule free of that feature on the left
    counts = Counter()
    for r in rules:
        fs = {feature_of(t) for t in r.consequents}
        if len(fs) == 1:
            counts[fs.pop()] += 1
    eligible = [
        f for f in counts
        if any(
            not any(feature_of(t) == f for t in r.antecedents)
            and any(feature_of(t) == f for t in r.consequents)
            for r in rules
        )
    ]
    if not eligible:
        with pytest.raises(NoConsequentCandidate):
            infer_class_attributes(rules)
        return
    best = max(counts[f] for f in eligible)
    expected = min(f for f in eligible if counts[f] == best)
    assert infer_class_attributes(rules).features == {expected}


# -- filtering ----------------------------------------------------------------

def test_filter_removes_class_antecedent():
    rules = [rule({"class_1", "a_1"}, {"b_1"}), rule({"a_1"}, {"class_1"}), rule({"a_1"}, {"class_2"})]
    cls = declared_class_attributes(rules, ["class"])
    kept = filter_rules(rules, cls)
    assert kept == rules[1:]
    assert cls.tokens == {"class_1", "class_2"}


def test_filter_identity():
    rules = [rule({"a_1"}, {"class_1"}), rule({"b_1"}, {"a_1"})]
    cls = declared_class_attributes(rules, ["class"])
    assert filter_rules(rules, cls) == rules


def test_filter_empty_after():
    rules = [rule({"class_1"}, {"a_1"}), rule({"b_1"}, {"class_1"})]
    cls = declared_class_attributes(rules, ["class"])
    with pytest.raises(EmptyAfterFilter):
        filter_rules(rules[:1], cls)


def test_declared_unknown_class():
    with pytest.raises(NoConsequentCandidate):
        declared_class_attributes([rule({"a_1"}, {"b_1"})], ["nope"])


@pytest.mark.parametrize("seed", range(10))
def test_filtered_antecedents_are_class_free(seed):
    rnd = random.Random(seed)
    toks = [f"{f}_{v}" for f in "abcd" for v in range(2)] + ["class_1", "class_2"]
    rules = []
    for _ in range(80):
        chosen = rnd.sample(toks, 3)
        rules.append(rule(chosen[:1], chosen[1:]))
    rules.append(rule({"a_0"}, {"class_1"}))
    kept = filter_rules(rules, declared_class_attributes(rules, ["class"]))
    assert all(not any(t.startswith("class_") for t in r.antecedents) for r in kept)


def test_simplify_rules_dedupes_and_attaches_lift(db4):
    rules = [rule({"a"}, {"b", "c"}), rule({"a"}, {"b"})]
    out = simplify_rules(rules, db4)
    assert [s.key for s in out] == [("a", "b"), ("a", "c")]
    assert out[0].lift == lift({"a"}, {"b"}, db4) == Fraction(8, 9)
