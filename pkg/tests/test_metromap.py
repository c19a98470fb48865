import random
from fractions import Fraction

import pytest

from armetro.errors import Infeasible, InvalidConfig, TooFewLines
from armetro.metromap import (
    DIVERSITY,
    MetroLine,
    MetroMap,
    ObjectiveConfig,
    coverage_line,
    coverage_map,
    fitness,
    is_feasible,
    line_from_stops,
    map_from_json,
    map_to_json,
    squality,
)
from armetro.rules import SimpleRule
from oracles import as_triples, straight_fitness


def line(*lifts, names=None, start=0):
    names = names or [f"n{start + i}" for i in range(len(lifts) + 1)]
    return MetroLine(tuple(SimpleRule(a, b, Fraction(w)) for a, b, w in zip(names, names[1:], lifts)))


R1 = SimpleRule("a", "b", Fraction(2))
R2 = SimpleRule("b", "c", Fraction(3))
R3 = SimpleRule("b", "d", Fraction(1))


def test_coverage_line():
    assert coverage_line(line(2, 3)) == 2.5
    assert coverage_line(line(1)) == 1
    assert coverage_line(line(Fraction(7, 3), Fraction(7, 3), Fraction(7, 3))) == pytest.approx(7 / 3)


def test_coverage_map():
    two = MetroMap((line(2, 3), line(1, start=10)))
    assert coverage_map(two) == 1.75
    assert coverage_map(MetroMap((line(2, 3),))) == 2.5
    assert coverage_map(MetroMap((line(2, 3), line(2, 3)))) == 2.5


def test_squality_cases():
    disjoint = MetroMap((line(2, 3), line(1, start=10)))
    assert squality(disjoint) == 1
    partial = MetroMap((MetroLine((R1, R2)), MetroLine((R1, R3))))
    assert squality(partial) == 0.75
    same = MetroMap((MetroLine((R1,)), MetroLine((R1,))))
    assert squality(same) == 0
    with pytest.raises(TooFewLines):
        squality(MetroMap((MetroLine((R1,)),)))


def test_fitness_examples():
    cfg = ObjectiveConfig(weight=0.1)
    m = MetroMap((line(2, 3), line(1, start=10)))
    assert fitness(m, cfg) == pytest.approx(3.5, abs=1e-15)
    # coverage 1, squality 0.75
    r1 = SimpleRule("a", "b", Fraction(1))
    r2 = SimpleRule("b", "c", Fraction(1))
    r3 = SimpleRule("x", "b", Fraction(1))
    m2 = MetroMap((MetroLine((r1, r2)), MetroLine((r3, r2))))
    assert squality(m2) == 0.75
    assert fitness(m2, cfg) == pytest.approx(2.05, abs=1e-15)
    assert fitness(m2, ObjectiveConfig(weight=0)) == coverage_map(m2) * 2


def test_diversity_switch():
    r1 = SimpleRule("a", "b", Fraction(1))
    r2 = SimpleRule("b", "c", Fraction(1))
    r3 = SimpleRule("x", "b", Fraction(1))
    m2 = MetroMap((MetroLine((r1, r2)), MetroLine((r3, r2))))
    assert fitness(m2, ObjectiveConfig(quality_term=DIVERSITY)) == pytest.approx((1 + 0.1 * 0.75) * 2)


def test_fitness_rejects_infeasible():
    with pytest.raises(Infeasible):
        fitness(MetroMap((line(2, 3),)), ObjectiveConfig())


@pytest.mark.parametrize("kw", [{"tau": 0}, {"k_max": 1}, {"weight": -1}, {"quality_term": "x"}])
def test_objective_config_validation(kw):
    with pytest.raises(InvalidConfig):
        ObjectiveConfig(**kw)


# -- feasibility ----------------------------------------------------------------

def test_feasible_two_lines(ograph):
    m = MetroMap((line_from_stops(ograph, ["s1", "i2", "t1"]), line_from_stops(ograph, ["s3", "t2"])))
    assert is_feasible(m, ObjectiveConfig(), ograph)


def test_coherence_violation():
    long_line = line(*([1] * 11))
    m = MetroMap((long_line, line(1, start=50)))
    report = is_feasible(m, ObjectiveConfig(tau=10, k_max=10))
    assert not report
    assert any("coherence" in v for v in report.violations)


def test_shared_start_violation(ograph):
    m = MetroMap((line_from_stops(ograph, ["s1", "i2", "t1"]), line_from_stops(ograph, ["s1", "i1", "t1"])))
    report = is_feasible(m, ObjectiveConfig(), ograph)
    assert not report
    assert any("distinct" in v for v in report.violations)


def test_graph_violations(ograph):
    bad = MetroMap((
        line_from_stops(ograph, ["i1", "t1"]),          # not a source
        line_from_stops(ograph, ["s1", "i2"]),          # not a sink
        MetroLine((SimpleRule("s2", "t1", Fraction(1)),)),  # not an edge
        MetroLine((ograph.edge("s3", "i2"), ograph.edge("i1", "t1"))),  # broken chain
    ))
    v = is_feasible(bad, ObjectiveConfig(k_max=3), ograph).violations
    text = " | ".join(v)
    for needle in ("non-source", "non-sink", "not an edge", "chaining", "> K=3"):
        assert needle in text


def test_repeated_stop_violation(ograph):
    cyc = MetroLine(tuple(ograph.edge(a, b) for a, b in [("s1", "i1"), ("i1", "i2"), ("i2", "i3"), ("i3", "i1"), ("i1", "t1")]))
    m = MetroMap((cyc, line_from_stops(ograph, ["s3", "t2"])))
    assert any("repeated" in v for v in is_feasible(m, ObjectiveConfig(), ograph).violations)


# -- properties ------------------------------------------------------------------

def random_map(rnd, pool_size=12, max_lines=6, max_len=5):
    pool = [SimpleRule(f"u{i}", f"v{i}", Fraction(rnd.randint(1, 40), 10)) for i in range(pool_size)]
    lines = []
    for k in range(rnd.randint(2, max_lines)):
        lines.append(MetroLine(tuple(rnd.sample(pool, rnd.randint(1, max_len)))))
    return MetroMap(tuple(lines))


@pytest.mark.parametrize("seed", range(40))
def test_permutation_and_scaling(seed):
    rnd = random.Random(seed)
    m = random_map(rnd)
    q = squality(m)
    assert 0 <= q <= 1
    perm = list(m.lines)
    rnd.shuffle(perm)
    pm = MetroMap(tuple(perm))
    assert squality(pm) == pytest.approx(q, abs=1e-15)
    lines = as_triples(m)
    assert straight_fitness(lines, 0.1) == pytest.approx(straight_fitness(as_triples(pm), 0.1), abs=1e-12)

    c = Fraction(rnd.randint(1, 9), rnd.randint(1, 9))
    scaled = MetroMap(tuple(
        MetroLine(tuple(SimpleRule(r.antecedent, r.consequent, r.lift * c) for r in ln.rules)) for ln in m.lines
    ))
    assert coverage_map(scaled) == pytest.approx(float(c) * coverage_map(m), rel=1e-12)
    assert squality(scaled) == q


def test_squality_one_iff_disjoint():
    rnd = random.Random(3)
    for _ in range(200):
        m = random_map(rnd, pool_size=8, max_lines=3, max_len=3)
        keysets = [set(ln.keys) for ln in m.lines]
        disjoint = all(not (a & b) for i, a in enumerate(keysets) for b in keysets[i + 1:])
        assert (squality(m) == 1) == disjoint


def test_argmax_invariant_to_lift_scaling():
    rnd = random.Random(9)
    cands = [random_map(rnd) for _ in range(30)]

    def score(m):
        # fitness with w = 0
        return coverage_map(m) * len(m.lines)

    best = max(range(30), key=lambda i: score(cands[i]))
    scaled = [
        MetroMap(tuple(MetroLine(tuple(SimpleRule(r.antecedent, r.consequent, r.lift * 7)
                                       for r in ln.rules)) for ln in m.lines))
        for m in cands
    ]
    assert max(range(30), key=lambda i: score(scaled[i])) == best


def test_json_round_trip(ograph):
    m = MetroMap((line_from_stops(ograph, ["s1", "i2", "t1"]), line_from_stops(ograph, ["s3", "t2"])), 4.2)
    text = map_to_json(m)
    back = map_from_json(text)
    assert back == m and back.fitness == 4.2
    assert map_to_json(back) == text


def test_json_from_stops_only():
    m = map_from_json('{"lines": [{"stops": ["a", "b", "c"]}, {"stops": ["d", "c"]}]}')
    assert [ln.stops for ln in m.lines] == [["a", "b", "c"], ["d", "c"]]
