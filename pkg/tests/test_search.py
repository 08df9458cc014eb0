"""Greedy construction and exact minimum-weight search."""

import pytest

from cherrypick.errors import GroundSetMismatch, NotATree
from cherrypick.generate import random_forest_pair, random_tree, seeded_rng
from cherrypick.newick import parse_forest
from cherrypick.reductions import labels_of, validate_trace
from cherrypick.search import greedy_cps, hybrid_number, min_weight_cps, tbr_distance
from cherrypick.trees import Forest, canonical_form

from util import all_topologies


FIG_FOREST = "(1,3);\n((2,4),(5,6));"


# ---------------------------------------------------------------------------
# greedy


def test_greedy_identical_trees_weight_zero():
    f = parse_forest("((1,2),((3,4),(5,6)));")
    trace = greedy_cps(f, f)
    assert trace.weight == 0
    assert validate_trace(f, f, trace) == 0
    assert all(s.rule in ("C1", "C3") for s in trace.steps)


def test_greedy_quartets_weight_one_with_xx_pattern():
    F = parse_forest("((1,2),(3,4));")
    F2 = parse_forest("((1,3),(2,4));")
    trace = greedy_cps(F, F2)
    assert trace.weight == 1
    assert trace.steps[0].rule == "C2a_i" and trace.steps[0].cut == "e_x"
    assert trace.steps[1].rule == "C3"
    assert trace.steps[0].label == trace.steps[1].label == "1"
    assert validate_trace(F, F2, trace) == 1


def test_greedy_all_singletons_all_c3():
    F = parse_forest("1;\n2;\n3;")
    trace = greedy_cps(F, F)
    assert trace.weight == 0
    assert all(s.rule == "C3" for s in trace.steps)
    assert labels_of(trace) == ("1", "2", "3")


def test_greedy_singleton_instance():
    F = parse_forest("x;")
    trace = greedy_cps(F, F)
    assert len(trace.steps) == 0 and trace.terminal == "x"


def test_greedy_mismatch():
    with pytest.raises(GroundSetMismatch):
        greedy_cps(parse_forest("(1,2);"), parse_forest("(1,3);"))


def test_greedy_always_terminates_with_valid_length(subtests=None):
    rng = seeded_rng(808)
    for _ in range(150):
        n = rng.randint(1, 10)
        labels = [str(i) for i in range(1, n + 1)]
        F, F2 = random_forest_pair(labels, rng.randint(1, min(3, n)), rng)
        trace = greedy_cps(F, F2)
        assert validate_trace(F, F2, trace) == trace.weight
        assert len(labels_of(trace)) >= n


# ---------------------------------------------------------------------------
# exact search


def test_min_weight_identity_is_zero():
    for text in ("x;", "(1,2);", "((1,2),(3,4));", "((1,2),((3,4),(5,6)));"):
        f = parse_forest(text)
        result = min_weight_cps(f, f)
        assert result.min_weight == 0
        assert validate_trace(f, f, result.witness) == 0


def test_min_weight_distinct_quartets_is_one():
    F = parse_forest("((1,2),(3,4));")
    F2 = parse_forest("((1,3),(2,4));")
    result = min_weight_cps(F, F2)
    assert result.min_weight == 1
    assert validate_trace(F, F2, result.witness) == 1


def test_min_weight_never_exceeds_greedy():
    rng = seeded_rng(909)
    labels = [str(i) for i in range(1, 7)]
    for _ in range(25):
        F, F2 = random_forest_pair(labels, rng.randint(1, 3), rng)
        g = greedy_cps(F, F2)
        r = min_weight_cps(F, F2)
        assert r.min_weight <= g.weight


def test_min_weight_symmetric():
    rng = seeded_rng(1010)
    labels = [str(i) for i in range(1, 7)]
    for _ in range(15):
        F, F2 = random_forest_pair(labels, rng.randint(1, 3), rng)
        assert min_weight_cps(F, F2).min_weight == min_weight_cps(F2, F).min_weight


def test_min_weight_zero_iff_isomorphic_trees():
    tops = [Forest([t]) for t in all_topologies("1234")]
    for a in tops:
        for b in tops:
            w = min_weight_cps(a, b).min_weight
            assert (w == 0) == (canonical_form(a) == canonical_form(b))


def test_min_weight_forests_can_be_zero_without_equality():
    # the pair collapses by removals alone even though the forests differ
    F = parse_forest("(1,2);\n3;")
    F2 = parse_forest("1;\n(2,3);")
    assert min_weight_cps(F, F2).min_weight == 0


def test_witness_is_deterministic():
    F = parse_forest("((1,2),(3,4));")
    F2 = parse_forest("((1,3),(2,4));")
    a = min_weight_cps(F, F2).witness
    b = min_weight_cps(F, F2).witness
    assert a == b


def test_budget_gives_bounded_interval():
    rng = seeded_rng(1111)
    labels = [str(i) for i in range(1, 8)]
    T1 = Forest([random_tree(labels, rng)])
    T2 = Forest([random_tree(labels, rng)])
    exact = min_weight_cps(T1, T2)
    if exact.min_weight == 0:
        return
    result = min_weight_cps(T1, T2, budget=1)
    assert result.status == "bounded"
    assert result.min_weight is None
    assert result.lower <= exact.min_weight <= result.upper
    assert validate_trace(T1, T2, result.witness) == result.upper


def test_hybrid_number_fixture_identity():
    f = parse_forest(FIG_FOREST)
    assert hybrid_number(f, f) == 0


def test_hybrid_number_symmetry():
    F = parse_forest("(1,3);\n((2,4),(5,6));")
    F2 = parse_forest("((1,2),((3,4),(5,6)));")
    assert hybrid_number(F, F2) == hybrid_number(F2, F)


def test_tbr_distance_requires_trees():
    with pytest.raises(NotATree):
        tbr_distance(parse_forest("1;\n(2,3);"), parse_forest("(1,(2,3));"))


def test_tbr_distance_quartets():
    F = parse_forest("((1,2),(3,4));")
    F2 = parse_forest("((1,4),(2,3));")
    assert tbr_distance(F, F2) == 1


def test_min_weight_two_expected_from_bfs_oracle():
    # frozen from the BFS oracle: both pairs are two TBR moves apart
    a = parse_forest("((1,2),((3,4),(5,6)));")
    b = parse_forest("((3,6),((1,4),(2,5)));")
    assert min_weight_cps(a, b).min_weight == 2
    cat1 = parse_forest("((1,2),(3,(4,(5,6))));")
    cat2 = parse_forest("((1,5),(3,(4,(2,6))));")
    assert min_weight_cps(cat1, cat2).min_weight == 2
