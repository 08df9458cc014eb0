"""Brute-force oracles: TBR moves and display embedding."""

import pytest

from cherrypick.errors import CapExceeded, LabelMismatch, ScaleGuard, TooSmall
from cherrypick.generate import random_tree, seeded_rng
from cherrypick.networks import network_from_tree
from cherrypick.newick import parse_forest, parse_network, parse_tree
from cherrypick.oracles import displays, tbr_distance_bfs, tbr_neighbors
from cherrypick.trees import Forest, remove_edge_traced

from util import all_topologies

FOUR_CYCLE = "1 -- a\n2 -- b\n3 -- c\n4 -- d\na -- b\nb -- c\nc -- d\nd -- a\n"


# ---------------------------------------------------------------------------
# TBR neighborhood


def test_quartet_neighbors_are_the_other_two_topologies():
    tops = {Forest([t]).canonical: t for t in all_topologies("1234")}
    assert len(tops) == 3
    for canon, tree in tops.items():
        got = tbr_neighbors(tree)
        assert got == set(tops) - {canon}


def test_neighbors_exclude_self():
    rng = seeded_rng(1212)
    for _ in range(10):
        t = random_tree([str(i) for i in range(1, 7)], rng)
        assert t.canonical not in tbr_neighbors(t)


def test_neighbor_count_invariant_under_relabeling():
    t1 = parse_tree("((1,2),((3,4),(5,6)));")
    t2 = parse_tree("((5,6),((1,3),(2,4)));")  # same shape, relabeled
    assert len(tbr_neighbors(t1)) == len(tbr_neighbors(t2))


def test_neighbors_too_small():
    with pytest.raises(TooSmall):
        tbr_neighbors(parse_tree("(1,(2,3));"))


@pytest.mark.parametrize("n,count", [(4, 3), (5, 15), (6, 105)])
def test_bfs_closure_reaches_every_topology(n, count):
    labels = "123456"[:n]
    start = next(all_topologies(labels))
    seen = {start.canonical}
    frontier = [start]
    while frontier:
        nxt = []
        for t in frontier:
            for canon in tbr_neighbors(t):
                if canon not in seen:
                    seen.add(canon)
                    nxt.append(parse_tree(canon))
        frontier = nxt
    assert len(seen) == count


# ---------------------------------------------------------------------------
# TBR distance


def test_bfs_distance_zero_on_equal():
    t = parse_tree("((1,2),((3,4),(5,6)));")
    assert tbr_distance_bfs(t, t) == 0


def test_bfs_distance_one_between_distinct_quartets():
    a = parse_tree("((1,2),(3,4));")
    b = parse_tree("((1,3),(2,4));")
    assert tbr_distance_bfs(a, b) == 1


def test_bfs_distance_symmetric_on_five_leaves():
    rng = seeded_rng(1313)
    labels = [str(i) for i in range(1, 6)]
    for _ in range(10):
        t1 = random_tree(labels, rng)
        t2 = random_tree(labels, rng)
        assert tbr_distance_bfs(t1, t2) == tbr_distance_bfs(t2, t1)


def test_bfs_distance_label_mismatch():
    with pytest.raises(LabelMismatch):
        tbr_distance_bfs(parse_tree("((1,2),(3,4));"), parse_tree("((1,2),(3,5));"))


def test_bfs_distance_cap():
    a = parse_tree("((1,2),(3,4));")
    b = parse_tree("((1,3),(2,4));")
    with pytest.raises(CapExceeded):
        tbr_distance_bfs(a, b, cap=0)
    assert tbr_distance_bfs(a, b, cap=1) == 1


# ---------------------------------------------------------------------------
# displays


def test_tree_displays_itself():
    t = parse_tree("((1,2),((3,4),(5,6)));")
    n = network_from_tree(t)
    got = displays(n, Forest([t]))
    assert got is not None
    image = got.images[0]
    assert len(image.vertex_map) == t.num_vertices


def test_tree_displays_its_edge_deletions():
    rng = seeded_rng(1414)
    for _ in range(15):
        t = random_tree([str(i) for i in range(1, 8)], rng)
        n = network_from_tree(t)
        f = Forest([t])
        edges = t.edges()
        edge = edges[rng.randrange(len(edges))]
        cut, _ = remove_edge_traced(f, 0, edge)
        assert displays(n, cut) is not None


def test_four_cycle_displays_two_of_three_quartets():
    n = parse_network(FOUR_CYCLE)
    assert displays(n, parse_forest("((1,2),(3,4));")) is not None
    assert displays(n, parse_forest("((1,4),(2,3));")) is not None
    assert displays(n, parse_forest("((1,3),(2,4));")) is None


def test_displays_forest_images_are_disjoint():
    n = parse_network(FOUR_CYCLE)
    f = parse_forest("(1,2);\n(3,4);")
    got = displays(n, f)
    assert got is not None
    used = [img.vertices for img in got.images]
    assert not (used[0] & used[1])


def test_displays_subset_of_leaves():
    n = parse_network(FOUR_CYCLE)
    assert displays(n, parse_forest("(1,2);")) is not None


def test_displays_monotone_under_edge_deletion():
    rng = seeded_rng(1515)
    n = parse_network(FOUR_CYCLE)
    f = parse_forest("((1,2),(3,4));")
    assert displays(n, f) is not None
    for edge in f.components[0].edges():
        smaller, _ = remove_edge_traced(f, 0, edge)
        assert displays(n, smaller) is not None


def test_displays_label_mismatch():
    n = parse_network(FOUR_CYCLE)
    with pytest.raises(LabelMismatch):
        displays(n, parse_forest("(1,9);"))


def test_displays_scale_guard():
    n = parse_network(FOUR_CYCLE)
    with pytest.raises(ScaleGuard):
        displays(n, parse_forest("(1,2);"), max_vertices=4)


def test_displays_on_multiedge_pseudo_network():
    n = parse_network("x -- u\ny -- v\nu -- v\nu -- v\n")
    assert displays(n, parse_forest("(x,y);")) is not None
    assert displays(n, parse_forest("x;\ny;")) is not None


def _tree_displays_by_restriction(tree, forest):
    """Independent characterization for tree hosts: every component must
    equal the host's restriction to its leaves, and the minimal spanning
    subtrees must be pairwise vertex-disjoint."""
    from cherrypick.trees import restrict

    spans = []
    for comp in forest.components:
        if restrict(tree, comp.leaf_labels).canonical != comp.canonical:
            return False
        vs = set()
        leaves = sorted(comp.leaf_labels)
        for i in range(len(leaves)):
            for j in range(i + 1, len(leaves)):
                vs.update(tree.path(tree.vertex_of[leaves[i]], tree.vertex_of[leaves[j]]))
        vs.add(tree.vertex_of[leaves[0]])
        spans.append(vs)
    for i in range(len(spans)):
        for j in range(i + 1, len(spans)):
            if spans[i] & spans[j]:
                return False
    return True


def test_displays_matches_restriction_characterization_on_trees():
    from cherrypick.generate import random_forest, random_tree

    rng = seeded_rng(1616)
    hits = misses = 0
    for _ in range(120):
        n = rng.randint(3, 7)
        labels = [str(i) for i in range(1, n + 1)]
        host = random_tree(labels, rng)
        f = random_forest(labels, rng.randint(1, min(3, n)), rng)
        want = _tree_displays_by_restriction(host, f)
        got = displays(network_from_tree(host), f) is not None
        assert got == want, (host.canonical, f.canonical)
        hits += want
        misses += not want
    assert hits and misses  # both outcomes exercised
