"""Shared test helpers: an independent topology enumerator and a
label-respecting network isomorphism check.

Both are deliberately written from scratch (recursive insertion and plain
backtracking) so they can serve as oracles for the library's own code.
"""

import itertools

from cherrypick.trees import Forest, PhyloTree


def all_topologies(labels):
    """Every unrooted binary topology on the given labels, by inserting
    leaves one at a time into every edge; yields (2n-5)!! trees."""
    labels = sorted(labels)
    if not labels:
        return
    if len(labels) == 1:
        yield PhyloTree({0: frozenset()}, {0: labels[0]})
        return

    def grow(adj, node_labels, edges, next_id, remaining):
        if not remaining:
            yield PhyloTree({v: frozenset(ns) for v, ns in adj.items()}, dict(node_labels))
            return
        lab = remaining[0]
        for u, v in list(edges):
            mid, leaf = next_id, next_id + 1
            adj[u] = adj[u] - {v} | {mid}
            adj[v] = adj[v] - {u} | {mid}
            adj[mid] = {u, v, leaf}
            adj[leaf] = {mid}
            node_labels[leaf] = lab
            new_edges = [e for e in edges if e != (u, v)] + [(u, mid), (mid, v), (mid, leaf)]
            yield from grow(adj, node_labels, new_edges, next_id + 2, remaining[1:])
            del adj[mid], adj[leaf], node_labels[leaf]
            adj[u] = adj[u] - {mid} | {v}
            adj[v] = adj[v] - {mid} | {u}

    adj = {0: {1}, 1: {0}}
    node_labels = {0: labels[0], 1: labels[1]}
    yield from grow(adj, node_labels, [(0, 1)], 2, labels[2:])


def tree_forest(newick_text):
    from cherrypick.newick import parse_forest

    return parse_forest(newick_text)


def networks_isomorphic(n1, n2):
    """Label-respecting isomorphism of two pseudo-networks by
    backtracking; fine for desk-scale graphs."""
    if n1.num_vertices != n2.num_vertices or n1.num_edges != n2.num_edges:
        return False
    if n1.leaf_labels != n2.leaf_labels:
        return False
    mapping = {n1.vertex_of[lab]: n2.vertex_of[lab] for lab in n1.leaf_labels}
    if any(n1.degree(v) != n2.degree(mapping[v]) for v in mapping):
        return False
    free1 = sorted(v for v in n1.adj if v not in mapping)
    used2 = set(mapping.values())

    def consistent(v, w):
        # every already-mapped neighbour must match with multiplicity
        for u in set(n1.adj[v]):
            mu = mapping.get(u)
            if mu is not None and n1.multiplicity(v, u) != n2.multiplicity(w, mu):
                return False
        return True

    def assign(i):
        if i == len(free1):
            return True
        v = free1[i]
        for w in n2.adj:
            if w in used2 or w in n2.labels or n2.degree(w) != n1.degree(v):
                continue
            if not consistent(v, w):
                continue
            mapping[v] = w
            used2.add(w)
            if assign(i + 1):
                return True
            del mapping[v]
            used2.discard(w)
        return False

    if not assign(0):
        return False
    # final edge-multiset check
    for u, v in set(n1.edge_list):
        if n1.multiplicity(u, v) != n2.multiplicity(mapping[u], mapping[v]):
            return False
    return True


def forest_pairs(labels):
    """All ordered pairs of single-tree forests over a label set."""
    tops = [Forest([t]) for t in all_topologies(labels)]
    return list(itertools.product(tops, tops))
