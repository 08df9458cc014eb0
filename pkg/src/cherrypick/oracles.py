"""Independent brute-force verifiers.

Two oracles cross-check the picking calculus at desk scale: exact TBR
distance by breadth-first search over the move graph of unrooted binary
trees, and display checking by exhaustive backtracking over subdivision
embeddings with the leaf map fixed.  Both are deliberately simple and
share no code with the solver they verify.
"""

from collections import deque
from dataclasses import dataclass

from .errors import CapExceeded, LabelMismatch, ScaleGuard, TooSmall
from .trees import PhyloTree, tree_remove_edge, _edge


# ---------------------------------------------------------------------------
# TBR moves


def _attach_points(tree):
    if tree.num_vertices == 1:
        return [("vertex", next(iter(tree.adj)))]
    return [("edge", e) for e in tree.edges()]


def _reconnect(part_a, point_a, part_b, point_b):
    adj = {v: set(ns) for v, ns in part_a.adj.items()}
    adj.update({v: set(ns) for v, ns in part_b.adj.items()})
    labels = dict(part_a.labels)
    labels.update(part_b.labels)
    fresh = max(adj) + 1
    ends = []
    for kind, what in (point_a, point_b):
        if kind == "vertex":
            ends.append(what)
        else:
            u, v = what
            w = fresh
            fresh += 1
            adj[u].discard(v)
            adj[v].discard(u)
            adj[w] = {u, v}
            adj[u].add(w)
            adj[v].add(w)
            ends.append(w)
    adj[ends[0]].add(ends[1])
    adj[ends[1]].add(ends[0])
    return PhyloTree(adj, labels)


def tbr_neighbors(tree):
    """Canonical forms of every tree one TBR move away: cut any edge,
    suppress, reconnect the parts by one new edge attached at an edge
    subdivision point (or directly to a single-vertex part).  The tree
    itself is excluded."""
    if len(tree.leaf_labels) < 4:
        raise TooSmall("TBR moves need at least four leaves")
    me = tree.canonical
    out = set()
    for edge in tree.edges():
        (part_a, part_b), _ = tree_remove_edge(tree, edge)
        for point_a in _attach_points(part_a):
            for point_b in _attach_points(part_b):
                candidate = _reconnect(part_a, point_a, part_b, point_b)
                canon = candidate.canonical
                if canon != me:
                    out.add(canon)
    return out


def tbr_distance_bfs(tree, tree2, cap=None):
    """Exact BFS distance in the TBR move graph; zero exactly for
    label-isomorphic trees.  Raises CapExceeded when the distance would
    exceed ``cap``."""
    if tree.leaf_labels != tree2.leaf_labels:
        raise LabelMismatch("trees are on different label sets")
    target = tree2.canonical
    if tree.canonical == target:
        return 0
    from .newick import parse_forest  # local import to avoid a cycle

    frontier = {tree.canonical}
    visited = set(frontier)
    dist = 0
    while frontier:
        dist += 1
        if cap is not None and dist > cap:
            raise CapExceeded("TBR distance exceeds cap %d" % cap)
        nxt = set()
        for canon in frontier:
            current = parse_forest(canon).components[0]
            for nb in tbr_neighbors(current):
                if nb == target:
                    return dist
                if nb not in visited:
                    visited.add(nb)
                    nxt.add(nb)
        frontier = nxt
    raise LabelMismatch("move graph exhausted without reaching the target")


# ---------------------------------------------------------------------------
# display checking


@dataclass(frozen=True)
class ComponentImage:
    """The subdivision image of one tree: an injective vertex map plus a
    network path for every tree edge (endpoints included)."""

    vertex_map: dict
    edge_paths: dict

    @property
    def vertices(self):
        used = set(self.vertex_map.values())
        for path in self.edge_paths.values():
            used.update(path)
        return frozenset(used)

    def network_edges(self):
        out = set()
        for path in self.edge_paths.values():
            for a, b in zip(path, path[1:]):
                out.add(_edge(a, b))
        return sorted(out)


@dataclass(frozen=True)
class EmbeddingImage:
    """Vertex-disjoint subdivision images of a forest's components,
    aligned with the forest's component order."""

    images: tuple


def _embed_tree(network, tree, used):
    """Yield ComponentImages of `tree` inside `network` avoiding `used`
    vertices; `used` is extended while a candidate is yielded and restored
    on backtracking."""
    if tree.num_vertices == 1:
        label = next(iter(tree.labels.values()))
        v = network.vertex_of[label]
        if v in used:
            return
        used.add(v)
        yield ComponentImage({tree.vertex_of[label]: v}, {})
        used.discard(v)
        return

    anchor = min(tree.leaf_labels)
    anchor_v = tree.vertex_of[anchor]
    net_anchor = network.vertex_of[anchor]
    if net_anchor in used:
        return

    # order edges so each one extends an already-placed endpoint
    order = []
    seen = {anchor_v}
    queue = deque([anchor_v])
    while queue:
        v = queue.popleft()
        for w in sorted(tree.adj[v]):
            if w not in seen:
                seen.add(w)
                order.append((v, w))
                queue.append(w)

    phi = {anchor_v: net_anchor}
    paths = {}
    used.add(net_anchor)

    def candidate_paths(start, target):
        """Simple paths from `start` avoiding used vertices; when `target`
        is None any unused internal vertex may end the path."""
        path = [start]
        on_path = {start}

        def walk(v):
            for w in network.simple_neighbors(v):
                if w in on_path or w in used:
                    continue
                if target is not None:
                    if w == target:
                        yield path + [w]
                    elif w not in network.labels:
                        path.append(w)
                        on_path.add(w)
                        yield from walk(w)
                        on_path.discard(w)
                        path.pop()
                else:
                    if w in network.labels:
                        continue
                    path.append(w)
                    on_path.add(w)
                    yield path + []
                    yield from walk(w)
                    on_path.discard(w)
                    path.pop()

        yield from walk(start)

    def place(idx):
        if idx == len(order):
            yield ComponentImage(dict(phi), {k: tuple(v) for k, v in paths.items()})
            return
        a, b = order[idx]
        if b in tree.labels:
            target = network.vertex_of[tree.labels[b]]
            if target in used:
                return
        else:
            target = None
        for path in candidate_paths(phi[a], target):
            phi[b] = path[-1]
            fresh = path[1:]
            used.update(fresh)
            paths[_edge(a, b)] = list(path) if a < b else list(reversed(path))
            yield from place(idx + 1)
            del paths[_edge(a, b)]
            for v in fresh:
                used.discard(v)
            del phi[b]

    yield from place(0)
    used.discard(net_anchor)


def displays(network, forest, max_vertices=40):
    """A witness embedding if the network displays the forest (vertex
    disjoint subdivision images, leaf x mapped to leaf x), else None.

    Exhaustive backtracking guarded to desk scale.
    """
    if network.num_vertices > max_vertices:
        raise ScaleGuard(
            "display check limited to %d vertices (got %d)"
            % (max_vertices, network.num_vertices)
        )
    missing = forest.ground_set - network.leaf_labels
    if missing:
        raise LabelMismatch("forest labels not in network: %s" % sorted(missing))

    comps = sorted(
        range(len(forest.components)),
        key=lambda i: -forest.components[i].num_vertices,
    )
    used = set()
    found = {}

    def place(k):
        if k == len(comps):
            return True
        idx = comps[k]
        for image in _embed_tree(network, forest.components[idx], used):
            found[idx] = image
            if place(k + 1):
                return True
        found.pop(comps[k], None)
        return False

    if place(0):
        return EmbeddingImage(tuple(found[i] for i in range(len(forest.components))))
    return None
