"""Reconstructing a network from a validated cherry picking sequence.

The trace is replayed backwards from the terminal single-leaf network.
Undoing a C1/C3 step inserts a pendant leaf (reticulation number
unchanged); undoing a C2 step inserts one new edge whose endpoints
subdivide tracked edge images (reticulation number +1).  The builder
therefore returns a phylogenetic network N with r(N) <= w(trace) that
displays both starting forests.

Throughout the reverse replay the builder maintains, for every edge of
both current forests, an explicit path of network vertices (its image).
These paths are what make the insertion points of the undo operations
well defined after arbitrarily many subdivisions, and they are verified
for path validity and per-forest disjointness after every step.
"""

from .errors import (
    BadTerminal,
    GroundSetMismatch,
    ImageTrackingError,
    InvalidTrace,
    ReplayError,
)
from .networks import PseudoNetwork, reticulation_number
from .reductions import replay_trace


class BuildState:
    """Mutable network-under-construction plus the edge-image maps of both
    forests; single-threaded use only."""

    def __init__(self, terminal_label, terminal_vertices):
        self.adj = {0: set()}
        self.labels = {0: terminal_label}
        self.vertex_of = {terminal_label: 0}
        self.next_id = 1
        # per side: tree vertex id -> network vertex
        self.vmap = ({terminal_vertices[0]: 0}, {terminal_vertices[1]: 0})
        # per side: sorted tree-edge pair -> list of network vertices,
        # oriented from the image of the smaller tree vertex id
        self.epath = ({}, {})

    # -- network primitives --------------------------------------------------

    def _new_vertex(self):
        v = self.next_id
        self.next_id += 1
        self.adj[v] = set()
        return v

    def _connect(self, u, v):
        self.adj[u].add(v)
        self.adj[v].add(u)

    def num_edges(self):
        return sum(len(ns) for ns in self.adj.values()) // 2

    def reticulation(self):
        return self.num_edges() - len(self.adj) + 1

    def edges(self):
        return [(u, v) for u, ns in self.adj.items() for v in ns if u < v]

    def pendant_edge(self, label):
        v = self.vertex_of[label]
        (u,) = self.adj[v]
        return (v, u)

    def subdivide(self, u, v):
        """Split network edge {u, v} with a fresh vertex and patch every
        stored image path through it."""
        if v not in self.adj[u]:
            raise ImageTrackingError("edge (%r, %r) is not in the network" % (u, v))
        w = self._new_vertex()
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        self._connect(u, w)
        self._connect(w, v)
        for side in (0, 1):
            for path in self.epath[side].values():
                for i in range(len(path) - 1):
                    if {path[i], path[i + 1]} == {u, v}:
                        path.insert(i + 1, w)
                        break
        return w

    def add_leaf(self, label, attach):
        leaf = self._new_vertex()
        self.labels[leaf] = label
        self.vertex_of[label] = leaf
        self._connect(attach, leaf)
        return leaf

    # -- image-path bookkeeping ----------------------------------------------

    def set_path(self, side, a, b, path_from_a_to_b):
        key = (a, b) if a < b else (b, a)
        path = list(path_from_a_to_b)
        if b < a:
            path.reverse()
        self.epath[side][key] = path

    def pop_path(self, side, a, b):
        key = (a, b) if a < b else (b, a)
        path = self.epath[side].pop(key, None)
        if path is None:
            raise ImageTrackingError("no tracked image for forest edge %r" % (key,))
        return path if a < b else list(reversed(path))

    def peek_path(self, side, a, b):
        key = (a, b) if a < b else (b, a)
        path = self.epath[side].get(key)
        if path is None:
            raise ImageTrackingError("no tracked image for forest edge %r" % (key,))
        return path

    def first_edge_of_merged(self, side, merged):
        path = self.peek_path(side, *merged)
        if len(path) < 2:
            raise ImageTrackingError("tracked image path is degenerate")
        return (path[0], path[1])

    def _split_merged(self, side, merged, suppressed, w):
        """Replace the image of a merged edge by the images of the two
        edges it came from, meeting at the new vertex w."""
        n1, n2 = merged
        old = self.pop_path(side, n1, n2)
        if w not in old:
            raise ImageTrackingError("subdivision vertex missed the tracked path")
        i = old.index(w)
        self.vmap[side][suppressed] = w
        self.set_path(side, n1, suppressed, old[: i + 1])
        self.set_path(side, suppressed, n2, old[i:])

    # -- undo operations -------------------------------------------------

    def attach_leaf(self, step, rec_l, rec_r):
        """Undo a C1 or C3 step by inserting a pendant leaf; the
        reticulation number is unchanged."""
        x = step.label
        recs = (rec_l, rec_r)
        before_r = self.reticulation()

        if len(self.adj) == 1:
            # the network is a single labeled vertex; grow it into an edge
            x_v = self.add_leaf(x, next(iter(self.adj)))
            w = None
        else:
            if step.rule == "C1":
                host = self.pendant_edge(step.y)
            else:
                informative = [(s, r) for s, r in enumerate(recs) if r.kind != "dropped"]
                if not informative:
                    # isolated in both forests: any edge works; use the
                    # pendant edge of the smallest leaf for determinism
                    host = self.pendant_edge(min(self.vertex_of))
                else:
                    side, rec = informative[0]
                    if rec.kind == "collapsed":
                        host = self.pendant_edge(rec.partner_label)
                    else:
                        host = self.first_edge_of_merged(side, rec.merged_edge)
            w = self.subdivide(*host)
            x_v = self.add_leaf(x, w)

        for side, rec in enumerate(recs):
            if rec.kind == "dropped":
                self.vmap[side][rec.leaf_vertex] = x_v
            elif rec.kind == "collapsed":
                partner_net = self.vmap[side][rec.partner_vertex]
                self.vmap[side][rec.leaf_vertex] = x_v
                path = [x_v, partner_net] if w is None else [x_v, w, partner_net]
                self.set_path(side, rec.leaf_vertex, rec.partner_vertex, path)
            else:
                if w is None:
                    raise ImageTrackingError("suppression undo needs a subdivision")
                self._split_merged(side, rec.merged_edge, rec.suppressed_vertex, w)
                self.vmap[side][rec.leaf_vertex] = x_v
                self.set_path(side, rec.suppressed_vertex, rec.leaf_vertex, [w, x_v])

        if self.reticulation() != before_r:
            raise ImageTrackingError("pendant insertion changed the reticulation number")

    def add_display_edge(self, side, removal):
        """Undo a C2 step by inserting one new edge whose endpoints
        subdivide the tracked images of the edges the cut created; the
        reticulation number grows by exactly one."""
        before_r = self.reticulation()
        eff_a, eff_b = removal.effects
        hosts = []
        for eff in (eff_a, eff_b):
            if eff.kind == "leaf":
                hosts.append(self.pendant_edge(eff.label))
            else:
                hosts.append(self.first_edge_of_merged(side, eff.merged_edge))
        if eff_a.kind == "suppressed" and eff_b.kind == "suppressed":
            pa = set(self.peek_path(side, *eff_a.merged_edge))
            pb = set(self.peek_path(side, *eff_b.merged_edge))
            if pa & pb:
                raise ImageTrackingError("images of the split components overlap")

        new_vs = []
        for host in hosts:
            new_vs.append(self.subdivide(*host))
        va, vb = new_vs
        self._connect(va, vb)

        for eff, nv in zip((eff_a, eff_b), new_vs):
            if eff.kind == "leaf":
                net_leaf = self.vertex_of[eff.label]
                if self.vmap[side].get(eff.vertex) != net_leaf:
                    raise ImageTrackingError("singleton image out of sync")
            else:
                self._split_merged(side, eff.merged_edge, eff.vertex, nv)

        a_id, b_id = removal.edge
        seq = []
        if eff_a.kind == "leaf":
            seq.append(self.vertex_of[eff_a.label])
        seq.append(va)
        seq.append(vb)
        if eff_b.kind == "leaf":
            seq.append(self.vertex_of[eff_b.label])
        self.set_path(side, a_id, b_id, seq)

        if self.reticulation() != before_r + 1:
            raise ImageTrackingError("display edge did not add exactly one cycle")

    # -- verification ------------------------------------------------------

    def verify_images(self, state):
        """Check that the tracked images of both forests of `state` are
        valid vertex-disjoint subdivisions inside the current network."""
        for side, forest in enumerate(state):
            claimed = set()
            for tree in forest.components:
                comp_vertices = set()
                for tv in tree.adj:
                    nv = self.vmap[side].get(tv)
                    if nv is None:
                        raise ImageTrackingError("unmapped tree vertex %r" % (tv,))
                    comp_vertices.add(nv)
                for a, b in tree.edges():
                    path = self.peek_path(side, a, b)
                    if path[0] != self.vmap[side][a] or path[-1] != self.vmap[side][b]:
                        raise ImageTrackingError("path endpoints out of sync")
                    for u, v in zip(path, path[1:]):
                        if v not in self.adj[u]:
                            raise ImageTrackingError("tracked path leaves the network")
                    comp_vertices.update(path)
                overlap = claimed & comp_vertices
                if overlap:
                    raise ImageTrackingError(
                        "component images share vertices %s" % sorted(overlap)
                    )
                claimed |= comp_vertices
                for lab in tree.leaf_labels:
                    if self.vmap[side][tree.vertex_of[lab]] != self.vertex_of[lab]:
                        raise ImageTrackingError("leaf %r mapped to the wrong vertex" % lab)


def build_network(F, F2, trace, verify=True):
    """A phylogenetic network on the shared label set displaying both
    forests, with reticulation number at most the trace weight."""
    try:
        replay = replay_trace(F, F2, trace)
    except (ReplayError, BadTerminal, GroundSetMismatch) as exc:
        raise InvalidTrace(str(exc))

    last_F, last_F2 = replay.states[-1]
    state = BuildState(
        replay.terminal,
        (
            last_F.components[0].vertex_of[replay.terminal],
            last_F2.components[0].vertex_of[replay.terminal],
        ),
    )
    for i in range(len(trace.steps) - 1, -1, -1):
        rec = replay.records[i]
        if rec[0] == "drop":
            state.attach_leaf(trace.steps[i], rec[1], rec[2])
        else:
            state.add_display_edge(rec[1], rec[2])
        if verify:
            state.verify_images(replay.states[i])

    network = PseudoNetwork(state.edges(), state.labels)
    if not network.is_simple:
        raise ImageTrackingError("reverse replay produced a multi-edge")
    if reticulation_number(network) > replay.weight:
        raise ImageTrackingError("reticulation number exceeds the trace weight")
    return network
