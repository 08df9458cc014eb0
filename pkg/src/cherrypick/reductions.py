"""The cherry picking calculus on pairs of forests.

A reduction step removes a leaf from both forests (C1, C3) or cuts one
edge out of one forest (the C2 family).  An annotated sequence of steps
ending with both forests equal to the same single leaf is a cherry picking
sequence; its weight is the number of C2 steps.  Each rule may act with
the roles of the two forests reversed, recorded as the step orientation.

Rules and their side conditions, with x the step label and y its cherry
partner in the orientation's first forest A (B is the other forest):

* C1      -- (x,y) is a cherry of both forests; remove x from both.
* C2a_i   -- (x,z) is a cherry of B for some z != y; cut e_x or e_y in A.
* C2a_ii  -- additionally ((x,y),p) is a proper pendant subtree of x's
             tree in A; cut e_p or the subtree's cut-edge (e_xyp).
* C2a_iii -- additionally ((x,y),(p,q)) is a proper pendant subtree; cut
             e_p, e_q, or the cherry edge e_pq.
* C2b_i   -- x and y sit in one tree of B, neither in a cherry of B; cut
             e_x or e_y in A.
* C2b_ii  -- same condition, but cut the uniquely determined edge of B at
             x's neighbour that avoids the x--y path.
* C2c     -- x and y sit in different trees of B, neither an isolated
             vertex nor in a cherry of B; cut e_x or e_y in A.
* C3      -- x is an isolated vertex of the orientation's forest; remove
             x from both.

``applicable_steps`` enumerates every legal step once; C1 and
both-singleton C3 steps, whose two orientations have identical effect,
are emitted with forward orientation only.
"""

from dataclasses import dataclass

from .errors import (
    BadTerminal,
    GroundSetMismatch,
    InapplicableStep,
    ReplayError,
)
from .trees import (
    pendant_shapes,
    remove_edge_traced,
    remove_leaf_traced,
)

RULES = ("C1", "C2a_i", "C2a_ii", "C2a_iii", "C2b_i", "C2b_ii", "C2c", "C3")
C2_RULES = frozenset(r for r in RULES if r.startswith("C2"))


@dataclass(frozen=True)
class ReductionStep:
    label: str
    rule: str
    orientation: str = "forward"
    y: str = None
    p: str = None
    q: str = None
    cut: str = None

    @property
    def cost(self):
        return 1 if self.rule in C2_RULES else 0

    def sort_key(self):
        return (
            self.rule,
            self.label,
            self.y or "",
            self.p or "",
            self.q or "",
            self.cut or "",
            self.orientation,
        )

    def describe(self):
        bits = [self.rule, self.label]
        if self.y:
            bits.append("y=%s" % self.y)
        if self.p:
            bits.append("p=%s" % self.p)
        if self.q:
            bits.append("q=%s" % self.q)
        if self.cut:
            bits.append("cut=%s" % self.cut)
        if self.orientation == "reversed":
            bits.append("reversed")
        return " ".join(bits)


@dataclass(frozen=True)
class ReductionTrace:
    """An ordered list of steps; ``terminal`` is the label both forests
    collapse to, filled in by replay (the serialized form carries steps
    only)."""

    steps: tuple
    terminal: str = None

    @property
    def weight(self):
        return sum(s.cost for s in self.steps)

    def __len__(self):
        return len(self.steps)


def labels_of(trace):
    """The bare label sequence, terminal label included; labels may
    repeat.  Requires a replayed trace (terminal known)."""
    if trace.terminal is None:
        raise ValueError("trace has no terminal label; replay it first")
    return tuple(s.label for s in trace.steps) + (trace.terminal,)


# ---------------------------------------------------------------------------
# step legality


def _sides(F, F2, orientation):
    return (F, F2) if orientation == "forward" else (F2, F)


def _resolve_shape(shapes, step):
    if step.rule == "C2a_ii":
        for s in shapes:
            if s.kind == "xyp" and s.proper and s.p == step.p:
                return s
        return None
    want = tuple(sorted((step.p, step.q))) if step.q else None
    for s in shapes:
        if s.kind == "xypq" and s.proper and (s.p, s.q) == want:
            return s
    return None


def check_step(F, F2, step):
    """Validate a step against a state; returns the resolved action.

    The action is ("drop", label) for C1/C3 or ("cut", side, component
    index, edge) for the C2 family, where side 0 cuts the first forest.
    Raises InapplicableStep naming the violated side condition.
    """
    if F.ground_set != F2.ground_set:
        raise GroundSetMismatch("forests are on different label sets")
    x = step.label
    if x not in F.ground_set:
        raise InapplicableStep("label %r is not in the ground set" % (x,))
    if step.rule not in RULES:
        raise InapplicableStep("unknown rule %r" % (step.rule,))
    if step.orientation not in ("forward", "reversed"):
        raise InapplicableStep("unknown orientation %r" % (step.orientation,))
    A, B = _sides(F, F2, step.orientation)
    a_side = 0 if step.orientation == "forward" else 1

    if step.rule == "C3":
        if not A.is_singleton(x):
            raise InapplicableStep("%s is not an isolated vertex of its forest" % x)
        return ("drop", x)

    y = step.y
    if y is None or y == x or y not in F.ground_set:
        raise InapplicableStep("missing or invalid cherry partner")
    pair = tuple(sorted((x, y)))

    if step.rule == "C1":
        if not A.has_cherry(pair):
            raise InapplicableStep("(%s,%s) is not a cherry of the first forest" % pair)
        if not B.has_cherry(pair):
            raise InapplicableStep("(%s,%s) is not a cherry of the other forest" % pair)
        return ("drop", x)

    # every C2 rule needs the cherry (x, y) in A
    if not A.has_cherry(pair):
        raise InapplicableStep("(%s,%s) is not a cherry of the reduced forest" % pair)
    comp_idx = A.component_index(x)
    tree = A.components[comp_idx]

    if step.rule in ("C2a_i", "C2a_ii", "C2a_iii"):
        if not any(z not in (x, y) for z in B.cherry_partners(x)):
            raise InapplicableStep(
                "no cherry (%s,z) with z != %s in the other forest" % (x, y)
            )
        if step.rule == "C2a_i":
            if step.cut == "e_x":
                return ("cut", a_side, comp_idx, tree.pendant_edge(x))
            if step.cut == "e_y":
                return ("cut", a_side, comp_idx, tree.pendant_edge(y))
            raise InapplicableStep("C2a_i cut must be e_x or e_y")
        shapes = pendant_shapes(tree, pair)
        shape = _resolve_shape(shapes, step)
        if shape is None:
            kind = "((x,y),p)" if step.rule == "C2a_ii" else "((x,y),(p,q))"
            raise InapplicableStep("%s is not a proper pendant subtree here" % kind)
        if step.rule == "C2a_ii":
            if step.cut == "e_p":
                return ("cut", a_side, comp_idx, shape.e_p)
            if step.cut == "e_xyp":
                return ("cut", a_side, comp_idx, shape.cut_edge)
            raise InapplicableStep("C2a_ii cut must be e_p or e_xyp")
        if step.cut == "e_p":
            return ("cut", a_side, comp_idx, tree.pendant_edge(step.p))
        if step.cut == "e_q":
            return ("cut", a_side, comp_idx, tree.pendant_edge(step.q))
        if step.cut == "e_pq":
            return ("cut", a_side, comp_idx, shape.e_pq)
        raise InapplicableStep("C2a_iii cut must be e_p, e_q, or e_pq")

    if step.rule in ("C2b_i", "C2b_ii"):
        if B.component_index(x) != B.component_index(y):
            raise InapplicableStep("%s and %s are in different trees of the other forest" % (x, y))
        for lab in (x, y):
            if B.cherry_partners(lab):
                raise InapplicableStep("%s is in a cherry of the other forest" % lab)
        if step.rule == "C2b_i":
            if step.cut == "e_x":
                return ("cut", a_side, comp_idx, tree.pendant_edge(x))
            if step.cut == "e_y":
                return ("cut", a_side, comp_idx, tree.pendant_edge(y))
            raise InapplicableStep("C2b_i cut must be e_x or e_y")
        # C2b_ii: the edge of B at x's neighbour that avoids the x--y path
        if step.cut != "c2b_edge":
            raise InapplicableStep("C2b_ii cut must be c2b_edge")
        b_idx = B.component_index(x)
        btree = B.components[b_idx]
        xv, yv = btree.vertex_of[x], btree.vertex_of[y]
        (u,) = btree.adj[xv]
        on_path = set(btree.path(xv, yv))
        (w,) = [n for n in btree.adj[u] if n != xv and n not in on_path]
        return ("cut", 1 - a_side, b_idx, tuple(sorted((u, w))))

    if step.rule == "C2c":
        if B.component_index(x) == B.component_index(y):
            raise InapplicableStep("%s and %s are in the same tree of the other forest" % (x, y))
        for lab in (x, y):
            if B.is_singleton(lab):
                raise InapplicableStep("%s is an isolated vertex of the other forest" % lab)
            if B.cherry_partners(lab):
                raise InapplicableStep("%s is in a cherry of the other forest" % lab)
        if step.cut == "e_x":
            return ("cut", a_side, comp_idx, tree.pendant_edge(x))
        if step.cut == "e_y":
            return ("cut", a_side, comp_idx, tree.pendant_edge(y))
        raise InapplicableStep("C2c cut must be e_x or e_y")

    raise InapplicableStep("unknown rule %r" % (step.rule,))


# ---------------------------------------------------------------------------
# applying steps


def apply_step_traced(F, F2, step):
    """Apply a step, returning (F', F2', record).

    The record is ("drop", left LeafRemoval, right LeafRemoval) or
    ("cut", side, EdgeRemoval); it carries the vertex bookkeeping the
    network builder consumes.
    """
    action = check_step(F, F2, step)
    if action[0] == "drop":
        x = action[1]
        nF, rec_l = remove_leaf_traced(F, x)
        nF2, rec_r = remove_leaf_traced(F2, x)
        return nF, nF2, ("drop", rec_l, rec_r)
    _, side, comp_idx, edge = action
    if side == 0:
        nF, rec = remove_edge_traced(F, comp_idx, edge)
        return nF, F2, ("cut", 0, rec)
    nF2, rec = remove_edge_traced(F2, comp_idx, edge)
    return F, nF2, ("cut", 1, rec)


def apply_step(F, F2, step):
    nF, nF2, _ = apply_step_traced(F, F2, step)
    return nF, nF2


# ---------------------------------------------------------------------------
# enumeration


def applicable_steps(F, F2):
    """The complete, duplicate-free, deterministically ordered list of
    steps legal at a state.  Terminal states (one label left) admit no
    steps."""
    if F.ground_set != F2.ground_set:
        raise GroundSetMismatch("forests are on different label sets")
    if not F.ground_set:
        raise GroundSetMismatch("forests are empty")
    steps = set()
    if len(F.ground_set) == 1:
        return []

    for orientation in ("forward", "reversed"):
        A, B = _sides(F, F2, orientation)
        for a, b in A.cherries():
            if orientation == "forward" and B.has_cherry((a, b)):
                steps.add(ReductionStep(a, "C1", "forward", y=b))
                steps.add(ReductionStep(b, "C1", "forward", y=a))
            for x, y in ((a, b), (b, a)):
                has_z = any(z not in (x, y) for z in B.cherry_partners(x))
                if has_z:
                    for cut in ("e_x", "e_y"):
                        steps.add(ReductionStep(x, "C2a_i", orientation, y=y, cut=cut))
                    tree = A.component_of(x)
                    for shape in pendant_shapes(tree, (a, b)):
                        if not shape.proper:
                            continue
                        if shape.kind == "xyp":
                            for cut in ("e_p", "e_xyp"):
                                steps.add(
                                    ReductionStep(
                                        x, "C2a_ii", orientation, y=y, p=shape.p, cut=cut
                                    )
                                )
                        else:
                            for cut in ("e_p", "e_q", "e_pq"):
                                steps.add(
                                    ReductionStep(
                                        x, "C2a_iii", orientation,
                                        y=y, p=shape.p, q=shape.q, cut=cut,
                                    )
                                )
                x_cherryfree = not B.cherry_partners(x)
                y_cherryfree = not B.cherry_partners(y)
                if x_cherryfree and y_cherryfree:
                    if B.component_index(x) == B.component_index(y):
                        for cut in ("e_x", "e_y"):
                            steps.add(ReductionStep(x, "C2b_i", orientation, y=y, cut=cut))
                        steps.add(ReductionStep(x, "C2b_ii", orientation, y=y, cut="c2b_edge"))
                    elif not B.is_singleton(x) and not B.is_singleton(y):
                        for cut in ("e_x", "e_y"):
                            steps.add(ReductionStep(x, "C2c", orientation, y=y, cut=cut))

    for lab in sorted(F.ground_set):
        if F.is_singleton(lab):
            steps.add(ReductionStep(lab, "C3", "forward"))
        elif F2.is_singleton(lab):
            steps.add(ReductionStep(lab, "C3", "reversed"))

    return sorted(steps, key=ReductionStep.sort_key)


# ---------------------------------------------------------------------------
# replay


@dataclass(frozen=True)
class ReplayResult:
    weight: int
    terminal: str
    states: tuple  # (F, F2) before each step, plus the final state
    records: tuple


def replay_trace(F, F2, trace):
    """Replay a trace from a starting pair, checking every side condition
    and the terminal state; returns states and surgery records."""
    if F.ground_set != F2.ground_set:
        raise GroundSetMismatch("forests are on different label sets")
    states = [(F, F2)]
    records = []
    weight = 0
    cur_F, cur_F2 = F, F2
    for i, step in enumerate(trace.steps):
        try:
            cur_F, cur_F2, rec = apply_step_traced(cur_F, cur_F2, step)
        except (InapplicableStep, GroundSetMismatch) as exc:
            raise ReplayError(i, "%s: %s" % (step.describe(), exc))
        weight += step.cost
        states.append((cur_F, cur_F2))
        records.append(rec)
    if len(cur_F.ground_set) != 1:
        raise BadTerminal(
            "replay ended with %d labels, expected 1" % len(cur_F.ground_set)
        )
    (terminal,) = cur_F.ground_set
    # both forests on one label are necessarily the same singleton tree
    return ReplayResult(weight, terminal, tuple(states), tuple(records))


def validate_trace(F, F2, trace):
    """Replay a trace and return its weight (the number of C2 steps)."""
    return replay_trace(F, F2, trace).weight
