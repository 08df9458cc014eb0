"""Reading and writing forests, networks, and reduction traces.

Forest documents hold one Newick string per line; network documents hold
one ``u -- v`` edge per line (a repeated line makes a double edge, leaves
are the degree-one vertices and their tokens are the labels); traces are
JSON arrays of reduction steps.  In forest and network documents ``#``
starts a comment and blank lines are skipped; both LF and CRLF line ends
are accepted.
"""

import itertools
import json

from .errors import (
    DegreeViolation,
    Disconnected,
    DuplicateLabel,
    NonBinary,
    ParseError,
    SchemaError,
    TripleEdge,
)
from .networks import PseudoNetwork
from .reductions import RULES, ReductionStep, ReductionTrace
from .trees import FORBIDDEN_LABEL_CHARS, Forest, PhyloTree, is_valid_label


# ---------------------------------------------------------------------------
# forests


def _parse_newick_line(content, line_no, alloc, seen_labels):
    """Parse one Newick string into a PhyloTree.

    A rooted string with a degree-two root is unrooted by suppressing the
    root; a three-child root is kept as an internal vertex.
    """
    pos = 0
    end = len(content)
    adj = {}
    labels = {}

    def err(message, at, cls=ParseError):
        raise cls(message, line=line_no, column=at + 1)

    def skip_ws():
        nonlocal pos
        while pos < end and content[pos] in " \t":
            pos += 1

    def new_vertex():
        v = next(alloc)
        adj[v] = set()
        return v

    def connect(u, v):
        adj[u].add(v)
        adj[v].add(u)

    def parse_label():
        nonlocal pos
        start = pos
        while pos < end and content[pos] not in "(),;" and content[pos] not in " \t":
            pos += 1
        tok = content[start:pos]
        if not tok:
            err("expected a leaf label", start)
        if ":" in tok:
            err("branch lengths are not supported", start + tok.index(":"))
        if set(tok) & FORBIDDEN_LABEL_CHARS:
            err("invalid character in label %r" % tok, start)
        if tok in seen_labels:
            err("duplicate label %r" % tok, start, DuplicateLabel)
        seen_labels[tok] = (line_no, start + 1)
        v = new_vertex()
        labels[v] = tok
        return v

    def parse_children(opener):
        nonlocal pos
        pos += 1  # consume '('
        kids = [parse_subtree()]
        skip_ws()
        while pos < end and content[pos] == ",":
            pos += 1
            kids.append(parse_subtree())
            skip_ws()
        if pos >= end or content[pos] != ")":
            err("expected ',' or ')'", pos if pos < end else end)
        pos += 1
        return kids

    def parse_subtree():
        nonlocal pos
        skip_ws()
        if pos < end and content[pos] == "(":
            opener = pos
            kids = parse_children(opener)
            if len(kids) != 2:
                err("internal node with %d children (need 2)" % len(kids), opener, NonBinary)
            v = new_vertex()
            for k in kids:
                connect(v, k)
            return v
        return parse_label()

    skip_ws()
    if pos < end and content[pos] == "(":
        opener = pos
        kids = parse_children(opener)
        if len(kids) == 2:
            connect(kids[0], kids[1])  # unroot by suppressing the root
        elif len(kids) == 3:
            v = new_vertex()
            for k in kids:
                connect(v, k)
        else:
            err("root with %d children (need 2 or 3)" % len(kids), opener, NonBinary)
    else:
        parse_label()
    skip_ws()
    if pos >= end or content[pos] != ";":
        err("expected ';'", pos if pos < end else end)
    pos += 1
    skip_ws()
    if pos != end:
        err("unexpected text after ';'", pos)
    return PhyloTree(adj, labels)


def parse_forest(text):
    """Parse a forest document: one Newick per non-comment line."""
    alloc = itertools.count()
    seen = {}
    trees = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        if not content.strip():
            continue
        trees.append(_parse_newick_line(content.rstrip(), line_no, alloc, seen))
    if not trees:
        raise ParseError("document contains no trees")
    return Forest(trees)


def parse_tree(text):
    """Parse a document that must contain exactly one tree."""
    forest = parse_forest(text)
    if len(forest.components) != 1:
        raise ParseError("expected a single tree, found %d components" % len(forest.components))
    return forest.components[0]


def serialize_forest(forest):
    """Canonical rendering, one component per line; equal forests
    serialize to identical bytes."""
    return forest.canonical + "\n"


# ---------------------------------------------------------------------------
# networks


def parse_network(text):
    """Parse an edge-list network document."""
    edge_names = []
    lone = []
    first_seen = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        parts = content.split()
        if len(parts) == 1 and parts[0] != "--":
            lone.append((parts[0], line_no))
            continue
        if len(parts) != 3 or parts[1] != "--":
            raise ParseError("expected 'u -- v'", line=line_no, column=1)
        u, v, at = parts[0], parts[2], line_no
        for tok in (u, v):
            if tok == "--" or "#" in tok:
                raise ParseError("invalid vertex name %r" % tok, line=at, column=1)
            first_seen.setdefault(tok, at)
        if u == v:
            raise ParseError("loop edge at %r" % u, line=at, column=1)
        edge_names.append((u, v, at))

    if lone:
        if edge_names or len(lone) > 1:
            raise ParseError(
                "a lone vertex line is only valid as the whole document",
                line=lone[0][1],
                column=1,
            )
        name, at = lone[0]
        if not is_valid_label(name):
            raise ParseError("invalid leaf label %r" % name, line=at, column=1)
        return PseudoNetwork((), {0: name})
    if not edge_names:
        raise ParseError("document contains no edges")

    ids = {}
    for u, v, _ in edge_names:
        for tok in (u, v):
            if tok not in ids:
                ids[tok] = len(ids)
    counts = {}
    edges = []
    for u, v, at in edge_names:
        key = tuple(sorted((u, v)))
        counts[key] = counts.get(key, 0) + 1
        if counts[key] > 2:
            raise TripleEdge("third parallel edge %s -- %s" % key, line=at, column=1)
        edges.append((ids[u], ids[v]))

    deg = {}
    for a, b in edges:
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
    names = {i: tok for tok, i in ids.items()}
    labels = {}
    for v, d in deg.items():
        if d == 1:
            if not is_valid_label(names[v]):
                raise ParseError(
                    "invalid leaf label %r" % names[v], line=first_seen[names[v]], column=1
                )
            labels[v] = names[v]
        elif d != 3:
            raise DegreeViolation(
                "vertex %r has degree %d (need 1 or 3)" % (names[v], d),
                line=first_seen[names[v]],
            )
    if not labels:
        raise DegreeViolation("network has no degree-one vertices to serve as leaves")
    # connectivity: delegate to the model, re-raising with document context
    try:
        return PseudoNetwork(edges, labels)
    except Disconnected:
        raise Disconnected("network document describes a disconnected graph")


def serialize_network(network):
    """Edge list sorted by endpoint names; internal vertices are named
    v1, v2, ... deterministically.  A single-vertex network serializes as
    its bare label."""
    if network.num_vertices == 1:
        return next(iter(network.labels.values())) + "\n"
    names = network.name_map()
    lines = sorted(
        "%s -- %s" % tuple(sorted((names[u], names[v]))) for u, v in network.edge_list
    )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# traces

_PARAM_KEYS = {
    "C1": ("y",),
    "C2a_i": ("y", "cut"),
    "C2a_ii": ("y", "p", "cut"),
    "C2a_iii": ("y", "p", "q", "cut"),
    "C2b_i": ("y", "cut"),
    "C2b_ii": ("y", "cut"),
    "C2c": ("y", "cut"),
    "C3": (),
}

_CUT_CHOICES = {
    "C2a_i": ("e_x", "e_y"),
    "C2a_ii": ("e_p", "e_xyp"),
    "C2a_iii": ("e_p", "e_q", "e_pq"),
    "C2b_i": ("e_x", "e_y"),
    "C2b_ii": ("c2b_edge",),
    "C2c": ("e_x", "e_y"),
}


def parse_trace(text):
    """Parse a trace document; schema validation only (replay-time checks
    live in the reduction engine)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("not valid JSON: %s" % exc, line=exc.lineno, column=exc.colno)
    if not isinstance(data, list):
        raise SchemaError("trace must be a JSON array of steps")
    steps = []
    for i, item in enumerate(data):
        if not isinstance(item, dict):
            raise SchemaError("step %d is not an object" % i)
        extra = set(item) - {"label", "rule", "orientation", "params"}
        if extra:
            raise SchemaError("step %d has unknown keys %s" % (i, sorted(extra)))
        rule = item.get("rule")
        if rule not in RULES:
            raise SchemaError("step %d has unknown rule %r" % (i, rule))
        label = item.get("label")
        if not isinstance(label, str) or not is_valid_label(label):
            raise SchemaError("step %d has a bad label %r" % (i, label))
        orientation = item.get("orientation", "forward")
        if orientation not in ("forward", "reversed"):
            raise SchemaError("step %d has a bad orientation %r" % (i, orientation))
        params = item.get("params", {})
        if not isinstance(params, dict):
            raise SchemaError("step %d params must be an object" % i)
        need = _PARAM_KEYS[rule]
        missing = [k for k in need if k not in params]
        if missing:
            raise SchemaError("step %d (%s) is missing params %s" % (i, rule, missing))
        unknown = set(params) - set(need)
        if unknown:
            raise SchemaError("step %d (%s) has unknown params %s" % (i, rule, sorted(unknown)))
        for k in ("y", "p", "q"):
            if k in params and (not isinstance(params[k], str) or not is_valid_label(params[k])):
                raise SchemaError("step %d has a bad %r param" % (i, k))
        if "cut" in params and params["cut"] not in _CUT_CHOICES[rule]:
            raise SchemaError(
                "step %d (%s) has cut %r, expected one of %s"
                % (i, rule, params["cut"], list(_CUT_CHOICES[rule]))
            )
        steps.append(
            ReductionStep(
                label=label,
                rule=rule,
                orientation=orientation,
                y=params.get("y"),
                p=params.get("p"),
                q=params.get("q"),
                cut=params.get("cut"),
            )
        )
    return ReductionTrace(tuple(steps))


def serialize_trace(trace):
    data = []
    for s in trace.steps:
        params = {}
        for k in _PARAM_KEYS[s.rule]:
            params[k] = getattr(s, k) if k != "cut" else s.cut
        data.append(
            {"label": s.label, "rule": s.rule, "orientation": s.orientation, "params": params}
        )
    return json.dumps(data, indent=2) + "\n"
