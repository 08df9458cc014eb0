"""Batch command-line surface.

Subcommands: hybrid, tbr, validate-trace, build-network, displays, gen.
Exit codes: 0 success, 2 parse/input error, 3 ground-set mismatch,
4 budget or cap exhausted, 5 semantic validation failure.  ``--json``
switches the report to a stable machine-readable object.
"""

import argparse
import json
import sys
import time

from .builder import build_network
from .errors import (
    CapExceeded,
    CherryPickError,
    GroundSetMismatch,
    LabelMismatch,
    NotATree,
    ParseError,
    ReplayError,
)
from .generate import random_forest, seeded_rng
from .newick import (
    parse_forest,
    parse_network,
    parse_trace,
    serialize_forest,
    serialize_network,
    serialize_trace,
)
from .oracles import displays, tbr_distance_bfs
from .reductions import validate_trace
from .search import min_weight_cps

PAIR_SEPARATOR = "# --- pair separator ---"

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_MISMATCH = 3
EXIT_BUDGET = 4
EXIT_INVALID = 5


def _read(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError("cannot read %s: %s" % (path, exc))


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _report(args, command, inputs, outcome, started, human_lines):
    if args.json:
        print(
            json.dumps(
                {
                    "command": command,
                    "inputs": inputs,
                    "outcome": outcome,
                    "timing_sec": round(time.monotonic() - started, 6),
                },
                sort_keys=True,
            )
        )
    else:
        for line in human_lines:
            print(line)


def _cmd_hybrid(args, started):
    F = parse_forest(_read(args.forest1))
    F2 = parse_forest(_read(args.forest2))
    if F.ground_set != F2.ground_set:
        raise GroundSetMismatch("forests are on different label sets")
    result = min_weight_cps(F, F2, budget=args.budget)
    inputs = {"forest1": args.forest1, "forest2": args.forest2}
    if result.status == "bounded":
        outcome = {
            "status": "bounded",
            "lower": result.lower,
            "upper": result.upper,
            "nodes": result.stats.nodes,
        }
        _report(args, "hybrid", inputs, outcome, started, [])
        print(
            "budget exhausted: hybrid number in [%d, %d]" % (result.lower, result.upper),
            file=sys.stderr,
        )
        return EXIT_BUDGET
    weight = result.min_weight
    if args.trace_out:
        _write(args.trace_out, serialize_trace(result.witness))
    network = None
    if args.network_out:
        network = build_network(F, F2, result.witness)
        _write(args.network_out, serialize_network(network))
    outcome = {"status": "exact", "hybrid_number": weight, "nodes": result.stats.nodes}
    if network is not None:
        outcome["network_reticulation"] = network.num_edges - network.num_vertices + 1
    _report(args, "hybrid", inputs, outcome, started, [str(weight)])
    return EXIT_OK


def _cmd_tbr(args, started):
    t1 = parse_forest(_read(args.tree1))
    t2 = parse_forest(_read(args.tree2))
    if len(t1.components) != 1 or len(t2.components) != 1:
        raise NotATree("tbr needs single-tree inputs")
    distance = tbr_distance_bfs(t1.components[0], t2.components[0], cap=args.cap)
    inputs = {"tree1": args.tree1, "tree2": args.tree2}
    _report(args, "tbr", inputs, {"distance": distance}, started, [str(distance)])
    return EXIT_OK


def _cmd_validate_trace(args, started):
    F = parse_forest(_read(args.forest1))
    F2 = parse_forest(_read(args.forest2))
    trace = parse_trace(_read(args.trace))
    weight = validate_trace(F, F2, trace)
    inputs = {"forest1": args.forest1, "forest2": args.forest2, "trace": args.trace}
    _report(args, "validate-trace", inputs, {"weight": weight}, started, [str(weight)])
    return EXIT_OK


def _cmd_build_network(args, started):
    F = parse_forest(_read(args.forest1))
    F2 = parse_forest(_read(args.forest2))
    trace = parse_trace(_read(args.trace))
    network = build_network(F, F2, trace)
    _write(args.out, serialize_network(network))
    r = network.num_edges - network.num_vertices + 1
    inputs = {"forest1": args.forest1, "forest2": args.forest2, "trace": args.trace}
    outcome = {"out": args.out, "reticulation": r}
    _report(args, "build-network", inputs, outcome, started, ["wrote %s (r=%d)" % (args.out, r)])
    return EXIT_OK


def _cmd_displays(args, started):
    network = parse_network(_read(args.network))
    forest = parse_forest(_read(args.forest))
    witness = displays(network, forest)
    inputs = {"network": args.network, "forest": args.forest}
    outcome = {"displays": witness is not None}
    if witness is not None and args.json:
        names = network.name_map()
        outcome["witness"] = [
            {
                "component": tree.canonical,
                "edges": [[names[a], names[b]] for a, b in image.network_edges()],
            }
            for tree, image in zip(forest.components, witness.images)
        ]
    _report(args, "displays", inputs, outcome, started, ["yes" if witness else "no"])
    return EXIT_OK


def _cmd_gen(args, started):
    if args.leaves < 1:
        raise ParseError("--leaves must be at least 1")
    labels = [str(i) for i in range(1, args.leaves + 1)]
    rng = seeded_rng(args.seed)
    docs = [serialize_forest(random_forest(labels, args.components, rng))]
    if args.pair:
        docs.append(serialize_forest(random_forest(labels, args.components, rng)))
    text = (PAIR_SEPARATOR + "\n").join(docs)
    sys.stdout.write(text)
    if args.json:
        pass  # gen output is the document itself; no report wrapper
    return EXIT_OK


def make_parser():
    parser = argparse.ArgumentParser(
        prog="cherrypick",
        description="Exact hybrid numbers and TBR distances via cherry picking sequences.",
    )
    parser.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hybrid", help="minimum cherry picking weight of two forests")
    p.add_argument("--forest1", required=True)
    p.add_argument("--forest2", required=True)
    p.add_argument("--trace-out")
    p.add_argument("--network-out")
    p.add_argument("--budget", type=int, default=None, help="search node budget")
    p.set_defaults(func=_cmd_hybrid)

    p = sub.add_parser("tbr", help="TBR distance between two trees (BFS oracle)")
    p.add_argument("--tree1", required=True)
    p.add_argument("--tree2", required=True)
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=_cmd_tbr)

    p = sub.add_parser("validate-trace", help="replay a trace and print its weight")
    p.add_argument("--forest1", required=True)
    p.add_argument("--forest2", required=True)
    p.add_argument("--trace", required=True)
    p.set_defaults(func=_cmd_validate_trace)

    p = sub.add_parser("build-network", help="build a display network from a trace")
    p.add_argument("--forest1", required=True)
    p.add_argument("--forest2", required=True)
    p.add_argument("--trace", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_build_network)

    p = sub.add_parser("displays", help="does a network display a forest?")
    p.add_argument("--network", required=True)
    p.add_argument("--forest", required=True)
    p.set_defaults(func=_cmd_displays)

    p = sub.add_parser("gen", help="emit seeded random forests")
    p.add_argument("--leaves", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--components", type=int, default=1)
    p.add_argument("--pair", action="store_true")
    p.set_defaults(func=_cmd_gen)

    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        return args.func(args, started)
    except ParseError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    except (GroundSetMismatch, LabelMismatch) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_MISMATCH
    except CapExceeded as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_BUDGET
    except ReplayError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INVALID
    except CherryPickError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
