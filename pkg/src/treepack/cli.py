"""Command-line front end: every library operation behind one subcommand.

Exit codes: 0 success/feasible, 1 usage or domain error, 2 infeasible (valid
input, empty solution space), 3 resource guard tripped. JSON output is a
single document on stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from .degseq import (
    DegreeMatrix,
    DegreeSequence,
    classify,
    is_graphical,
    sum_sequences,
)
from .errors import (
    DomainError,
    InfeasibleError,
    InternalInvariantError,
    ResourceGuardError,
    TreePackError,
)
from .packing import (
    MultiInstance,
    disjoint_hamiltonian_paths,
    kundu_packable,
    pack_caterpillars,
    pack_complementary_leaves,
    pack_multi,
)
from .reductions import (
    BipartitePairInstance,
    SimplePairInstance,
    add_dominating_vertex,
    add_pendant_gadget,
    bipartite_to_simple,
    brute_force_disjoint_decision,
    reduce_to_tree_sequence,
)
from .sampling import (
    DEFAULT_BATCH_SIZE,
    analyze_pair,
    estimate_disjoint_count,
    exact_disjoint_count,
    expected_common_general,
    required_samples,
    sample_disjoint_pair,
    tv_distance,
)
from .trees import (
    LabeledTree,
    count_trees,
    edge_probability,
    enumerate_trees,
    random_tree,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_GUARD = 3

ENUMERATION_GUARD = 10


@dataclass(frozen=True)
class CommandSpec:
    """A fully parsed invocation: subcommand, shared options, and its inputs."""

    command: str
    fmt: str = "text"
    seed: int | None = None
    epsilon: float | None = None
    delta: float | None = None
    guard_n: int | None = None
    workers: int = 1
    batch_size: int = DEFAULT_BATCH_SIZE
    payload: dict[str, Any] = field(default_factory=dict)


class _Parser(argparse.ArgumentParser):
    """argparse variant that reports usage problems as domain errors (exit 1)."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise DomainError(message)


def _tree_text(tree: LabeledTree) -> str:
    return tree.to_text()


def _trees_text(trees) -> str:
    return "\n\n".join(_tree_text(t) for t in trees)


def _parse_matrix_text(text: str) -> DegreeMatrix:
    rows = [part for part in text.split(";") if part.strip()]
    return DegreeMatrix.from_lists(
        [list(DegreeSequence.from_text(row).degrees) for row in rows]
    )


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise DomainError(f"malformed number list: {text!r}") from exc


def _load_input_document(source: str) -> dict:
    raw = sys.stdin.read() if source == "-" else open(source, "r", encoding="utf-8").read()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DomainError(f"input is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DomainError("input document must be a JSON object")
    return doc


def _resolve(args: argparse.Namespace, flag: str, doc_key: str, parser: Callable[[Any], Any]):
    """One value from exactly one input source: inline flag or --input document."""
    inline = getattr(args, flag, None)
    doc: dict | None = getattr(args, "_input_doc", None)
    if inline is not None and doc is not None and doc_key in doc:
        raise DomainError(f"--{flag} conflicts with --input field {doc_key!r}")
    if inline is not None:
        return parser(inline)
    if doc is not None and doc_key in doc:
        return parser(doc[doc_key])
    raise DomainError(f"missing input: give --{flag} or an --input document with {doc_key!r}")


def _seq_from_any(value: Any) -> DegreeSequence:
    if isinstance(value, str):
        return DegreeSequence.from_text(value)
    return DegreeSequence(tuple(value))


def _matrix_from_any(value: Any) -> DegreeMatrix:
    if isinstance(value, str):
        return _parse_matrix_text(value)
    return DegreeMatrix.from_lists(value)


def _floats_from_any(value: Any) -> list[float]:
    if isinstance(value, str):
        return _parse_float_list(value)
    return [float(x) for x in value]


def _bipartite_from_args(args: argparse.Namespace) -> BipartitePairInstance:
    doc: dict | None = getattr(args, "_input_doc", None)
    if doc is not None:
        return BipartitePairInstance.from_json_dict(doc)
    if args.n1 is None or args.n2 is None or args.d is None or args.f is None:
        raise DomainError("reduce-bipartite needs --n1 --n2 --d --f or an --input document")
    d_rows = _parse_matrix_text(args.d).to_lists()
    f_rows = _parse_matrix_text(args.f).to_lists()
    if len(d_rows) != 2 or len(f_rows) != 2:
        raise DomainError("bipartite degree lists need exactly two ';'-separated classes")
    return BipartitePairInstance(
        args.n1, args.n2, (tuple(d_rows[0]), tuple(d_rows[1])), (tuple(f_rows[0]), tuple(f_rows[1]))
    )


def _require_seed(spec: CommandSpec) -> int:
    if spec.seed is None:
        raise DomainError(f"{spec.command} is randomized: --seed is required")
    return spec.seed


def _guard(spec: CommandSpec, default: int) -> int:
    return spec.guard_n if spec.guard_n is not None else default


# --- handlers; each returns (json_payload, text, exit_code) ---------------------


def _cmd_graphical(spec: CommandSpec):
    seq = spec.payload["d"]
    ok = is_graphical(seq)
    payload = {"sequence": list(seq.degrees), "graphical": ok}
    return payload, "true" if ok else "false", EXIT_OK if ok else EXIT_INFEASIBLE


def _cmd_classify(spec: CommandSpec):
    seq = spec.payload["d"]
    cls = classify(seq)
    return {"sequence": list(seq.degrees), "class": cls.value}, cls.value, EXIT_OK


def _cmd_count_trees(spec: CommandSpec):
    seq = spec.payload["d"]
    count = count_trees(seq)
    return {"sequence": list(seq.degrees), "count": count}, str(count), EXIT_OK


def _cmd_enum_trees(spec: CommandSpec):
    seq = spec.payload["d"]
    guard = _guard(spec, ENUMERATION_GUARD)
    if seq.n > guard:
        raise ResourceGuardError(f"enumeration guarded at n <= {guard}, got n = {seq.n}")
    trees = list(enumerate_trees(seq))
    payload = {
        "n": seq.n,
        "count": len(trees),
        "trees": [[[u, v] for u, v in t.sorted_edges()] for t in trees],
    }
    return payload, _trees_text(trees), EXIT_OK


def _cmd_random_tree(spec: CommandSpec):
    seq = spec.payload["d"]
    seed = _require_seed(spec)
    tree = random_tree(seq, seed)
    payload = tree.to_json_dict()
    payload["seed"] = seed
    return payload, _tree_text(tree), EXIT_OK


def _cmd_edge_prob(spec: CommandSpec):
    seq = spec.payload["d"]
    u, v = spec.payload["u"], spec.payload["v"]
    prob = edge_probability(seq, u, v)
    return {"u": u, "v": v, "probability": str(prob)}, str(prob), EXIT_OK


def _cmd_ham_paths(spec: CommandSpec):
    n = spec.payload["n"]
    first, second = disjoint_hamiltonian_paths(n)
    payload = {
        "n": n,
        "trees": [
            [[u, v] for u, v in first.sorted_edges()],
            [[u, v] for u, v in second.sorted_edges()],
        ],
    }
    return payload, _trees_text([first, second]), EXIT_OK


def _cmd_pack_caterpillar(spec: CommandSpec):
    result = pack_caterpillars(spec.payload["d"], spec.payload["f"])
    return result.to_json_dict(), _trees_text(result.trees), EXIT_OK


def _cmd_kundu(spec: CommandSpec):
    first, second = spec.payload["d"], spec.payload["f"]
    ok = kundu_packable(first, second)
    payload = {
        "packable": ok,
        "sum": list(sum_sequences(first, second).degrees),
    }
    if not ok:
        print("sum not graphical", file=sys.stderr)
    return payload, "true" if ok else "false", EXIT_OK if ok else EXIT_INFEASIBLE


def _cmd_pack_leaves(spec: CommandSpec):
    seed = _require_seed(spec)
    result = pack_complementary_leaves(spec.payload["d"], spec.payload["f"], seed)
    payload = result.to_json_dict()
    payload["seed"] = seed
    return payload, _trees_text(result.trees), EXIT_OK


def _cmd_pack_multi(spec: CommandSpec):
    seed = _require_seed(spec)
    inst = MultiInstance.from_matrix(spec.payload["matrix"])
    result = pack_multi(inst, seed)
    payload = result.to_json_dict()
    payload["seed"] = seed
    return payload, _trees_text(result.trees), EXIT_OK


def _cmd_analyze(spec: CommandSpec):
    analysis = analyze_pair(spec.payload["d"], spec.payload["f"])
    payload = {
        "internal_in_first": sorted(analysis.internal_in_first),
        "internal_in_second": sorted(analysis.internal_in_second),
        "expected_common": str(analysis.expected_common),
        "disjoint_lower_bound": str(analysis.disjoint_lower_bound),
    }
    text = (
        f"expected_common={analysis.expected_common} "
        f"disjoint_lower_bound={analysis.disjoint_lower_bound}"
    )
    return payload, text, EXIT_OK


def _cmd_expected_common(spec: CommandSpec):
    value = expected_common_general(spec.payload["d"], spec.payload["f"])
    return {"expected_common": str(value)}, str(value), EXIT_OK


def _cmd_samples_needed(spec: CommandSpec):
    if spec.epsilon is None or spec.delta is None:
        raise DomainError("samples-needed requires --epsilon and --delta")
    p = spec.payload["p"]
    samples = required_samples(p, spec.epsilon, spec.delta)
    payload = {
        "p_lower": str(p),
        "epsilon": spec.epsilon,
        "delta": spec.delta,
        "samples": samples,
    }
    return payload, str(samples), EXIT_OK


def _cmd_estimate(spec: CommandSpec):
    if spec.epsilon is None or spec.delta is None:
        raise DomainError("estimate requires --epsilon and --delta")
    seed = _require_seed(spec)
    report = estimate_disjoint_count(
        spec.payload["d"],
        spec.payload["f"],
        spec.epsilon,
        spec.delta,
        seed,
        workers=spec.workers,
        batch_size=spec.batch_size,
    )
    return report.to_json_dict(), str(report.count_estimate), EXIT_OK


def _cmd_sample(spec: CommandSpec):
    if spec.epsilon is None:
        raise DomainError("sample requires --epsilon")
    seed = _require_seed(spec)
    t1, t2 = sample_disjoint_pair(spec.payload["d"], spec.payload["f"], spec.epsilon, seed)
    payload = {
        "n": t1.n,
        "trees": [
            [[u, v] for u, v in t1.sorted_edges()],
            [[u, v] for u, v in t2.sorted_edges()],
        ],
        "seed": seed,
    }
    return payload, _trees_text([t1, t2]), EXIT_OK


def _cmd_exact_count(spec: CommandSpec):
    count = exact_disjoint_count(
        spec.payload["d"], spec.payload["f"], guard_n=_guard(spec, 8)
    )
    return {"count": count}, str(count), EXIT_OK


def _cmd_tv(spec: CommandSpec):
    value = tv_distance(spec.payload["p"], spec.payload["q"])
    return {"tv": value}, repr(value), EXIT_OK


def _cmd_reduce_bipartite(spec: CommandSpec):
    out = bipartite_to_simple(spec.payload["instance"])
    return out.to_json_dict(), _instance_text(out), EXIT_OK


def _cmd_reduce_dominate(spec: CommandSpec):
    out = add_dominating_vertex(SimplePairInstance(spec.payload["d"], spec.payload["f"]))
    return out.to_json_dict(), _instance_text(out), EXIT_OK


def _cmd_reduce_pendant(spec: CommandSpec):
    out = add_pendant_gadget(SimplePairInstance(spec.payload["d"], spec.payload["f"]))
    return out.to_json_dict(), _instance_text(out), EXIT_OK


def _cmd_reduce_tree(spec: CommandSpec):
    out = reduce_to_tree_sequence(SimplePairInstance(spec.payload["d"], spec.payload["f"]))
    return out.to_json_dict(), _instance_text(out), EXIT_OK


def _cmd_decide_brute(spec: CommandSpec):
    inst = SimplePairInstance(spec.payload["d"], spec.payload["f"])
    ok = brute_force_disjoint_decision(inst, guard_n=_guard(spec, 7))
    payload = {"disjoint_realizable": ok}
    return payload, "true" if ok else "false", EXIT_OK if ok else EXIT_INFEASIBLE


def _instance_text(inst: SimplePairInstance) -> str:
    return f"D={inst.first.to_text()}\nF={inst.second.to_text()}"


_HANDLERS: dict[str, Callable[[CommandSpec], tuple[dict, str, int]]] = {
    "graphical": _cmd_graphical,
    "classify": _cmd_classify,
    "count-trees": _cmd_count_trees,
    "enum-trees": _cmd_enum_trees,
    "random-tree": _cmd_random_tree,
    "edge-prob": _cmd_edge_prob,
    "ham-paths": _cmd_ham_paths,
    "pack-caterpillar": _cmd_pack_caterpillar,
    "kundu": _cmd_kundu,
    "pack-leaves": _cmd_pack_leaves,
    "pack-multi": _cmd_pack_multi,
    "analyze": _cmd_analyze,
    "expected-common": _cmd_expected_common,
    "samples-needed": _cmd_samples_needed,
    "estimate": _cmd_estimate,
    "sample": _cmd_sample,
    "exact-count": _cmd_exact_count,
    "tv": _cmd_tv,
    "reduce-bipartite": _cmd_reduce_bipartite,
    "reduce-dominate": _cmd_reduce_dominate,
    "reduce-pendant": _cmd_reduce_pendant,
    "reduce-tree": _cmd_reduce_tree,
    "decide-brute": _cmd_decide_brute,
}

_NEEDS_D = {
    "graphical",
    "classify",
    "count-trees",
    "enum-trees",
    "random-tree",
    "edge-prob",
}
_NEEDS_PAIR = {
    "pack-caterpillar",
    "kundu",
    "pack-leaves",
    "analyze",
    "expected-common",
    "estimate",
    "sample",
    "exact-count",
    "reduce-dominate",
    "reduce-pendant",
    "reduce-tree",
    "decide-brute",
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="treepack", description=__doc__)
    parser.add_argument("--config", help="JSON file of default option values; flags win")
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND")

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", choices=("text", "json"), default=None)
        p.add_argument("--input", help="JSON input document path, or '-' for stdin")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--epsilon", type=float, default=None)
        p.add_argument("--delta", type=float, default=None)
        p.add_argument("--guard-n", dest="guard_n", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--batch", dest="batch_size", type=int, default=None)
        return p

    p = add("graphical", "test whether a degree sequence has a simple realization")
    p.add_argument("--d")
    p = add("classify", "shape class of a sequence: not-tree, path, star or other-tree")
    p.add_argument("--d")
    p = add("count-trees", "exact number of trees realizing a tree sequence")
    p.add_argument("--d")
    p = add("enum-trees", "list every tree realizing a tree sequence")
    p.add_argument("--d")
    p = add("random-tree", "uniform random tree with prescribed degrees")
    p.add_argument("--d")
    p = add("edge-prob", "exact probability that a random realization contains an edge")
    p.add_argument("--d")
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p = add("ham-paths", "two edge-disjoint Hamiltonian paths with distinct ends")
    p.add_argument("--n", type=int, required=True)
    p = add("pack-caterpillar", "edge-disjoint caterpillar realizations (no common leaves)")
    p.add_argument("--d")
    p.add_argument("--f")
    p = add("kundu", "decide whether two tree sequences pack edge-disjointly")
    p.add_argument("--d")
    p.add_argument("--f")
    p = add("pack-leaves", "edge-disjoint realizations for complementary-leaf pairs")
    p.add_argument("--d")
    p.add_argument("--f")
    p = add("pack-multi", "edge-disjoint realizations of many rows (disjoint non-leaf sets)")
    p.add_argument("--matrix", help="rows separated by ';', e.g. '5,4,1,...;1,1,5,4,...'")
    p = add("analyze", "leaf partition, expected shared edges, disjointness bound")
    p.add_argument("--d")
    p.add_argument("--f")
    p = add("expected-common", "exact expected shared edges for arbitrary pairs")
    p.add_argument("--d")
    p.add_argument("--f")
    p = add("samples-needed", "Chernoff sample count for given bound and tolerances")
    p.add_argument("--p", help="success-probability lower bound, e.g. '1/4' or '0.25'")
    p = add("estimate", "randomized estimate of the number of disjoint pairs")
    p.add_argument("--d")
    p.add_argument("--f")
    p = add("sample", "almost-uniform edge-disjoint pair")
    p.add_argument("--d")
    p.add_argument("--f")
    p = add("exact-count", "exact disjoint-pair count by double enumeration (guarded)")
    p.add_argument("--d")
    p.add_argument("--f")
    p = add("tv", "total variation distance between two finite distributions")
    p.add_argument("--p")
    p.add_argument("--q")
    p = add("reduce-bipartite", "collapse a bipartite pair instance to a simple pair")
    p.add_argument("--n1", type=int, default=None)
    p.add_argument("--n2", type=int, default=None)
    p.add_argument("--d", help="two ';'-separated class lists")
    p.add_argument("--f", help="two ';'-separated class lists")
    p = add("reduce-dominate", "append a dominating/isolated vertex pair gadget")
    p.add_argument("--d")
    p.add_argument("--f")
    p = add("reduce-pendant", "append the two-vertex pendant gadget")
    p.add_argument("--d")
    p.add_argument("--f")
    p = add("reduce-tree", "iterate gadgets until the first sequence is a tree sequence")
    p.add_argument("--d")
    p.add_argument("--f")
    p = add("decide-brute", "exhaustive edge-disjoint realizability decision (guarded)")
    p.add_argument("--d")
    p.add_argument("--f")
    return parser


def _apply_config(args: argparse.Namespace) -> None:
    if not args.config:
        return
    with open(args.config, "r", encoding="utf-8") as handle:
        try:
            config = json.load(handle)
        except json.JSONDecodeError as exc:
            raise DomainError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise DomainError("config file must hold a JSON object")
    for key, value in config.items():
        dest = key.replace("-", "_")
        if dest == "batch":
            dest = "batch_size"
        if hasattr(args, dest) and getattr(args, dest) is None:
            setattr(args, dest, value)


def _build_spec(args: argparse.Namespace) -> CommandSpec:
    command = args.command
    if getattr(args, "input", None):
        args._input_doc = _load_input_document(args.input)
    payload: dict[str, Any] = {}
    if command in _NEEDS_D or command in _NEEDS_PAIR:
        payload["d"] = _resolve(args, "d", "D", _seq_from_any)
    if command in _NEEDS_PAIR:
        payload["f"] = _resolve(args, "f", "F", _seq_from_any)
    if command == "edge-prob":
        payload["u"], payload["v"] = args.u, args.v
    if command == "ham-paths":
        payload["n"] = args.n
    if command == "pack-multi":
        payload["matrix"] = _resolve(args, "matrix", "matrix", _matrix_from_any)
    if command == "samples-needed":
        payload["p"] = _resolve(args, "p", "p", lambda v: Fraction(str(v)))
    if command == "tv":
        payload["p"] = _resolve(args, "p", "p", _floats_from_any)
        payload["q"] = _resolve(args, "q", "q", _floats_from_any)
    if command == "reduce-bipartite":
        payload["instance"] = _bipartite_from_args(args)
    return CommandSpec(
        command=command,
        fmt=args.format or "text",
        seed=args.seed,
        epsilon=args.epsilon,
        delta=args.delta,
        guard_n=args.guard_n,
        workers=args.workers if args.workers is not None else 1,
        batch_size=args.batch_size if args.batch_size is not None else DEFAULT_BATCH_SIZE,
        payload=payload,
    )


def run(spec: CommandSpec) -> int:
    """Dispatch one parsed invocation; prints output, returns the exit status."""
    handler = _HANDLERS.get(spec.command)
    if handler is None:
        raise DomainError(f"unknown subcommand: {spec.command!r}")
    payload, text, status = handler(spec)
    if spec.fmt == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)
    return status


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise DomainError("a subcommand is required; see --help")
        _apply_config(args)
        return run(_build_spec(args))
    except (InfeasibleError,) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ResourceGuardError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except InternalInvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except TreePackError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
