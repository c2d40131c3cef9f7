"""Command-line surface.

Verdicts go to stdout as stable ``key: value`` lines (or one JSON record
with --json); diagnostics and timings go to stderr.  Exit status is 0
whenever a verdict was computed — verdicts are never encoded in exit
codes — and 1 for input or configuration errors.  Identical
configuration yields byte-identical stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import fields, is_dataclass

import numpy as np

from ._kernels import backend_name
from .experiments import (
    conjecture_probe,
    cover_bound_sweep,
    delete_contract_sweep,
    equivalence_sweep,
    format_report,
    operation_preservation_suite,
    rigidity_sweep,
)
from .globalrig import (
    BASE_TAGS,
    GenerationError,
    SequenceError,
    certify_sequence,
    format_sequence,
    format_step,
    parse_sequence,
    parse_step,
    random_certified_graph,
)
from .graph import (
    Graph,
    GraphError,
    apply_step,
    contract_pair,
    delete_edge,
    delete_vertex,
    format_graph,
    graph_to_json,
    induced_edge_count,
    one_extension,
    parse_graph,
    vertex_to_four_cycle,
    vertex_to_h,
    zero_extension,
)
from .norms import NormError, parse_norm
from .rigidity import (
    DEFAULT_TOL,
    RigidityError,
    TolerancePolicy,
    generic_rank,
    resolve_seed,
    uv_generic_rank,
)
from .sparsity import (
    SparsityError,
    is_rigid_comb,
    is_uv_sparse,
    is_uv_sparse_bruteforce,
    cover_rank_bound,
    pebble_game,
)

try:
    from importlib.metadata import version as _pkg_version

    __version__ = _pkg_version("normrig")
except Exception:  # pragma: no cover - not installed
    __version__ = "0.1.0"


def _yesno(b: bool) -> str:
    return "yes" if b else "no"


def _fmt_set(s) -> str:
    return "{" + ",".join(str(x) for x in sorted(s)) + "}"


def _load_graph(path: str) -> Graph:
    with open(path, "r", encoding="ascii") as fh:
        return parse_graph(fh.read())


def _single_norm(args):
    norms = args.norm or ["lp:4"]
    if len(norms) > 1:
        raise NormError("--norm: this command accepts a single norm")
    return parse_norm(norms[0])


def _tol(args) -> TolerancePolicy:
    return DEFAULT_TOL if args.tol is None else TolerancePolicy(rel=args.tol)


def _jsonable(x):
    if isinstance(x, Graph):
        return graph_to_json(x)
    if is_dataclass(x) and not isinstance(x, type):
        return {f.name: _jsonable(getattr(x, f.name)) for f in fields(x)}
    if isinstance(x, (frozenset, set)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


def _emit(args, lines: list[str], record: dict) -> int:
    """Text lines or one JSON record; either way a trailing newline."""
    if args.json:
        record = {"command": args.command, **record}
        sys.stdout.write(json.dumps(_jsonable(record), sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_rank(args) -> int:
    g = _load_graph(args.graph)
    rep = generic_rank(
        g, _single_norm(args), trials=args.trials, seed=args.seed, tol=_tol(args)
    )
    lines = [
        f"rank: {rep.rank}",
        f"rows: {rep.rows}",
        f"edges: {g.m}",
        f"independent: {_yesno(rep.independent)}",
        f"rigid: {_yesno(rep.rigid)}",
    ]
    if args.verbose:
        print(f"per-trial ranks: {list(rep.per_trial_ranks)}", file=sys.stderr)
    return _emit(args, lines, {"result": rep})


def _cmd_uv_rank(args) -> int:
    g = _load_graph(args.graph)
    rep = uv_generic_rank(
        g, _single_norm(args), trials=args.trials, seed=args.seed, tol=_tol(args)
    )
    lines = [
        f"rank: {rep.rank}",
        f"rows: {rep.rows}",
        f"edges: {g.m}",
        f"pair-edge-removed: {_yesno(rep.pair_edge_removed)}",
        f"uv-independent: {_yesno(rep.independent)}",
        f"uv-rigid: {_yesno(rep.rigid)}",
    ]
    if args.verbose:
        print(f"per-trial ranks: {list(rep.per_trial_ranks)}", file=sys.stderr)
    return _emit(args, lines, {"result": rep})


def _cmd_rigid(args) -> int:
    g = _load_graph(args.graph)
    rep = generic_rank(
        g, _single_norm(args), trials=args.trials, seed=args.seed, tol=_tol(args)
    )
    lines = [
        f"rigid: {_yesno(rep.rigid)}",
        f"rank: {rep.rank}",
        f"target: {max(2 * g.n - 2, 0)}",
    ]
    return _emit(args, lines, {"result": rep})


def _cmd_uv_rigid(args) -> int:
    g = _load_graph(args.graph)
    rep = uv_generic_rank(
        g, _single_norm(args), trials=args.trials, seed=args.seed, tol=_tol(args)
    )
    lines = [
        f"uv-rigid: {_yesno(rep.rigid)}",
        f"rank: {rep.rank}",
        f"target: {max(2 * g.n - 2, 0)}",
    ]
    return _emit(args, lines, {"result": rep})


def _cmd_check_sparse(args) -> int:
    g = _load_graph(args.graph)
    res = pebble_game(g, args.k, args.l)
    sparse = len(res.accepted) == g.m
    lines = [f"sparse: {_yesno(sparse)}"]
    record = {"sparse": sparse, "k": args.k, "l": args.l}
    if not sparse and res.witness is not None:
        u_set = res.witness
        covered = induced_edge_count(g, u_set)
        bound = args.k * len(u_set) - args.l
        lines.append(f"witness: {_fmt_set(u_set)} edges {covered} > {bound}")
        record["witness"] = {"set": u_set, "edges": covered, "bound": bound}
    return _emit(args, lines, record)


def _cmd_check_uv_sparse(args) -> int:
    g = _load_graph(args.graph)
    check = is_uv_sparse_bruteforce if args.bruteforce else is_uv_sparse
    verdict = check(g)
    lines = [f"uv-sparse: {_yesno(verdict.sparse)}"]
    if verdict.witness is not None:
        w = verdict.witness
        if w.kind == "pair-edge":
            u, v = g.require_pair()
            lines.append(f"witness: pair edge {u}-{v} present")
        else:
            shown = ",".join(_fmt_set(s) for s in w.sets)
            lines.append(
                f"witness: {w.kind} {shown} covers {w.covered} > val {w.value}"
            )
    return _emit(args, lines, {"result": verdict})


def _cmd_cover_bound(args) -> int:
    g = _load_graph(args.graph)
    bound = cover_rank_bound(g)
    cover = sorted(bound.cover, key=lambda s: (-len(s), sorted(s)))
    lines = [
        f"cover-bound: {bound.value}",
        "cover: " + " ".join(_fmt_set(s) for s in cover),
    ]
    return _emit(args, lines, {"result": bound})


def _cmd_uv_rigid_comb(args) -> int:
    g = _load_graph(args.graph)
    u, v = g.require_pair()
    minus = is_rigid_comb(delete_edge(g, u, v) if g.has_edge(u, v) else g)
    contracted = is_rigid_comb(contract_pair(g))
    lines = [
        f"uv-rigid-comb: {_yesno(minus and contracted)}",
        f"rigid-minus-pair: {_yesno(minus)}",
        f"rigid-contracted: {_yesno(contracted)}",
    ]
    return _emit(
        args,
        lines,
        {
            "uv_rigid_comb": minus and contracted,
            "rigid_minus_pair": minus,
            "rigid_contracted": contracted,
        },
    )


def _pairs(tokens: list[str], what: str) -> dict[int, int]:
    out: dict[int, int] = {}
    for tok in tokens:
        a, sep, b = tok.partition(">")
        if not sep:
            raise GraphError(f"{what} entries look like 'y>t', got {tok!r}")
        try:
            out[int(a)] = int(b)
        except ValueError:
            raise GraphError(f"non-integer in {what} entry {tok!r}") from None
    return out


def _apply_op_line(g: Graph, line: str) -> Graph:
    """Extended step grammar for `op apply` (superset of sequence steps)."""
    body = line.strip()
    kind, _, rest = body.partition(" ")
    toks = rest.split()
    if kind in ("addedge", "addvertex", "split"):
        return apply_step(g, parse_step(body))
    if kind == "deledge":
        if len(toks) != 2:
            raise GraphError("deledge takes exactly two vertices")
        return delete_edge(g, int(toks[0]), int(toks[1]))
    if kind == "delvertex":
        if len(toks) != 1:
            raise GraphError("delvertex takes one vertex")
        return delete_vertex(g, int(toks[0]))
    if kind == "zeroext":
        if len(toks) != 3:
            raise GraphError("zeroext takes 'a b z'")
        a, b, z = (int(t) for t in toks)
        return zero_extension(g, a, b, z)
    if kind == "oneext":
        if len(toks) != 4:
            raise GraphError("oneext takes 'a b c z'")
        a, b, c, z = (int(t) for t in toks)
        return one_extension(g, a, b, c, z)
    if kind == "fourcycle":
        if len(toks) < 4:
            raise GraphError("fourcycle takes 'w wnew x1 x2 [y>t ...]'")
        w, w_new, x1, x2 = (int(t) for t in toks[:4])
        return vertex_to_four_cycle(
            g, w, w_new, x1, x2, _pairs(toks[4:], "reassignment")
        )
    if kind == "vertex2h":
        if len(toks) < 2:
            raise GraphError("vertex2h takes 'w H-file [y>t ...]'")
        w = int(toks[0])
        h = _load_graph(toks[1])
        return vertex_to_h(g, w, h, _pairs(toks[2:], "attachment"))
    if kind == "contractpair":
        if toks:
            if len(toks) != 2:
                raise GraphError("contractpair takes no or two vertices")
            return contract_pair(g, int(toks[0]), int(toks[1]))
        return contract_pair(g)
    raise GraphError(f"unknown operation {kind!r}")


def _cmd_op(args) -> int:
    g = _load_graph(args.graph)
    out = _apply_op_line(g, args.step)
    text = format_graph(out)
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
    if args.json:
        return _emit(args, [], {"result": out})
    sys.stdout.write(text)
    return 0


def _cmd_certify(args) -> int:
    with open(args.sequence, "r", encoding="ascii") as fh:
        seq = parse_sequence(fh.read())
    plane = _single_norm(args)
    rep = certify_sequence(
        seq, numeric=args.numeric, plane=plane, trials=args.trials, seed=args.seed
    )
    lines = [f"base: {seq.base}", f"steps: {len(seq.steps)}"]
    for sv in rep.steps:
        head = f"step {sv.index} [{format_step(sv.step)}]:"
        if not sv.applied:
            lines.append(f"{head} FAILED {sv.error}")
            continue
        bits = ["applied"]
        if sv.minus_pair_rigid is not None:
            bits.append(f"minus-pair-rigid={_yesno(sv.minus_pair_rigid)}")
            bits.append(f"redundantly-rigid={_yesno(sv.redundantly_rigid)}")
        if sv.numeric_uv_rigid is not None:
            bits.append(f"numeric-uv-rigid={_yesno(sv.numeric_uv_rigid)}")
        lines.append(head + " " + " ".join(bits))
    if rep.aborted_at is not None:
        lines.append(f"aborted-at: {rep.aborted_at}")
    lines += [
        f"final-vertices: {rep.final_graph.n}",
        f"final-edges: {rep.final_graph.m}",
        f"pass-minus-pair-regime: {_yesno(rep.pass_minus_pair_regime)}",
        f"pass-redundant-regime: {_yesno(rep.pass_redundant_regime)}",
    ]
    return _emit(args, lines, {"result": rep})


def _cmd_generate(args) -> int:
    try:
        g, seq, rep = random_certified_graph(
            args.size, seed=resolve_seed(args.seed), base=args.base
        )
    except GenerationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("partial sequence:", file=sys.stderr)
        sys.stderr.write(format_sequence(exc.partial))
        return 1
    if args.graph_out:
        with open(args.graph_out, "w", encoding="ascii") as fh:
            fh.write(format_graph(g))
    trailer = (
        f"# final: {g.n} vertices {g.m} edges;"
        f" minus-pair={_yesno(rep.pass_minus_pair_regime)}"
        f" redundant={_yesno(rep.pass_redundant_regime)}"
    )
    if args.json:
        return _emit(
            args,
            [],
            {"graph": g, "sequence": format_sequence(seq), "result": rep},
        )
    sys.stdout.write(format_sequence(seq) + trailer + "\n")
    return 0


_EXPERIMENTS = (
    "equivalence",
    "delete-contract",
    "rigidity",
    "cover-bound",
    "operations",
    "conjecture",
)


def _cmd_experiment(args) -> int:
    name = args.name
    trials, seed = args.trials, args.seed
    if name == "equivalence":
        rep = equivalence_sweep(
            args.max_n or 8, _single_norm(args), trials=trials, seed=seed
        )
    elif name == "delete-contract":
        rep = delete_contract_sweep(
            args.samples or 500,
            (4, args.max_n or 8),
            _single_norm(args),
            trials=trials,
            seed=seed,
        )
    elif name == "rigidity":
        rep = rigidity_sweep(
            args.max_n or 6, _single_norm(args), trials=trials, seed=seed
        )
    elif name == "cover-bound":
        rep = cover_bound_sweep(
            args.max_n or 5, _single_norm(args), trials=trials, seed=seed
        )
    elif name == "operations":
        rep = operation_preservation_suite(
            args.samples or 100, _single_norm(args), seed=seed, trials=trials
        )
    elif name == "conjecture":
        norms = args.norm or ["lp:1.2", "lp:1.5", "lp:3", "lp:7"]
        rep = conjecture_probe(
            norms,
            samples=args.samples or 100,
            seed=seed,
            max_n=args.max_n or 5,
            trials=trials,
        )
    else:  # pragma: no cover - argparse choices guard this
        raise NormError(f"unknown experiment {name!r}")
    text = format_report(rep, verbose=args.verbose)
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
    if args.verbose:
        print(f"runtime: {rep.runtime:.3f}s", file=sys.stderr)
    if args.json:
        record = _jsonable({"result": rep})
        record["result"].pop("runtime", None)
        return _emit(args, [], record)
    sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--norm",
        action="append",
        metavar="lp:P",
        help="norm descriptor (default lp:4); repeatable only for 'experiment conjecture'",
    )
    common.add_argument("--trials", type=int, default=10, help="random placements per rank query")
    common.add_argument(
        "--seed", type=int, default=None,
        help="RNG seed (default: NORMRIG_SEED env var, else 1729)",
    )
    common.add_argument("--tol", type=float, default=None, help="relative SVD rank threshold (default 1e-9)")
    common.add_argument("--json", action="store_true", help="emit one JSON record instead of text")
    common.add_argument("--verbose", action="store_true", help="diagnostics on stderr")

    p = argparse.ArgumentParser(
        prog="normrig",
        description="Rigidity and coincident-point rigidity of graphs in non-Euclidean normed planes.",
    )
    p.add_argument(
        "--version",
        action="version",
        version=f"normrig {__version__} (backend: {backend_name()})",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def graph_cmd(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("graph", help="graph file ('n m [u v]' header plus edge lines)")
        sp.set_defaults(fn=fn)
        return sp

    graph_cmd("rank", _cmd_rank, "generic rigidity-matrix rank")
    graph_cmd("uv-rank", _cmd_uv_rank, "rank with the designated pair placed coincidently")
    graph_cmd("rigid", _cmd_rigid, "numerical rigidity verdict")
    graph_cmd("uv-rigid", _cmd_uv_rigid, "numerical coincident-pair rigidity verdict")
    sp = graph_cmd("check-sparse", _cmd_check_sparse, "(k,l)-sparsity via pebble game")
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--l", type=int, default=2)
    sp = graph_cmd(
        "check-uv-sparse", _cmd_check_uv_sparse, "pair-aware sparsity with witness"
    )
    sp.add_argument(
        "--bruteforce", action="store_true",
        help="exhaustive family scan instead of the reduced checker",
    )
    graph_cmd("cover-bound", _cmd_cover_bound, "cover upper bound on the generic rank")
    graph_cmd(
        "uv-rigid-comb", _cmd_uv_rigid_comb,
        "delete-contract combinatorial coincident rigidity",
    )

    sp = sub.add_parser("op", parents=[common], help="apply a graph operation")
    sp.add_argument("action", choices=["apply"])
    sp.add_argument("graph", help="input graph file")
    sp.add_argument(
        "step",
        help="one step line, e.g. 'zeroext 0 1 5', 'split 2 | 0 1 | 3 4 5 | 3 -> 6 7',"
        " 'fourcycle 2 6 0 1 3>2', 'vertex2h 2 k4.graph 0>1', 'contractpair'",
    )
    sp.add_argument("--out", help="also write the resulting graph to this file")
    sp.set_defaults(fn=_cmd_op)

    sp = sub.add_parser("certify-global", parents=[common], help="replay and certify a construction sequence")
    sp.add_argument("sequence", help="sequence file ('base TAG' header plus step lines)")
    sp.add_argument(
        "--numeric", action="store_true",
        help="cross-check each split with a randomized coincident rank",
    )
    sp.set_defaults(fn=_cmd_certify)

    sp = sub.add_parser("generate-global", parents=[common], help="grow a certified construction sequence")
    sp.add_argument("--size", type=int, required=True, help="target vertex count")
    sp.add_argument("--base", choices=list(BASE_TAGS), default="K5_MINUS_E")
    sp.add_argument("--graph-out", help="write the final graph to this file")
    sp.set_defaults(fn=_cmd_generate)

    sp = sub.add_parser("experiment", parents=[common], help="cross-validation sweeps")
    sp.add_argument("name", choices=list(_EXPERIMENTS))
    sp.add_argument("--max-n", type=int, default=None, help="largest vertex count")
    sp.add_argument("--samples", type=int, default=None, help="random instances (where applicable)")
    sp.add_argument("--out", help="also write the report to this file")
    sp.set_defaults(fn=_cmd_experiment)

    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        status = args.fn(args)
    except (GraphError, SequenceError, NormError, SparsityError, RigidityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.verbose:
        print(f"elapsed: {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
