"""Cross-validation sweeps: combinatorial verdicts against numerical rank.

Each sweep walks a stream of instances (exhaustive up to isomorphism
where feasible, random beyond), computes a combinatorial verdict and a
randomized numerical one, and reports disagreements.  A numerical
verdict that contradicts the combinatorial side is retried with fresh
placement seeds up to three times before it counts as a disagreement —
unlucky placements can sit below generic rank, never above it.

Reports are value objects: rerunning a sweep with the same seed and
configuration yields an equal report (runtime is carried but excluded
from comparisons).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .enumeration import enumerate_graphs, random_graph
from .graph import (
    Graph,
    delete_edge,
    format_graph,
    one_extension,
    vertex_to_four_cycle,
    vertex_to_h,
    zero_extension,
)
from .norms import DEFAULT_PLANE, PlaneNorm, parse_norm
from .rigidity import generic_rank, resolve_seed, uv_generic_rank
from .sparsity import (
    cover_rank_bound,
    is_uv_rigid_comb,
    is_uv_sparse,
    is_rigid_comb,
    pebble_game,
)

MAX_RETRIES = 3


@dataclass(frozen=True)
class Disagreement:
    index: int
    graph: str
    combinatorial: int | bool
    numeric: int | bool
    rank: int
    rows: int
    seeds: tuple[int, ...]
    note: str = ""


@dataclass(frozen=True)
class SweepReport:
    name: str
    config: tuple[tuple[str, object], ...]
    instances: int
    agreements: int
    disagreements: tuple[Disagreement, ...]
    runtime: float = field(compare=False, default=0.0)

    def __post_init__(self):
        if self.agreements + len(self.disagreements) != self.instances:
            raise ValueError("agreements + |disagreements| must equal instances")

    @property
    def ok(self) -> bool:
        return not self.disagreements


def _plane(desc: PlaneNorm | str | None) -> PlaneNorm:
    if desc is None:
        return DEFAULT_PLANE
    if isinstance(desc, str):
        return parse_norm(desc)
    return desc


def _config(**kw) -> tuple[tuple[str, object], ...]:
    return tuple(sorted(kw.items()))


def _derive_seed(seed: int, *keys: int) -> int:
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1)[0])


def _verdict_with_retry(comb, numeric_fn, seed: int, idx: int):
    """numeric_fn(seed) -> (verdict, rank, rows); retry on mismatch."""
    seeds: list[int] = []
    for attempt in range(MAX_RETRIES + 1):
        s = _derive_seed(seed, idx, attempt)
        seeds.append(s)
        verdict, rank, rows = numeric_fn(s)
        if verdict == comb:
            break
    return verdict, rank, rows, tuple(seeds)


def _run(name, config, items, comb_fn, numeric_fn, seed, note_fn=None):
    """Shared sweep loop: items yields graphs (or richer instances)."""
    t0 = time.perf_counter()
    agreements = 0
    disagreements: list[Disagreement] = []
    count = 0
    for idx, inst in enumerate(items):
        count += 1
        comb = comb_fn(inst)
        verdict, rank, rows, seeds = _verdict_with_retry(
            comb, lambda s: numeric_fn(inst, s), seed, idx
        )
        if verdict == comb:
            agreements += 1
        else:
            g = inst if isinstance(inst, Graph) else inst[1]
            disagreements.append(
                Disagreement(
                    idx,
                    format_graph(g),
                    comb,
                    verdict,
                    rank,
                    rows,
                    seeds,
                    note_fn(inst) if note_fn else "",
                )
            )
    return SweepReport(
        name,
        config,
        count,
        agreements,
        tuple(disagreements),
        runtime=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------


def _pair_instances(max_n: int, samples_per_large_n: int, seed: int):
    for n in range(2, min(max_n, 6) + 1):
        yield from enumerate_graphs(n, pair=True)
    rng = np.random.default_rng([seed, 0xE0])
    for n in range(7, max_n + 1):
        for _ in range(samples_per_large_n):
            yield random_graph(rng, n, pair=True)


def equivalence_sweep(
    max_n: int,
    desc: PlaneNorm | str | None = None,
    trials: int = 10,
    seed: int | None = None,
    samples_per_large_n: int = 100,
) -> SweepReport:
    """uv-sparsity vs numerical uv-independence, graph by graph.

    Exhaustive over pair-preserving isomorphism classes for n <= 6,
    randomly sampled for 7 <= n <= max_n.
    """
    plane = _plane(desc)
    seed = resolve_seed(seed)

    def numeric(g: Graph, s: int):
        rep = uv_generic_rank(g, plane, trials=trials, seed=s)
        return rep.independent, rep.rank, rep.rows

    return _run(
        "equivalence",
        _config(
            max_n=max_n,
            norm=plane.spec_string(),
            trials=trials,
            seed=seed,
            samples_per_large_n=samples_per_large_n,
        ),
        _pair_instances(max_n, samples_per_large_n, seed),
        lambda g: is_uv_sparse(g).sparse,
        numeric,
        seed,
    )


def delete_contract_sweep(
    samples: int,
    n_range: tuple[int, int] = (4, 8),
    desc: PlaneNorm | str | None = None,
    trials: int = 10,
    seed: int | None = None,
) -> SweepReport:
    """Delete-contract uv-rigidity vs numerical rank 2|V|-2 on random graphs."""
    plane = _plane(desc)
    seed = resolve_seed(seed)
    lo, hi = n_range
    rng = np.random.default_rng([seed, 0xDC])
    items = [
        random_graph(rng, int(rng.integers(lo, hi + 1)), pair=True)
        for _ in range(samples)
    ]

    def numeric(g: Graph, s: int):
        rep = uv_generic_rank(g, plane, trials=trials, seed=s)
        return rep.rigid, rep.rank, rep.rows

    return _run(
        "delete-contract",
        _config(
            samples=samples,
            n_range=n_range,
            norm=plane.spec_string(),
            trials=trials,
            seed=seed,
        ),
        items,
        is_uv_rigid_comb,
        numeric,
        seed,
    )


def rigidity_sweep(
    max_n: int = 6,
    desc: PlaneNorm | str | None = None,
    trials: int = 10,
    seed: int | None = None,
) -> SweepReport:
    """Tight-spanning-subgraph rigidity vs numerical rank on connected graphs."""
    plane = _plane(desc)
    seed = resolve_seed(seed)

    def items():
        for n in range(3, max_n + 1):
            yield from enumerate_graphs(n, connected=True)

    def numeric(g: Graph, s: int):
        rep = generic_rank(g, plane, trials=trials, seed=s)
        return rep.rigid, rep.rank, rep.rows

    return _run(
        "rigidity",
        _config(max_n=max_n, norm=plane.spec_string(), trials=trials, seed=seed),
        items(),
        is_rigid_comb,
        numeric,
        seed,
    )


def cover_bound_sweep(
    max_n: int = 5,
    desc: PlaneNorm | str | None = None,
    trials: int = 10,
    seed: int | None = None,
) -> SweepReport:
    """Cover upper bound vs generic rank: equality for every small graph."""
    plane = _plane(desc)
    seed = resolve_seed(seed)

    def items():
        for n in range(1, max_n + 1):
            yield from enumerate_graphs(n)

    def numeric(g: Graph, s: int):
        rep = generic_rank(g, plane, trials=trials, seed=s)
        return rep.rank, rep.rank, rep.rows

    return _run(
        "cover-bound",
        _config(max_n=max_n, norm=plane.spec_string(), trials=trials, seed=seed),
        items(),
        lambda g: cover_rank_bound(g).value,
        numeric,
        seed,
    )


# ---------------------------------------------------------------------------
# operation preservation suite
# ---------------------------------------------------------------------------

OP_VARIANTS = (
    "uv-0-extension",
    "uv-1-extension",
    "0-extension-adding-pair-vertex",
    "4-cycle-adding-pair-vertex",
    "uv-4-cycle",
    "vertex-to-h-adding-pair-vertex",
    "uv-vertex-to-h",
)


def min_uv_tight_h() -> Graph:
    """Smallest graph that is uv-tight (and uv-rigid): K4 plus a degree-2
    pair partner.  No 4-vertex graph fits 2|V|-2 edges without the pair
    edge, so five vertices is minimal."""
    return Graph.from_edges(
        range(5),
        [(0, 2), (0, 3), (0, 4), (2, 3), (2, 4), (3, 4), (1, 2), (1, 3)],
        pair=(0, 1),
    )


def _independent_subgraph(g: Graph) -> Graph:
    res = pebble_game(g)
    return Graph.from_edges(g.vertices, res.accepted, g.designated_pair)


def _sparse_host(rng: np.random.Generator, n_lo: int = 4, n_hi: int = 7) -> Graph:
    n = int(rng.integers(n_lo, n_hi + 1))
    return _independent_subgraph(random_graph(rng, n))


def _uv_sparse_host(rng: np.random.Generator, n_lo: int = 4, n_hi: int = 7) -> Graph:
    while True:
        n = int(rng.integers(n_lo, n_hi + 1))
        g = random_graph(rng, n, pair=True)
        u, v = g.designated_pair
        if g.has_edge(u, v):
            g = delete_edge(g, u, v)
        g = _independent_subgraph(g)
        if is_uv_sparse(g).sparse:
            return g


def _fresh(g: Graph) -> int:
    return max(g.vertices) + 1


def _random_reassign(rng, g: Graph, w: int, x1: int, x2: int, w_new: int):
    rest = [y for y in g.neighbors(w) if y not in (x1, x2)]
    return {y: (w if rng.random() < 0.5 else w_new) for y in rest}


def _apply_variant(variant: str, rng: np.random.Generator) -> Graph:
    """Sample a host meeting the variant's hypotheses and apply the move."""
    if variant == "uv-0-extension":
        g = _uv_sparse_host(rng)
        u, v = g.designated_pair
        while True:
            a, b = rng.choice(g.vertices, size=2, replace=False)
            if {int(a), int(b)} != {u, v}:
                return zero_extension(g, int(a), int(b), _fresh(g))
    if variant == "uv-1-extension":
        while True:
            g = _uv_sparse_host(rng)
            u, v = g.designated_pair
            cands = [
                (a, b, c)
                for a, b in g.sorted_edges()
                for c in g.vertices
                if c not in (a, b) and not {u, v} <= {a, b, c}
            ]
            if cands:
                a, b, c = cands[int(rng.integers(len(cands)))]
                return one_extension(g, a, b, c, _fresh(g))
    if variant == "0-extension-adding-pair-vertex":
        g = _sparse_host(rng)
        u = int(rng.choice(g.vertices))
        rest = [x for x in g.vertices if x != u]
        a, b = rng.choice(rest, size=2, replace=False)
        z = _fresh(g)
        return zero_extension(g, int(a), int(b), z).with_pair(u, z)
    if variant == "4-cycle-adding-pair-vertex":
        while True:
            g = _sparse_host(rng)
            ws = [w for w in g.vertices if g.degree(w) >= 2]
            if ws:
                w = int(rng.choice(ws))
                x1, x2 = rng.choice(g.neighbors(w), size=2, replace=False)
                w_new = _fresh(g)
                g2 = vertex_to_four_cycle(
                    g, w, w_new, int(x1), int(x2),
                    _random_reassign(rng, g, w, int(x1), int(x2), w_new),
                )
                return g2.with_pair(w, w_new)
    if variant == "uv-4-cycle":
        # The cycle contacts must not be exactly the designated pair: a
        # coincident placement puts them at one point, and the move then
        # demonstrably breaks uv-sparsity (e.g. splitting the spare
        # vertex of K4 minus the pair edge through u and v).
        while True:
            g = _uv_sparse_host(rng)
            u, v = g.designated_pair
            ws = [
                w
                for w in g.vertices
                if g.degree(w) >= 2 and set(g.neighbors(w)) != {u, v}
            ]
            if ws:
                w = int(rng.choice(ws))
                while True:
                    x1, x2 = rng.choice(g.neighbors(w), size=2, replace=False)
                    if {int(x1), int(x2)} != {u, v}:
                        break
                return vertex_to_four_cycle(
                    g, w, _fresh(g), int(x1), int(x2),
                    _random_reassign(rng, g, w, int(x1), int(x2), _fresh(g)),
                )
    if variant == "vertex-to-h-adding-pair-vertex":
        g = _sparse_host(rng)
        h = min_uv_tight_h()
        w = int(rng.choice(g.vertices))
        attach = {y: int(rng.integers(h.n)) for y in g.neighbors(w)}
        return vertex_to_h(g, w, h, attach)
    if variant == "uv-vertex-to-h":
        g = _uv_sparse_host(rng)
        u, v = g.designated_pair
        h = Graph.complete(4)
        w = int(rng.choice([x for x in g.vertices if x not in (u, v)]))
        attach = {y: int(rng.integers(4)) for y in g.neighbors(w)}
        return vertex_to_h(g, w, h, attach)
    raise ValueError(f"unknown operation variant {variant!r}")


def operation_preservation_suite(
    samples: int = 100,
    desc: PlaneNorm | str | None = None,
    seed: int | None = None,
    trials: int = 10,
) -> SweepReport:
    """Apply each independence-preserving move to random admissible hosts.

    Hosts are drawn to satisfy the combinatorial hypotheses, so every
    resulting framework must come out numerically uv-independent;
    anything else is a disagreement.
    """
    plane = _plane(desc)
    seed = resolve_seed(seed)
    items = []
    for vi, variant in enumerate(OP_VARIANTS):
        rng = np.random.default_rng([seed, 0x09, vi])
        for _ in range(samples):
            items.append((variant, _apply_variant(variant, rng)))

    def numeric(inst, s: int):
        _, g = inst
        rep = uv_generic_rank(g, plane, trials=trials, seed=s)
        return rep.independent, rep.rank, rep.rows

    return _run(
        "operation-preservation",
        _config(
            samples=samples, norm=plane.spec_string(), trials=trials, seed=seed
        ),
        items,
        lambda inst: True,
        numeric,
        seed,
        note_fn=lambda inst: inst[0],
    )


def conjecture_probe(
    desc_list: tuple[str, ...] | list[str],
    samples: int = 100,
    seed: int | None = None,
    max_n: int = 5,
    trials: int = 10,
) -> SweepReport:
    """The uv-sparsity equivalence re-run across several norms.

    The combinatorial side never sees the norm, so any verdict that
    moves with the exponent would show up as a disagreement.  Every
    shipped norm is strictly convex; the probe checks robustness across
    them, nothing more.
    """
    seed = resolve_seed(seed)
    t0 = time.perf_counter()
    planes = [_plane(d) for d in desc_list]
    total = agreements = 0
    disagreements: list[Disagreement] = []
    for plane in planes:
        rep = equivalence_sweep(
            max_n, plane, trials=trials, seed=seed, samples_per_large_n=samples
        )
        total += rep.instances
        agreements += rep.agreements
        for d in rep.disagreements:
            disagreements.append(
                Disagreement(
                    len(disagreements),
                    d.graph,
                    d.combinatorial,
                    d.numeric,
                    d.rank,
                    d.rows,
                    d.seeds,
                    note=f"norm {plane.spec_string()}: {d.note}".rstrip(": "),
                )
            )
    return SweepReport(
        "conjecture-probe",
        _config(
            norms=tuple(p.spec_string() for p in planes),
            samples=samples,
            max_n=max_n,
            trials=trials,
            seed=seed,
        ),
        total,
        agreements,
        tuple(disagreements),
        runtime=time.perf_counter() - t0,
    )


SWEEPS = {
    "equivalence": equivalence_sweep,
    "delete-contract": delete_contract_sweep,
    "rigidity": rigidity_sweep,
    "cover-bound": cover_bound_sweep,
    "operations": operation_preservation_suite,
    "conjecture": conjecture_probe,
}


def format_report(rep: SweepReport, verbose: bool = False) -> str:
    """Human-readable, deterministic rendering (runtime deliberately absent)."""
    lines = [
        f"sweep: {rep.name}",
        "config: " + " ".join(f"{k}={v}" for k, v in rep.config),
        f"instances: {rep.instances}",
        f"agreements: {rep.agreements}",
        f"disagreements: {len(rep.disagreements)}",
    ]
    for d in rep.disagreements:
        lines.append(
            f"  [{d.index}] comb={d.combinatorial} numeric={d.numeric} "
            f"rank={d.rank}/{d.rows}"
            + (f" ({d.note})" if d.note else "")
        )
        if verbose:
            lines.extend("    " + ln for ln in d.graph.strip().splitlines())
    return "\n".join(lines) + "\n"
