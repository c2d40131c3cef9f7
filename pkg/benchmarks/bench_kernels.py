#!/usr/bin/env python3
"""Time the compiled kernels against their pure-numpy fallbacks.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --pebble-n 80 --repeat 5

The numbers justify shipping both backends: the pebble game dominates
the exhaustive sweeps, and the batched canonizer dominates enumeration.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from normrig import _kernels
from normrig.enumeration import _perm_bitmaps, edge_slots, random_graph


def _time(fn, *args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_pebble(n: int, graphs: int, repeat: int, rng) -> dict:
    instances = []
    for _ in range(graphs):
        g = random_graph(rng, n, near_tight_bias=1.0)
        edges = sorted(g.edges)
        eu = np.array([a for a, _ in edges], dtype=np.int64)
        ev = np.array([b for _, b in edges], dtype=np.int64)
        instances.append((g.n, eu, ev))

    def run(fn):
        for gn, eu, ev in instances:
            fn(gn, eu, ev, 2, 2)

    out = {"python": _time(run, _kernels.pebble_game_py, repeat=repeat)}
    if _kernels.pebble_game_nb is not None:
        run(_kernels.pebble_game_nb)  # compile
        out["numba"] = _time(run, _kernels.pebble_game_nb, repeat=repeat)
    return out


def bench_canonize(n: int, repeat: int, rng) -> dict:
    nbits = len(edge_slots(n))
    masks = rng.integers(0, 1 << nbits, size=1 << min(nbits, 14), dtype=np.int64)
    bitmaps = _perm_bitmaps(n, False)
    out = {"python": _time(_kernels.canonize_batch_py, masks, bitmaps, repeat=repeat)}
    if _kernels.canonize_batch_nb is not None:
        _kernels.canonize_batch_nb(masks[:4], bitmaps)
        out["numba"] = _time(_kernels.canonize_batch_nb, masks, bitmaps, repeat=repeat)
    return out


def bench_family(c: int, repeat: int, rng) -> dict:
    edge_masks = rng.integers(0, 1 << 20, size=c, dtype=np.int64)
    val_terms = rng.integers(0, 8, size=c, dtype=np.int64)
    out = {"python": _time(_kernels.family_best_py, edge_masks, val_terms, repeat=repeat)}
    if _kernels.family_best_nb is not None:
        _kernels.family_best_nb(edge_masks[:2], val_terms[:2])
        out["numba"] = _time(_kernels.family_best_nb, edge_masks, val_terms, repeat=repeat)
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pebble-n", type=int, default=60, help="vertices per pebble instance")
    ap.add_argument("--pebble-graphs", type=int, default=50)
    ap.add_argument("--canon-n", type=int, default=6, help="vertex count for mask canonization")
    ap.add_argument("--family-c", type=int, default=18, help="candidate sets (2^c families)")
    ap.add_argument("--repeat", type=int, default=3, help="best of N timings")
    ap.add_argument("--seed", type=int, default=1729)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    if _kernels.pebble_game_nb is None:
        print("note: numba unavailable, timing the fallback only")

    rows = [
        (f"pebble_game ({args.pebble_graphs} graphs, n={args.pebble_n})",
         bench_pebble(args.pebble_n, args.pebble_graphs, args.repeat, rng)),
        (f"canonize_batch (n={args.canon_n}, {1 << min(len(edge_slots(args.canon_n)), 14)} masks)",
         bench_canonize(args.canon_n, args.repeat, rng)),
        (f"family_best (c={args.family_c}, {1 << args.family_c} families)",
         bench_family(args.family_c, args.repeat, rng)),
    ]

    width = max(len(name) for name, _ in rows)
    print(f"{'kernel':<{width}}  {'python':>10}  {'numba':>10}  {'speedup':>8}")
    for name, res in rows:
        py = res["python"]
        if "numba" in res:
            nb = res["numba"]
            print(f"{name:<{width}}  {py:>9.4f}s  {nb:>9.4f}s  {py / nb:>7.1f}x")
        else:
            print(f"{name:<{width}}  {py:>9.4f}s  {'-':>10}  {'-':>8}")


if __name__ == "__main__":
    main()
