"""Rigidity matrices and randomized generic-rank computation.

A framework places each vertex in the plane.  The rigidity matrix has
one row per edge xy (x < y): the support functional of p_x - p_y sits
in x's column pair and its negation in y's.  Infinitesimal rigidity of
a well-spread framework means the matrix reaches rank 2|V| - 2, the
two missing dimensions being the translations (the only trivial
motions away from the Euclidean plane).

Generic ranks are estimated by sampling several random placements and
keeping the best rank seen; coincident variants place the designated
pair at one common point and work on the graph minus the pair edge.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .graph import Graph, delete_edge
from .norms import LpPlane, PlaneNorm, random_coincident_placement, random_placement

DEFAULT_SEED = 1729
_SEED_ENV = "NORMRIG_SEED"


class RigidityError(ValueError):
    """Degenerate placement or inconsistent framework data."""


def resolve_seed(seed: int | None) -> int:
    """Explicit seed, else NORMRIG_SEED from the environment, else 1729."""
    if seed is not None:
        return int(seed)
    raw = os.environ.get(_SEED_ENV, "").strip()
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise RigidityError(f"{_SEED_ENV} must be an integer, got {raw!r}")
    return DEFAULT_SEED


@dataclass(frozen=True)
class TolerancePolicy:
    """Singular values below rel * sigma_max * max(rows, cols) are noise."""

    rel: float = 1e-9

    def threshold(self, sigma_max: float, rows: int, cols: int) -> float:
        return self.rel * sigma_max * max(rows, cols)


DEFAULT_TOL = TolerancePolicy()


@dataclass(frozen=True)
class Framework:
    graph: Graph
    placement: Mapping[int, np.ndarray]
    plane: PlaneNorm
    coincident: bool = False

    def __post_init__(self):
        for v in self.graph.vertices:
            if v not in self.placement:
                raise RigidityError(f"vertex {v} has no position")
            pt = np.asarray(self.placement[v], dtype=np.float64)
            if pt.shape != (2,) or not np.all(np.isfinite(pt)):
                raise RigidityError(f"bad position for vertex {v}: {pt!r}")
        if self.coincident:
            u, v = self.graph.require_pair()
            if not np.array_equal(self.placement[u], self.placement[v]):
                raise RigidityError("coincident framework must place the pair together")


@dataclass(frozen=True)
class RigidityMatrix:
    array: np.ndarray
    edge_order: tuple[tuple[int, int], ...]
    vertex_order: tuple[int, ...]


def build_rigidity_matrix(fw: Framework) -> RigidityMatrix:
    g = fw.graph
    edges = tuple(g.sorted_edges())
    verts = g.vertices
    col = {v: 2 * i for i, v in enumerate(verts)}
    if edges:
        diffs = np.array(
            [np.asarray(fw.placement[a]) - np.asarray(fw.placement[b]) for a, b in edges],
            dtype=np.float64,
        )
        lengths = fw.plane.norm_batch(diffs)
        if np.any(lengths == 0.0):
            a, b = edges[int(np.argmin(lengths))]
            raise RigidityError(f"edge {a}-{b} joins two coincident points")
        phis = fw.plane.support_batch(diffs)
    else:
        phis = np.zeros((0, 2))
    mat = np.zeros((len(edges), 2 * len(verts)))
    for i, (a, b) in enumerate(edges):
        mat[i, col[a] : col[a] + 2] = phis[i]
        mat[i, col[b] : col[b] + 2] = -phis[i]
    return RigidityMatrix(mat, edges, verts)


# ---------------------------------------------------------------------------
# numerical rank
# ---------------------------------------------------------------------------


def _singular_values(a: np.ndarray) -> np.ndarray:
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def numerical_rank(a: np.ndarray, tol: TolerancePolicy = DEFAULT_TOL) -> int:
    rank, _ = numerical_rank_detail(a, tol)
    return rank


def numerical_rank_detail(
    a: np.ndarray, tol: TolerancePolicy = DEFAULT_TOL
) -> tuple[int, dict]:
    """Rank plus the numbers behind it, for threshold diagnostics."""
    sigmas = _singular_values(a)
    if sigmas.size == 0 or sigmas[0] == 0.0:
        return 0, {"sigmas": sigmas, "threshold": 0.0, "near_threshold": False}
    tau = tol.threshold(float(sigmas[0]), *a.shape)
    rank = int(np.sum(sigmas > tau))
    # A kept singular value within a decade of the cutoff means the
    # verdict leans on the tolerance; callers surface this.
    near = bool(rank > 0 and sigmas[rank - 1] < 10.0 * tau)
    return rank, {"sigmas": sigmas, "threshold": tau, "near_threshold": near}


def kernel_basis(a: np.ndarray, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical null space."""
    if a.size == 0:
        return np.eye(a.shape[1])
    u, s, vh = np.linalg.svd(a)
    tau = tol.threshold(float(s[0]), *a.shape) if s.size and s[0] > 0 else 0.0
    rank = int(np.sum(s > tau))
    return vh[rank:].T


# ---------------------------------------------------------------------------
# randomized generic rank
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RankReport:
    kind: str  # "plain" or "coincident"
    n_vertices: int
    total_edges: int
    rows: int
    rank: int
    independent: bool
    rigid: bool
    per_trial_ranks: tuple[int, ...]
    affine_span_full: bool
    pair: tuple[int, int] | None
    pair_edge_removed: bool
    trials: int
    seed: int
    box_radius: float
    tol_rel: float
    norm_spec: str
    near_threshold: bool
    notes: tuple[str, ...] = field(default=())


def _affine_span_full(points: np.ndarray) -> bool:
    if points.shape[0] < 3:
        return False
    centered = points - points.mean(axis=0)
    return np.linalg.matrix_rank(centered) == 2


def _rank_trials(
    graph: Graph,
    plane: PlaneNorm,
    trials: int,
    seed: int,
    box_radius: float,
    tol: TolerancePolicy,
    coincident: bool,
):
    ranks, affine, notes = [], [], []
    near_any = False
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        place = (
            random_coincident_placement(graph, rng, box_radius)
            if coincident
            else random_placement(graph, rng, box_radius)
        )
        fw = Framework(graph, place, plane, coincident=coincident)
        mat = build_rigidity_matrix(fw)
        rank, detail = numerical_rank_detail(mat.array, tol)
        ranks.append(rank)
        affine.append(_affine_span_full(np.array([place[v] for v in graph.vertices])))
        if detail["near_threshold"]:
            near_any = True
            sig = detail["sigmas"][rank - 1]
            notes.append(
                f"trial {t}: smallest kept singular value {sig:.3e} "
                f"within 10x of threshold {detail['threshold']:.3e}"
            )
    best = max(ranks) if ranks else 0
    affine_ok = any(a for r, a in zip(ranks, affine) if r == best)
    return best, tuple(ranks), affine_ok, near_any, tuple(notes)


def generic_rank(
    graph: Graph,
    plane: PlaneNorm | None = None,
    trials: int = 10,
    seed: int | None = None,
    box_radius: float = 1.0,
    tol: TolerancePolicy = DEFAULT_TOL,
) -> RankReport:
    """Best rigidity-matrix rank over random placements.

    Rank never exceeds the generic value and random placements reach it
    with overwhelming probability, so the max over trials is the right
    aggregate.  Rigidity additionally demands a full affine span, which
    forces |V| >= 3; graphs on at most one vertex are rigid by
    convention.
    """
    plane = plane or LpPlane(4.0)
    seed = resolve_seed(seed)
    if trials < 1:
        raise RigidityError("need at least one trial")
    best, ranks, affine_ok, near, notes = _rank_trials(
        graph, plane, trials, seed, box_radius, tol, coincident=False
    )
    target = 2 * graph.n - 2
    rigid = True if graph.n <= 1 else (best == target and affine_ok)
    return RankReport(
        kind="plain",
        n_vertices=graph.n,
        total_edges=graph.m,
        rows=graph.m,
        rank=best,
        independent=best == graph.m,
        rigid=rigid,
        per_trial_ranks=ranks,
        affine_span_full=affine_ok,
        pair=graph.designated_pair,
        pair_edge_removed=False,
        trials=trials,
        seed=seed,
        box_radius=box_radius,
        tol_rel=tol.rel,
        norm_spec=plane.spec_string(),
        near_threshold=near,
        notes=notes,
    )


def uv_generic_rank(
    graph: Graph,
    plane: PlaneNorm | None = None,
    trials: int = 10,
    seed: int | None = None,
    box_radius: float = 1.0,
    tol: TolerancePolicy = DEFAULT_TOL,
) -> RankReport:
    """Coincident variant: the designated pair shares one random point.

    The matrix is built on G minus the pair edge (a coincident pair
    edge would only contribute a zero row).  uv-independence requires
    the pair edge to be absent from G in the first place; uv-rigidity
    is rank 2|V| - 2 with full affine span.
    """
    plane = plane or LpPlane(4.0)
    seed = resolve_seed(seed)
    if trials < 1:
        raise RigidityError("need at least one trial")
    u, v = graph.require_pair()
    had_pair_edge = graph.has_edge(u, v)
    work = delete_edge(graph, u, v) if had_pair_edge else graph
    best, ranks, affine_ok, near, notes = _rank_trials(
        work, plane, trials, seed, box_radius, tol, coincident=True
    )
    target = 2 * graph.n - 2
    return RankReport(
        kind="coincident",
        n_vertices=graph.n,
        total_edges=graph.m,
        rows=work.m,
        rank=best,
        independent=(not had_pair_edge) and best == work.m,
        rigid=best == target and affine_ok,
        per_trial_ranks=ranks,
        affine_span_full=affine_ok,
        pair=(u, v),
        pair_edge_removed=had_pair_edge,
        trials=trials,
        seed=seed,
        box_radius=box_radius,
        tol_rel=tol.rel,
        norm_spec=plane.spec_string(),
        near_threshold=near,
        notes=notes,
    )
