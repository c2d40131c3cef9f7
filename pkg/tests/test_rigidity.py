from __future__ import annotations

import numpy as np
import pytest

from normrig.graph import Graph
from normrig.norms import LpPlane, random_coincident_placement, random_placement
from normrig.rigidity import (
    DEFAULT_SEED,
    Framework,
    RigidityError,
    TolerancePolicy,
    build_rigidity_matrix,
    generic_rank,
    kernel_basis,
    numerical_rank,
    resolve_seed,
    uv_generic_rank,
)


def test_resolve_seed(monkeypatch):
    assert resolve_seed(7) == 7
    monkeypatch.delenv("NORMRIG_SEED", raising=False)
    assert resolve_seed(None) == DEFAULT_SEED
    monkeypatch.setenv("NORMRIG_SEED", "99")
    assert resolve_seed(None) == 99


def test_pinned_single_edge_row(plane4):
    g = Graph.from_edges([0, 1], [(0, 1)])
    p = {0: (0.0, 0.0), 1: (1.0, 0.0)}
    fw = Framework(g, p, plane4)
    mat = build_rigidity_matrix(fw)
    # phi_(p0-p1) = phi_(-1,0) = (-1,0) at vertex 0, negated at vertex 1
    assert mat.array.shape == (1, 4)
    assert mat.array[0] == pytest.approx([-1.0, 0.0, 1.0, 0.0])


def test_translations_span_kernel(plane4):
    g = Graph.complete(4)
    rng = np.random.default_rng(3)
    fw = Framework(g, random_placement(g, rng), plane4)
    mat = build_rigidity_matrix(fw).array
    for shift in ((1.0, 0.0), (0.0, 1.0)):
        flex = np.tile(shift, g.n)
        assert np.linalg.norm(mat @ flex) < 1e-9
    basis = kernel_basis(mat)
    assert basis.shape[1] == 2  # K4 generically: only trivial flexes


def test_zero_length_edge_rejected(plane4):
    g = Graph.from_edges([0, 1], [(0, 1)])
    fw = Framework(g, {0: (0.5, 0.5), 1: (0.5, 0.5)}, plane4)
    with pytest.raises(RigidityError):
        build_rigidity_matrix(fw)


def test_coincident_framework_validation(k23, plane4):
    p = {v: (float(v), 0.25 * v) for v in k23.vertices}
    with pytest.raises(RigidityError):
        Framework(k23, p, plane4, coincident=True)  # pair not coincident
    rng = np.random.default_rng(0)
    fw = Framework(k23, random_coincident_placement(k23, rng), plane4, coincident=True)
    assert np.array_equal(fw.placement[0], fw.placement[1])


def test_numerical_rank_tolerance():
    a = np.diag([1.0, 1e-3, 1e-14])
    assert numerical_rank(a) == 2
    assert numerical_rank(a, TolerancePolicy(rel=1e-16)) == 3
    assert numerical_rank(np.zeros((3, 3))) == 0


def test_pinned_ranks(plane4, k23, two_k4, k4_minus_uv):
    assert generic_rank(Graph.complete(3), plane4).rank == 3
    assert generic_rank(Graph.complete(4), plane4).rank == 6
    rep = generic_rank(k23.without_pair(), plane4)
    assert rep.rank == 6 and not rep.rigid  # 6 < 2*5-2
    assert uv_generic_rank(k23, plane4).rank == 5
    rep5 = uv_generic_rank(two_k4, plane4)
    assert rep5.rank == 12 and rep5.rigid and rep5.independent
    rep4 = uv_generic_rank(k4_minus_uv, plane4)
    assert rep4.rank == 5 and rep4.independent and not rep4.rigid


def test_small_conventions(plane4):
    one = Graph.from_edges([0])
    assert generic_rank(one, plane4).rigid
    two = Graph.from_edges([0, 1], [(0, 1)])
    rep = generic_rank(two, plane4)
    assert rep.rank == 1 and not rep.rigid


def test_pair_edge_removed_flag(plane4):
    g = Graph.complete(4, pair=(0, 1))
    rep = uv_generic_rank(g, plane4)
    assert rep.pair_edge_removed and rep.rows == 5 and not rep.independent


def test_trial_determinism(two_k4, plane4):
    a = uv_generic_rank(two_k4, plane4, trials=10, seed=11)
    b = uv_generic_rank(two_k4, plane4, trials=10, seed=11)
    assert a == b
    c = uv_generic_rank(two_k4, plane4, trials=10, seed=12)
    assert c.per_trial_ranks == a.per_trial_ranks or c.seed != a.seed


def test_rank_report_fields(two_k4, plane4):
    rep = uv_generic_rank(two_k4, plane4, trials=4, seed=2)
    assert rep.trials == 4 and len(rep.per_trial_ranks) == 4
    assert rep.norm_spec == "lp:4"
    assert rep.pair == (0, 1)
    assert max(rep.per_trial_ranks) == rep.rank


def test_requires_pair(plane4):
    with pytest.raises(Exception):
        uv_generic_rank(Graph.complete(4), plane4)


def test_affine_span_guard(plane4):
    # path on 3 vertices cannot be rigid, rank 2 < 4
    g = Graph.from_edges(range(3), [(0, 1), (1, 2)])
    rep = generic_rank(g, plane4)
    assert not rep.rigid and rep.rank == 2
