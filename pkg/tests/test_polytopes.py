import random
from itertools import combinations

import pytest
from helpers import random_loss, random_simplex_point

from marginlab.corpus import chain, squared, zero_one
from marginlab.errors import ResourceCapError, StructuralError
from marginlab.linalg import dot, rank
from marginlab.losses import as_simplex_point, basis_point, pair_midpoint
from marginlab.polytopes import (
    GE,
    active_sets,
    enumerate_vertices,
    epigraph_polytope,
    hpolytope,
    is_bounded,
    is_pointed,
    maximize_over,
    prediction_set,
    simplex_grid,
    transport_plan_vertices,
    transportation_polytope,
)
from marginlab.rationals import rat

ZO3 = zero_one(3)
CHAIN3 = chain(3)


def lp_closure_check(p, vertices, rng, rounds=25):
    """Random-objective LP closure oracle: every LP optimum value is attained
    by an enumerated vertex, and each enumerated vertex is the unique
    optimum of an explicitly built supporting objective."""
    vertices = list(vertices)
    for _ in range(rounds):
        objective = [rat(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(p.dim)]
        sol = maximize_over(p, objective)
        assert sol.status == "optimal"
        assert sol.optimum == max(dot(objective, v) for v in vertices)
    for v in vertices:
        tight = [
            row
            for row, b, kind in zip(p.rows, p.rhs, p.kinds)
            if kind == GE and dot(row, v) == b
        ]
        objective = [-sum(col) for col in zip(*tight)]
        sol = maximize_over(p, objective)
        assert sol.status == "optimal"
        assert sol.point == v, "supporting objective did not isolate the vertex"
    return True


def test_simplex_vertices_are_point_masses():
    p = hpolytope(
        [[1, 1, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [1, 0, 0, 0],
        ["==", GE, GE, GE],
    )
    assert enumerate_vertices(p) == tuple(sorted(basis_point(3, y) for y in range(3)))


def test_prediction_set_binary_interval():
    # For the binary 0-1 loss the first prediction set is the segment
    # from (1/2, 1/2) to (1, 0).
    pred = prediction_set(zero_one(2), 0)
    assert pred.vertices() == (
        (rat(1, 2), rat(1, 2)),
        (rat(1), rat(0)),
    )
    assert pred.contains((rat(3, 4), rat(1, 4)))
    assert not pred.contains((rat(1, 4), rat(3, 4)))


def test_prediction_set_zero_one_three_vertices():
    expected = {
        basis_point(3, 0),
        pair_midpoint(3, 0, 1),
        pair_midpoint(3, 0, 2),
        as_simplex_point([rat(1, 3)] * 3),
    }
    assert set(prediction_set(ZO3, 0).vertices()) == expected


def test_prediction_set_squared_touches_the_zero_face():
    pred = prediction_set(squared(3), 1)
    q = as_simplex_point([rat(1, 2), 0, rat(1, 2)])
    assert pred.contains(q)


def test_prediction_sets_cover_the_simplex():
    rng = random.Random(3)
    for _ in range(8):
        k = rng.randint(2, 4)
        loss = random_loss(rng, k, symmetric=rng.random() < 0.5)
        preds = [prediction_set(loss, y) for y in range(k)]
        for _ in range(12):
            q = random_simplex_point(rng, k)
            assert any(p.contains(q) for p in preds)


def test_prediction_set_vertices_satisfy_the_rank_condition():
    for loss in (ZO3, CHAIN3, squared(3)):
        for y in range(loss.k):
            pred = prediction_set(loss, y)
            for v in pred.vertices():
                tight = [
                    row
                    for row, b, kind in zip(
                        pred.hrep.rows, pred.hrep.rhs, pred.hrep.kinds
                    )
                    if dot(row, v) == b
                ]
                assert rank(tight) == loss.k


def test_epigraph_vertices_binary():
    p = epigraph_polytope(zero_one(2))
    assert enumerate_vertices(p) == (
        (rat(0), rat(1), rat(0)),
        (rat(1, 2), rat(1, 2), rat(1, 2)),
        (rat(1), rat(0), rat(0)),
    )


def test_epigraph_vertices_chain_have_pair_form():
    loss = CHAIN3
    for q_and_u in enumerate_vertices(epigraph_polytope(loss)):
        q, u = q_and_u[:-1], q_and_u[-1]
        support = [i for i, x in enumerate(q) if x != 0]
        assert len(support) in (1, 2)
        if len(support) == 1:
            y = support[0]
            assert q[y] == 1 and u == 0
        else:
            y, z = support
            assert q[y] == q[z] == rat(1, 2)
            assert u == loss.entries[y][z] / 2


def test_epigraph_zero_one_three_has_the_barycenter_vertex():
    vertices = enumerate_vertices(epigraph_polytope(ZO3))
    assert (rat(1, 3), rat(1, 3), rat(1, 3), rat(2, 3)) in vertices


def test_active_sets_point_mass():
    p = epigraph_polytope(CHAIN3)
    sets = active_sets(p, (rat(1), rat(0), rat(0), rat(0)))
    assert sets.S == (0,)
    assert sets.T == (1, 2)
    assert sets.vertex_necessary and sets.is_vertex


def test_active_sets_chain_tie_point():
    p = epigraph_polytope(CHAIN3)
    sets = active_sets(p, (rat(1, 2), rat(0), rat(1, 2), rat(1)))
    assert sets.S == (0, 1, 2)
    assert sets.T == (1,)
    assert sets.vertex_necessary and sets.is_vertex


def test_active_sets_interior_point_is_no_vertex():
    p = epigraph_polytope(CHAIN3)
    sets = active_sets(p, (rat(1, 3), rat(1, 3), rat(1, 3), rat(0)))
    assert sets.S == ()
    assert not sets.vertex_necessary and not sets.is_vertex


def test_active_sets_rejects_infeasible_points():
    p = epigraph_polytope(CHAIN3)
    with pytest.raises(StructuralError):
        active_sets(p, (rat(1), rat(0), rat(0), rat(5)))


def test_transport_vertices_binary_balanced():
    q = as_simplex_point([rat(1, 2), rat(1, 2)])
    assert transport_plan_vertices(q) == (
        ((rat(0), rat(1, 2)), (rat(1, 2), rat(0))),
        ((rat(1, 2), rat(0)), (rat(0), rat(1, 2))),
    )


def test_transport_vertices_match_h_representation_walk():
    rng = random.Random(9)
    for k in (2, 3):
        for _ in range(4):
            q = random_simplex_point(rng, k, den=6)
            tree_based = {
                tuple(x for row in plan for x in row)
                for plan in transport_plan_vertices(q)
            }
            generic = set(enumerate_vertices(transportation_polytope(q), cap=k * k))
            assert tree_based == generic


def test_transport_vertices_support_cap():
    q = as_simplex_point([rat(1, 5)] * 5)
    with pytest.raises(ResourceCapError):
        transport_plan_vertices(q)


def test_enumeration_cap_is_enforced():
    p = transportation_polytope(as_simplex_point([rat(1, 2), rat(1, 2)]))
    with pytest.raises(ResourceCapError):
        enumerate_vertices(p, cap=3)


def test_unpointed_region_is_rejected():
    p = hpolytope([[1, 0]], [0], [GE])
    with pytest.raises(StructuralError):
        enumerate_vertices(p)


def test_boundedness_probe():
    assert is_bounded(prediction_set(ZO3, 0).hrep)
    half_space = hpolytope([[1, 0], [0, 1]], [0, 0], [GE, GE])
    assert is_pointed(half_space)
    assert not is_bounded(half_space)


def test_lp_closure_oracle_small():
    rng = random.Random(77)
    for loss in (ZO3, CHAIN3):
        pred = prediction_set(loss, 1)
        lp_closure_check(pred.hrep, pred.vertices(), rng, rounds=10)


def test_intersections_nonempty_under_vertex_disjunction():
    # with every vertex satisfying the disjunction, prediction sets
    # pairwise intersect
    from marginlab.consistency import check_assumption_a1

    for loss in (ZO3, CHAIN3, zero_one(4)):
        if not check_assumption_a1(loss).holds:
            continue
        k = loss.k
        for y, z in combinations(range(k), 2):
            p1 = prediction_set(loss, y)
            p2 = prediction_set(loss, z)
            assert any(p2.contains(v) for v in p1.vertices())


def test_simplex_grid_counts_and_membership():
    points = list(simplex_grid(3, 6))
    assert len(points) == 28
    assert all(sum(q, rat(0)) == 1 for q in points)
    assert len(set(points)) == 28
    assert list(simplex_grid(2, 1)) == [
        (rat(0), rat(1)),
        (rat(1), rat(0)),
    ]
