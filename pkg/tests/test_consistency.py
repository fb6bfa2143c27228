import random
from itertools import combinations

import pytest
from helpers import random_distance, random_loss, random_simplex_point

from marginlab.consistency import (
    CONSISTENT,
    INCONSISTENT,
    UNDETERMINED,
    brute_force_oracle,
    build_report,
    certify_tree_metric,
    check_assumption_a1,
    check_dominant_label_identity,
    check_embedding_identities,
    check_necessary_condition,
    check_rm_simple_sufficient,
    is_distance,
    rm_equality_plan,
    tree_hm_plan,
    tree_path_distances,
    verify_tree_hm_equality,
)
from marginlab.corpus import (
    chain,
    corpus_loss,
    hamming_two_bits,
    permutation_hamming,
    squared,
    star,
    zero_one,
)
from marginlab.errors import PreconditionError
from marginlab.linalg import dot
from marginlab.losses import as_simplex_point, basis_point, loss_matrix
from marginlab.polytopes import simplex_grid
from marginlab.rationals import rat
from marginlab.risks import bayes_risk_l, bayes_risk_m, bayes_risk_rm, frobenius

ZO3 = zero_one(3)
CHAIN3 = chain(3)


def test_is_distance_zero_one_and_absolute_deviation():
    assert is_distance(ZO3).is_distance
    assert is_distance(chain(5)).is_distance


def test_is_distance_squared_violation_triple():
    result = is_distance(squared(3))
    assert not result.is_distance
    kind, triple, lhs, rhs = result.violation
    assert kind == "triangle"
    assert triple == (0, 1, 2)
    assert (lhs, rhs) == (4, 2)


def test_is_distance_reports_asymmetry():
    loss = loss_matrix([[0, 1, 2], [2, 0, 1], [2, 1, 0]])
    result = is_distance(loss)
    assert not result.is_distance
    assert result.violation[0] == "asymmetric"


def test_necessary_condition_fails_for_zero_one():
    result = check_necessary_condition(ZO3)
    assert not result.holds
    assert result.violating_triple == (0, 1, 2)
    # every pivot breaks one identity with values 1 vs 2
    assert len(result.z_failures) == 3
    for failure in result.z_failures:
        assert (failure.lhs, failure.rhs) == (1, 2)


def test_necessary_condition_holds_for_chains():
    for k in range(3, 7):
        result = check_necessary_condition(chain(k))
        assert result.holds and not result.vacuous
        assert result.is_distance


def test_necessary_condition_chain_pivot_is_the_middle():
    # re-derive: for an aligned triple the middle label works as pivot
    loss = chain(4)
    e = loss.entries
    for y1, y2, y3 in combinations(range(4), 3):
        z = y2
        assert e[y1][y3] == e[y1][z] + e[z][y3]


def test_necessary_condition_vacuous_binary():
    result = check_necessary_condition(zero_one(2))
    assert result.holds and result.vacuous


def test_necessary_condition_requires_symmetry():
    rng = random.Random(2)
    loss = random_loss(rng, 3, symmetric=False)
    with pytest.raises(PreconditionError):
        check_necessary_condition(loss)


def test_necessary_condition_permutation_hamming_fails():
    loss = permutation_hamming(3)
    result = check_necessary_condition(loss)
    assert not result.holds
    y1, y2, y3 = result.violating_triple
    values = sorted(
        [loss.entries[y1][y2], loss.entries[y1][y3], loss.entries[y2][y3]]
    )
    assert values == [rat(2, 3), rat(2, 3), rat(1)]


def test_no_permutation_triple_is_pairwise_minimal():
    # Two transposition-related pairs force the third pair through an even
    # permutation, so no triple sits at pairwise distance 2/M; the minimal
    # violating triples mix 2/3 and 1.
    loss = permutation_hamming(3)
    outputs = range(loss.k)
    for triple in combinations(outputs, 3):
        values = [loss.entries[a][b] for a, b in combinations(triple, 2)]
        assert values.count(rat(2, 3)) <= 2


def test_holding_condition_implies_distance_on_random_trees():
    # random chain relabelings keep the condition and the metric axioms
    rng = random.Random(3)
    for _ in range(6):
        k = rng.randint(3, 5)
        order = list(range(k))
        rng.shuffle(order)
        gamma = sorted(rng.randint(0, 12) for _ in range(k))
        while len(set(gamma)) < k:
            gamma = sorted(rng.randint(0, 12) for _ in range(k))
        entries = [
            [abs(gamma[order[y]] - gamma[order[z]]) for z in range(k)] for y in range(k)
        ]
        loss = loss_matrix(entries)
        result = check_necessary_condition(loss)
        assert result.holds
        assert is_distance(loss).is_distance


def test_tree_certificate_chain():
    cert = certify_tree_metric(CHAIN3)
    assert cert.certified
    assert cert.certificate.edges == ((0, 1, rat(1)), (1, 2, rat(1)))
    paths = tree_path_distances(cert.certificate, 3)
    assert paths == CHAIN3.entries


def test_tree_certificate_star():
    cert = certify_tree_metric(star(4))
    assert cert.certified
    assert set(cert.certificate.edges) == {(0, 1, rat(1)), (0, 2, rat(1)), (0, 3, rat(1))}


def test_tree_certificate_rejects_four_cycle():
    cert = certify_tree_metric(hamming_two_bits())
    assert not cert.certified
    assert "differs" in cert.reason


def test_tree_certificate_rejects_non_distance():
    cert = certify_tree_metric(squared(3))
    assert not cert.certified
    assert cert.reason == "not a distance"


def test_tree_plan_certifies_doubled_task_risk():
    rng = random.Random(5)
    for loss in (CHAIN3, chain(5), star(4), corpus_loss("tree-7")):
        cert = certify_tree_metric(loss)
        assert cert.certified
        for _ in range(15):
            q = random_simplex_point(rng, loss.k)
            assert verify_tree_hm_equality(loss, cert.certificate, q)
        # spot check the plan against the LP value
        q = random_simplex_point(rng, loss.k)
        plan = tree_hm_plan(loss, cert.certificate, q)
        value = sum(
            (mass * loss.entries[v][w] for (v, w), mass in plan.items()), rat(0)
        )
        assert value == bayes_risk_m(loss, q).value


def random_tree_loss(rng, k):
    """Path metric of a random tree with random positive rational weights."""
    edges = []
    for v in range(1, k):
        u = rng.randint(0, v - 1)
        edges.append((u, v, rat(rng.randint(1, 8), rng.randint(1, 4))))
    adjacency = [[] for _ in range(k)]
    for u, v, w in edges:
        adjacency[u].append((v, w))
        adjacency[v].append((u, w))
    rows = []
    for source in range(k):
        dist = [None] * k
        dist[source] = rat(0)
        stack = [source]
        while stack:
            node = stack.pop()
            for nxt, w in adjacency[node]:
                if dist[nxt] is None:
                    dist[nxt] = dist[node] + w
                    stack.append(nxt)
        rows.append(dist)
    return loss_matrix(rows)


def test_random_tree_metrics_certify_and_double_the_task_risk():
    rng = random.Random(23)
    for _ in range(12):
        k = rng.randint(3, 6)
        loss = random_tree_loss(rng, k)
        cert = certify_tree_metric(loss)
        assert cert.certified
        assert check_necessary_condition(loss).holds
        for _ in range(6):
            q = random_simplex_point(rng, k)
            assert verify_tree_hm_equality(loss, cert.certificate, q)
        q = random_simplex_point(rng, k)
        assert bayes_risk_m(loss, q).value == 2 * bayes_risk_l(loss, q).value
        # tree metrics satisfy the vertex disjunction, so the rank-one
        # mixture certificate applies as well
        plan = rm_equality_plan(loss, q)
        assert plan is not None
        assert bayes_risk_rm(loss, q).value == bayes_risk_l(loss, q).value


def test_dominant_label_identity_chain():
    q = as_simplex_point([rat(1, 2), rat(1, 4), rat(1, 4)])
    result = check_dominant_label_identity(CHAIN3, q)
    assert result.verified
    assert result.hm == rat(3, 2) == 2 * result.hl


def test_dominant_label_identity_point_mass_and_binary():
    assert check_dominant_label_identity(CHAIN3, basis_point(3, 1)).verified
    result = check_dominant_label_identity(
        zero_one(2), as_simplex_point([rat(1, 2), rat(1, 2)])
    )
    assert result.verified
    assert result.hm == 1 == 2 * result.hl


def test_dominant_label_identity_preconditions():
    with pytest.raises(PreconditionError):
        check_dominant_label_identity(squared(3), basis_point(3, 0))
    with pytest.raises(PreconditionError):
        check_dominant_label_identity(CHAIN3, as_simplex_point([rat(1, 3)] * 3))


def test_dominant_label_identity_random_distances():
    rng = random.Random(7)
    for _ in range(10):
        k = rng.randint(3, 5)
        loss = random_distance(rng, k)
        label = rng.randint(0, k - 1)
        rest = random_simplex_point(rng, k - 1, den=8)
        q = list(x / 2 for x in rest)
        q.insert(label, rat(1, 2))
        result = check_dominant_label_identity(loss, as_simplex_point(q))
        assert result.verified


def test_rm_simple_sufficient_zero_one():
    for k in (3, 4, 5):
        result = check_rm_simple_sufficient(zero_one(k))
        assert result.holds
        assert result.minima == (rat(1, k),) * k


def test_rm_simple_sufficient_squared_fails_via_zero_face():
    result = check_rm_simple_sufficient(squared(3))
    assert not result.holds
    assert result.minima[1] == 0
    witness = result.witnesses[1]
    assert witness[1] == 0
    # the named interior point of the zero face is also a witness
    from marginlab.polytopes import prediction_set

    q = as_simplex_point([rat(1, 2), 0, rat(1, 2)])
    assert prediction_set(squared(3), 1).contains(q)


def test_rm_simple_sufficient_binary():
    result = check_rm_simple_sufficient(zero_one(2))
    assert result.holds
    assert result.minima == (rat(1, 2), rat(1, 2))


def test_a1_zero_one_holds():
    assert check_assumption_a1(ZO3).holds


def test_a1_squared_fails_with_vertex_witness():
    result = check_assumption_a1(squared(3))
    assert result.status == "fails"
    vertex, source, failing = result.violation
    risks = [dot(row, vertex) for row in squared(3).entries]
    assert vertex[failing] != 0
    assert risks[failing] > min(risks)


def test_a1_undetermined_over_cap():
    result = check_assumption_a1(zero_one(6), cap=4)
    assert result.status == "undetermined"


def test_a1_holds_when_all_vertices_have_pair_form():
    # tree metrics: prediction-set vertices are pair midpoints or corners
    for loss in (CHAIN3, chain(4), star(4)):
        assert check_assumption_a1(loss).holds


def test_rm_simple_implies_a1_on_corpus():
    from marginlab.corpus import corpus_names

    for name in corpus_names():
        loss = corpus_loss(name)
        if check_rm_simple_sufficient(loss).holds:
            assert check_assumption_a1(loss).holds, name


def test_rm_equality_plan_certifies_task_risk():
    rng = random.Random(11)
    for loss in (ZO3, zero_one(4), CHAIN3):
        for _ in range(8):
            q = random_simplex_point(rng, loss.k)
            plan = rm_equality_plan(loss, q)
            assert plan is not None
            assert frobenius(loss.entries, plan) == bayes_risk_l(loss, q).value


def test_restricted_plans_never_beat_the_task_risk():
    # structural bound: any feasible plan of the restricted LP is capped by H_L
    rng = random.Random(13)
    for _ in range(10):
        k = rng.randint(2, 4)
        loss = random_loss(rng, k, symmetric=rng.random() < 0.5)
        q = random_simplex_point(rng, k)
        risk = bayes_risk_rm(loss, q)
        assert risk.value <= bayes_risk_l(loss, q).value


def test_embedding_identities_chain():
    result = check_embedding_identities(CHAIN3)
    assert result == {
        "self_scores_max_margin": True,
        "self_scores_restricted": True,
        "argmax_decoding": True,
        "grid_risk_max_margin": True,
        "grid_risk_restricted": True,
    }


def test_embedding_identities_zero_one():
    result = check_embedding_identities(ZO3)
    assert result["self_scores_max_margin"] is True
    # without a tree certificate the doubling identity is probed by LP and
    # refuted: at the barycenter H_M = 1 while 2 H_L = 4/3
    assert result["grid_risk_max_margin"] is False
    assert result["grid_risk_restricted"] is True
    bary = as_simplex_point([rat(1, 3)] * 3)
    assert bayes_risk_m(ZO3, bary).value == 1 != 2 * bayes_risk_l(ZO3, bary).value


def test_embedding_identities_squared():
    result = check_embedding_identities(squared(3))
    assert result["self_scores_max_margin"] == "not applicable"
    assert result["self_scores_restricted"] == "not applicable"
    assert result["argmax_decoding"] is True


def test_oracle_chain_clean_and_tree_equality():
    report = brute_force_oracle(CHAIN3, grid_n=6)
    assert report.points == 28
    assert report.discrepancies == ()


def test_oracle_zero_one_barycenter_breaks_doubling():
    # the oracle confirms the orderings; the tree/doubling identity is not
    # among its checks because the 0-1 loss is not tree-certified
    report = brute_force_oracle(ZO3, grid_n=6)
    assert report.discrepancies == ()
    bary = as_simplex_point([rat(1, 3)] * 3)
    assert bayes_risk_m(ZO3, bary).value != 2 * bayes_risk_l(ZO3, bary).value


def test_oracle_point_mass_grid():
    report = brute_force_oracle(ZO3, grid_n=1)
    assert report.points == 3
    assert report.discrepancies == ()


def test_oracle_respects_point_limit():
    from marginlab.errors import ResourceCapError

    with pytest.raises(ResourceCapError):
        brute_force_oracle(zero_one(6), grid_n=12, point_limit=100)


def test_report_chain():
    report = build_report(CHAIN3)
    assert report.verdicts["max_margin"].status == CONSISTENT
    assert report.verdicts["restricted_max_margin"].status == CONSISTENT
    assert report.verdicts["max_min_margin"].status == CONSISTENT
    assert "tree-metric-certified" in report.verdicts["max_margin"].justification


def test_report_zero_one():
    report = build_report(ZO3)
    assert report.verdicts["max_margin"].status == INCONSISTENT
    assert report.verdicts["restricted_max_margin"].status == CONSISTENT
    assert "prediction-set-positivity" in report.verdicts["restricted_max_margin"].justification


def test_report_permutation_hamming():
    report = build_report(permutation_hamming(3))
    assert report.verdicts["max_margin"].status == INCONSISTENT
    assert report.verdicts["max_min_margin"].status == CONSISTENT


def test_report_squared():
    report = build_report(squared(3))
    assert report.verdicts["max_margin"].status == INCONSISTENT
    assert "not-a-distance" in report.verdicts["max_margin"].justification
    assert report.verdicts["restricted_max_margin"].status == UNDETERMINED
    assert not report.rm_simple.holds


def test_report_hamming_two_bits():
    report = build_report(hamming_two_bits())
    assert report.verdicts["max_margin"].status == UNDETERMINED
    assert report.necessary.holds
    assert not report.tree.certified


def test_report_asymmetric_loss():
    rng = random.Random(17)
    loss = random_loss(rng, 3, symmetric=False)
    report = build_report(loss)
    assert report.necessary is None
    assert report.verdicts["max_margin"].status == UNDETERMINED
    assert report.verdicts["max_min_margin"].status == CONSISTENT


def test_report_internal_coherence_on_corpus():
    from marginlab.corpus import corpus_names

    for name in corpus_names():
        report = build_report(corpus_loss(name))
        # tree-certified implies the necessary condition holds
        if report.tree.certified and report.necessary is not None:
            assert report.necessary.holds, name
        # the triple condition holding implies the loss is a distance
        if report.necessary is not None and report.necessary.holds:
            assert report.distance.is_distance, name
        # positivity implies the vertex disjunction
        if report.rm_simple.holds:
            assert report.a1.holds, name
        # max-margin consistency transfers to the restricted surrogate
        if report.verdicts["max_margin"].status == CONSISTENT:
            assert report.verdicts["restricted_max_margin"].status == CONSISTENT, name
        # the max-min surrogate is always consistent
        assert report.verdicts["max_min_margin"].status == CONSISTENT, name


def test_dominant_label_identity_on_every_dominant_grid_point():
    # distance losses from the corpus, full grid for small k, sample beyond
    rng = random.Random(19)
    for name in ("zero-one-2", "zero-one-3", "zero-one-4", "chain-3", "chain-4",
                  "star-4", "hamming-2x2", "chain-5", "tree-7"):
        loss = corpus_loss(name)
        k = loss.k
        assert is_distance(loss).is_distance
        if k <= 4:
            points = [q for q in simplex_grid(k, 2 * k) if 2 * max(q) >= 1]
        else:
            points = []
            while len(points) < 40:
                q = random_simplex_point(rng, k, den=2 * k)
                if 2 * max(q) >= 1:
                    points.append(q)
        for q in points:
            assert check_dominant_label_identity(loss, q).verified, (name, q)


def test_tree_certified_epigraph_vertices_have_pair_form():
    from marginlab.polytopes import enumerate_vertices, epigraph_polytope

    for loss in (CHAIN3, chain(4), star(4)):
        for vertex in enumerate_vertices(epigraph_polytope(loss)):
            q, u = vertex[:-1], vertex[-1]
            support = [i for i, x in enumerate(q) if x != 0]
            assert len(support) in (1, 2)
            if len(support) == 1:
                assert u == 0
            else:
                y, z = support
                assert q[y] == q[z] == rat(1, 2)
                assert u == loss.entries[y][z] / 2
