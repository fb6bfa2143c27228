"""Consistency verdicts for the margin surrogates, with machine-checkable
certificates or counterexamples.

The checks implemented here:

* necessary condition for max-margin consistency: the loss must be a
  distance and every output triple must align through some pivot output
  (three exact additive identities);
* sufficiency by tree structure: when the loss is the path metric of a
  positively weighted spanning tree, the max-margin Bayes risk equals
  twice the task Bayes risk everywhere, certified pointwise by an
  explicit transport plan against an explicit dual vector;
* partial consistency under a dominant label (mass at least 1/2), with
  the explicit dominant-label plan as witness;
* restricted-max-margin sufficiency, either through positivity of the
  optimal label's probability over its prediction set, or through the
  vertex disjunction (every prediction-set vertex q satisfies, for every
  output y, q in the prediction set of y or q_y = 0);
* embedding identities tying surrogate values at embedded score vectors
  back to the loss itself;
* a brute-force grid oracle recomputing everything by independent means.

Verdicts are three-valued.  "Undetermined" is an honest outcome: the
necessary condition is not known to be sufficient, so a loss passing it
without a tree certificate stays open for max-margin.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .errors import PreconditionError, ResourceCapError, StructuralError
from .linalg import dot
from .linprog import EQ, OPTIMAL, make_lp, solve_lp
from .losses import (
    LossMatrix,
    argmax_decode,
    bayes_predictor,
    basis_point,
    eval_max_margin,
    eval_restricted_max_margin,
    neg_row,
    pair_midpoint,
)
from .polytopes import (
    DEFAULT_OUTPUT_CAP,
    prediction_set,
    simplex_grid,
    transport_plan_vertices,
)
from .rationals import HALF, ONE, ZERO, Rational, rat
from .risks import (
    bayes_risk_l,
    bayes_risk_m,
    bayes_risk_m_dual,
    bayes_risk_rm,
    dominant_label_plan,
    frobenius,
    in_restriction_cone,
    in_transport_polytope,
)

CONSISTENT = "consistent"
INCONSISTENT = "inconsistent"
UNDETERMINED = "undetermined"

NOT_APPLICABLE = "not applicable"


# ---------------------------------------------------------------------------
# Distance and the triple-alignment necessary condition


@dataclass(frozen=True)
class DistanceResult:
    is_distance: bool
    symmetric: bool
    violation: tuple | None = None  # ("asymmetric", (y, z)) or
    #                                 ("triangle", (y, z, y2), lhs, rhs)


def is_distance(loss: LossMatrix) -> DistanceResult:
    """Metric axioms: symmetry and the triangle inequality.

    Positivity off the diagonal is a loss-matrix invariant, so only the
    remaining two axioms are tested; the first violation is returned.
    """
    e = loss.entries
    k = loss.k
    for y in range(k):
        for z in range(y + 1, k):
            if e[y][z] != e[z][y]:
                return DistanceResult(False, False, ("asymmetric", (y, z)))
    for y in range(k):
        for y2 in range(k):
            if y2 == y:
                continue
            for z in range(k):
                if z == y or z == y2:
                    continue
                if e[y][y2] > e[y][z] + e[z][y2]:
                    return DistanceResult(
                        False, True,
                        ("triangle", (y, z, y2), e[y][y2], e[y][z] + e[z][y2]),
                    )
    return DistanceResult(True, True)


@dataclass(frozen=True)
class TripleFailure:
    """For a candidate pivot z, the first additive identity that breaks."""

    z: int
    identity: int  # 0, 1 or 2 in the order documented below
    lhs: Rational
    rhs: Rational


@dataclass(frozen=True)
class NecessaryConditionResult:
    holds: bool
    vacuous: bool
    is_distance: bool
    violating_triple: tuple | None = None
    z_failures: tuple = ()


def check_necessary_condition(loss: LossMatrix) -> NecessaryConditionResult:
    """Triple alignment: every output triple needs a pivot z satisfying

        L(y1, y2) = L(y1, z) + L(z, y2)            (identity 0)
        L(y1, y3) = L(y1, z) + L(z, y3)            (identity 1)
        L(y2, y3) = L(y2, z) + L(z, y3)            (identity 2)

    Symmetric losses only.  For two outputs the condition is vacuous.
    The first triple admitting no pivot is reported with the per-pivot
    failing identity.
    """
    if not loss.symmetric:
        raise PreconditionError("the necessary condition applies to symmetric losses")
    dist = is_distance(loss)
    if loss.k <= 2:
        return NecessaryConditionResult(True, True, dist.is_distance)
    e = loss.entries
    for y1, y2, y3 in combinations(range(loss.k), 3):
        failures = []
        satisfied = False
        for z in range(loss.k):
            triple = (
                (e[y1][y2], e[y1][z] + e[z][y2]),
                (e[y1][y3], e[y1][z] + e[z][y3]),
                (e[y2][y3], e[y2][z] + e[z][y3]),
            )
            broken = next((i for i, (l, r) in enumerate(triple) if l != r), None)
            if broken is None:
                satisfied = True
                break
            failures.append(TripleFailure(z, broken, *triple[broken]))
        if not satisfied:
            return NecessaryConditionResult(
                False, False, dist.is_distance,
                violating_triple=(y1, y2, y3), z_failures=tuple(failures),
            )
    return NecessaryConditionResult(True, False, dist.is_distance)


# ---------------------------------------------------------------------------
# Tree-metric certification


@dataclass(frozen=True)
class TreeCertificate:
    """A positively weighted spanning tree whose path sums reproduce the loss."""

    edges: tuple  # ((u, v, weight), ...) with u < v, 0-based


@dataclass(frozen=True)
class TreeCertification:
    certified: bool
    certificate: TreeCertificate | None
    reason: str


def tree_path_distances(certificate: TreeCertificate, k: int):
    """All-pairs path-sum matrix of a spanning tree on k nodes."""
    adjacency: list[list] = [[] for _ in range(k)]
    for u, v, w in certificate.edges:
        adjacency[u].append((v, w))
        adjacency[v].append((u, w))
    rows = []
    for source in range(k):
        dist = [None] * k
        dist[source] = ZERO
        stack = [source]
        while stack:
            node = stack.pop()
            for nxt, w in adjacency[node]:
                if dist[nxt] is None:
                    dist[nxt] = dist[node] + w
                    stack.append(nxt)
        if any(d is None for d in dist):
            raise StructuralError("certificate edges do not span all outputs")
        rows.append(tuple(dist))
    return tuple(rows)


def certify_tree_metric(loss: LossMatrix) -> TreeCertification:
    """Try to realize the loss as the path metric of a spanning tree.

    A minimum spanning tree of the complete loss-weighted graph is built
    (least-index tie-breaking) and its path sums are compared with the
    loss.  A positive answer is therefore sound by construction; a
    negative answer means this particular tree fails, which under edge
    ties is not a proof that no realizing tree exists.
    """
    dist = is_distance(loss)
    if not dist.is_distance:
        return TreeCertification(False, None, "not a distance")
    k = loss.k
    edges = sorted(
        (loss.entries[u][v], u, v) for u in range(k) for v in range(u + 1, k)
    )
    parent = list(range(k))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    chosen = []
    for w, u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            chosen.append((u, v, w))
            if len(chosen) == k - 1:
                break
    certificate = TreeCertificate(tuple(chosen))
    paths = tree_path_distances(certificate, k)
    for u in range(k):
        for v in range(k):
            if paths[u][v] != loss.entries[u][v]:
                return TreeCertification(
                    False, None,
                    f"spanning-tree path sum differs from the loss at ({u + 1},{v + 1})",
                )
    return TreeCertification(True, certificate, "spanning tree reproduces the loss")


def _tree_branches(certificate: TreeCertificate, k: int, root: int):
    """Connected components of the tree with ``root`` removed, in
    least-neighbor order."""
    adjacency: list[list] = [[] for _ in range(k)]
    for u, v, _ in certificate.edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    branches = []
    for neighbor in sorted(adjacency[root]):
        component = []
        stack = [neighbor]
        seen = {root, neighbor}
        while stack:
            node = stack.pop()
            component.append(node)
            for nxt in adjacency[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        branches.append(tuple(sorted(component)))
    return tuple(branches)


def tree_hm_plan(loss: LossMatrix, certificate: TreeCertificate, q):
    """Sparse transport plan with marginals q achieving <L, Q> = 2 H_L(q)
    for a tree-realized loss.

    Every unit of mass is shipped across the Bayes-optimal node, so each
    pair in the support prices additively through it.  Construction: lay
    the branches of the optimal node out contiguously on a circle and
    transport by rotating half a turn; a branch never meets itself
    because the Bayes-optimal node of a tree metric leaves at most half
    the mass on each branch.
    """
    k = loss.k
    center = bayes_risk_l(loss, q).witness
    branches = _tree_branches(certificate, k, center)
    for branch in branches:
        mass = sum((q[v] for v in branch), ZERO)
        if 2 * mass > 1:
            raise PreconditionError(
                "a branch outweighs half the mass; the center is not Bayes-optimal"
            )
    order = [center] + [v for branch in branches for v in branch]
    starts = []
    position = ZERO
    for node in order:
        starts.append(position)
        position += q[node]
    supply = [
        (starts[i], starts[i] + q[node], node)
        for i, node in enumerate(order)
        if q[node] > 0
    ]
    demand = []
    for a, b, node in supply:
        a2, b2 = a + HALF, b + HALF
        if b2 <= 1:
            demand.append((a2, b2, node))
        elif a2 >= 1:
            demand.append((a2 - 1, b2 - 1, node))
        else:
            demand.append((a2, rat(1), node))
            demand.append((ZERO, b2 - 1, node))
    plan: dict = {}
    for a, b, w in demand:
        for s, e, v in supply:
            if e <= a:
                continue
            if s >= b:
                break
            overlap = min(e, b) - max(s, a)
            if overlap > 0:
                key = (v, w)
                plan[key] = plan.get(key, ZERO) + overlap
    return plan


def verify_tree_hm_equality(loss: LossMatrix, certificate: TreeCertificate, q) -> bool:
    """Certified check that the max-margin Bayes risk equals 2 H_L at q.

    The plan from ``tree_hm_plan`` bounds the risk from below; the dual
    vector 2 L_y for Bayes-optimal y is feasible for any distance and
    bounds it from above by the same number.
    """
    plan = tree_hm_plan(loss, certificate, q)
    row_sums: dict = {}
    col_sums: dict = {}
    cost = ZERO
    for (v, w), mass in plan.items():
        row_sums[v] = row_sums.get(v, ZERO) + mass
        col_sums[w] = col_sums.get(w, ZERO) + mass
        if mass:
            cost += mass * loss.entries[v][w]
    k = loss.k
    for i in range(k):
        if row_sums.get(i, ZERO) != q[i] or col_sums.get(i, ZERO) != q[i]:
            return False
    return cost == 2 * bayes_risk_l(loss, q).value


# ---------------------------------------------------------------------------
# Dominant-label partial consistency


@dataclass(frozen=True)
class DominantLabelResult:
    verified: bool
    label: int
    hl: Rational
    hm: Rational
    plan: tuple
    reason: str = ""


def check_dominant_label_identity(loss: LossMatrix, q) -> DominantLabelResult:
    """Verify H_M(q) = 2 H_L(q) at a dominant-label point of a distance loss.

    The explicit plan putting q on the dominant row and column achieves
    2 L_y . q; the dual LP value confirms H_M <= 2 H_L; together they pin
    the equality.  Also checks that the dominant label is Bayes-optimal.
    """
    dist = is_distance(loss)
    if not dist.is_distance:
        raise PreconditionError("dominant-label identity requires a distance loss")
    top = max(q)
    if 2 * top < 1:
        raise PreconditionError("no dominant label: every probability is below 1/2")
    label = next(i for i, x in enumerate(q) if x == top)

    plan = dominant_label_plan(q, label)
    hl = bayes_risk_l(loss, q).value
    target = 2 * dot(loss.row(label), q)
    checks = []
    if label not in bayes_predictor(loss, q):
        checks.append("dominant label is not Bayes-optimal")
    if not in_transport_polytope(plan, q):
        checks.append("witness plan leaves the transport polytope")
    if frobenius(loss.entries, plan) != target:
        checks.append("witness plan misses the target value")
    if target != 2 * hl:
        checks.append("dominant row is not the Bayes risk")
    hm = bayes_risk_m_dual(loss, q).value
    if hm > 2 * hl:
        checks.append("dual value exceeds twice the task risk")
    if hm != 2 * hl:
        checks.append("dual value differs from twice the task risk")
    return DominantLabelResult(
        verified=not checks,
        label=label,
        hl=hl,
        hm=hm,
        plan=plan,
        reason="; ".join(checks),
    )


# ---------------------------------------------------------------------------
# Restricted-max-margin sufficient conditions


@dataclass(frozen=True)
class RmSimpleResult:
    holds: bool
    minima: tuple       # per-output exact minimum of q_y over the prediction set
    witnesses: tuple    # per-output minimizing point


def check_rm_simple_sufficient(loss: LossMatrix) -> RmSimpleResult:
    """Positivity condition: min of q_y over the prediction set of y, per y.

    The restricted surrogate is consistent when every minimum is
    strictly positive.
    """
    minima = []
    witnesses = []
    for y in range(loss.k):
        pred = prediction_set(loss, y)
        objective = [-ONE if z == y else ZERO for z in range(loss.k)]
        lp = make_lp(objective, pred.hrep.rows, pred.hrep.rhs, pred.hrep.kinds,
                     nonneg=[False] * loss.k)
        sol = solve_lp(lp)
        if sol.status != OPTIMAL:
            raise PreconditionError("prediction-set minimization failed: " + sol.status)
        minima.append(-sol.optimum)
        witnesses.append(sol.point)
    return RmSimpleResult(
        holds=all(m > 0 for m in minima),
        minima=tuple(minima),
        witnesses=tuple(witnesses),
    )


@dataclass(frozen=True)
class A1Result:
    status: str  # "holds" | "fails" | "undetermined"
    violation: tuple | None = None  # (vertex, source_output, failing_output)
    reason: str = ""

    @property
    def holds(self) -> bool:
        return self.status == "holds"


def check_assumption_a1(loss: LossMatrix, cap: int = DEFAULT_OUTPUT_CAP) -> A1Result:
    """Vertex disjunction over all prediction sets.

    Every enumerated vertex q of every prediction set must satisfy, for
    every output y, membership q in the prediction set of y or q_y = 0.
    Exceeding the enumeration cap downgrades the answer to undetermined.
    """
    k = loss.k
    if k > cap:
        return A1Result("undetermined", reason=f"k={k} exceeds the enumeration cap {cap}")
    for source in range(k):
        for vertex in prediction_set(loss, source).vertices(cap=cap + 1):
            risks = [dot(row, vertex) for row in loss.entries]
            best = min(risks)
            for y in range(k):
                if vertex[y] != 0 and risks[y] != best:
                    return A1Result("fails", violation=(vertex, source, y))
    return A1Result("holds")


def rm_equality_plan(loss: LossMatrix, q, cap: int = DEFAULT_OUTPUT_CAP):
    """Feasible plan in U(q,q) and the cone C_L with value H_L(q), built by
    decomposing q over the vertices of the Bayes-optimal prediction set.

    Under the vertex disjunction each vertex v contributes the rank-one
    block v v^T, which stays in the cone; mixing them with the
    decomposition weights hits the task Bayes risk exactly.  Returns None
    when the decomposition LP is infeasible (never, for a true prediction
    set) or when the mixed plan fails its own certificate.
    """
    k = loss.k
    y_star = bayes_risk_l(loss, q).witness
    vertices = prediction_set(loss, y_star).vertices(cap=cap + 1)
    n = len(vertices)
    rows = [[vertices[i][j] for i in range(n)] for j in range(k)]
    rows.append([ONE] * n)
    rhs = list(q) + [ONE]
    sol = solve_lp(make_lp([ZERO] * n, rows, rhs, [EQ] * (k + 1)))
    if sol.status != OPTIMAL:
        return None
    plan = [[ZERO] * k for _ in range(k)]
    for weight, vertex in zip(sol.point, vertices):
        if weight:
            for i in range(k):
                if vertex[i]:
                    row = plan[i]
                    wi = weight * vertex[i]
                    for j in range(k):
                        if vertex[j]:
                            row[j] += wi * vertex[j]
    plan = tuple(tuple(row) for row in plan)
    if not in_transport_polytope(plan, q):
        return None
    if not in_restriction_cone(plan, loss):
        return None
    if frobenius(loss.entries, plan) != bayes_risk_l(loss, q).value:
        return None
    return plan


# ---------------------------------------------------------------------------
# Embedding identities


def check_embedding_identities(
    loss: LossMatrix,
    tree: TreeCertification | None = None,
    a1: A1Result | None = None,
    grid_n: int | None = None,
    rm_grid_limit: int = 350,
    lp_spot_checks: int = 8,
    seed: int = 0,
    cap: int = DEFAULT_OUTPUT_CAP,
) -> dict:
    """Exact embedding identities, each gated on its own hypothesis.

    Returns a map from identity name to True/False or "not applicable":

    * ``self_scores_max_margin``: S_M(-L_y, z) = 2 L(y, z) (distance losses);
    * ``self_scores_restricted``: S_RM(-L_z, y) = L(y, z) (vertex disjunction);
    * ``argmax_decoding``: decoding -L_y returns y (always applicable);
    * ``grid_risk_max_margin``: H_M = 2 H_L on the grid (tree-certified);
    * ``grid_risk_restricted``: H_RM = H_L on the grid (vertex disjunction).
    """
    k = loss.k
    dist = is_distance(loss)
    if tree is None:
        tree = certify_tree_metric(loss)
    if a1 is None:
        a1 = check_assumption_a1(loss, cap=cap)
    n = grid_n if grid_n is not None else 2 * k
    results: dict = {}

    if dist.is_distance:
        results["self_scores_max_margin"] = all(
            eval_max_margin(loss, neg_row(loss, y), z) == 2 * loss.entries[y][z]
            for y in range(k) for z in range(k)
        )
    else:
        results["self_scores_max_margin"] = NOT_APPLICABLE

    if a1.holds:
        results["self_scores_restricted"] = all(
            eval_restricted_max_margin(loss, neg_row(loss, z), y) == loss.entries[y][z]
            for y in range(k) for z in range(k)
        )
    else:
        results["self_scores_restricted"] = NOT_APPLICABLE

    results["argmax_decoding"] = all(
        argmax_decode(neg_row(loss, y)) == y for y in range(k)
    )

    if tree.certified:
        ok = all(
            verify_tree_hm_equality(loss, tree.certificate, q)
            for q in simplex_grid(k, n)
        )
        if ok:
            rng = random.Random(seed)
            spots = [_random_grid_point(rng, k, n) for _ in range(lp_spot_checks)]
            ok = all(
                bayes_risk_m(loss, q).value == 2 * bayes_risk_l(loss, q).value
                for q in spots
            )
        results["grid_risk_max_margin"] = ok
    elif dist.is_distance:
        # No certificate, so probe the doubling identity by LP on the
        # structured points plus a seeded sample; a single exact mismatch
        # (the 0-1 barycenter, say) refutes the scaled embedding.
        rng = random.Random(seed)
        points = _structured_points(k)
        points += [_random_grid_point(rng, k, n) for _ in range(40)]
        results["grid_risk_max_margin"] = all(
            bayes_risk_m(loss, q).value == 2 * bayes_risk_l(loss, q).value
            for q in points
        )
    else:
        results["grid_risk_max_margin"] = NOT_APPLICABLE

    if a1.holds:
        points = _sampled_grid(k, n, rm_grid_limit, seed)
        ok = all(rm_equality_plan(loss, q, cap=cap) is not None for q in points)
        if ok:
            rng = random.Random(seed + 1)
            spots = [_random_grid_point(rng, k, n) for _ in range(lp_spot_checks)]
            ok = all(
                bayes_risk_rm(loss, q).value == bayes_risk_l(loss, q).value
                for q in spots
            )
        results["grid_risk_restricted"] = ok
    else:
        results["grid_risk_restricted"] = NOT_APPLICABLE
    return results


def _random_grid_point(rng: random.Random, k: int, n: int):
    cuts = sorted(rng.randint(0, n) for _ in range(k - 1))
    parts = [cuts[0]] + [b - a for a, b in zip(cuts, cuts[1:])] + [n - cuts[-1]]
    return tuple(rat(m, n) for m in parts)


def _structured_points(k: int):
    points = [basis_point(k, y) for y in range(k)]
    points += [pair_midpoint(k, y, z) for y in range(k) for z in range(y + 1, k)]
    points.append(tuple(rat(1, k) for _ in range(k)))
    return points


def _sampled_grid(k: int, n: int, limit: int, seed: int):
    """Deterministic grid sample: the full grid when small enough, otherwise
    structured points plus a seeded random selection up to the limit."""
    total = 1
    for i in range(1, k):
        total = total * (n + i) // i
    if total <= limit:
        return list(simplex_grid(k, n))
    points = {p: True for p in _structured_points(k)}
    rng = random.Random(seed)
    while len(points) < limit:
        points[_random_grid_point(rng, k, n)] = True
    return list(points)


# ---------------------------------------------------------------------------
# Brute-force oracle


@dataclass(frozen=True)
class OracleRecord:
    q: tuple
    check: str
    details: str


@dataclass(frozen=True)
class OracleReport:
    grid_n: int
    points: int
    discrepancies: tuple


def brute_force_oracle(
    loss: LossMatrix,
    grid_n: int | None = None,
    point_limit: int = 5000,
    cap: int = DEFAULT_OUTPUT_CAP,
) -> OracleReport:
    """Sweep the rational grid and recompute every risk by independent means.

    For up to four positive marginals the max-margin risk is recomputed
    by exhausting the vertices of the transportation polytope; beyond
    that the LP is used.  Orderings, conditional equalities and the
    dominant-label identity are confirmed at every point; any exact
    mismatch is returned as a counterexample record.
    """
    k = loss.k
    n = grid_n if grid_n is not None else 2 * k
    if n < 1:
        raise PreconditionError("grid denominator must be at least 1")
    total = 1
    for i in range(1, k):
        total = total * (n + i) // i
    if total > point_limit:
        raise ResourceCapError(
            f"grid of {total} points exceeds the oracle limit {point_limit}"
        )
    dist = is_distance(loss)
    tree = certify_tree_metric(loss)
    a1 = check_assumption_a1(loss, cap=cap)
    records = []
    points = 0
    for q in simplex_grid(k, n):
        points += 1
        hl = min(dot(row, q) for row in loss.entries)
        support = sum(1 for x in q if x > 0)
        if support <= 4:
            hm = max(
                (frobenius(loss.entries, plan) for plan in transport_plan_vertices(q)),
                default=ZERO,
            )
        else:
            hm = bayes_risk_m(loss, q).value
        hrm = bayes_risk_rm(loss, q).value
        if not (0 <= hrm <= hl <= hm):
            records.append(OracleRecord(q, "ordering", f"hrm={hrm} hl={hl} hm={hm}"))
        if dist.is_distance and hm > 2 * hl:
            records.append(OracleRecord(q, "distance-upper-bound", f"hm={hm} hl={hl}"))
        if tree.certified and hm != 2 * hl:
            records.append(OracleRecord(q, "tree-equality", f"hm={hm} hl={hl}"))
        if a1.holds and hrm != hl:
            records.append(OracleRecord(q, "restricted-equality", f"hrm={hrm} hl={hl}"))
        if dist.is_distance and 2 * max(q) >= 1 and hm != 2 * hl:
            records.append(OracleRecord(q, "dominant-equality", f"hm={hm} hl={hl}"))
    return OracleReport(grid_n=n, points=points, discrepancies=tuple(records))


# ---------------------------------------------------------------------------
# Report assembly


@dataclass(frozen=True)
class Verdict:
    status: str
    justification: tuple


@dataclass(frozen=True)
class ReportConfig:
    output_cap: int = DEFAULT_OUTPUT_CAP
    grid_n: int | None = None
    seed: int = 0
    rm_grid_limit: int = 350
    dominant_limit: int = 300
    lp_spot_checks: int = 8


@dataclass(frozen=True)
class DominantLabelSummary:
    applicable: bool
    verified: bool
    points_checked: int
    failure: DominantLabelResult | None = None


@dataclass(frozen=True)
class ConsistencyReport:
    k: int
    symmetric: bool
    distance: DistanceResult
    necessary: NecessaryConditionResult | None
    tree: TreeCertification
    rm_simple: RmSimpleResult
    a1: A1Result
    dominant: DominantLabelSummary
    embedding: dict
    verdicts: dict


def _dominant_sample(k: int, n: int, limit: int):
    points = _structured_points(k)[: k + k * (k - 1) // 2]  # masses and midpoints
    seen = {p: True for p in points}
    for q in simplex_grid(k, n):
        if len(seen) >= limit:
            break
        if 2 * max(q) >= 1:
            seen[q] = True
    return list(seen)


def build_report(loss: LossMatrix, config: ReportConfig = ReportConfig()) -> ConsistencyReport:
    """Run every applicable check and compose the three verdicts.

    Max-margin: inconsistent when the (symmetric, k > 2) necessary
    condition fails, consistent when tree-certified, otherwise
    undetermined.  Restricted: consistent when max-margin is, or under
    either sufficient condition, otherwise undetermined.  Max-min:
    always consistent.
    """
    k = loss.k
    n = config.grid_n if config.grid_n is not None else 2 * k
    dist = is_distance(loss)
    symmetric = dist.symmetric
    necessary = check_necessary_condition(loss) if symmetric else None
    tree = certify_tree_metric(loss)
    rm_simple = check_rm_simple_sufficient(loss)
    a1 = check_assumption_a1(loss, cap=config.output_cap)

    if dist.is_distance:
        checked = 0
        failure = None
        for q in _dominant_sample(k, n, config.dominant_limit):
            result = check_dominant_label_identity(loss, q)
            checked += 1
            if not result.verified:
                failure = result
                break
        dominant = DominantLabelSummary(True, failure is None, checked, failure)
    else:
        dominant = DominantLabelSummary(False, False, 0)

    embedding = check_embedding_identities(
        loss,
        tree=tree,
        a1=a1,
        grid_n=n,
        rm_grid_limit=config.rm_grid_limit,
        lp_spot_checks=config.lp_spot_checks,
        seed=config.seed,
        cap=config.output_cap,
    )

    reasons = []
    if not symmetric:
        max_margin = Verdict(UNDETERMINED, ("asymmetric-loss-outside-max-margin-analysis",))
    elif k > 2 and not (dist.is_distance and necessary.holds):
        if not dist.is_distance:
            reasons.append("not-a-distance")
        if not necessary.holds:
            reasons.append("triple-alignment-violated")
        max_margin = Verdict(INCONSISTENT, tuple(reasons))
    elif tree.certified:
        max_margin = Verdict(CONSISTENT, ("tree-metric-certified",))
    else:
        max_margin = Verdict(
            UNDETERMINED,
            ("necessary-condition-holds", "sufficiency-question-open"),
        )

    if max_margin.status == CONSISTENT:
        restricted = Verdict(CONSISTENT, ("max-margin-consistency-transfers",))
    elif rm_simple.holds:
        restricted = Verdict(CONSISTENT, ("prediction-set-positivity",))
    elif a1.holds:
        restricted = Verdict(CONSISTENT, ("vertex-disjunction-holds",))
    else:
        reasons = ["no-sufficient-condition-applies"]
        if a1.status == "undetermined":
            reasons.append("vertex-disjunction-undetermined")
        restricted = Verdict(UNDETERMINED, tuple(reasons))

    verdicts = {
        "max_margin": max_margin,
        "restricted_max_margin": restricted,
        "max_min_margin": Verdict(CONSISTENT, ("embeds-the-task-loss-always",)),
    }
    return ConsistencyReport(
        k=k,
        symmetric=symmetric,
        distance=dist,
        necessary=necessary,
        tree=tree,
        rm_simple=rm_simple,
        a1=a1,
        dominant=dominant,
        embedding=embedding,
        verdicts=verdicts,
    )
