"""Bayes risks of the margin surrogates as exact linear programs.

For a conditional distribution q the task Bayes risk is the row minimum
H_L(q) = min_y L_y . q.  The surrogate Bayes risks are transportation
LPs over plans Q with both marginals q:

    H_M(q)  = max <L, Q>  over  U(q, q),
    H_RM(q) = max <L, Q>  over  U(q, q) intersected with the cone C_L,
    H_MM(q) = H_L(q),

where row y of a plan in C_L must make y look optimal:
(L_y - L_z) . Q_y <= 0 for every z.  For symmetric losses H_M also has
a dual form min a . q over { a : (a_y + a_z)/2 >= L(y, z) } and the
closed-form conjugate (-H_M)*(v) = max_{y,z} L(y,z) + (v_y + v_z)/2.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import losses as losses_mod
from .errors import PreconditionError, StructuralError
from .linalg import dot
from .linprog import EQ, GE, LE, OPTIMAL, make_lp, solve_lp
from .losses import LossMatrix, bayes_predictor, conjugate_neg_hl, neg_row
from .rationals import HALF, ONE, ZERO, Rational


@dataclass(frozen=True)
class RiskValue:
    """An exact risk value along with the object achieving it."""

    value: Rational
    witness: object = None


def frobenius(a, b) -> Rational:
    total = ZERO
    for row_a, row_b in zip(a, b):
        for x, y in zip(row_a, row_b):
            if x and y:
                total += x * y
    return total


def in_transport_polytope(plan, q) -> bool:
    """Membership in U(q, q): nonnegative with both marginals equal to q."""
    k = len(q)
    if len(plan) != k or any(len(row) != k for row in plan):
        return False
    for row in plan:
        if any(x < 0 for x in row):
            return False
    for i in range(k):
        if sum(plan[i], ZERO) != q[i]:
            return False
    for j in range(k):
        if sum((plan[i][j] for i in range(k)), ZERO) != q[j]:
            return False
    return True


def in_restriction_cone(plan, loss: LossMatrix) -> bool:
    """Membership in C_L: row y certifies y-optimality, (L_y - L_z) . Q_y <= 0."""
    k = loss.k
    for y in range(k):
        row_plan = plan[y]
        row_y = loss.row(y)
        for z in range(k):
            row_z = loss.row(z)
            if dot([row_y[i] - row_z[i] for i in range(k)], row_plan) > 0:
                return False
    return True


def _check_simplex_dims(loss: LossMatrix, q) -> None:
    if len(q) != loss.k:
        raise StructuralError(f"probability vector length {len(q)} != k={loss.k}")


def bayes_risk_l(loss: LossMatrix, q) -> RiskValue:
    """Task Bayes risk: exact row minimum, witnessed by the least optimal output."""
    _check_simplex_dims(loss, q)
    risks = [dot(row, q) for row in loss.entries]
    best = min(risks)
    return RiskValue(best, witness=risks.index(best))


def _marginal_rows(k: int, q):
    rows = []
    rhs = []
    for i in range(k):
        rows.append([ONE if e // k == i else ZERO for e in range(k * k)])
        rhs.append(q[i])
    for j in range(k):
        rows.append([ONE if e % k == j else ZERO for e in range(k * k)])
        rhs.append(q[j])
    return rows, rhs


def _unflatten(values, k: int):
    return tuple(tuple(values[i * k + j] for j in range(k)) for i in range(k))


def bayes_risk_m(loss: LossMatrix, q) -> RiskValue:
    """Max-margin Bayes risk: maximal-cost transport plan with marginals q."""
    _check_simplex_dims(loss, q)
    k = loss.k
    rows, rhs = _marginal_rows(k, q)
    objective = [loss.entries[e // k][e % k] for e in range(k * k)]
    sol = solve_lp(make_lp(objective, rows, rhs, [EQ] * (2 * k)))
    if sol.status != OPTIMAL:
        raise PreconditionError("transport LP failed: " + sol.status)
    plan = _unflatten(sol.point, k)
    return RiskValue(sol.optimum, witness=plan)


def bayes_risk_m_dual(loss: LossMatrix, q) -> RiskValue:
    """Dual form of the max-margin Bayes risk; requires a symmetric loss."""
    _check_simplex_dims(loss, q)
    if not loss.symmetric:
        raise PreconditionError("the dual form requires a symmetric loss matrix")
    k = loss.k
    rows = []
    rhs = []
    for y in range(k):
        for z in range(y, k):
            row = [ZERO] * k
            row[y] += HALF
            row[z] += HALF
            rows.append(row)
            rhs.append(loss.entries[y][z])
    objective = [-x for x in q]
    lp = make_lp(objective, rows, rhs, [GE] * len(rows), nonneg=[False] * k)
    sol = solve_lp(lp)
    if sol.status != OPTIMAL:
        raise PreconditionError("dual LP failed: " + sol.status)
    return RiskValue(-sol.optimum, witness=sol.point)


def bayes_risk_rm(loss: LossMatrix, q) -> RiskValue:
    """Restricted-max-margin Bayes risk: transport restricted to the cone C_L."""
    _check_simplex_dims(loss, q)
    k = loss.k
    rows, rhs = _marginal_rows(k, q)
    kinds = [EQ] * (2 * k)
    for y in range(k):
        row_y = loss.row(y)
        for z in range(k):
            if z == y:
                continue
            row_z = loss.row(z)
            row = [ZERO] * (k * k)
            for j in range(k):
                row[y * k + j] = row_y[j] - row_z[j]
            rows.append(row)
            rhs.append(ZERO)
            kinds.append(LE)
    objective = [loss.entries[e // k][e % k] for e in range(k * k)]
    sol = solve_lp(make_lp(objective, rows, rhs, kinds))
    if sol.status != OPTIMAL:
        raise PreconditionError("restricted transport LP failed: " + sol.status)
    plan = _unflatten(sol.point, k)
    return RiskValue(sol.optimum, witness=plan)


def bayes_risk_mm(loss: LossMatrix, q, cross_check: bool = False) -> RiskValue:
    """Max-min-margin Bayes risk, identically the task Bayes risk.

    With ``cross_check`` the value is re-derived through the surrogate
    itself: the conditional risk of the embedded score vector -L_y is
    evaluated by LP for every Bayes-optimal y and must reproduce H_L(q).
    """
    base = bayes_risk_l(loss, q)
    if cross_check:
        for y in bayes_predictor(loss, q):
            value = conjugate_neg_hl(loss, neg_row(loss, y)) + dot(loss.row(y), q)
            if value != base.value:
                raise PreconditionError(
                    "max-min-margin cross-check failed at output %d" % (y + 1)
                )
    return base


def verify_mm_minimizer(loss: LossMatrix, q, y: int) -> bool:
    """Check that the embedded scores -L_y minimize the max-min conditional risk.

    Requires y to be Bayes-optimal for q; then the conditional risk of
    -L_y must equal H_L(q) exactly.
    """
    _check_simplex_dims(loss, q)
    if y not in bayes_predictor(loss, q):
        raise PreconditionError(f"output {y + 1} is not Bayes-optimal for q")
    risk = conjugate_neg_hl(loss, neg_row(loss, y)) + dot(loss.row(y), q)
    return risk == bayes_risk_l(loss, q).value


def conjugate_neg_hm(loss: LossMatrix, v):
    """(-H_M)*(v) by direct enumeration over output pairs (diagonal included).

    Returns the exact value and every maximizing unordered pair.
    """
    if not loss.symmetric:
        raise PreconditionError("the conjugate form requires a symmetric loss matrix")
    if len(v) != loss.k:
        raise StructuralError("score vector length mismatch")
    best = None
    pairs = []
    for y in range(loss.k):
        for z in range(y, loss.k):
            value = loss.entries[y][z] + (v[y] + v[z]) * HALF
            if best is None or value > best:
                best = value
                pairs = [(y, z)]
            elif value == best:
                pairs.append((y, z))
    return best, tuple(pairs)


def subgradient_point_neg_hm(loss: LossMatrix, v):
    """Unique-subgradient point of (-H_M)* at v: the pair midpoint
    (e_y + e_z)/2 when one pair maximizes, None otherwise (set-valued)."""
    _, pairs = conjugate_neg_hm(loss, v)
    if len(pairs) != 1:
        return None
    y, z = pairs[0]
    return losses_mod.pair_midpoint(loss.k, y, z)


def dominant_label_plan(q, y: int):
    """Transport plan concentrating on the dominant label y (q_y >= 1/2):
    row y and column y carry q off the diagonal, entry (y, y) is 2 q_y - 1."""
    k = len(q)
    if not 0 <= y < k:
        raise StructuralError(f"output index {y} out of range")
    if 2 * q[y] < 1:
        raise PreconditionError("dominant-label plan needs q_y >= 1/2")
    plan = [[ZERO] * k for _ in range(k)]
    for j in range(k):
        if j != y:
            plan[y][j] = q[j]
            plan[j][y] = q[j]
    plan[y][y] = 2 * q[y] - 1
    return tuple(tuple(row) for row in plan)
