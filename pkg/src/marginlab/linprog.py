"""Exact-rational linear programming via the two-phase primal simplex.

The solver maximizes over constraints tagged ``<=``, ``==`` or ``>=``
with variables tagged nonnegative or free.  Internally everything is
rewritten into a single canonical form

    maximize c' x'   subject to   A' x' <= b',  x' >= 0,

by expanding each equality row into two opposing inequalities and
splitting each free variable into a difference of two nonnegative ones.
Phase one uses a single auxiliary column; both phases pivot with Bland's
least-index rule, so the solver terminates on degenerate inputs and is
deterministic: identical programs yield identical bases.

The returned basis refers to columns of the canonical form (original
split columns first, then one slack per canonical row) and reproduces
the optimal point exactly via ``reconstruct_from_basis``.
``certify_optimal`` checks an optimal solution against an independently
computed dual certificate.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import StructuralError
from .linalg import dot, solve_linear_system, vec
from .rationals import ONE, ZERO, Rational

LE = "<="
EQ = "=="
GE = ">="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LinearProgram:
    """``maximize objective . x`` subject to tagged rows and variable signs."""

    objective: tuple
    rows: tuple
    rhs: tuple
    kinds: tuple
    nonneg: tuple

    def __post_init__(self):
        n = len(self.objective)
        if len(self.rows) != len(self.rhs) or len(self.rows) != len(self.kinds):
            raise StructuralError("row, rhs and kind counts differ")
        if any(len(row) != n for row in self.rows):
            raise StructuralError("constraint row width differs from objective length")
        if len(self.nonneg) != n:
            raise StructuralError("variable sign tags differ from objective length")
        if any(kind not in (LE, EQ, GE) for kind in self.kinds):
            raise StructuralError("row kind must be one of <=, ==, >=")

    @property
    def n_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LpSolution:
    status: str
    optimum: Rational | None = None
    point: tuple | None = None
    basis: tuple | None = None


def make_lp(objective, rows, rhs, kinds, nonneg=None) -> LinearProgram:
    objective = vec(objective)
    n = len(objective)
    if nonneg is None:
        nonneg = (True,) * n
    return LinearProgram(
        objective=objective,
        rows=tuple(vec(row) for row in rows),
        rhs=vec(rhs),
        kinds=tuple(kinds),
        nonneg=tuple(bool(t) for t in nonneg),
    )


def canonical_form(lp: LinearProgram):
    """Canonical <=-form: column map ``(var, sign)`` list, rows, rhs."""
    cols = [(j, 1) for j in range(lp.n_vars)]
    cols += [(j, -1) for j in range(lp.n_vars) if not lp.nonneg[j]]

    def expand(row):
        return [row[j] if s > 0 else -row[j] for j, s in cols]

    rows, rhs = [], []
    for row, b, kind in zip(lp.rows, lp.rhs, lp.kinds):
        if kind in (LE, EQ):
            rows.append(expand(row))
            rhs.append(b)
        if kind in (GE, EQ):
            rows.append([-x for x in expand(row)])
            rhs.append(-b)
    objective = [lp.objective[j] if s > 0 else -lp.objective[j] for j, s in cols]
    return cols, objective, rows, rhs


def _pivot(tableau, cost, basis, r, j):
    row_r = tableau[r]
    lead = row_r[j]
    if lead != 1:
        inv = 1 / lead
        tableau[r] = row_r = [x * inv if x else x for x in row_r]
    for i, row in enumerate(tableau):
        if i == r:
            continue
        f = row[j]
        if f:
            tableau[i] = [a - f * b if b else a for a, b in zip(row, row_r)]
    f = cost[j]
    if f:
        cost[:] = [a - f * b if b else a for a, b in zip(cost, row_r)]
    basis[r] = j


def _bland(tableau, cost, basis, n_cols, rhs_col):
    """Pivot until optimal or unbounded.  Bland's rule throughout."""
    while True:
        enter = next((j for j in range(n_cols) if cost[j] > 0), None)
        if enter is None:
            return OPTIMAL
        leave = None
        best = None
        for i, row in enumerate(tableau):
            a = row[enter]
            if a > 0:
                ratio = row[rhs_col] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            return UNBOUNDED
        _pivot(tableau, cost, basis, leave, enter)


def solve_lp(lp: LinearProgram) -> LpSolution:
    """Exact optimum with a verifying basis, or infeasible/unbounded status."""
    cols, objective, rows, rhs = canonical_form(lp)
    m, n = len(rows), len(cols)
    rhs_col = n + m
    tableau = []
    for i, row in enumerate(rows):
        t = row + [ZERO] * m + [rhs[i]]
        t[n + i] = ONE
        tableau.append(t)
    basis = list(range(n, n + m))

    if any(b < 0 for b in rhs):
        aux = rhs_col
        rhs_col += 1
        for t in tableau:
            t.insert(aux, -ONE)
        cost = [ZERO] * (rhs_col + 1)
        cost[aux] = -ONE
        start = min(range(m), key=lambda i: (tableau[i][rhs_col], i))
        _pivot(tableau, cost, basis, start, aux)
        status = _bland(tableau, cost, basis, aux + 1, rhs_col)
        if status != OPTIMAL:  # the auxiliary objective is bounded by zero
            raise StructuralError("auxiliary phase failed to terminate at an optimum")
        aux_row = next((i for i, b in enumerate(basis) if b == aux), None)
        if aux_row is not None and tableau[aux_row][rhs_col] != 0:
            return LpSolution(INFEASIBLE)
        if aux_row is not None:
            # Degenerate: evict the auxiliary variable.  Its tableau row is a
            # row of an invertible basis inverse, so a nonzero slack-block
            # entry always exists.
            enter = next(j for j in range(n + m) if tableau[aux_row][j])
            _pivot(tableau, cost, basis, aux_row, enter)
        for t in tableau:
            del t[aux]
        rhs_col -= 1

    cost = objective + [ZERO] * m + [ZERO]
    for i, b in enumerate(basis):
        f = cost[b]
        if f:
            cost = [a - f * t if t else a for a, t in zip(cost, tableau[i])]
    status = _bland(tableau, cost, basis, n + m, rhs_col)
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED)

    split = [ZERO] * n
    for i, b in enumerate(basis):
        if b < n:
            split[b] = tableau[i][rhs_col]
    point = [ZERO] * lp.n_vars
    for (var, sign), value in zip(cols, split):
        point[var] += value if sign > 0 else -value
    point = tuple(point)
    return LpSolution(OPTIMAL, dot(lp.objective, point), point, tuple(sorted(basis)))


def satisfies(lp: LinearProgram, point) -> bool:
    """Exact feasibility of a point for the original (untransformed) program."""
    if len(point) != lp.n_vars:
        raise StructuralError("point length differs from variable count")
    for row, b, kind in zip(lp.rows, lp.rhs, lp.kinds):
        lhs = dot(row, point)
        if kind == LE and not lhs <= b:
            return False
        if kind == GE and not lhs >= b:
            return False
        if kind == EQ and lhs != b:
            return False
    return all(not flag or x >= 0 for flag, x in zip(lp.nonneg, point))


def reconstruct_from_basis(lp: LinearProgram, basis) -> tuple | None:
    """Re-derive the optimal point by solving the square basic system exactly."""
    cols, _, rows, rhs = canonical_form(lp)
    m, n = len(rows), len(cols)
    square = []
    for i in range(m):
        square.append([rows[i][b] if b < n else (ONE if b - n == i else ZERO) for b in basis])
    values = solve_linear_system(square, rhs)
    if values is None:
        return None
    split = [ZERO] * n
    for b, value in zip(basis, values):
        if b < n:
            split[b] = value
    point = [ZERO] * lp.n_vars
    for (var, sign), value in zip(cols, split):
        point[var] += value if sign > 0 else -value
    return tuple(point)


def certify_optimal(lp: LinearProgram, sol: LpSolution) -> bool:
    """Independent optimality certificate for an optimal solution.

    Checks primal feasibility, the claimed objective value, that the basis
    reproduces the point, and dual feasibility of the basis multipliers
    with zero duality gap (which together certify optimality).
    """
    if sol.status != OPTIMAL:
        return False
    if not satisfies(lp, sol.point):
        return False
    if dot(lp.objective, sol.point) != sol.optimum:
        return False
    if reconstruct_from_basis(lp, sol.basis) != sol.point:
        return False

    cols, objective, rows, rhs = canonical_form(lp)
    m, n = len(rows), len(cols)
    basis_matrix_t = []
    cost_b = []
    for b in sol.basis:
        if b < n:
            basis_matrix_t.append([rows[i][b] for i in range(m)])
            cost_b.append(objective[b])
        else:
            basis_matrix_t.append([ONE if i == b - n else ZERO for i in range(m)])
            cost_b.append(ZERO)
    y = solve_linear_system(basis_matrix_t, cost_b)
    if y is None:
        return False
    for i in range(m):
        if y[i] < 0:  # slack column dual feasibility
            return False
    for j in range(n):
        reduced = objective[j] - dot(y, [rows[i][j] for i in range(m)])
        if reduced > 0:
            return False
    return dot(y, rhs) == sol.optimum
