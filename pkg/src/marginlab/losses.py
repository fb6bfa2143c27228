"""Task loss matrices and the three margin surrogate losses.

The discrete task is given by a k x k nonnegative loss matrix L with
zero diagonal (and zeros nowhere else).  Scores live in R^k.  The three
surrogates share the loss-augmented structure

    max-margin            S_M(v, y)  = max_{y'} L(y, y') + v_{y'} - v_y,
    restricted-max-margin S_RM(v, y) = max over the prediction set of y
                                       of (L_y + v) . q  -  v_y,
    max-min-margin        S_MM(v, y) = max over the simplex of
                                       min_z (L_z . q) + v . q  -  v_y.

S_M is a finite maximum; the other two are evaluated as exact LPs.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import polytopes
from .errors import PreconditionError, StructuralError
from .linalg import dot, vec
from .linprog import EQ, GE, OPTIMAL, make_lp, solve_lp
from .rationals import ONE, ZERO, Rational, rat


@dataclass(frozen=True)
class LossMatrix:
    """Exact k x k task loss.  Zero exactly on the diagonal, k >= 2."""

    entries: tuple

    def __post_init__(self):
        k = len(self.entries)
        if k < 2:
            raise StructuralError("a task loss needs at least two outputs")
        if any(len(row) != k for row in self.entries):
            raise StructuralError("loss matrix must be square")
        for y, row in enumerate(self.entries):
            for z, value in enumerate(row):
                if value < 0:
                    raise StructuralError(f"negative loss entry at ({y + 1},{z + 1})")
                if y == z and value != 0:
                    raise StructuralError(f"nonzero diagonal entry at ({y + 1},{z + 1})")
                if y != z and value == 0:
                    raise StructuralError(f"zero off-diagonal entry at ({y + 1},{z + 1})")

    @property
    def k(self) -> int:
        return len(self.entries)

    @property
    def symmetric(self) -> bool:
        e = self.entries
        k = self.k
        return all(e[y][z] == e[z][y] for y in range(k) for z in range(y + 1, k))

    def row(self, y: int) -> tuple:
        return self.entries[y]


def loss_matrix(rows) -> LossMatrix:
    return LossMatrix(tuple(vec(row) for row in rows))


def as_simplex_point(values) -> tuple:
    q = vec(values)
    if any(x < 0 for x in q):
        raise StructuralError("simplex point has a negative entry")
    if sum(q, ZERO) != 1:
        raise StructuralError("simplex point entries must sum to exactly 1")
    return q


def basis_point(k: int, y: int) -> tuple:
    """Point mass e_y."""
    return tuple(ONE if z == y else ZERO for z in range(k))


def pair_midpoint(k: int, y: int, z: int) -> tuple:
    """The point (e_y + e_z) / 2; equals e_y when y == z."""
    half = rat(1, 2)
    return tuple(
        (ONE if y == z else half) if i in (y, z) else ZERO for i in range(k)
    )


def neg_row(loss: LossMatrix, y: int) -> tuple:
    """The score vector -L_y, the canonical embedding of output y."""
    return tuple(-x for x in loss.row(y))


def _check_output(loss: LossMatrix, y: int) -> None:
    if not 0 <= y < loss.k:
        raise StructuralError(f"output index {y} out of range for k={loss.k}")


def _check_vector(loss: LossMatrix, v, name: str) -> None:
    if len(v) != loss.k:
        raise StructuralError(f"{name} has length {len(v)}, expected {loss.k}")


def bayes_predictor(loss: LossMatrix, q) -> tuple:
    """All outputs minimizing the conditional risk L_y . q (never empty)."""
    _check_vector(loss, q, "probability vector")
    risks = [dot(row, q) for row in loss.entries]
    best = min(risks)
    return tuple(y for y, r in enumerate(risks) if r == best)


def argmax_decode(v) -> int:
    """Least-index maximizer of the score vector (deterministic tie-break)."""
    best = max(v)
    return next(i for i, x in enumerate(v) if x == best)


def eval_max_margin(loss: LossMatrix, v, y: int) -> Rational:
    _check_output(loss, y)
    _check_vector(loss, v, "score vector")
    row = loss.row(y)
    return max(row[z] + v[z] for z in range(loss.k)) - v[y]


def eval_restricted_max_margin(loss: LossMatrix, v, y: int) -> Rational:
    _check_output(loss, y)
    _check_vector(loss, v, "score vector")
    pred = polytopes.prediction_set(loss, y)
    objective = vec([loss.row(y)[z] + v[z] for z in range(loss.k)])
    sol = polytopes.maximize_over(pred.hrep, objective)
    if sol.status != OPTIMAL:
        raise PreconditionError("prediction set maximization failed: " + sol.status)
    return sol.optimum - v[y]


def conjugate_neg_hl(loss: LossMatrix, v) -> Rational:
    """(-H_L)*(v): max of u + v . q over the epigraph region u <= L_z . q."""
    _check_vector(loss, v, "score vector")
    k = loss.k
    objective = list(v) + [ONE]
    rows = [list(loss.row(z)) + [-ONE] for z in range(k)]
    rows.append([ONE] * k + [ZERO])
    lp = make_lp(
        objective,
        rows,
        [ZERO] * k + [ONE],
        [GE] * k + [EQ],
        nonneg=[True] * k + [False],
    )
    sol = solve_lp(lp)
    if sol.status != OPTIMAL:
        raise PreconditionError("epigraph maximization failed: " + sol.status)
    return sol.optimum


def eval_max_min_margin(loss: LossMatrix, v, y: int) -> Rational:
    _check_output(loss, y)
    return conjugate_neg_hl(loss, v) - v[y]
