"""Exact H-representations and vertex enumeration.

Polytopes are given as ``{x : A x >= b}`` with some rows tagged as
equalities.  A feasible point is a vertex exactly when its tight rows
have full column rank, so enumeration walks independent subsets of
candidate tight rows with an incremental echelon accumulator, solves
each full-rank subsystem exactly, and keeps the feasible solutions.
The walk is exhaustive, which is the point: at desk scale this is
trivially complete and every vertex is certified by its active set.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import TYPE_CHECKING, Iterator

from .errors import ResourceCapError, StructuralError
from .linalg import Echelon, dot, rank, vec
from .linprog import EQ, GE, UNBOUNDED, LpSolution, make_lp, solve_lp
from .rationals import ONE, ZERO, rat

if TYPE_CHECKING:  # pragma: no cover
    from .losses import LossMatrix

DEFAULT_OUTPUT_CAP = 10
DEFAULT_AMBIENT_CAP = DEFAULT_OUTPUT_CAP + 1
TRANSPORT_ENUM_CAP = 4


@dataclass(frozen=True)
class HPolytope:
    """Row system ``A x (>=|==) b`` in ambient dimension ``dim``."""

    rows: tuple
    rhs: tuple
    kinds: tuple
    dim: int

    def __post_init__(self):
        if len(self.rows) != len(self.rhs) or len(self.rows) != len(self.kinds):
            raise StructuralError("row, rhs and kind counts differ")
        if any(len(row) != self.dim for row in self.rows):
            raise StructuralError("row width differs from ambient dimension")
        if any(kind not in (GE, EQ) for kind in self.kinds):
            raise StructuralError("polytope rows must be >= or ==")

    def contains(self, x) -> bool:
        if len(x) != self.dim:
            raise StructuralError("point dimension mismatch")
        for row, b, kind in zip(self.rows, self.rhs, self.kinds):
            lhs = dot(row, x)
            if kind == GE and not lhs >= b:
                return False
            if kind == EQ and lhs != b:
                return False
        return True

    def tight_rows(self, x) -> tuple:
        return tuple(
            i for i, (row, b) in enumerate(zip(self.rows, self.rhs))
            if dot(row, x) == b
        )


def hpolytope(rows, rhs, kinds, dim: int | None = None) -> HPolytope:
    rows = tuple(vec(row) for row in rows)
    if dim is None:
        if not rows:
            raise StructuralError("cannot infer ambient dimension without rows")
        dim = len(rows[0])
    return HPolytope(rows=rows, rhs=vec(rhs), kinds=tuple(kinds), dim=dim)


def maximize_over(p: HPolytope, objective) -> LpSolution:
    """Maximize a linear objective over the polytope (all variables free)."""
    lp = make_lp(objective, p.rows, p.rhs, p.kinds, nonneg=[False] * p.dim)
    return solve_lp(lp)


def is_pointed(p: HPolytope) -> bool:
    """True when the feasible set contains no line (so vertices exist)."""
    return rank(p.rows) == p.dim


def is_bounded(p: HPolytope, *, skip_lower: tuple = ()) -> bool:
    """Boundedness by 2n coordinate LPs; ``skip_lower`` coordinates may be
    unbounded below (used for epigraph-style auxiliary coordinates)."""
    for i in range(p.dim):
        e_i = [ONE if j == i else ZERO for j in range(p.dim)]
        if maximize_over(p, e_i).status == UNBOUNDED:
            return False
        if i in skip_lower:
            continue
        if maximize_over(p, [-x for x in e_i]).status == UNBOUNDED:
            return False
    return True


def enumerate_vertices(p: HPolytope, cap: int = DEFAULT_AMBIENT_CAP) -> tuple:
    """All extreme points, lexicographically sorted.

    Complete for pointed polyhedra: every vertex is the unique solution of
    a full-rank subsystem of its tight rows, and every independent subset
    of candidate rows is visited.
    """
    n = p.dim
    if n > cap:
        raise ResourceCapError(
            f"vertex enumeration in dimension {n} exceeds the cap {cap}"
        )
    if not is_pointed(p):
        raise StructuralError("polyhedron contains a line; no vertices exist")

    ech = Echelon(n)
    candidates = []
    for row, b, kind in zip(p.rows, p.rhs, p.kinds):
        if all(x == 0 for x in row):
            if (kind == EQ and b != 0) or (kind == GE and b > 0):
                return ()  # trivially empty
            continue
        if kind == EQ:
            if ech.add(row, b) == Echelon.INCONSISTENT:
                return ()
        else:
            candidates.append((row, b))

    found: dict = {}

    def dfs(pos: int) -> None:
        if ech.rank == n:
            x = ech.solution()
            if x not in found and p.contains(x):
                found[x] = True
            return
        remaining = len(candidates) - pos
        if ech.rank + remaining < n:
            return
        row, b = candidates[pos]
        status = ech.add(row, b)
        if status == Echelon.ADDED:
            dfs(pos + 1)
            ech.pop()
        # A dependent-consistent row adds nothing; an inconsistent one kills
        # the include branch.  Either way fall through to exclusion.
        dfs(pos + 1)

    dfs(0)
    return tuple(sorted(found))


class PredictionSet:
    """The polytope of conditionals for which one output is Bayes-optimal."""

    def __init__(self, y: int, hrep: HPolytope):
        self.y = y
        self.hrep = hrep
        self._vertices: tuple | None = None

    def contains(self, q) -> bool:
        return self.hrep.contains(q)

    def vertices(self, cap: int = DEFAULT_AMBIENT_CAP) -> tuple:
        if self._vertices is None:
            self._vertices = enumerate_vertices(self.hrep, cap=cap)
        return self._vertices


@lru_cache(maxsize=None)
def prediction_set(loss: "LossMatrix", y: int) -> PredictionSet:
    """H-representation of the prediction set of output ``y``.

    Rows: the simplex equality, nonnegativity of every coordinate, and one
    comparison row (L_z - L_y) . q >= 0 per output z.
    """
    k = loss.k
    if not 0 <= y < k:
        raise StructuralError(f"output index {y} out of range for k={k}")
    rows = [[ONE] * k]
    rhs = [ONE]
    kinds = [EQ]
    for z in range(k):
        rows.append([ONE if i == z else ZERO for i in range(k)])
        rhs.append(ZERO)
        kinds.append(GE)
    row_y = loss.row(y)
    for z in range(k):
        row_z = loss.row(z)
        rows.append([row_z[i] - row_y[i] for i in range(k)])
        rhs.append(ZERO)
        kinds.append(GE)
    p = hpolytope(rows, rhs, kinds, dim=k)
    if not is_bounded(p):
        raise StructuralError("prediction set failed the boundedness check")
    e_y = tuple(ONE if i == y else ZERO for i in range(k))
    if not p.contains(e_y):
        raise StructuralError("prediction set does not contain its own point mass")
    return PredictionSet(y, p)


def epigraph_polytope(loss: "LossMatrix") -> HPolytope:
    """The region under the piecewise-linear Bayes risk surface, in (q, u).

    Rows, in order: [L | -1] >= 0, [Id | 0] >= 0, then the two opposing
    simplex rows.  The region is pointed but unbounded below in u; the
    q-block and the top of u are verified bounded.
    """
    k = loss.k
    rows = [list(loss.row(z)) + [-ONE] for z in range(k)]
    rows += [[ONE if i == z else ZERO for i in range(k)] + [ZERO] for z in range(k)]
    rows.append([ONE] * k + [ZERO])
    rows.append([-ONE] * k + [ZERO])
    rhs = [ZERO] * (2 * k) + [ONE, -ONE]
    p = hpolytope(rows, rhs, [GE] * (2 * k + 2), dim=k + 1)
    if not is_pointed(p):
        raise StructuralError("epigraph region unexpectedly contains a line")
    if not is_bounded(p, skip_lower=(k,)):
        raise StructuralError("epigraph region unbounded beyond its u-recession")
    return p


@dataclass(frozen=True)
class ActiveSets:
    """Tight-row partition of a feasible epigraph point x = (q, u):
    S = outputs with L_y . q = u, T = outputs with q_y = 0."""

    S: tuple
    T: tuple
    vertex_necessary: bool  # |S| >= 1 and |S| + |T| >= k
    is_vertex: bool         # tight rows reach full rank k + 1


def active_sets(p: HPolytope, x) -> ActiveSets:
    k = p.dim - 1
    if len(p.rows) != 2 * k + 2:
        raise StructuralError("active_sets expects an epigraph-shaped polytope")
    if not p.contains(x):
        raise StructuralError("point is not feasible for the polytope")
    tight = p.tight_rows(x)
    s = tuple(i for i in tight if i < k)
    t = tuple(i - k for i in tight if k <= i < 2 * k)
    necessary = len(s) >= 1 and len(s) + len(t) >= k
    full = rank([p.rows[i] for i in tight]) == p.dim
    return ActiveSets(S=s, T=t, vertex_necessary=necessary, is_vertex=full)


def transportation_polytope(q) -> HPolytope:
    """Matrices with both marginals equal to q, flattened row-major."""
    k = len(q)
    q = vec(q)
    dim = k * k
    rows = []
    rhs = []
    kinds = []
    for i in range(k):  # row sums
        rows.append([ONE if e // k == i else ZERO for e in range(dim)])
        rhs.append(q[i])
        kinds.append(EQ)
    for j in range(k):  # column sums
        rows.append([ONE if e % k == j else ZERO for e in range(dim)])
        rhs.append(q[j])
        kinds.append(EQ)
    for e in range(dim):
        rows.append([ONE if f == e else ZERO for f in range(dim)])
        rhs.append(ZERO)
        kinds.append(GE)
    p = hpolytope(rows, rhs, kinds, dim=dim)
    if not is_bounded(p):
        raise StructuralError("transportation polytope failed the boundedness check")
    return p


@lru_cache(maxsize=None)
def _bipartite_spanning_trees(p: int) -> tuple:
    """Edge sets of all spanning trees of K_{p,p}; nodes 0..p-1 and p..2p-1."""
    edges = [(i, j) for i in range(p) for j in range(p)]
    if p == 1:
        return (((0, 0),),)
    trees = []
    for subset in combinations(range(len(edges)), 2 * p - 1):
        parent = list(range(2 * p))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        acyclic = True
        for idx in subset:
            i, j = edges[idx]
            ra, rb = find(i), find(p + j)
            if ra == rb:
                acyclic = False
                break
            parent[ra] = rb
        if acyclic:
            trees.append(tuple(edges[idx] for idx in subset))
    return tuple(trees)


def _tree_flows(tree, supply, demand):
    """Unique flow on a spanning tree matching marginals, or None if any
    flow would have to be negative."""
    p = len(supply)
    balance = list(supply) + list(demand)
    degree = [0] * (2 * p)
    incident: list[list] = [[] for _ in range(2 * p)]
    for idx, (i, j) in enumerate(tree):
        degree[i] += 1
        degree[p + j] += 1
        incident[i].append(idx)
        incident[p + j].append(idx)
    flow = [None] * len(tree)
    leaves = [v for v in range(2 * p) if degree[v] == 1]
    while leaves:
        v = leaves.pop()
        edge_idx = next((idx for idx in incident[v] if flow[idx] is None), None)
        if edge_idx is None:  # already exhausted from the other side
            continue
        value = balance[v]
        if value < 0:
            return None
        flow[edge_idx] = value
        i, j = tree[edge_idx]
        other = p + j if v == i else i
        balance[other] -= value
        balance[v] = ZERO
        degree[other] -= 1
        degree[v] -= 1
        if degree[other] == 1:
            leaves.append(other)
    return flow


def transport_plan_vertices(q, cap: int = TRANSPORT_ENUM_CAP) -> tuple:
    """Vertices of the transportation polytope with both marginals q.

    Independent of the H-representation walk: bases of the transportation
    problem are spanning trees of the bipartite support graph, so every
    vertex appears as the feasible flow of at least one tree.
    """
    k = len(q)
    q = vec(q)
    support = [i for i in range(k) if q[i] > 0]
    p = len(support)
    if p > cap:
        raise ResourceCapError(
            f"transport vertex enumeration supports at most {cap} positive "
            f"marginals, got {p}"
        )
    marg = [q[i] for i in support]
    plans: dict = {}
    for tree in _bipartite_spanning_trees(p):
        flow = _tree_flows(tree, marg, marg)
        if flow is None:
            continue
        full = [[ZERO] * k for _ in range(k)]
        for (i, j), value in zip(tree, flow):
            full[support[i]][support[j]] = value
        key = tuple(tuple(row) for row in full)
        plans[key] = True
    return tuple(sorted(plans))


def simplex_grid(k: int, denominator: int) -> Iterator[tuple]:
    """All rational points m/denominator on the simplex, lexicographically."""
    if denominator < 1:
        raise StructuralError("grid denominator must be at least 1")
    den = rat(denominator)

    def rec(prefix, remaining, slots):
        if slots == 1:
            yield prefix + (rat(remaining) / den,)
            return
        for m in range(remaining + 1):
            yield from rec(prefix + (rat(m) / den,), remaining - m, slots - 1)

    yield from rec((), denominator, k)
