"""Built-in loss matrices used throughout the tests and the CLI."""
from __future__ import annotations

from itertools import permutations, product

from .errors import StructuralError
from .losses import LossMatrix, loss_matrix
from .rationals import rat


def zero_one(k: int) -> LossMatrix:
    """0-1 loss: one unit for any mistake."""
    return loss_matrix([[0 if y == z else 1 for z in range(k)] for y in range(k)])


def chain(k: int) -> LossMatrix:
    """Absolute deviation on the ordered labels 0..k-1 (path metric of a chain)."""
    return loss_matrix([[abs(y - z) for z in range(k)] for y in range(k)])


def star(k: int) -> LossMatrix:
    """Star tree: unit spokes from output 1, distance 2 between leaves."""
    return loss_matrix(
        [[0 if y == z else (1 if 0 in (y, z) else 2) for z in range(k)] for y in range(k)]
    )


def squared(k: int) -> LossMatrix:
    """Squared difference of the labels 1..k; breaks the triangle inequality."""
    return loss_matrix([[(y - z) ** 2 for z in range(k)] for y in range(k)])


def hamming_two_bits() -> LossMatrix:
    """Mean disagreement of two binary coordinates (a cycle of four, not a tree)."""
    outputs = list(product((0, 1), repeat=2))
    return loss_matrix(
        [
            [rat(int(a1 != b1) + int(a2 != b2), 2) for (b1, b2) in outputs]
            for (a1, a2) in outputs
        ]
    )


def permutation_hamming(m: int) -> LossMatrix:
    """Mean positionwise disagreement between permutations of size m."""
    outputs = list(permutations(range(1, m + 1)))
    return loss_matrix(
        [
            [rat(sum(1 for a, b in zip(s, t) if a != b), m) for t in outputs]
            for s in outputs
        ]
    )


def bifurcating_tree_seven() -> LossMatrix:
    """Path metric of a seven-node full binary tree with rational edge weights."""
    edges = {
        (0, 1): rat(1, 2),
        (0, 2): rat(3, 4),
        (1, 3): rat(1),
        (1, 4): rat(3, 2),
        (2, 5): rat(5, 4),
        (2, 6): rat(2),
    }
    k = 7
    adjacency = {u: [] for u in range(k)}
    for (u, v), w in edges.items():
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


_BUILDERS = {}
_DESCRIPTIONS = {}


def _register(name: str, description: str, builder) -> None:
    _BUILDERS[name] = builder
    _DESCRIPTIONS[name] = description


for _k in range(2, 7):
    _register(f"zero-one-{_k}", f"0-1 loss on {_k} outputs", (lambda kk: (lambda: zero_one(kk)))(_k))
for _k in range(3, 7):
    _register(
        f"chain-{_k}",
        f"absolute deviation on {_k} ordered labels (chain tree)",
        (lambda kk: (lambda: chain(kk)))(_k),
    )
_register("star-4", "star tree with three unit spokes", lambda: star(4))
_register(
    "tree-7",
    "path metric of a bifurcating seven-node tree with rational weights",
    bifurcating_tree_seven,
)
_register(
    "hamming-2x2",
    "mean disagreement of two binary coordinates (four-cycle, not a tree)",
    hamming_two_bits,
)
_register(
    "perm-hamming-3",
    "mean positionwise disagreement between permutations of size 3",
    lambda: permutation_hamming(3),
)
_register("squared-3", "squared label difference on three labels", lambda: squared(3))


def corpus_names() -> tuple:
    return tuple(_BUILDERS)


def corpus_description(name: str) -> str:
    if name not in _DESCRIPTIONS:
        raise StructuralError(f"unknown corpus entry: {name}")
    return _DESCRIPTIONS[name]


def corpus_loss(name: str) -> LossMatrix:
    if name not in _BUILDERS:
        raise StructuralError(f"unknown corpus entry: {name}")
    return _BUILDERS[name]()
