"""Exact polytope geometry: prediction sets, epigraph regions, transport.

Vertices are enumerated from the H-representation by walking independent
active-row subsets, so every vertex comes with an algebraic certificate:
its tight rows reach full rank.
"""
from marginlab import (
    as_simplex_point,
    enumerate_vertices,
    epigraph_polytope,
    prediction_set,
    rat,
    transport_plan_vertices,
)
from marginlab.corpus import chain, squared, zero_one
from marginlab.polytopes import active_sets


def show_points(points, indent="  "):
    for p in points:
        print(indent + "(" + ", ".join(str(x) for x in p) + ")")


# Prediction set of label 1 under the 0-1 loss: the region where label 1
# has maximal probability.  Its vertices include the barycenter, which is
# why the max-margin loss fails for three or more labels.
zo3 = zero_one(3)
print("0-1 loss, k=3, prediction set of label 1:")
show_points(prediction_set(zo3, 0).vertices())
print()

# Squared loss: the middle label's prediction set touches the face q_2 = 0,
# so the middle label can be optimal while having zero probability.
sq3 = squared(3)
print("squared loss, prediction set of label 2 (note the q_2 = 0 vertices):")
show_points(prediction_set(sq3, 1).vertices())
print()

# The epigraph region of the task Bayes risk.  For a tree metric every
# vertex is a pair midpoint at half the pair's loss; for the 0-1 loss a
# barycenter vertex appears, breaking that pattern.
for name, loss in (("chain", chain(3)), ("0-1", zo3)):
    p = epigraph_polytope(loss)
    print(f"{name} loss epigraph vertices (q, u) with active sets:")
    for x in enumerate_vertices(p):
        sets = active_sets(p, x)
        print(
            "  (" + ", ".join(str(v) for v in x) + ")"
            f"  S={[y + 1 for y in sets.S]} T={[y + 1 for y in sets.T]}"
        )
    print()

# Transportation polytope vertices for uneven marginals, enumerated from
# spanning-tree bases of the bipartite support graph.
q = as_simplex_point([rat(1, 6), rat(1, 3), rat(1, 2)])
print("transport polytope at q=(1/6, 1/3, 1/2):", end=" ")
plans = transport_plan_vertices(q)
print(f"{len(plans)} vertices; the first two:")
for plan in plans[:2]:
    for row in plan:
        print("   ", tuple(str(x) for x in row))
    print()
