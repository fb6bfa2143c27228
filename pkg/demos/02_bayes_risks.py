"""Bayes risks as exact transportation LPs.

The task Bayes risk H_L(q) is a row minimum.  The max-margin Bayes risk
maximizes <L, Q> over plans Q with both marginals q; the restricted
variant adds the cone constraint that each plan row certifies its own
label's optimality.  Everything below is an exact rational computation
with a re-checkable witness.
"""
from marginlab import (
    as_simplex_point,
    bayes_risk_l,
    bayes_risk_m,
    bayes_risk_m_dual,
    bayes_risk_mm,
    bayes_risk_rm,
    conjugate_neg_hm,
    rat,
    subgradient_point_neg_hm,
)
from marginlab.corpus import chain, zero_one
from marginlab.risks import frobenius, in_restriction_cone, in_transport_polytope

zo3 = zero_one(3)
bary = as_simplex_point([rat(1, 3)] * 3)

print("0-1 loss, k=3, at the barycenter:")
print("  H_L  =", bayes_risk_l(zo3, bary).value)
print("  H_RM =", bayes_risk_rm(zo3, bary).value, " (equals H_L)")
print("  H_MM =", bayes_risk_mm(zo3, bary).value, " (always equals H_L)")
risk = bayes_risk_m(zo3, bary)
print("  H_M  =", risk.value, " (strictly larger: max-margin overshoots)")
plan = risk.witness
print("  witness plan rows:", [tuple(str(x) for x in row) for row in plan])
print("  plan checks: in U(q,q):", in_transport_polytope(plan, bary),
      " value:", frobenius(zo3.entries, plan))
print()

# For symmetric losses the same value comes out of the dual LP, whose
# witness is a vector a with (a_y + a_z)/2 >= L(y, z).
dual = bayes_risk_m_dual(zo3, bary)
print("  dual value:", dual.value, " witness a =", tuple(str(x) for x in dual.witness))
print()

# The chain loss doubles the task risk everywhere (it is a tree metric).
loss = chain(3)
q = as_simplex_point([rat(1, 2), 0, rat(1, 2)])
print("absolute deviation, k=3, at q=(1/2, 0, 1/2):")
print("  H_L =", bayes_risk_l(loss, q).value, "  H_M =", bayes_risk_m(loss, q).value)
rm = bayes_risk_rm(loss, q)
print("  H_RM =", rm.value, " witness in cone:", in_restriction_cone(rm.witness, loss))
print()

# The conjugate of the negated max-margin risk is a finite maximum over
# label pairs; a unique maximizing pair pins the subgradient to the pair
# midpoint (or to a point mass on the diagonal).
v = (rat(0), rat(0), rat(-10))
value, pairs = conjugate_neg_hm(zo3, v)
print("conjugate at v=(0, 0, -10):", value, " maximizing pairs:",
      [(y + 1, z + 1) for y, z in pairs])
print("  subgradient point:", tuple(str(x) for x in subgradient_point_neg_hm(zo3, v)))
v = (rat(4), rat(0), rat(-10))
value, pairs = conjugate_neg_hm(zo3, v)
print("conjugate at v=(4, 0, -10):", value, " maximizing pairs:",
      [(y + 1, z + 1) for y, z in pairs], " (the diagonal pair wins)")
print("  subgradient point:", tuple(str(x) for x in subgradient_point_neg_hm(zo3, v)))
