"""Evaluating the three margin surrogates.

A task is a k x k loss matrix; scores live in R^k.  This script walks
through the three surrogate losses on small tasks: the max-margin loss
(a finite maximum), the restricted-max-margin loss (an LP over the
prediction set of the true label), and the max-min-margin loss (an LP
over the whole simplex).
"""
from marginlab import (
    argmax_decode,
    eval_max_margin,
    eval_max_min_margin,
    eval_restricted_max_margin,
    loss_matrix,
    rat,
)
from marginlab.corpus import chain, zero_one
from marginlab.losses import neg_row

# The binary 0-1 loss first.  With scores w = (v, 0) the max-margin loss
# is the familiar hinge max(0, 1 - v) for the first label, and the
# restricted variant is exactly half of it: both generalize the SVM.
zo2 = zero_one(2)
for v in (rat(-2), rat(0), rat(1, 2), rat(1), rat(3)):
    w = (v, rat(0))
    s_m = eval_max_margin(zo2, w, 0)
    s_rm = eval_restricted_max_margin(zo2, w, 0)
    print(f"binary scores (v, 0), v={v!s:>4}:  S_M = {s_m}  S_RM = {s_rm}  (ratio 2)")
print()

# Three labels, 0-1 loss, all scores tied: the surrogates order as
# restricted <= max-min <= max-margin, here 2/3 <= 2/3 <= 1.
zo3 = zero_one(3)
zeros = (rat(0),) * 3
print("0-1 loss, k=3, zero scores, true label 1:")
print("  restricted :", eval_restricted_max_margin(zo3, zeros, 0))
print("  max-min    :", eval_max_min_margin(zo3, zeros, 0))
print("  max-margin :", eval_max_margin(zo3, zeros, 0))
print()

# The embedded score vector of a label is the negated loss row.  For a
# distance loss the max-margin surrogate at the embedding returns twice
# the loss row, and decoding the embedding recovers the label.
loss = chain(4)
print("absolute deviation on 4 labels, embedded scores -L_2:")
v = neg_row(loss, 1)
print("  scores       :", tuple(str(x) for x in v))
print("  S_M(-L_2, z) :", [str(eval_max_margin(loss, v, z)) for z in range(4)])
print("  2 L(2, z)    :", [str(2 * loss.entries[1][z]) for z in range(4)])
print("  decode(-L_2) : label", argmax_decode(v) + 1)
print()

# An asymmetric loss is fine for evaluation; only the symmetric analysis
# machinery (duals, conjugates) insists on symmetry.
asym = loss_matrix([[0, 1, 3], [2, 0, 1], [1, 2, 0]])
w = (rat(1, 2), rat(0), rat(-1))
print("asymmetric loss, scores (1/2, 0, -1), per-label surrogate values:")
for y in range(3):
    print(
        f"  label {y + 1}:"
        f"  S_RM = {eval_restricted_max_margin(asym, w, y)!s:>5}"
        f"  S_MM = {eval_max_min_margin(asym, w, y)!s:>5}"
        f"  S_M  = {eval_max_margin(asym, w, y)!s:>5}"
    )
