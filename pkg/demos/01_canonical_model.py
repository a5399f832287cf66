"""Tour of the canonical model: axes, supports, weights, sumsets.

The model is a direct sum of axis blocks and free coordinates.  The
distinguished set X holds the elements supported on a single axis; X^n is
the set of sums of n such elements.  Run:

    python3 demos/01_canonical_model.py
"""

from axisspace import (
    FieldCtx,
    SubspaceHandle,
    hull_hat,
    in_Xn,
    parallel,
    pi_A,
    proj_axis,
    rich_model,
    support,
    weight,
    weight_of_subspace,
    witness_star,
)

Q = FieldCtx.rationals()
M = rich_model(Q)

# Elements are built from axis coordinates e(axis, coord) and free
# coordinates fe(coord).
a = M.e(0, 0) + M.e(0, 1).scale(2) + M.e(1, 0)
print("a =", a)
print("support(a) =", sorted(str(s) for s in support(a)))
print("weight(a) =", weight(a))

# Weight thresholds are exactly membership in the sumsets.
for n in range(4):
    print(f"a in X^{n}?", in_Xn(a, n))

# Parallelism means living on the same axis.
print("e0_0 parallel to 2*e0_1?", parallel(M.e(0, 0), M.e(0, 1).scale(2)))
print("e0_0 parallel to e1_0?", parallel(M.e(0, 0), M.e(1, 0)))

# An element with a free coordinate escapes every sumset.
b = M.e(0, 0) + M.fe(0)
print("b =", b, "| b in X^5?", in_Xn(b, 5))

# Subspaces are handled through generators; their weight counts the axes
# they touch, and a single generic element witnesses all of them at once.
A = SubspaceHandle.of(M.e(0, 0) + M.e(1, 0), M.e(2, 0))
print("w(<A>) =", weight_of_subspace(A))
star = witness_star(A)
print("witness with full support:", star, "| weight:", weight(star))

# The hull splits every generator into its per-axis components.
hat = hull_hat(A)
print("hull generators:", [str(g) for g in hat.generators])

# Projections onto the axes of a subspace.
c = M.e(0, 5) + M.e(7, 0)
print("pi_A(c) onto axes of A:", pi_A(c, A))
print("projection of c on axis 7:", proj_axis(c, 7))
