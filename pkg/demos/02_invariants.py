"""The quantifier-free invariant of a tuple, and how weight data recovers it.

A tuple is classified up to quantifier-free equivalence by its arity, the
subspace of coefficient vectors landing in the axis span, and the multiset
of kernels of the per-axis projections.  The kernel multiplicities can also
be reconstructed from subspace weights alone, through inclusion-exclusion
over generic witnesses; the two routes are independent and must agree.
"""

from axisspace import (
    FieldCtx,
    g_of,
    g_via_inclusion_exclusion,
    kernel_candidates,
    qf_equiv,
    qf_invariant,
    rich_model,
    subspace_from_generators,
    weights_oracle_via_witness,
)
from axisspace.linalg import vec, zero_space

Q = FieldCtx.rationals()
M = rich_model(Q)

a = (M.e(0, 0) + M.e(1, 0), M.e(0, 1))
inv = qf_invariant(a)
print("tuple:", [str(x) for x in a])
print("invariant:", inv.to_text())

# g assigns each subspace the number of axes whose projection kernel is
# exactly that subspace.
V = subspace_from_generators(Q, [vec(Q, (0, 1))])
print("g(span{(0,1)}) =", g_of(inv, V))
print("g(0) =", g_of(inv, zero_space(Q, 2)))

# The same multiplicities from weight data only: the oracle pushes every
# subspace through the tuple and measures one generic element.
weights = weights_oracle_via_witness(a)
cands = kernel_candidates(a)
for r in (1, 2):
    print(f"g(V) >= {r} via weights:", g_via_inclusion_exclusion(weights, V, r, cands))

# Equivalence is invariant-level equality; swapping two axes of the model
# does not change it.
b = (M.e(5, 0) + M.e(1, 0), M.e(5, 1))
print("swapped-axis tuple equivalent?", qf_equiv(a, b))
print("different weights equivalent?", qf_equiv((M.e(0, 0),), (M.e(0, 0) + M.e(1, 0),)))
