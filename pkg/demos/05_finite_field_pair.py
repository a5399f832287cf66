"""The finite-field phenomenon: equivalent pairs, different span weights.

Over GF(p) quantifier-free equivalence of a pair only sees the p^2 scalar
combinations, and a span can hide an axis from every single element.  The
construction below produces pairs that agree on every combination yet span
subspaces touching p and p + 1 axes; over an infinite field this cannot
happen, which the failing generic-witness search demonstrates.
"""

from axisspace import (
    SubspaceHandle,
    brute_qf_equiv,
    construct_counterexample,
    weight,
    weight_of_subspace,
    witness_star,
)
from axisspace.errors import NoGenericWitness
from axisspace.finitefield import combination_weight_table

for p in (2, 3):
    a, b, _ = construct_counterexample(p)
    print(f"GF({p}):")
    print("  a =", a[0], "|", a[1])
    print("  b =", b[0], "|", b[1])
    print("  exhaustively equivalent:", brute_qf_equiv(a, b))
    print("  span weights:", weight_of_subspace(SubspaceHandle(a)), "vs", weight_of_subspace(SubspaceHandle(b)))
    print("  combination weights (lambda, mu, w(a), w(b)):")
    table_b = combination_weight_table(b)
    for (lam, mu, wa), (_, _, wb) in zip(combination_weight_table(a), table_b):
        print(f"    {lam} {mu} {wa} {wb}")
    try:
        witness_star(SubspaceHandle(b))
    except NoGenericWitness as exc:
        print("  generic witness on the wide span fails:", exc)
    print()
