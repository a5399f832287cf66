"""1-types over a fragment: realized, generic-free, and minimal sum types.

Fixing a finitely generated fragment, every element is either in its span,
or adds an untouchable free direction, or reaches the axis span after a
fragment translate; the latter kind is pinned by the minimal sumset level.
Elements with the same descriptor and fresh supports are conjugate over the
fragment, and the witness is an explicit partial isomorphism.
"""

from axisspace import (
    FieldCtx,
    SubspaceHandle,
    classify,
    conjugacy_witness,
    qf_equiv,
    rich_model,
)

Q = FieldCtx.rationals()
M = rich_model(Q)
fragment = SubspaceHandle.of(M.e(0, 0) + M.e(1, 0), M.e(0, 1), M.fe(0))
gens = tuple(fragment.generators)

samples = {
    "3*(e0_0 + e1_0)": (M.e(0, 0) + M.e(1, 0)).scale(3),
    "fresh free coordinate": M.fe(9),
    "two fresh axes": M.e(8, 0) + M.e(9, 0),
    "fragment point + one fresh axis": M.e(0, 0) + M.e(1, 0) + M.e(8, 0),
}
for label, el in samples.items():
    print(f"{label:32} -> {classify(el, fragment)}")

# Conjugacy: two weight-2 elements on fresh axes are the same type over the
# fragment, witnessed by an isomorphism fixing the generators pointwise.
a = M.e(20, 0) + M.e(21, 0)
b = M.e(30, 1).scale(2) + M.e(31, 0)
f = conjugacy_witness(a, b, fragment)
print("conjugacy maps", a, "->", f.apply(a))
print("fragment fixed:", all(f.apply(g) == g for g in gens))
print("extended tuples equivalent:", qf_equiv(gens + (a,), gens + (b,)))
