"""Partial isomorphisms: hull extension, back-and-forth, the fragment game.

Equal invariants let the correspondence a_i -> b_i grow to an isomorphism of
hulls; a back-and-forth step then swallows arbitrary new elements by
fabricating matching material on the other side.  Between finite fragments
the iterated game reconstructs an isomorphism exactly when the descriptors
(axis census and codimension) coincide.
"""

from axisspace import (
    FieldCtx,
    PartialIso,
    back_and_forth_step,
    canonical_model,
    descriptor_iso,
    extend_to_hat,
    fragment_isomorphism_game,
    make_descriptor,
    qf_equiv,
    rich_model,
)

Q = FieldCtx.rationals()
M = rich_model(Q)

# Hull extension: the pair below differs by an axis swap and a rescale.
a = (M.e(0, 0) + M.e(1, 0), M.e(0, 1))
b = (M.e(1, 0).scale(3) + M.e(0, 0), M.e(1, 1).scale(3))
h = extend_to_hat(a, b)
print("hull isomorphism on generators:")
for dom, img in zip(h.domain_generators, h.image_generators):
    print("  ", dom, "->", img)

# One back-and-forth step: the new element leans on a known axis with a
# fresh coordinate and adds one fresh axis; the image mirrors both.
f = PartialIso(Q, (M.e(0, 0),), (M.e(4, 0),))
new = M.e(0, 7) + M.e(9, 0)
f2, image = back_and_forth_step(f, new, M, M)
print("step:", new, "->", image)
print("extended tuples equivalent?", qf_equiv(f2.domain_generators, f2.image_generators))

# The fragment game decides isomorphism of finite fragments.
d1 = make_descriptor(1, {1: 2, 2: 1})
d2 = make_descriptor(1, {1: 2, 2: 1})
d3 = make_descriptor(1, {1: 1, 2: 2})
m1, m2, m3 = (canonical_model(d, Q) for d in (d1, d2, d3))
print("equal descriptors:", descriptor_iso(d1, d2), "| game:", fragment_isomorphism_game(m1, m2) is not None)
print("unequal descriptors:", descriptor_iso(d1, d3), "| game:", fragment_isomorphism_game(m1, m3) is not None)
