"""Partial isomorphisms: hull extension and the back-and-forth step.

A :class:`PartialIso` is a correspondence between two finite generator
tuples whose linear-relation kernels coincide, so sending one tuple to the
other extends to a well-defined linear bijection of the spans.

:func:`extend_to_hat` upgrades a quantifier-free equivalent pair of tuples
inside the axis span to an isomorphism of their hulls: the kernel multisets
match, any multiset-respecting bijection of axes transports each projected
component, and the result restricts to an isomorphism axis by axis.

:func:`back_and_forth_step` extends a partial isomorphism past one new
element, fabricating the witness on the other side out of three kinds of
material: the hull image where the element is already determined, fresh
coordinates on matched axes for components that lean on a known axis without
lying in the hull, and entirely fresh axes or free coordinates for the rest.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import FragmentExhausted, NotInF, NotQfEquivalent, TargetNotRich
from .fields import FieldCtx
from .invariant import qf_invariant_mixed
from .model import (
    Model,
    ModelElement,
    SubspaceHandle,
    proj_axis,
    span_membership,
    tuple_kernel,
)


@dataclass(frozen=True)
class PartialIso:
    """Finite partial isomorphism presented on generators."""

    field: FieldCtx
    domain_generators: tuple
    image_generators: tuple
    axis_map: tuple = dc_field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if len(self.domain_generators) != len(self.image_generators):
            raise NotQfEquivalent("generator lists of different lengths")
        if tuple_kernel(self.domain_generators, self.field) != tuple_kernel(self.image_generators, self.field):
            raise NotQfEquivalent("generator tuples satisfy different linear relations")

    @staticmethod
    def empty(field: FieldCtx) -> "PartialIso":
        return PartialIso(field, (), ())

    def domain_handle(self) -> SubspaceHandle:
        return SubspaceHandle(self.domain_generators)

    def contains(self, a: ModelElement) -> bool:
        return span_membership(a, self.domain_handle()) is not None

    def apply(self, a: ModelElement) -> ModelElement:
        coeffs = span_membership(a, self.domain_handle())
        if coeffs is None:
            raise KeyError(f"element outside the domain span: {a}")
        out = ModelElement.zero(self.field)
        for c, g in zip(coeffs, self.image_generators):
            out = out + g.scale(c)
        return out

    def extended(self, a: ModelElement, b: ModelElement) -> "PartialIso":
        return PartialIso(
            self.field,
            self.domain_generators + (a,),
            self.image_generators + (b,),
            self.axis_map,
        )

    def inverse(self) -> "PartialIso":
        inverted = tuple((y, x) for x, y in self.axis_map)
        return PartialIso(self.field, self.image_generators, self.domain_generators, inverted)

    def sigma(self) -> dict:
        return dict(self.axis_map)

    def reduced(self) -> "PartialIso":
        """Same map on an independent generating subset; keeps spans stable
        across iterated extension instead of letting presentations grow."""
        kept_dom: list = []
        kept_img: list = []
        for d, e in zip(self.domain_generators, self.image_generators):
            if span_membership(d, SubspaceHandle(tuple(kept_dom))) is None:
                kept_dom.append(d)
                kept_img.append(e)
        return PartialIso(self.field, tuple(kept_dom), tuple(kept_img), self.axis_map)


# ---------------------------------------------------------------------------
# hull extension
# ---------------------------------------------------------------------------


def _axis_kernels(tuple_: Sequence[ModelElement], field: FieldCtx) -> dict:
    """axis -> kernel of the axis projection composed with the tuple map."""
    out = {}
    axes = sorted({axis for el in tuple_ for axis in el.axes()})
    for axis in axes:
        out[axis] = tuple_kernel([proj_axis(el, axis) for el in tuple_], field)
    return out


def extend_to_hat(a: Sequence[ModelElement], b: Sequence[ModelElement]) -> PartialIso:
    """Extend a_i -> b_i to an isomorphism of the hulls of the spans.

    Both tuples must lie in the axis span and have equal invariants;
    otherwise NotQfEquivalent is raised.  The axis bijection is canonical:
    axes are grouped by their projection kernel and matched in axis-index
    order inside each group.
    """
    a, b = tuple(a), tuple(b)
    for el in a + b:
        if not el.in_F():
            raise NotInF(f"hull extension needs tuples in the axis span, got {el}")
    if qf_invariant_mixed(a) != qf_invariant_mixed(b):
        raise NotQfEquivalent("tuples have different quantifier-free invariants")
    field = a[0].field if a else b[0].field if b else None
    if field is None:
        return PartialIso.empty(FieldCtx.rationals())

    kernels_a = _axis_kernels(a, field)
    kernels_b = _axis_kernels(b, field)
    groups_a: dict = {}
    for axis, ker in kernels_a.items():
        groups_a.setdefault(ker.key(), []).append(axis)
    groups_b: dict = {}
    for axis, ker in kernels_b.items():
        groups_b.setdefault(ker.key(), []).append(axis)
    if set(groups_a) != set(groups_b) or any(len(groups_a[k]) != len(groups_b[k]) for k in groups_a):
        raise NotQfEquivalent("projection-kernel multisets do not match")

    sigma = {}
    for key in groups_a:
        for ya, yb in zip(sorted(groups_a[key]), sorted(groups_b[key])):
            sigma[ya] = yb

    dom, img = [], []
    for ya, yb in sigma.items():
        for ai, bi in zip(a, b):
            pa, pb = proj_axis(ai, ya), proj_axis(bi, yb)
            if pa.is_zero():
                continue  # e_i in the kernel on both sides
            dom.append(pa)
            img.append(pb)
    dom.extend(a)
    img.extend(b)
    return PartialIso(field, tuple(dom), tuple(img), tuple(sorted(sigma.items())))


# ---------------------------------------------------------------------------
# the back-and-forth step
# ---------------------------------------------------------------------------


def _free_shadow(el: ModelElement) -> ModelElement:
    return ModelElement(el.field, (), el.free_part)


def back_and_forth_step(f: PartialIso, a: ModelElement, source: Model, target: Model):
    """Extend ``f`` so that its domain span contains ``a``.

    Returns (extended iso, image of ``a``).  Witness material that the
    target model cannot supply raises TargetNotRich; with a rich target the
    step always succeeds.
    """
    try:
        return _step(f, a, source, target)
    except FragmentExhausted as exc:
        raise TargetNotRich(str(exc)) from exc


def _step(f: PartialIso, a: ModelElement, source: Model, target: Model):
    field = f.field
    D, E = list(f.domain_generators), list(f.image_generators)
    if f.contains(a):
        return f, f.apply(a)

    # case (i): the element brings a new free direction; any fresh free
    # coordinate on the other side matches it.
    free_coeffs = span_membership(_free_shadow(a), SubspaceHandle(tuple(_free_shadow(d) for d in D)))
    if free_coeffs is None:
        b = target.fe(target.fresh_free_coord(E))
        return f.extended(a, b), b

    # otherwise reduce to an element of the axis span
    correction = ModelElement.zero(field)
    for c, d in zip(free_coeffs, D):
        correction = correction + d.scale(c)
    a_f = a - correction  # in F(M)
    assert a_f.in_F()

    # hull of the axis-span part of the domain
    vf = _vf_basis(D, field)
    u = [_combine(D, coeffs, field) for coeffs in vf]
    u_img = [_combine(E, coeffs, field) for coeffs in vf]
    hat = extend_to_hat(u, u_img)
    combined = PartialIso(
        field,
        tuple(D) + hat.domain_generators,
        tuple(E) + hat.image_generators,
        hat.axis_map,
    )
    if combined.contains(a_f):
        b = combined.apply(a)
        return combined.extended(a, b).reduced(), b

    # mixed case: mirror the support of a_f component by component
    sigma = hat.sigma()
    hull_axis = {}
    for ya, yb in sigma.items():
        hull_axis[ya] = ([proj_axis(el, ya) for el in u], [proj_axis(el, yb) for el in u_img])
    used_img = E + list(hat.image_generators)
    b_f = ModelElement.zero(field)
    for axis in a_f.axes():
        m_comp = proj_axis(a_f, axis)
        if axis in sigma:
            dom_projs, img_projs = hull_axis[axis]
            coeffs = span_membership(m_comp, SubspaceHandle(tuple(dom_projs)))
            if coeffs is not None:
                n_comp = _combine(img_projs, coeffs, field)
            else:
                # on a known axis but outside the hull: fresh coordinate there
                n_comp = target.e(sigma[axis], target.fresh_coord(sigma[axis], used_img))
        else:
            dim_req = None if target.is_rich else source.axis_dim(axis)
            fresh_axis = target.fresh_axis(used_img, dim=dim_req)
            n_comp = target.e(fresh_axis, 0)
        used_img.append(n_comp)
        b_f = b_f + n_comp
    extended = combined.extended(a_f, b_f)
    b = extended.apply(a)
    return extended.extended(a, b).reduced(), b


def _vf_basis(D: Sequence[ModelElement], field: FieldCtx):
    """Basis of {c : the free parts of the combination cancel}."""
    ker = tuple_kernel([_free_shadow(d) for d in D], field)
    return list(ker.basis)


def _combine(els: Sequence[ModelElement], coeffs, field: FieldCtx) -> ModelElement:
    out = ModelElement.zero(field)
    for c, el in zip(coeffs, els):
        out = out + el.scale(c)
    return out


# ---------------------------------------------------------------------------
# the generator-level isomorphism game between fragments
# ---------------------------------------------------------------------------


def fragment_isomorphism_game(m1: Model, m2: Model) -> PartialIso | None:
    """Build an isomorphism between two finite fragments by iterated
    back-and-forth steps over their coordinate bases, or report failure.

    Success is equivalent to the fragments having equal descriptors; a step
    fails exactly when one side cannot supply matching fresh material.
    """
    basis1, basis2 = m1.basis_elements(), m2.basis_elements()
    f = PartialIso.empty(m1.field)
    try:
        while True:
            x = next((el for el in basis1 if not f.contains(el)), None)
            if x is not None:
                f, _ = back_and_forth_step(f, x, m1, m2)
                continue
            g = f.inverse()
            y = next((el for el in basis2 if not g.contains(el)), None)
            if y is not None:
                g, _ = back_and_forth_step(g, y, m2, m1)
                f = g.inverse()
                continue
            return f
    except (TargetNotRich, NotQfEquivalent):
        return None
