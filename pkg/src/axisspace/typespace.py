"""Classification of 1-types over finitely generated fragments.

Over a fragment A there are three kinds of elements: those realized in A;
those adding a fresh free direction (one type: no translate ever meets the
axis span); and those with x - m landing in some sumset X^n, classified by
the minimal such n together with a canonical translate m.  Two non-realized
elements with the same descriptor and fresh supports are conjugate over the
fragment, which :func:`conjugacy_witness` demonstrates explicitly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import NotSameType
from .fields import FieldCtx
from .invariant import qf_equiv
from .iso import PartialIso
from .model import (
    ModelElement,
    SubspaceHandle,
    proj_axis,
    span_membership,
    to_coordinate_vectors,
    tuple_kernel,
    weight,
)
from .linalg import coords_in_basis


@dataclass(frozen=True)
class Realized:
    element: ModelElement

    def __repr__(self):
        return f"Realized({self.element})"


@dataclass(frozen=True)
class GenericFree:
    def __repr__(self):
        return "GenericFree"


@dataclass(frozen=True)
class SumType:
    n: int
    coset: ModelElement

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("sumset type index must be positive")

    def __repr__(self):
        return f"SumType(n={self.n}, coset={self.coset})"


TypeDescriptor = object  # Realized | GenericFree | SumType


def _free_shadow(el: ModelElement) -> ModelElement:
    return ModelElement(el.field, (), el.free_part)


def classify(a: ModelElement, fragment: SubspaceHandle) -> TypeDescriptor:
    """Type of ``a`` over the span of the fragment generators.

    Realized when a is in the span; GenericFree when no translate by a
    fragment element reaches the axis span; otherwise SumType(n, m) with n
    the minimal weight of a - m over fragment translates m, and m the
    canonical translate attaining it (first in generator order).
    """
    field = a.field
    gens = list(fragment.generators)
    if span_membership(a, fragment) is not None:
        return Realized(a)
    free_coeffs = span_membership(
        _free_shadow(a), SubspaceHandle(tuple(_free_shadow(g) for g in gens))
    )
    if free_coeffs is None:
        return GenericFree()
    m0 = ModelElement.zero(field)
    for c, g in zip(free_coeffs, gens):
        m0 = m0 + g.scale(c)
    c0 = a - m0  # in the axis span
    assert c0.in_F()
    # translates keeping a - m in the axis span: m0 + (fragment axis-span part)
    vf = tuple_kernel([_free_shadow(g) for g in gens], field)
    f_basis = []
    for row in vf.basis:
        el = ModelElement.zero(field)
        for c, g in zip(row, gens):
            el = el + g.scale(c)
        f_basis.append(el)
    n, v = _min_weight_in_coset(c0, f_basis, field)
    return SumType(n, m0 + v)


def _min_weight_in_coset(c0: ModelElement, f_basis: list, field: FieldCtx):
    """Minimize weight(c0 - v) over the span of f_basis.

    Enumerates candidate support sets by size: the weight is s exactly when
    some v matches c0 on all axes outside a chosen s-element set and no
    smaller set works.  Returns (min weight, the canonical v attaining it).
    """
    axes = sorted(set(c0.axes()) | {ax for b in f_basis for ax in b.axes()})
    if not f_basis:
        return weight(c0), ModelElement.zero(field)
    for s in range(len(axes) + 1):
        for keep in itertools.combinations(axes, s):
            v = _solve_axis_match(c0, f_basis, [ax for ax in axes if ax not in keep], field)
            if v is not None:
                return weight(c0 - v), v
    return weight(c0), ModelElement.zero(field)


def _solve_axis_match(c0: ModelElement, f_basis: list, match_axes: list, field: FieldCtx):
    """Element v of the span of f_basis with proj(v) = proj(c0) on each of
    match_axes, or None; canonical solution of the linear system."""
    shadows = []
    for el in [c0] + f_basis:
        parts = {k: val for k, val in el.axis_part if k[0] in match_axes}
        shadows.append(ModelElement(field, tuple(sorted(parts.items())), ()))
    vectors, _ = to_coordinate_vectors(field, shadows)
    target, basis_rows = vectors[0], vectors[1:]
    coeffs = coords_in_basis(field, basis_rows, target) if basis_rows else (None if any(
        not field.is_zero(x) for x in target
    ) else ())
    if coeffs is None:
        return None
    v = ModelElement.zero(field)
    for c, b in zip(coeffs, f_basis):
        v = v + b.scale(c)
    return v


def conjugacy_witness(a: ModelElement, b: ModelElement, fragment: SubspaceHandle) -> PartialIso:
    """Partial isomorphism fixing the fragment pointwise with a -> b.

    Requires equal non-realized type descriptors; built by matching the
    support decompositions of the reduced elements piecewise and validated
    on the quantifier-free invariant of the extended tuples.
    """
    ta, tb = classify(a, fragment), classify(b, fragment)
    if isinstance(ta, Realized) or isinstance(tb, Realized):
        raise NotSameType("conjugacy is for non-realized elements")
    if type(ta) is not type(tb):
        raise NotSameType(f"different classifications: {ta} vs {tb}")
    field = a.field
    gens = list(fragment.generators)

    if isinstance(ta, GenericFree):
        pairs = [(a, b)]
    else:
        if ta != tb:
            raise NotSameType(f"different sum types: {ta} vs {tb}")
        ra, rb = a - ta.coset, b - tb.coset
        parts_a = _ordered_support(ra)
        parts_b = _ordered_support(rb)
        pairs = list(zip(parts_a, parts_b)) + [(a, b)]

    dom = tuple(gens) + tuple(x for x, _ in pairs)
    img = tuple(gens) + tuple(y for _, y in pairs)
    iso = PartialIso(field, dom, img)  # raises NotQfEquivalent on bad relations
    if not qf_equiv(dom, img):
        raise NotSameType("support matching does not preserve the invariant")
    if iso.apply(a) != b:
        raise NotSameType("matched supports do not carry a to b")
    return iso


def _ordered_support(el: ModelElement) -> list:
    return [proj_axis(el, axis) for axis in sorted(el.axes())]
