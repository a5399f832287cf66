"""Canonical models and the support / weight / projection calculus.

A canonical model is a direct sum of axis blocks and free coordinates.  An
element stores, per (axis, coordinate) pair and per free coordinate, a
nonzero scalar.  The distinguished set X consists of the elements supported
on at most one axis with no free part; X^n is the set of sums of n members
of X, equivalently the elements of weight at most n without free part.

Models are pure values: fresh axes and coordinates are computed relative to
explicit element sets rather than allocated from mutable counters, so every
operation here is a function and thread safety is trivial.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadDescriptor,
    FragmentExhausted,
    NoGenericWitness,
    NotInF,
    NotOnAxis,
)
from .fields import FieldCtx, check_same_field
from .linalg import (
    Subspace,
    coords_in_basis,
    kernel,
    rref,
)


class _Aleph0:
    """The countable infinite cardinal symbol."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "aleph0"

    def __reduce__(self):
        return (_Aleph0, ())


ALEPH0 = _Aleph0()

CardinalSymbol = object  # int >= 0 or ALEPH0

AxisId = int


def _card_ok(c) -> bool:
    return c is ALEPH0 or (isinstance(c, int) and c >= 0)


def _card_key(c):
    return (1, 0) if c is ALEPH0 else (0, c)


@dataclass(frozen=True)
class ModelDescriptor:
    """Isomorphism invariant of a model or fragment.

    ``f_codim`` is the codimension of the span of the axes; ``axis_census``
    maps an axis dimension (positive int or ALEPH0) to how many axes have
    that dimension (int or ALEPH0).  Stored sorted so equality is structural.
    """

    f_codim: CardinalSymbol
    axis_census: tuple  # tuple of (dimension, count), canonically sorted

    def __post_init__(self):
        if not _card_ok(self.f_codim):
            raise BadDescriptor(f"bad codimension symbol {self.f_codim!r}")
        seen = set()
        for dim, count in self.axis_census:
            if not _card_ok(dim) or dim == 0:
                raise BadDescriptor(f"bad axis dimension {dim!r}")
            if not _card_ok(count):
                raise BadDescriptor(f"bad axis count {count!r}")
            if dim in seen:
                raise BadDescriptor(f"duplicate census entry for dimension {dim!r}")
            seen.add(dim)
        expected = tuple(sorted((e for e in self.axis_census if e[1] != 0), key=lambda e: _card_key(e[0])))
        if tuple(self.axis_census) != expected:
            raise BadDescriptor("census not in canonical order (use make_descriptor)")

    @property
    def is_finite_fragment(self) -> bool:
        if self.f_codim is ALEPH0:
            return False
        return all(dim is not ALEPH0 and count is not ALEPH0 for dim, count in self.axis_census)

    @property
    def axis_count(self) -> CardinalSymbol:
        total = 0
        for _, count in self.axis_census:
            if count is ALEPH0:
                return ALEPH0
            total += count
        return total


def make_descriptor(f_codim, axis_census: Mapping) -> ModelDescriptor:
    """Build a descriptor from a {dimension: count} mapping."""
    entries = tuple(sorted(((d, c) for d, c in axis_census.items() if c != 0), key=lambda e: _card_key(e[0])))
    return ModelDescriptor(f_codim, entries)


RICH_DESCRIPTOR = make_descriptor(ALEPH0, {ALEPH0: ALEPH0})


def descriptor_iso(d1: ModelDescriptor, d2: ModelDescriptor) -> bool:
    """Componentwise equality; this decides isomorphism of the described models."""
    return d1 == d2


@dataclass(frozen=True)
class ModelElement:
    """Finite-support vector split into axis components and free coordinates.

    ``axis_part`` maps (axis, coordinate) to a nonzero scalar; ``free_part``
    maps a free coordinate to a nonzero scalar.  Both are stored as sorted
    tuples so equality and hashing are structural.
    """

    field: FieldCtx
    axis_part: tuple  # sorted ((axis, coord), scalar) pairs, scalars nonzero
    free_part: tuple  # sorted (coord, scalar) pairs, scalars nonzero

    # -- constructors ----------------------------------------------------

    @staticmethod
    def make(field: FieldCtx, axis_part: Mapping = (), free_part: Mapping = ()) -> "ModelElement":
        ap = tuple(sorted((k, field.of(v)) for k, v in dict(axis_part).items() if not field.is_zero(field.of(v))))
        fp = tuple(sorted((k, field.of(v)) for k, v in dict(free_part).items() if not field.is_zero(field.of(v))))
        return ModelElement(field, ap, fp)

    @staticmethod
    def zero(field: FieldCtx) -> "ModelElement":
        return ModelElement(field, (), ())

    # -- views ------------------------------------------------------------

    def axis_dict(self) -> dict:
        return dict(self.axis_part)

    def free_dict(self) -> dict:
        return dict(self.free_part)

    def is_zero(self) -> bool:
        return not self.axis_part and not self.free_part

    def in_F(self) -> bool:
        """True when the element lies in the span of the axes."""
        return not self.free_part

    def axes(self) -> tuple:
        return tuple(sorted({axis for (axis, _), _ in self.axis_part}))

    def coords_on_axis(self, axis: AxisId) -> dict:
        return {coord: c for (a, coord), c in self.axis_part if a == axis}

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "ModelElement") -> "ModelElement":
        check_same_field(self.field, other.field)
        f = self.field
        ap = self.axis_dict()
        for k, v in other.axis_part:
            s = f.add(ap.get(k, f.zero), v)
            if f.is_zero(s):
                ap.pop(k, None)
            else:
                ap[k] = s
        fp = self.free_dict()
        for k, v in other.free_part:
            s = f.add(fp.get(k, f.zero), v)
            if f.is_zero(s):
                fp.pop(k, None)
            else:
                fp[k] = s
        return ModelElement(self.field, tuple(sorted(ap.items())), tuple(sorted(fp.items())))

    def __neg__(self) -> "ModelElement":
        f = self.field
        return ModelElement(
            self.field,
            tuple((k, f.neg(v)) for k, v in self.axis_part),
            tuple((k, f.neg(v)) for k, v in self.free_part),
        )

    def __sub__(self, other: "ModelElement") -> "ModelElement":
        return self + (-other)

    def scale(self, c) -> "ModelElement":
        f = self.field
        c = f.of(c)
        if f.is_zero(c):
            return ModelElement.zero(self.field)
        return ModelElement(
            self.field,
            tuple((k, f.mul(c, v)) for k, v in self.axis_part),
            tuple((k, f.mul(c, v)) for k, v in self.free_part),
        )

    def __rmul__(self, c) -> "ModelElement":
        return self.scale(c)

    # -- printing -----------------------------------------------------------

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        f = self.field
        parts = []
        for (axis, coord), c in self.axis_part:
            atom = f"e{axis}_{coord}"
            parts.append(atom if c == f.one else f"{f.format(c)}*{atom}")
        for coord, c in self.free_part:
            atom = f"f{coord}"
            parts.append(atom if c == f.one else f"{f.format(c)}*{atom}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"<{self} over {self.field}>"


class Model:
    """A canonical model (or finitely generated fragment) of the theory.

    The descriptor fixes which axes exist and how large they are; rich models
    (all cardinals ALEPH0) never exhaust.  Named constants, used by the
    formula evaluator and the CLI, live in ``constants``.
    """

    def __init__(self, descriptor: ModelDescriptor, field: FieldCtx, constants: Mapping | None = None):
        self.descriptor = descriptor
        self.field = field
        self.constants = dict(constants or {})
        # Materialized axis dimensions, in a deterministic order: finite
        # dimensions ascending, then ALEPH0 axes.  Fragments get a concrete
        # finite list; models with ALEPH0 many axes extend it on demand.
        dims: list = []
        for dim, count in descriptor.axis_census:
            if count is ALEPH0:
                self._tail_dim = dim  # axes from len(dims) on all have this dimension
                break
            dims.extend([dim] * count)
        else:
            self._tail_dim = None
        self._head_dims = dims

    # -- structure queries ----------------------------------------------

    @property
    def axis_count(self) -> CardinalSymbol:
        return ALEPH0 if self._tail_dim is not None else len(self._head_dims)

    def has_axis(self, axis: AxisId) -> bool:
        return axis < len(self._head_dims) or self._tail_dim is not None

    def axis_dim(self, axis: AxisId) -> CardinalSymbol:
        if axis < len(self._head_dims):
            return self._head_dims[axis]
        if self._tail_dim is not None:
            return self._tail_dim
        raise FragmentExhausted(f"axis {axis} does not exist in this fragment")

    @property
    def is_rich(self) -> bool:
        """Richness in the sense required by the quantifier-elimination engine:
        infinitely many axes, every axis infinite-dimensional, and infinite
        codimension of the span of the axes."""
        return (
            self.descriptor.f_codim is ALEPH0
            and self._tail_dim is ALEPH0
            and all(d is ALEPH0 for d in self._head_dims)
        )

    # -- element constructors ---------------------------------------------

    def e(self, axis: AxisId, coord: int, c=1) -> ModelElement:
        """Basis element of an axis block."""
        self._check_axis_coord(axis, coord)
        return ModelElement.make(self.field, {(axis, coord): c})

    def fe(self, coord: int, c=1) -> ModelElement:
        """Basis element of a free coordinate."""
        if self.descriptor.f_codim is not ALEPH0 and coord >= self.descriptor.f_codim:
            raise FragmentExhausted(f"free coordinate {coord} exceeds codimension {self.descriptor.f_codim}")
        return ModelElement.make(self.field, {}, {coord: c})

    def zero(self) -> ModelElement:
        return ModelElement.zero(self.field)

    def element(self, axis_part: Mapping = (), free_part: Mapping = ()) -> ModelElement:
        el = ModelElement.make(self.field, axis_part, free_part)
        for (axis, coord), _ in el.axis_part:
            self._check_axis_coord(axis, coord)
        for coord, _ in el.free_part:
            if self.descriptor.f_codim is not ALEPH0 and coord >= self.descriptor.f_codim:
                raise FragmentExhausted(f"free coordinate {coord} exceeds codimension {self.descriptor.f_codim}")
        return el

    def _check_axis_coord(self, axis: AxisId, coord: int) -> None:
        dim = self.axis_dim(axis)  # raises if the axis does not exist
        if dim is not ALEPH0 and coord >= dim:
            raise FragmentExhausted(f"coordinate {coord} exceeds dimension {dim} of axis {axis}")

    # -- fresh material, relative to explicit elements ---------------------

    def fresh_axis(self, used: Iterable[ModelElement] = (), dim=None) -> AxisId:
        """Smallest axis untouched by ``used`` whose dimension matches ``dim``
        (any dimension if None)."""
        taken = set()
        for el in used:
            taken.update(el.axes())
        axis = 0
        while True:
            if not self.has_axis(axis):
                raise FragmentExhausted("no fresh axis available in this fragment")
            if axis not in taken and (dim is None or self.axis_dim(axis) == dim):
                return axis
            axis += 1

    def fresh_coord(self, axis: AxisId, used: Iterable[ModelElement] = ()) -> int:
        """Smallest coordinate on ``axis`` unused by ``used``."""
        taken = set()
        for el in used:
            taken.update(el.coords_on_axis(axis).keys())
        coord = next(c for c in range(len(taken) + 1) if c not in taken)
        dim = self.axis_dim(axis)
        if dim is not ALEPH0 and coord >= dim:
            raise FragmentExhausted(f"axis {axis} of dimension {dim} has no fresh coordinate")
        return coord

    def fresh_free_coord(self, used: Iterable[ModelElement] = ()) -> int:
        taken = set()
        for el in used:
            taken.update(el.free_dict().keys())
        coord = next(c for c in range(len(taken) + 1) if c not in taken)
        if self.descriptor.f_codim is not ALEPH0 and coord >= self.descriptor.f_codim:
            raise FragmentExhausted("no fresh free coordinate available in this fragment")
        return coord

    def basis_elements(self) -> list:
        """The full coordinate basis; only available for finite fragments."""
        if not self.descriptor.is_finite_fragment:
            raise BadDescriptor("basis enumeration requires a finite fragment descriptor")
        out = []
        for axis, dim in enumerate(self._head_dims):
            for coord in range(dim):
                out.append(self.e(axis, coord))
        for coord in range(self.descriptor.f_codim):
            out.append(self.fe(coord))
        return out

    def __repr__(self):
        return f"Model({self.descriptor!r}, {self.field})"


def canonical_model(descriptor: ModelDescriptor, field: FieldCtx, constants: Mapping | None = None) -> Model:
    """The canonical model of the descriptor: every element has finite support
    split over independent axis blocks and free coordinates.

    A descriptor with no axes at all is rejected unless it is a pure finite
    fragment (models of the theory proper need infinitely many axes)."""
    if descriptor.axis_count == 0 and not descriptor.is_finite_fragment:
        raise BadDescriptor("a model with no axes cannot be rich")
    return Model(descriptor, field, constants)


def rich_model(field: FieldCtx, constants: Mapping | None = None) -> Model:
    return canonical_model(RICH_DESCRIPTOR, field, constants)


# ---------------------------------------------------------------------------
# support / weight / projection calculus
# ---------------------------------------------------------------------------


def _require_in_F(a: ModelElement) -> None:
    if not a.in_F():
        raise NotInF(f"element has a free part: {a}")


def proj_axis(a: ModelElement, axis: AxisId) -> ModelElement:
    """Component of ``a`` on the given axis (zero if absent)."""
    _require_in_F(a)
    return ModelElement.make(a.field, {(ax, c): v for (ax, c), v in a.axis_part if ax == axis})


def support(a: ModelElement) -> set:
    """The unique set of pairwise nonparallel X-members summing to ``a``."""
    _require_in_F(a)
    return {proj_axis(a, axis) for axis in a.axes()}


def axes_of(a: ModelElement) -> set:
    _require_in_F(a)
    return set(a.axes())


def weight(a: ModelElement) -> int:
    _require_in_F(a)
    return len(a.axes())


def in_Xn(a: ModelElement, n: int) -> bool:
    """Membership in the n-fold sumset X^n; X^0 = {0}."""
    return a.in_F() and len(a.axes()) <= n


def in_X(a: ModelElement) -> bool:
    return in_Xn(a, 1)


def parallel(a: ModelElement, b: ModelElement) -> bool:
    """Same-axis relation on X minus 0: equivalent to a + b landing in X."""
    for el in (a, b):
        if el.is_zero() or not in_X(el):
            raise NotOnAxis(f"parallelism needs a nonzero member of X, got {el}")
    return a.axes() == b.axes()


def z_multiple_check(a: ModelElement, k: int) -> bool:
    """Integer multiples never climb the sumset hierarchy: k*a stays in X^w(a)."""
    _require_in_F(a)
    return in_Xn(a.scale(a.field.of(k)), weight(a))


# ---------------------------------------------------------------------------
# finitely generated subspaces of a model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubspaceHandle:
    """Finitely generated subspace of a model, presented by generators.

    All operations depend only on the span, never on the presentation.
    """

    generators: tuple  # tuple of ModelElement

    @staticmethod
    def of(*gens: ModelElement) -> "SubspaceHandle":
        return SubspaceHandle(tuple(gens))

    @property
    def field(self) -> FieldCtx:
        if not self.generators:
            raise ValueError("empty handle has no field; use SubspaceHandle.empty(field) helpers")
        return self.generators[0].field

    def nonzero_generators(self) -> list:
        return [g for g in self.generators if not g.is_zero()]


def _coordinate_table(elements: Sequence[ModelElement]) -> list:
    """Deterministic list of all coordinates touched by the elements."""
    keys = set()
    for el in elements:
        keys.update(("a",) + k for k, _ in el.axis_part)
        keys.update(("f", k) for k, _ in el.free_part)
    return sorted(keys)


def to_coordinate_vectors(field: FieldCtx, elements: Sequence[ModelElement], table=None):
    """Expand elements over a shared coordinate table; returns (vectors, table)."""
    if table is None:
        table = _coordinate_table(elements)
    index = {k: i for i, k in enumerate(table)}
    vectors = []
    for el in elements:
        row = [field.zero] * len(table)
        for k, v in el.axis_part:
            row[index[("a",) + k]] = v
        for k, v in el.free_part:
            row[index[("f", k)]] = v
        vectors.append(tuple(row))
    return vectors, table


def span_membership(a: ModelElement, handle: SubspaceHandle) -> tuple:
    """Coefficients expressing ``a`` over the generators, or None."""
    gens = list(handle.generators)
    if not gens:
        return () if a.is_zero() else None
    field = gens[0].field
    vectors, table = to_coordinate_vectors(field, gens + [a])
    return coords_in_basis(field, vectors[:-1], vectors[-1])


def in_span(a: ModelElement, handle: SubspaceHandle) -> bool:
    return span_membership(a, handle) is not None


def tuple_kernel(elements: Sequence[ModelElement], field: FieldCtx) -> Subspace:
    """Kernel {c : sum_i c_i elements_i = 0} as a subspace of K^len."""
    if not elements:
        return kernel(field, [], 0)
    vectors, _ = to_coordinate_vectors(field, list(elements))
    # rows of the linear map K^n -> M are the coordinates
    ncols = len(elements)
    rows = []
    for coord in range(len(vectors[0])):
        rows.append(tuple(vectors[i][coord] for i in range(ncols)))
    return kernel(field, rows, ncols)


def span_basis(handle: SubspaceHandle, field: FieldCtx) -> list:
    """Canonical basis of the span as model elements (RREF over coordinates)."""
    gens = [g for g in handle.generators if not g.is_zero()]
    if not gens:
        return []
    vectors, table = to_coordinate_vectors(field, gens)
    rows, _ = rref(field, vectors)
    out = []
    for row in rows:
        axis_part, free_part = {}, {}
        for k, v in zip(table, row):
            if field.is_zero(v):
                continue
            if k[0] == "a":
                axis_part[(k[1], k[2])] = v
            else:
                free_part[k[1]] = v
        out.append(ModelElement(field, tuple(sorted(axis_part.items())), tuple(sorted(free_part.items()))))
    return out


def _require_handle_in_F(handle: SubspaceHandle) -> None:
    for g in handle.generators:
        if not g.in_F():
            raise NotInF(f"generator has a free part: {g}")


def axes_of_subspace(handle: SubspaceHandle) -> set:
    """Axes with nonzero projection; by linearity, the union over generators."""
    _require_handle_in_F(handle)
    out: set = set()
    for g in handle.generators:
        out.update(g.axes())
    return out


def weight_of_subspace(handle: SubspaceHandle) -> int:
    return len(axes_of_subspace(handle))


def pi_A(a: ModelElement, handle: SubspaceHandle) -> ModelElement:
    """Sum of the projections of ``a`` onto the axes of the subspace."""
    _require_in_F(a)
    _require_handle_in_F(handle)
    axes = axes_of_subspace(handle)
    field = a.field
    out = ModelElement.zero(field)
    for axis in sorted(axes):
        out = out + proj_axis(a, axis)
    return out


def hull_hat(handle: SubspaceHandle) -> SubspaceHandle:
    """Span of all axis projections of the generators; contains the span."""
    _require_handle_in_F(handle)
    comps = []
    for g in handle.generators:
        for axis in g.axes():
            comps.append(proj_axis(g, axis))
    return SubspaceHandle(tuple(comps))


def witness_star(handle: SubspaceHandle) -> ModelElement:
    """An element of the span meeting every axis of the subspace.

    Over an infinite field the proof-driven construction always succeeds:
    walk a basis keeping an element whose support already covers the axes
    seen, and slide past the finitely many scalars that would collide.
    Over a finite field every scalar may collide; then the span is searched
    exhaustively and NoGenericWitness reports genuine failure.
    """
    _require_handle_in_F(handle)
    gens = handle.nonzero_generators()
    if not gens:
        return ModelElement.zero(handle.generators[0].field) if handle.generators else _empty_handle_error()
    field = gens[0].field
    basis = span_basis(SubspaceHandle(tuple(gens)), field)
    target_axes = axes_of_subspace(handle)

    if field.is_infinite:
        acc = basis[0]
        for b in basis[1:]:
            critical = set()
            for axis in set(acc.axes()) & set(b.axes()):
                lam = _component_ratio(acc, b, axis)
                if lam is not None:
                    critical.add(lam)
            k = 1
            while field.of(k) in critical or field.is_zero(field.of(k)):
                k += 1
            acc = acc - b.scale(field.of(k))
        assert set(acc.axes()) == target_axes
        return acc

    # finite field: exhaust the span (projectively, leading coefficient 1)
    found_best = None
    for coeffs in _iter_coeff_vectors(field, len(basis)):
        el = ModelElement.zero(field)
        for c, b in zip(coeffs, basis):
            el = el + b.scale(c)
        if set(el.axes()) == target_axes:
            return el
    raise NoGenericWitness(
        f"no single element of the span meets all {len(target_axes)} axes over {field}"
    )


def _empty_handle_error():
    raise ValueError("witness_star of an empty handle; pass at least one generator")


def _component_ratio(a: ModelElement, b: ModelElement, axis: AxisId):
    """The unique lambda with proj_axis(a) = lambda * proj_axis(b), if any."""
    field = a.field
    ca = a.coords_on_axis(axis)
    cb = b.coords_on_axis(axis)
    if set(ca) != set(cb):
        return None
    lam = None
    for coord, v in ca.items():
        r = field.div(v, cb[coord])
        if lam is None:
            lam = r
        elif lam != r:
            return None
    return lam


def _iter_coeff_vectors(field: FieldCtx, n: int):
    """All coefficient vectors over a finite field with first nonzero entry 1."""
    if n == 0:
        return
    p = field.p
    for lead in range(n):
        # entries before `lead` are zero, entry at `lead` is one
        def rec(i, acc):
            if i == n:
                yield tuple(acc)
                return
            for v in range(p):
                acc.append(v)
                yield from rec(i + 1, acc)
                acc.pop()
        yield from rec(lead + 1, [field.zero] * lead + [field.one])
