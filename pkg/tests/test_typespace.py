"""1-type classification over fragments and explicit conjugacy witnesses."""

import itertools
import random

import pytest

from axisspace.errors import NotSameType
from axisspace.fields import FieldCtx
from axisspace.invariant import qf_equiv
from axisspace.model import SubspaceHandle, rich_model, weight
from axisspace.typespace import GenericFree, Realized, SumType, classify, conjugacy_witness

Q = FieldCtx.rationals()


@pytest.fixture
def M():
    return rich_model(Q)


@pytest.fixture
def fragment(M):
    return SubspaceHandle.of(M.e(0, 0) + M.e(1, 0), M.e(0, 1), M.fe(0))


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------


def test_classify_realized(M, fragment):
    a = (M.e(0, 0) + M.e(1, 0)).scale(3) + M.fe(0)
    t = classify(a, fragment)
    assert isinstance(t, Realized) and t.element == a


def test_classify_generic_free(M, fragment):
    assert isinstance(classify(M.fe(7), fragment), GenericFree)
    # axis parts do not rescue an independent free direction
    assert isinstance(classify(M.e(0, 0) + M.fe(7), fragment), GenericFree)


def test_classify_fresh_axes_sum_type(M, fragment):
    a = M.e(8, 0) + M.e(9, 0)
    t = classify(a, fragment)
    assert t == SumType(2, M.zero())


def test_classify_translated_sum_type(M, fragment):
    """A fragment translate reduces the weight; the minimal n sees it."""
    frag_el = M.e(0, 0) + M.e(1, 0)
    a = frag_el + M.e(8, 0)
    t = classify(a, fragment)
    assert isinstance(t, SumType)
    assert t.n == 1
    assert weight(a - t.coset) == 1


def test_classify_minimality_against_grid(M, fragment):
    """The reported n matches a brute-force search over fragment
    combinations with small coefficients."""
    rng = random.Random(5)
    gens = list(fragment.generators)
    grid = []
    for coeffs in itertools.product(range(-2, 3), repeat=len(gens)):
        m = M.zero()
        for c, g in zip(coeffs, gens):
            m = m + g.scale(c)
        grid.append(m)
    for _ in range(25):
        a = _random_mixed(M, rng)
        t = classify(a, fragment)
        if not isinstance(t, SumType):
            continue
        best = min((weight(a - m) for m in grid if (a - m).in_F()), default=None)
        assert best is not None
        assert t.n <= best
        assert (a - t.coset).in_F() and weight(a - t.coset) == t.n


def test_classify_coset_is_canonical(M, fragment):
    a = M.e(8, 0) + M.e(9, 0)
    b = M.e(10, 0) + M.e(11, 0)
    assert classify(a, fragment) == classify(b, fragment)


# ---------------------------------------------------------------------------
# conjugacy witnesses
# ---------------------------------------------------------------------------


def test_conjugacy_identity_case(M, fragment):
    a = M.e(8, 0) + M.e(9, 0)
    f = conjugacy_witness(a, a, fragment)
    assert f.apply(a) == a
    for g in fragment.generators:
        assert f.apply(g) == g


def test_conjugacy_swaps_fresh_axes(M, fragment):
    a = M.e(8, 0) + M.e(9, 0)
    b = M.e(10, 0) + M.e(11, 0)
    f = conjugacy_witness(a, b, fragment)
    assert f.apply(a) == b
    for g in fragment.generators:
        assert f.apply(g) == g
    gens = tuple(fragment.generators)
    assert qf_equiv(gens + (a,), gens + (b,))


def test_conjugacy_generic_free(M, fragment):
    a, b = M.fe(5), M.fe(6) + M.e(0, 5)
    f = conjugacy_witness(a, b, fragment)
    assert f.apply(a) == b
    gens = tuple(fragment.generators)
    assert qf_equiv(gens + (a,), gens + (b,))


def test_conjugacy_rejects_different_types(M, fragment):
    a = M.e(8, 0) + M.e(9, 0)
    b = M.e(10, 0)
    with pytest.raises(NotSameType):
        conjugacy_witness(a, b, fragment)
    with pytest.raises(NotSameType):
        conjugacy_witness(a, M.fe(9), fragment)
    with pytest.raises(NotSameType):
        conjugacy_witness(a, fragment.generators[0], fragment)


def test_conjugacy_uniqueness_property(M, fragment):
    """Equal descriptors with fresh supports are conjugate over the fragment:
    the testable core of type uniqueness."""
    rng = random.Random(31)
    gens = tuple(fragment.generators)
    for n in (1, 2, 3):
        for _ in range(25):
            a = _fresh_support_element(M, rng, n, start=20)
            b = _fresh_support_element(M, rng, n, start=40)
            assert classify(a, fragment) == SumType(n, M.zero())
            f = conjugacy_witness(a, b, fragment)
            assert f.apply(a) == b
            assert qf_equiv(gens + (a,), gens + (b,))


def test_classify_invariant_under_fragment_fixing_iso(M, fragment):
    """Conjugation by a fragment-fixing partial isomorphism preserves the
    descriptor."""
    rng = random.Random(47)
    for n in (1, 2):
        a = _fresh_support_element(M, rng, n, start=20)
        b = _fresh_support_element(M, rng, n, start=40)
        conjugacy_witness(a, b, fragment)
        assert classify(a, fragment) == classify(b, fragment)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _random_mixed(model, rng):
    parts = {}
    for axis in rng.sample(range(6), rng.randrange(1, 4)):
        parts[(axis, rng.randrange(2))] = rng.randint(-3, 3)
    free = {}
    if rng.random() < 0.5:
        free[0] = rng.randint(-2, 2)
    return model.element(parts, free)


def _fresh_support_element(model, rng, n, start):
    axes = rng.sample(range(start, start + 10), n)
    out = model.zero()
    for axis in axes:
        out = out + model.e(axis, rng.randrange(2), rng.choice([1, 2, -1]))
    return out
