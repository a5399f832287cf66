"""Finite-field counterexample: quantifier-free equivalent pairs whose spans
have different weights.

Over GF(p) pick parallel independent pairs m_i, m_i' on p distinct axes and
one extra element m on a fresh axis, and set

    a0 = m_0 + ... + m_{p-1}        a1 = m_0' + ... + m_{p-1}'
    b0 = a0                         b1 = m + l_1 m_1 + ... + l_{p-1} m_{p-1}

with (l_i) running over every nonzero scalar.  Each combination
lambda a0 + mu a1 or lambda b0 + mu b1 with lambda, mu nonzero has weight
exactly p (on the b side, scaling makes exactly one coefficient cancel while
the fresh axis enters), so the pairs are quantifier-free equivalent; yet the
spans touch p and p + 1 axes.  The sum over the b side runs through all p - 1
nonzero scalars: stopping one short would leave b1 at weight p - 1 and break
the weight computation above.
"""

from __future__ import annotations

import itertools

from .errors import FieldNotFinite
from .fields import FieldCtx
from .model import Model, ModelElement, rich_model, weight


def construct_counterexample(p: int):
    """The pair of pairs (a, b) over GF(p), built in a rich model.

    Returns (a, b, model) with a = (a0, a1), b = (b0, b1).
    """
    field = FieldCtx.prime_field(p)
    model = rich_model(field)
    m = [model.e(i, 0) for i in range(p)]
    m_prime = [model.e(i, 1) for i in range(p)]
    fresh = model.e(p, 0)

    a0 = _sum(model, m)
    a1 = _sum(model, m_prime)
    b0 = a0
    b1 = fresh + _sum(model, [m[i].scale(i) for i in range(1, p)])
    return (a0, a1), (b0, b1), model


def _sum(model: Model, elements) -> ModelElement:
    out = model.zero()
    for el in elements:
        out = out + el
    return out


def brute_qf_equiv(a, b) -> bool:
    """Exhaustive quantifier-free equivalence of two pairs over a finite
    field: every atom about a pair is a zero test or a sumset test of one
    scalar combination, so comparing the zero pattern and the weight of all
    p^2 combinations decides equivalence completely."""
    field = a[0].field
    if field.is_infinite:
        raise FieldNotFinite("exhaustive comparison needs a finite field")
    for lam, mu in itertools.product(field.elements(), repeat=2):
        ea = a[0].scale(lam) + a[1].scale(mu)
        eb = b[0].scale(lam) + b[1].scale(mu)
        if ea.is_zero() != eb.is_zero():
            return False
        if weight(ea) != weight(eb):
            return False
    return True


def combination_weight_table(pair):
    """Rows (lambda, mu, weight) for all scalar combinations of a pair."""
    field = pair[0].field
    rows = []
    for lam, mu in itertools.product(field.elements(), repeat=2):
        rows.append((lam, mu, weight(pair[0].scale(lam) + pair[1].scale(mu))))
    return rows
