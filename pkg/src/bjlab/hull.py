"""Vertex enumeration of {x : a.x <= 1 for all rows a} by double description.

The polytope is homogenised to the cone {(x, t) : t >= 0, t - a.x >= 0}, whose
extreme rays with t > 0 are the vertices.  Rays are kept as primitive integer
vectors so that the iteration never grows denominators.  Because every
centrally symmetric ball is the polar of its own facet set, the same routine
computes facets from vertices.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import UnboundedBall
from .rational import independent_subset, inverse, matrix, primitive_int


def _int_dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _primitive(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def vertices_of_polar(rows: Sequence[Sequence[Fraction]]) -> list[tuple[Fraction, ...]]:
    """Vertices of P = {x : a.x <= 1 for a in rows}.

    Raises UnboundedBall when P is unbounded, which for a set of rows closed
    under negation happens exactly when the rows fail to span.
    """
    if not rows:
        raise UnboundedBall("no constraints")
    n = len(rows[0])
    d = n + 1
    cons = [primitive_int(tuple(-c for c in a) + (Fraction(1),)) for a in rows]
    cons.append((0,) * n + (1,))  # t >= 0

    basis_idx = independent_subset([tuple(map(Fraction, c)) for c in cons])
    if len(basis_idx) < d:
        raise UnboundedBall("constraints do not span the dual space")

    # rays of the initial simplicial cone are the columns of A0^{-1}
    inv = inverse(matrix([cons[i] for i in basis_idx]))
    rays = []
    zeros = []
    for j in range(d):
        col = primitive_int([inv[i][j] for i in range(d)])
        rays.append(col)
        zeros.append(sum(1 << basis_idx[i] for i in range(d) if i != j))

    remaining = [i for i in range(len(cons)) if i not in set(basis_idx)]
    for ci in remaining:
        a = cons[ci]
        vals = [_int_dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        if not neg:
            for i, v in enumerate(vals):
                if v == 0:
                    zeros[i] |= 1 << ci
            continue
        new_rays = []
        new_zeros = []
        for p in pos:
            for q in neg:
                common = zeros[p] & zeros[q]
                if bin(common).count("1") < d - 2:
                    continue
                if any(k != p and k != q and zeros[k] & common == common for k in range(len(rays))):
                    continue
                vp, vq = vals[p], -vals[q]
                r = tuple(vp * y + vq * x for x, y in zip(rays[p], rays[q]))
                new_rays.append(_primitive(r))
                new_zeros.append(common | (1 << ci))
        keep = [i for i, v in enumerate(vals) if v >= 0]
        rays = [rays[i] for i in keep] + new_rays
        zeros = [zeros[i] | ((1 << ci) if vals[i] == 0 else 0) for i in keep] + new_zeros

    out = []
    for r in rays:
        t = r[-1]
        if t <= 0:
            raise UnboundedBall("recession direction found")
        out.append(tuple(Fraction(x, t) for x in r[:-1]))
    return sorted(set(out))
