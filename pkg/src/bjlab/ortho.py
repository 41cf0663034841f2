"""Supporting functionals, norm derivatives and orthogonality relations.

For a polyhedral norm, J(x) is the convex hull of the facet functionals that
attain ||x|| at x.  Both one-sided norm derivatives are linear optimisations
over J(x), so max/min over those generators is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import rational as R
from .errors import ZeroVector
from .rational import Vec
from .space import PolyhedralSpace


@dataclass(frozen=True)
class SupportFace:
    base_point: Vec
    norm_value: Fraction
    generators: tuple  # extreme points of J(x), sorted

    def values(self, v: Sequence) -> list:
        return [R.dot(g, v) for g in self.generators]


def support_face(space: PolyhedralSpace, x: Sequence) -> SupportFace:
    x = space.check_point(x)
    if R.is_zero(x):
        raise ZeroVector("J(0) is not a face of the dual sphere")
    vals, den = space.facet_values(x)
    top = max(vals)
    gens = tuple(h for h, v in zip(space.facets, vals) if v == top)
    return SupportFace(x, Fraction(top, den), gens)


def _check_pair(space, u, v):
    u, v = space.check_point(u), space.check_point(v)
    if R.is_zero(u):
        raise ZeroVector("norm derivatives are taken at a nonzero point")
    return u, v


def rho_plus(space: PolyhedralSpace, u: Sequence, v: Sequence) -> Fraction:
    u, v = _check_pair(space, u, v)
    j = support_face(space, u)
    return j.norm_value * max(j.values(v))


def rho_minus(space: PolyhedralSpace, u: Sequence, v: Sequence) -> Fraction:
    u, v = _check_pair(space, u, v)
    j = support_face(space, u)
    return j.norm_value * min(j.values(v))


def rho(space: PolyhedralSpace, u: Sequence, v: Sequence) -> Fraction:
    """The M-semi inner product: mean of the two one-sided derivatives."""
    u, v = _check_pair(space, u, v)
    j = support_face(space, u)
    vals = j.values(v)
    return j.norm_value * (max(vals) + min(vals)) / 2


def derivatives(space: PolyhedralSpace, u: Sequence, v: Sequence) -> dict:
    """All three derivative values from a single evaluation of J(u)."""
    u, v = _check_pair(space, u, v)
    j = support_face(space, u)
    vals = j.values(v)
    hi, lo = j.norm_value * max(vals), j.norm_value * min(vals)
    return {"rho_plus": hi, "rho_minus": lo, "rho": (hi + lo) / 2}


def is_bj_orthogonal(space: PolyhedralSpace, u: Sequence, v: Sequence) -> bool:
    """u ⊥_B v, decided as rho_minus(u, v) <= 0 <= rho_plus(u, v)."""
    u, v = space.check_point(u), space.check_point(v)
    if R.is_zero(u) or R.is_zero(v):
        return True
    vals = support_face(space, u).values(v)
    return min(vals) <= 0 <= max(vals)


def is_rho_plus_orthogonal(space, u, v) -> bool:
    return rho_plus(space, u, v) == 0


def is_rho_minus_orthogonal(space, u, v) -> bool:
    return rho_minus(space, u, v) == 0


def is_rho_orthogonal(space, u, v) -> bool:
    return rho(space, u, v) == 0


RELATIONS = {
    "bj": is_bj_orthogonal,
    "rho": is_rho_orthogonal,
    "rho+": is_rho_plus_orthogonal,
    "rho-": is_rho_minus_orthogonal,
}


def orthogonal_kernel_basis(space: PolyhedralSpace, x: Sequence) -> list:
    """[(g, basis of ker g)] for every generator g of J(x).

    x^{⊥_B} is the union of ker f over all f in J(x); the generator kernels
    give exact spanning directions for sampling it.
    """
    return [(g, R.nullspace([g])) for g in support_face(space, x).generators]


def orthogonality_report(space: PolyhedralSpace, u: Sequence, v: Sequence) -> dict:
    d = derivatives(space, u, v)
    return {
        "u": R.fmt_vec(space.check_point(u)),
        "v": R.fmt_vec(space.check_point(v)),
        "bj": is_bj_orthogonal(space, u, v),
        "rho": d["rho"] == 0,
        "rho_plus": d["rho_plus"] == 0,
        "rho_minus": d["rho_minus"] == 0,
        "values": {k: str(val) for k, val in d.items()},
    }
