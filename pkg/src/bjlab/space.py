"""Polyhedral Banach spaces: construction, validation, norm, polar duality, JSON.

A space is stored with both descriptions of its unit ball: the symmetric set
of extreme points and the symmetric set of facet functionals ``h`` with
``||x|| = max_h h(x)``.  The facet functionals are exactly the extreme points
of the dual ball, which makes :func:`dual_space` a swap.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from . import rational as R
from .errors import DegenerateBall, DimensionMismatch, InternalError, InvalidInput, UnboundedBall
from .hull import vertices_of_polar
from .rational import Covec, Vec


@dataclass(frozen=True)
class Face:
    """A proper nonempty face of the unit ball.

    ``vertex_ids`` and ``active_facet_ids`` index into the owning space's
    sorted vertex and facet tuples.
    """

    vertex_ids: frozenset
    active_facet_ids: frozenset
    dim: int

    def key(self) -> tuple:
        return tuple(sorted(self.vertex_ids))


class PolyhedralSpace:
    """Immutable finite-dimensional space with a polytope unit ball."""

    def __init__(self, dim: int, vertices: Iterable[Vec], facets: Iterable[Covec], *, check: bool = True):
        self.dim = dim
        self.vertices: tuple = tuple(sorted(set(vertices)))
        self.facets: tuple = tuple(sorted(set(facets)))
        self.incidence: tuple = tuple(
            tuple(R.dot(h, v) == 1 for h in self.facets) for v in self.vertices
        )
        self._vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self._facet_index = {h: i for i, h in enumerate(self.facets)}
        if check:
            validate(self)

    def __repr__(self):
        return f"PolyhedralSpace(dim={self.dim}, vertices={len(self.vertices)}, facets={len(self.facets)})"

    def __eq__(self, other):
        if not isinstance(other, PolyhedralSpace):
            return NotImplemented
        return (self.dim, self.vertices, self.facets) == (other.dim, other.vertices, other.facets)

    def __hash__(self):
        return hash((self.dim, self.vertices, self.facets))

    def vertex_id(self, v: Vec) -> int | None:
        return self._vertex_index.get(tuple(v))

    def facet_id(self, h: Covec) -> int | None:
        return self._facet_index.get(tuple(h))

    def facets_of_vertex(self, i: int) -> frozenset:
        return frozenset(j for j, on in enumerate(self.incidence[i]) if on)

    def vertices_of_facet(self, j: int) -> frozenset:
        return frozenset(i for i in range(len(self.vertices)) if self.incidence[i][j])

    def check_point(self, x: Sequence) -> Vec:
        if len(x) != self.dim:
            raise DimensionMismatch(f"expected length {self.dim}, got {len(x)}")
        return R.vec(x)

    def face_from_vertex_ids(self, ids) -> Face:
        """Close a vertex-id set to the smallest face containing it."""
        ids = frozenset(ids)
        if ids:
            act = frozenset.intersection(*(self.facets_of_vertex(i) for i in ids))
        else:
            act = frozenset(range(len(self.facets)))
        return self.face_from_active(act)

    def face_from_active(self, act) -> Face:
        act = frozenset(act)
        if not act:
            raise InvalidInput("empty active facet set does not define a proper face")
        vids = frozenset.intersection(*(self.vertices_of_facet(j) for j in act))
        if not vids:
            raise InvalidInput("active facet set defines the empty face")
        closed = frozenset.intersection(*(self.facets_of_vertex(i) for i in vids))
        return Face(vids, closed, R.affine_rank([self.vertices[i] for i in sorted(vids)]))

    @cached_property
    def _int_facets(self) -> tuple:
        den = 1
        for h in self.facets:
            d = R.scaled_ints(h)[1]
            den = den * d // gcd(den, d)
        return tuple(tuple(int(q * den) for q in h) for h in self.facets), den

    def facet_values(self, x: Vec) -> tuple[list, int]:
        """Integers a_j and d with h_j(x) = a_j / d for every facet h_j."""
        rows, hden = self._int_facets
        xi, xden = R.scaled_ints(x)
        return [sum(a * b for a, b in zip(r, xi)) for r in rows], hden * xden

    @cached_property
    def face_lattice(self) -> tuple:
        # every proper face is an intersection of facets
        facet_sets = [self.vertices_of_facet(j) for j in range(len(self.facets))]
        seen = set(facet_sets)
        level = set(facet_sets)
        while level:
            nxt = set()
            for s in level:
                for t in facet_sets:
                    u = s & t
                    if u and u not in seen:
                        seen.add(u)
                        nxt.add(u)
            level = nxt
        faces = [self.face_from_vertex_ids(s) for s in seen]
        return tuple(sorted(faces, key=lambda f: (f.dim, f.key())))


def validate(space: PolyhedralSpace) -> None:
    """Raise if any structural invariant of a polyhedral space fails."""
    n = space.dim
    if n < 1:
        raise InvalidInput("dimension must be positive")
    for w in space.vertices + space.facets:
        if len(w) != n:
            raise DimensionMismatch("coordinate length differs from dimension")
    vset, fset = set(space.vertices), set(space.facets)
    if any(R.neg(v) not in vset for v in vset) or any(R.neg(h) not in fset for h in fset):
        raise InternalError("vertex or facet set is not symmetric")
    if R.rank(space.vertices) < n:
        raise DegenerateBall("vertices do not span the space")
    for i, v in enumerate(space.vertices):
        if max(R.dot(h, v) for h in space.facets) != 1:
            raise InternalError(f"vertex {i} does not have norm one")
        if R.rank([space.facets[j] for j in space.facets_of_vertex(i)]) < n:
            raise InternalError(f"vertex {i} is not extreme")
    for j in range(len(space.facets)):
        pts = [space.vertices[i] for i in space.vertices_of_facet(j)]
        if R.affine_rank(pts) != n - 1:
            raise InternalError(f"facet {j} is not (n-1)-dimensional")


def _symmetrize(points: Iterable[Vec]) -> set:
    out = set()
    for p in points:
        if not R.is_zero(p):
            out.add(p)
            out.add(R.neg(p))
    return out


def _extreme_subset(points: set, facets: Sequence[Covec], n: int) -> list:
    keep = []
    for p in points:
        active = [h for h in facets if R.dot(h, p) == 1]
        if len(active) >= n and R.rank(active) == n:
            keep.append(p)
    return keep


def space_from_vertices(dim: int, points: Iterable[Sequence]) -> PolyhedralSpace:
    """Unit ball conv(±points); non-extreme input points are dropped."""
    pts = [R.vec(p) for p in points]
    if not pts:
        raise DegenerateBall("no points given")
    if any(len(p) != dim for p in pts):
        raise DimensionMismatch(f"points must have length {dim}")
    sym = _symmetrize(pts)
    if not sym or R.rank(list(sym)) < dim:
        raise DegenerateBall("points do not span the space")
    facets = vertices_of_polar(sorted(sym))
    return PolyhedralSpace(dim, _extreme_subset(sym, facets, dim), facets)


def space_from_facets(dim: int, functionals: Iterable[Sequence]) -> PolyhedralSpace:
    """Unit ball {x : |h(x)| <= 1 for every given h}; redundant h are dropped."""
    hs = [R.vec(h) for h in functionals]
    if any(len(h) != dim for h in hs):
        raise DimensionMismatch(f"functionals must have length {dim}")
    sym = _symmetrize(hs)
    if not sym or R.rank(list(sym)) < dim:
        raise UnboundedBall("functionals do not span the dual space")
    verts = vertices_of_polar(sorted(sym))
    return PolyhedralSpace(dim, verts, _extreme_subset(sym, verts, dim))


def norm(space: PolyhedralSpace, x: Sequence) -> Fraction:
    x = space.check_point(x)
    vals, den = space.facet_values(x)
    return Fraction(max(vals), den)


def dual_norm(space: PolyhedralSpace, f: Sequence) -> Fraction:
    f = space.check_point(f)
    return max(R.dot(f, v) for v in space.vertices)


def dual_space(space: PolyhedralSpace) -> PolyhedralSpace:
    return PolyhedralSpace(space.dim, space.facets, space.vertices)


# -- JSON ------------------------------------------------------------------

def space_to_dict(space: PolyhedralSpace) -> dict:
    return {
        "dim": space.dim,
        "vertices": [R.fmt_vec(v) for v in space.vertices],
        "facets": [R.fmt_vec(h) for h in space.facets],
    }


def space_from_dict(data: dict) -> PolyhedralSpace:
    try:
        dim = int(data["dim"])
        if "vertices" in data:
            space = space_from_vertices(dim, data["vertices"])
            if "facets" in data:
                given = sorted(set(R.vec(h) for h in data["facets"]))
                if tuple(given) != space.facets:
                    raise InvalidInput("stored facets disagree with the vertex description")
            return space
        if "facets" in data:
            return space_from_facets(dim, data["facets"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, InvalidInput):
            raise
        raise InvalidInput(f"malformed space description: {exc}") from exc
    raise InvalidInput("space description needs 'vertices' or 'facets'")


def dumps_space(space: PolyhedralSpace) -> str:
    return json.dumps(space_to_dict(space), indent=2) + "\n"


def loads_space(text: str) -> PolyhedralSpace:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"invalid JSON: {exc}") from exc
    return space_from_dict(data)


def load_space(path) -> PolyhedralSpace:
    with open(path) as fh:
        return loads_space(fh.read())


def save_space(space: PolyhedralSpace, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_space(space))
