"""Face lattice queries, smoothness order, and the constructive sub-face results."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from . import rational as R
from .errors import InternalError, InvalidInput, NoSuchSubface, NotAnExtremePoint, ZeroVector
from .rational import Vec
from .space import Face, PolyhedralSpace, norm


def face_lattice(space: PolyhedralSpace) -> tuple:
    """All proper nonempty faces, sorted by (dim, vertex ids)."""
    return space.face_lattice


def faces_of_dim(space: PolyhedralSpace, d: int) -> list:
    return [f for f in space.face_lattice if f.dim == d]


def active_facets(space: PolyhedralSpace, x: Sequence) -> frozenset:
    x = space.check_point(x)
    if R.is_zero(x):
        raise ZeroVector("the zero vector lies on no face of the sphere")
    vals, _ = space.facet_values(x)
    top = max(vals)
    return frozenset(j for j, v in enumerate(vals) if v == top)


def minimal_face(space: PolyhedralSpace, x: Sequence) -> Face:
    """The face whose relative interior contains x/||x||."""
    return space.face_from_active(active_facets(space, x))


def smoothness_order(space: PolyhedralSpace, x: Sequence) -> int:
    """k such that x is k-smooth, i.e. n minus the dimension of its minimal face."""
    k = space.dim - minimal_face(space, x).dim
    # J(x) is spanned by the active facet functionals
    if k != R.rank([space.facets[j] for j in active_facets(space, x)]):
        raise InternalError("face dimension disagrees with rank of J(x)")
    return k


def relative_interior_point(space: PolyhedralSpace, face: Face) -> Vec:
    """Vertex centroid of the face."""
    if not face.vertex_ids:
        raise InvalidInput("empty face")
    return R.centroid([space.vertices[i] for i in sorted(face.vertex_ids)])


def is_subface(g: Face, f: Face) -> bool:
    return g.vertex_ids <= f.vertex_ids


def subface_of_extreme(space: PolyhedralSpace, face: Face, x: Sequence) -> Face:
    """A (k-1)-face G with x in G inside the k-face ``face``.

    Ties are broken by the smallest sorted vertex-id tuple.
    """
    vid = space.vertex_id(space.check_point(x))
    if vid is None or vid not in face.vertex_ids:
        raise NotAnExtremePoint("point is not an extreme point of the face")
    if face.dim < 1:
        raise InvalidInput("a 0-face has no proper sub-face")
    found = [g for g in space.face_lattice
             if g.dim == face.dim - 1 and vid in g.vertex_ids and is_subface(g, face)]
    if not found:
        raise NoSuchSubface(f"no {face.dim - 1}-face through vertex {vid}")
    return min(found, key=Face.key)


def ksmooth_witness_sequence(space: PolyhedralSpace, facet: Face, x: Sequence, k: int, m: int) -> list:
    """Points x_j = (1 - 1/j) x + (1/j) y, j = 1..m, all k-smooth, tending to x.

    ``y`` is the centroid of the lexicographically first (n-k)-face G with
    x in G inside ``facet``.  ||x_j - x|| = ||y - x|| / j exactly.
    """
    n = space.dim
    if not 1 <= k < n:
        raise InvalidInput(f"k must satisfy 1 <= k < {n}")
    if m < 1:
        raise InvalidInput("m must be positive")
    if facet.dim != n - 1:
        raise InvalidInput("expected a facet")
    x = space.check_point(x)
    vid = space.vertex_id(x)
    if vid is None or vid not in facet.vertex_ids:
        raise NotAnExtremePoint("point is not an extreme point of the facet")
    candidates = [g for g in space.face_lattice
                  if g.dim == n - k and vid in g.vertex_ids and is_subface(g, facet)]
    if not candidates:
        raise NoSuchSubface(f"no {n - k}-face through the vertex inside the facet")
    g = min(candidates, key=Face.key)
    y = relative_interior_point(space, g)
    out = []
    for j in range(1, m + 1):
        t = Fraction(1, j)
        out.append(R.add(R.scale(1 - t, x), R.scale(t, y)))
    return out


def ksmooth_faces(space: PolyhedralSpace, k: int) -> list:
    """Faces whose relative interiors make up the k-smooth part of the sphere."""
    if not 1 <= k <= space.dim:
        raise InvalidInput(f"k must lie in 1..{space.dim}")
    return faces_of_dim(space, space.dim - k)


def face_samples(space: PolyhedralSpace, face: Face, count: int = 1) -> list:
    """Relative-interior sample points: the centroid, then points pulled from
    the centroid toward each vertex by fractions s/count, s = 1..count-1."""
    c = relative_interior_point(space, face)
    pts = [c]
    if face.dim == 0:
        return pts
    for s in range(1, count):
        t = Fraction(s, count)
        for i in sorted(face.vertex_ids):
            p = R.add(R.scale(1 - t, c), R.scale(t, space.vertices[i]))
            if p not in pts:
                pts.append(p)
    return pts


def normalize(space: PolyhedralSpace, x: Sequence) -> Vec:
    nx = norm(space, x)
    if nx == 0:
        raise ZeroVector("cannot normalise the zero vector")
    return R.scale(1 / nx, tuple(x))


def face_report(space: PolyhedralSpace, x: Sequence) -> dict:
    face = minimal_face(space, x)
    return {
        "point": R.fmt_vec(space.check_point(x)),
        "order": space.dim - face.dim,
        "minimal_face": {
            "dim": face.dim,
            "vertices": [R.fmt_vec(space.vertices[i]) for i in sorted(face.vertex_ids)],
        },
    }
