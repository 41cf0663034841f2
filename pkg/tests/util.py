"""Small helpers shared by the test modules."""
from fractions import Fraction

from bjlab.rational import vec


def V(*xs):
    return vec(xs)


def face_of(space, *points):
    """The smallest face containing the given extreme points."""
    ids = {space.vertex_id(V(*p)) for p in points}
    assert None not in ids, "not all points are vertices"
    return space.face_from_vertex_ids(ids)


def facet_where(space, functional):
    """The facet on which ``functional`` attains 1."""
    h = V(*functional)
    return space.face_from_active({space.facet_id(h)})


def Q(p, q=1):
    return Fraction(p, q)
