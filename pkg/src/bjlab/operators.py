"""Linear operators with exact rational matrices, acting as x -> M x."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import rational as R
from .errors import DimensionMismatch, InvalidInput
from .rational import Covec, Vec
from .space import PolyhedralSpace, norm


@dataclass(frozen=True)
class LinearOperator:
    matrix: tuple

    def __post_init__(self):
        m = R.matrix(self.matrix)
        if not m or any(len(r) != len(m) for r in m):
            raise DimensionMismatch("operator matrix must be square")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "LinearOperator":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "LinearOperator":
        return cls(R.identity(n))

    @classmethod
    def zero(cls, n: int) -> "LinearOperator":
        return cls(tuple((0,) * n for _ in range(n)))

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def __call__(self, x: Sequence) -> Vec:
        return apply(self, x)

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(R.matmul(self.matrix, other.matrix))

    def scaled(self, c) -> "LinearOperator":
        c = R.rat(c)
        return LinearOperator(tuple(R.scale(c, r) for r in self.matrix))

    def is_zero(self) -> bool:
        return all(R.is_zero(r) for r in self.matrix)

    def to_dict(self) -> dict:
        return {"matrix": [R.fmt_vec(r) for r in self.matrix]}

    def __str__(self):
        return "[" + "; ".join(" ".join(map(str, r)) for r in self.matrix) + "]"


def apply(t: LinearOperator, x: Sequence) -> Vec:
    if len(x) != t.dim:
        raise DimensionMismatch(f"operator of size {t.dim} applied to vector of length {len(x)}")
    return R.matvec(t.matrix, R.vec(x))


def adjoint(t: LinearOperator) -> LinearOperator:
    """Transpose; as a map on covectors, adjoint(T)(g) = g∘T."""
    return LinearOperator(R.transpose(t.matrix))


def pullback(t: LinearOperator, g: Covec) -> Covec:
    """T*g, the covector x -> g(Tx)."""
    if len(g) != t.dim:
        raise DimensionMismatch("covector length differs from operator size")
    return R.vecmat(g, t.matrix)


def _check(space: PolyhedralSpace, t: LinearOperator):
    if t.dim != space.dim:
        raise DimensionMismatch(f"operator of size {t.dim} on a {space.dim}-dimensional space")


def operator_norm(space: PolyhedralSpace, t: LinearOperator) -> Fraction:
    """max ||Tv|| over extreme points v; exact because the norm is convex."""
    _check(space, t)
    return max(norm(space, apply(t, v)) for v in space.vertices)


def is_bijective(t: LinearOperator) -> bool:
    return R.det(t.matrix) != 0


def is_scalar_isometry(space: PolyhedralSpace, t: LinearOperator) -> Optional[Fraction]:
    """lambda > 0 with ||Tx|| = lambda ||x|| for all x, or None.

    T scales every norm by lambda iff T(B) = lambda B, and for polytopes that
    is equality of the vertex sets.
    """
    _check(space, t)
    if not is_bijective(t):
        return None
    lam = norm(space, apply(t, space.vertices[0]))
    images = {apply(t, v) for v in space.vertices}
    target = {R.scale(lam, w) for w in space.vertices}
    return lam if images == target else None


def isometry_witness(space: PolyhedralSpace, t: LinearOperator) -> Optional[Vec]:
    """A point x with ||Tx|| != lambda ||x||, where lambda = ||T v0|| for the
    first vertex v0, or None when T is a scalar isometry."""
    _check(space, t)
    if is_scalar_isometry(space, t) is not None:
        return None
    if not is_bijective(t):
        return R.nullspace(t.matrix)[0]
    lam = norm(space, apply(t, space.vertices[0]))
    for v in space.vertices:
        if norm(space, apply(t, v)) != lam:
            return v
    # all vertices land on the lambda-sphere but miss a vertex of lambda*B
    images = {apply(t, v) for v in space.vertices}
    inv = R.inverse(t.matrix)
    for w in space.vertices:
        if R.scale(lam, w) not in images:
            return R.matvec(inv, R.scale(lam, w))
    raise AssertionError("unreachable: vertex sets differ")


def isometries(space: PolyhedralSpace, limit: int = 200_000) -> list:
    """All linear isometries of the space (maps permuting the extreme points).

    Images of a fixed vertex basis are searched with pairwise norm pruning;
    ``limit`` bounds the number of partial assignments explored.
    """
    n = space.dim
    verts = space.vertices
    basis_ids = R.independent_subset(list(verts))[:n]
    basis = [verts[i] for i in basis_ids]
    binv = R.inverse(R.transpose(R.matrix(basis)))  # columns are basis vectors
    pair_norms = {
        (i, j): (norm(space, R.add(basis[i], basis[j])), norm(space, R.sub(basis[i], basis[j])))
        for i in range(n) for j in range(i)
    }
    vset = set(verts)
    found = []
    budget = [limit]

    def extend(chosen):
        budget[0] -= 1
        if budget[0] < 0:
            return
        i = len(chosen)
        if i == n:
            w = R.transpose(R.matrix(chosen))
            m = R.matmul(w, binv)
            if all(R.matvec(m, v) in vset for v in verts):
                found.append(LinearOperator(m))
            return
        for cand in verts:
            if all((norm(space, R.add(cand, chosen[j])), norm(space, R.sub(cand, chosen[j])))
                   == pair_norms[(i, j)] for j in range(i)):
                extend(chosen + [cand])

    extend([])
    return sorted(found, key=lambda t: t.matrix)


def signed_permutations(n: int):
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((-1, 1), repeat=n):
            rows = [[0] * n for _ in range(n)]
            for i, (j, s) in enumerate(zip(perm, signs)):
                rows[i][j] = s
            yield LinearOperator.from_rows(rows)


# -- JSON ------------------------------------------------------------------

def operator_from_dict(data: dict) -> LinearOperator:
    try:
        return LinearOperator.from_rows(data["matrix"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, InvalidInput):
            raise
        raise InvalidInput(f"malformed operator description: {exc}") from exc


def load_operator(path) -> LinearOperator:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"invalid JSON: {exc}") from exc
    return operator_from_dict(data)


def parse_operator(text: str) -> LinearOperator:
    """``"1,1;-1,1"`` -> rows."""
    return LinearOperator.from_rows(R.parse_vec_list(text))
