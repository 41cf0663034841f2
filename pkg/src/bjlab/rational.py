"""Exact rational vectors and the small amount of linear algebra the toolkit needs.

Scalars are :class:`fractions.Fraction`; vectors and covectors are tuples of
fractions.  Nothing in here ever touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rat = Fraction
Vec = tuple  # tuple[Fraction, ...]
Covec = tuple

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(value) -> Fraction:
    """Coerce ints, fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: they would silently smuggle rounding into exact code.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def vec(values: Iterable) -> Vec:
    return tuple(rat(v) for v in values)


def parse_vec(text: str) -> Vec:
    """Parse ``"1,-1/2,3"`` into a vector."""
    parts = [p for p in text.replace(" ", "").split(",") if p != ""]
    if not parts:
        raise ValueError(f"empty vector: {text!r}")
    return vec(parts)


def parse_vec_list(text: str) -> list[Vec]:
    """Parse ``"1,1;1,-1"`` into a list of vectors."""
    return [parse_vec(chunk) for chunk in text.split(";") if chunk.strip()]


def fmt(q: Fraction) -> str:
    return str(q)


def fmt_vec(v: Sequence[Fraction]) -> list[str]:
    return [str(q) for q in v]


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), ZERO)


def add(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a: Vec) -> Vec:
    return tuple(c * x for x in a)


def neg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def is_zero(a: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in a)


def combo(coeffs: Sequence[Fraction], vectors: Sequence[Vec]) -> Vec:
    """Linear combination sum(c_i * v_i)."""
    n = len(vectors[0])
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for i in range(n):
                out[i] += c * v[i]
    return tuple(out)


def centroid(vectors: Sequence[Vec]) -> Vec:
    m = len(vectors)
    return scale(Fraction(1, m), combo([ONE] * m, vectors))


def unit(n: int, i: int) -> Vec:
    return tuple(ONE if j == i else ZERO for j in range(n))


def scaled_ints(v: Sequence[Fraction]) -> tuple[tuple[int, ...], int]:
    """(ints, d) with v = ints / d and d the least common denominator."""
    den = 1
    for q in v:
        den = den * q.denominator // gcd(den, q.denominator)
    return tuple(q.numerator * (den // q.denominator) for q in v), den


def primitive_int(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Smallest positive integer multiple of ``v`` with coprime entries."""
    den = 1
    for q in v:
        den = den * q.denominator // gcd(den, q.denominator)
    ints = [int(q * den) for q in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


# -- Gaussian elimination -------------------------------------------------

def row_reduce(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(map(rat, r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(row_reduce(rows)[1])


def affine_rank(points: Sequence[Vec]) -> int:
    """Dimension of the affine hull of ``points`` (-1 for an empty set)."""
    if not points:
        return -1
    base = points[0]
    return rank([sub(p, base) for p in points[1:]]) if len(points) > 1 else 0


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> list[Vec]:
    """Basis of {x : r.x = 0 for every row r}."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = row_reduce(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = ONE
        for r, pc in zip(red, pivots):
            x[pc] = -r[f]
        basis.append(tuple(x))
    return basis


def independent_subset(vectors: Sequence[Vec]) -> list[int]:
    """Indices of a greedily chosen maximal linearly independent subset."""
    chosen: list[int] = []
    basis: list[Vec] = []
    for i, v in enumerate(vectors):
        if rank(basis + [v]) > len(basis):
            basis.append(v)
            chosen.append(i)
    return chosen


def in_span(v: Vec, vectors: Sequence[Vec]) -> bool:
    if not vectors:
        return is_zero(v)
    return rank(list(vectors) + [v]) == rank(vectors)


# -- square matrices -------------------------------------------------------

Matrix = tuple  # tuple of row tuples


def matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vec(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(unit(n, i) for i in range(n))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def matvec(m: Matrix, x: Vec) -> Vec:
    return tuple(dot(row, x) for row in m)


def vecmat(g: Covec, m: Matrix) -> Covec:
    """The covector g∘M."""
    n = len(m[0])
    out = [ZERO] * n
    for gi, row in zip(g, m):
        if gi:
            for j in range(n):
                out[j] += gi * row[j]
    return tuple(out)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(r, c) for c in bt) for r in a)


def det(m: Matrix) -> Fraction:
    a = [list(r) for r in m]
    n = len(a)
    d = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return ZERO
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    aug = [list(r) + list(unit(n, i)) for i, r in enumerate(m)]
    red, pivots = row_reduce(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(r[n:]) for r in red)
