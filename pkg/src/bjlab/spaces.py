"""Standard spaces and seeded random polyhedral spaces."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .errors import InvalidInput
from .rational import unit
from .space import PolyhedralSpace, space_from_facets, space_from_vertices


def linf(n: int) -> PolyhedralSpace:
    return space_from_facets(n, [unit(n, i) for i in range(n)])


def l1(n: int) -> PolyhedralSpace:
    return space_from_vertices(n, [unit(n, i) for i in range(n)])


def random_rational(rng: random.Random, height: int) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def random_space(dim: int, seed: int, points: int | None = None, height: int = 4) -> PolyhedralSpace:
    """Unit ball spanned by ``points`` seeded random rational directions."""
    rng = random.Random(seed)
    count = points if points is not None else dim + 1
    while True:
        pts = [tuple(random_rational(rng, height) for _ in range(dim)) for _ in range(count)]
        try:
            return space_from_vertices(dim, pts)
        except InvalidInput:
            continue


# name -> (dim, seed, points); fixed so test fixtures never drift
RANDOM_SPECS = {
    "rand2a": (2, 11, 3),
    "rand2b": (2, 13, 4),
    "rand3a": (3, 10, 4),
    "rand3b": (3, 11, 4),
    "rand3c": (3, 13, 5),
}


def bundled_spaces() -> dict:
    spaces = {"linf2": linf(2), "l1_2": l1(2), "linf3": linf(3), "l1_3": l1(3)}
    for name, (dim, seed, pts) in RANDOM_SPECS.items():
        spaces[name] = random_space(dim, seed, pts)
    return spaces


def named_space(name: str) -> PolyhedralSpace:
    """Resolve ``linf:N``, ``l1:N`` or a bundled name."""
    if ":" in name:
        kind, _, n = name.partition(":")
        if kind in ("linf", "l1") and n.isdigit() and int(n) >= 1:
            return (linf if kind == "linf" else l1)(int(n))
        raise InvalidInput(f"unknown space {name!r}")
    if name in ("linf2", "l1_2", "linf3", "l1_3"):
        return {"linf2": lambda: linf(2), "l1_2": lambda: l1(2),
                "linf3": lambda: linf(3), "l1_3": lambda: l1(3)}[name]()
    if name in RANDOM_SPECS:
        dim, seed, pts = RANDOM_SPECS[name]
        return random_space(dim, seed, pts)
    raise InvalidInput(f"unknown space {name!r}")


def sign_vectors(n: int):
    return itertools.product((-1, 1), repeat=n)
