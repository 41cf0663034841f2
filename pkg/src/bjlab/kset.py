"""K-set falsification search, bundled counterexample reproductions, and the
equivalence experiment matrix.

A set A of the sphere is a K-set when every operator preserving BJ
orthogonality at each point of A is a scalar multiple of an isometry.  The
search draws many rational operators, keeps those that preserve on A, and
reports survivors that are not scalar isometries.  For finite A (extreme
points, explicit lists) the check is exact.  For the k-smooth points, which
form the union of the relative interiors of the (n-k)-faces, each face
interior is decided exactly via :func:`preservation.relint_regions`.  Absence
of counterexamples at search scale is evidence, not proof.
"""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import rational as R
from .errors import EmptyCandidateSet, InternalError, InvalidInput, ReproductionFailure
from .faces import face_samples, faces_of_dim, ksmooth_faces, relative_interior_point
from .operators import LinearOperator, is_scalar_isometry, isometries, signed_permutations
from .ortho import support_face
from .preservation import (
    bj_verdict_at,
    check_certificate,
    preserves_bj_at,
    preserves_bj_on_relint,
    preserves_rho_at,
    preserves_rho_on_relint,
)
from .space import PolyhedralSpace
from .spaces import linf, random_rational

SCHEMA = 1
KINDS = ("extreme", "ksmooth", "facet-interior", "points", "hyperplane")


@dataclass(frozen=True)
class CandidateSet:
    """Points decided pointwise plus faces whose relative interiors are decided exactly.

    ``prefilter`` holds sample points inside those faces; they only serve as
    cheap necessary conditions.
    """

    label: str
    points: tuple = ()
    faces: tuple = ()
    prefilter: tuple = ()

    def is_empty(self) -> bool:
        return not self.points and not self.faces


def candidate_set(space: PolyhedralSpace, kind: str, k: Optional[int] = None,
                  points: Sequence = (), hyperplane: Optional[Sequence] = None,
                  count: int = 3, exact: bool = True) -> CandidateSet:
    """Build a candidate set.

    ``exact=False`` replaces each face interior by its centroid alone, which
    is far weaker: it is kept to show that centroid sets are not K-sets.
    """
    if kind == "extreme":
        return CandidateSet("extreme", points=space.vertices)
    if kind in ("ksmooth", "facet-interior"):
        if kind == "facet-interior":
            k = 1
        if k is None:
            raise InvalidInput("ksmooth candidate set needs k")
        faces = tuple(ksmooth_faces(space, k))
        label = f"ksmooth({k})" if kind == "ksmooth" else "facet-interior"
        if not exact:
            cents = tuple(relative_interior_point(space, f) for f in faces)
            return CandidateSet(label + "-centroids", points=cents)
        pre = tuple(p for f in faces for p in face_samples(space, f, count))
        return CandidateSet(label, faces=faces, prefilter=pre)
    if kind == "points":
        pts = tuple(space.check_point(p) for p in points)
        if any(R.is_zero(p) for p in pts):
            raise InvalidInput("candidate points must be nonzero")
        return CandidateSet("points", points=pts)
    if kind == "hyperplane":
        if hyperplane is None:
            raise InvalidInput("hyperplane candidate set needs a functional")
        c = space.check_point(hyperplane)
        pts = []
        for f in space.face_lattice:
            for p in face_samples(space, f, count):
                v = R.dot(c, p)
                if v != 0:
                    q = R.scale(1 / v, p)
                    if q not in pts:
                        pts.append(q)
        return CandidateSet("hyperplane-sample", points=tuple(pts))
    raise InvalidInput(f"unknown candidate kind {kind!r}")


@dataclass(frozen=True)
class SearchConfig:
    space: PolyhedralSpace
    kind: str = "extreme"
    k: Optional[int] = None
    points: tuple = ()
    hyperplane: Optional[tuple] = None
    budget: int = 1000
    seed: int = 0
    height: int = 8
    exact: bool = True
    space_name: str = ""

    def candidates(self) -> CandidateSet:
        if self.budget < 1:
            raise InvalidInput("budget must be at least 1")
        cand = candidate_set(self.space, self.kind, self.k, self.points, self.hyperplane, exact=self.exact)
        if cand.is_empty():
            raise EmptyCandidateSet(f"candidate set {cand.label} is empty")
        return cand

    def to_dict(self) -> dict:
        out = {"space": self.space_name or repr(self.space), "kind": self.kind, "budget": self.budget,
               "seed": self.seed, "height": self.height, "exact": self.exact}
        if self.k is not None:
            out["k"] = self.k
        if self.points:
            out["points"] = [R.fmt_vec(p) for p in self.points]
        if self.hyperplane is not None:
            out["hyperplane"] = R.fmt_vec(self.hyperplane)
        return out


@dataclass
class SearchReport:
    config: dict
    candidate_label: str
    trials: int = 0
    distinct: int = 0
    preserving: list = field(default_factory=list)  # (operator, lambda or None)
    counterexamples: list = field(default_factory=list)
    wall_time: float = 0.0
    # distinct operators rejected by finite points, and by exact face-interior checks
    rejected_pointwise: int = 0
    rejected_interior: int = 0

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "schema": SCHEMA,
            "config": self.config,
            "candidates": self.candidate_label,
            "trials": self.trials,
            "distinct_operators": self.distinct,
            "rejected_pointwise": self.rejected_pointwise,
            "rejected_interior": self.rejected_interior,
            "preserving": [
                {"matrix": t.to_dict()["matrix"], "scalar_isometry": None if lam is None else str(lam)}
                for t, lam in self.preserving
            ],
            "counterexamples": [t.to_dict()["matrix"] for t in self.counterexamples],
            "note": "absence of counterexamples at search scale is evidence, not proof",
        }
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True) + "\n"


# -- operator families -----------------------------------------------------

def _normal_key(t: LinearOperator) -> tuple:
    """Matrix scaled so its first nonzero entry is 1; preservation and the
    scalar-isometry property are invariant under nonzero scaling."""
    flat = [q for row in t.matrix for q in row]
    lead = next((q for q in flat if q != 0), None)
    if lead is None:
        return tuple(flat)
    return tuple(q / lead for q in flat)


class OperatorSampler:
    """Seeded mix of dense random and structured operator families."""

    def __init__(self, space: PolyhedralSpace, cand: CandidateSet, rng: random.Random, height: int):
        self.space = space
        self.n = space.dim
        self.rng = rng
        self.h = height
        self.isos = isometries(space)
        self.sperms = list(signed_permutations(self.n))
        anchors = list(cand.points) + list(cand.prefilter)
        self.anchors = anchors or list(space.vertices)
        self.families = [self.dense, self.diagonal, self.signed_perm, self.perm_shear,
                         self.perturbed_isometry, self.rank_one, self.scaled_isometry]

    def draw(self, trial: int) -> LinearOperator:
        return self.families[trial % len(self.families)]()

    def _q(self, nonzero=False):
        while True:
            q = random_rational(self.rng, self.h)
            if q or not nonzero:
                return q

    def _pos(self):
        return Fraction(self.rng.randint(1, self.h), self.rng.randint(1, self.h))

    def dense(self):
        return LinearOperator(tuple(tuple(self._q() for _ in range(self.n)) for _ in range(self.n)))

    def diagonal(self):
        return LinearOperator(tuple(tuple(self._q(True) if i == j else 0 for j in range(self.n))
                                    for i in range(self.n)))

    def signed_perm(self):
        return self.rng.choice(self.sperms).scaled(self._pos())

    def perm_shear(self):
        n = self.n
        rows = [list(r) for r in R.identity(n)]
        i, j = self.rng.sample(range(n), 2)
        rows[i][j] = self._q(True)
        return self.rng.choice(self.sperms) @ LinearOperator.from_rows(rows)

    def _rank_one(self, y, g):
        return LinearOperator(tuple(tuple(yi * gj for gj in g) for yi in y))

    def perturbed_isometry(self):
        u = self.rng.choice(self.isos)
        y = self.rng.choice(self.space.vertices)
        g = self.rng.choice(self.space.facets)
        t = Fraction(self._q(True), self.h)
        p = self._rank_one(y, g)
        return LinearOperator(tuple(R.add(a, R.scale(t, b)) for a, b in zip(u.matrix, p.matrix)))

    def rank_one(self):
        y = self.rng.choice(self.anchors)
        if self.rng.random() < 0.5:
            g = self.rng.choice(support_face(self.space, y).generators)
        else:
            g = self.rng.choice(self.space.facets)
        return self._rank_one(y, g)

    def scaled_isometry(self):
        return self.rng.choice(self.isos).scaled(self._pos())


# -- search ----------------------------------------------------------------

def preserves_on_candidates(space: PolyhedralSpace, t: LinearOperator, cand: CandidateSet) -> bool:
    for p in cand.points:
        if not preserves_bj_at(space, t, p).verdict:
            return False
    for p in cand.prefilter:
        if not preserves_bj_at(space, t, p).verdict:
            return False
    return all(preserves_bj_on_relint(space, t, f).verdict for f in cand.faces)


def validate_counterexample(space: PolyhedralSpace, t: LinearOperator, cand: CandidateSet) -> bool:
    """Independent re-check: fresh certificates, each re-validated, and a
    fresh scalar-isometry verdict."""
    if t.is_zero() or is_scalar_isometry(space, t) is not None:
        return False
    for p in cand.points:
        cert = preserves_bj_at(space, t, p)
        if not cert.verdict or not check_certificate(space, t, cert):
            return False
    for f in cand.faces:
        fv = preserves_bj_on_relint(space, t, f)
        if not fv.verdict:
            return False
    return True


def falsification_search(config: SearchConfig) -> SearchReport:
    start = time.perf_counter()
    space = config.space
    cand = config.candidates()
    rng = random.Random(config.seed)
    sampler = OperatorSampler(space, cand, rng, config.height)
    report = SearchReport(config.to_dict(), cand.label)
    seen = set()
    for trial in range(config.budget):
        t = sampler.draw(trial)
        report.trials += 1
        if t.is_zero():
            continue
        key = _normal_key(t)
        if key in seen:
            continue
        seen.add(key)
        # cheap necessary conditions first
        if not all(bj_verdict_at(space, t, p) for p in cand.points + cand.prefilter):
            report.rejected_pointwise += 1
            continue
        lam = is_scalar_isometry(space, t)
        if lam is not None:
            # a scalar isometry preserves every norm relation, hence BJ orthogonality everywhere
            report.preserving.append((t, lam))
            continue
        if not all(preserves_bj_on_relint(space, t, f, certify=False).verdict for f in cand.faces):
            report.rejected_interior += 1
            continue
        report.preserving.append((t, None))
        if not validate_counterexample(space, t, cand):
            raise InternalError(f"counterexample {t} failed re-validation")
        report.counterexamples.append(t)
    report.distinct = len(seen)
    report.wall_time = time.perf_counter() - start
    return report


# -- bundled counterexamples -------------------------------------------------

RHO_EXAMPLE = LinearOperator.from_rows([[1, 1], [-1, 1]])   # (x+y, y-x)
CLOSURE_EXAMPLE = LinearOperator.from_rows([[2, 0], [0, 1]])  # (2x, y)
CLOSURE_TS = (Fraction(0), Fraction(1, 2), Fraction(9, 10), Fraction(99, 100))


def reproduce_counterexamples(rho_operator: LinearOperator = RHO_EXAMPLE,
                              closure_operator: LinearOperator = CLOSURE_EXAMPLE) -> dict:
    """Replay both l_inf^2 examples; raise ReproductionFailure on any mismatch."""
    space = linf(2)
    failures = []

    t = rho_operator
    rho_ok = {",".join(R.fmt_vec(v)): preserves_rho_at(space, t, v, "rho").verdict for v in space.vertices}
    lam = is_scalar_isometry(space, t)
    bj_11 = preserves_bj_at(space, t, R.vec((1, 1)))
    a = {
        "operator": t.to_dict()["matrix"],
        "rho_preserved_at_extreme_points": rho_ok,
        "scalar_isometry": None if lam is None else str(lam),
        "bj_preserved_at_(1,1)": bj_11.verdict,
    }
    if not all(rho_ok.values()):
        failures.append("(a) rho-orthogonality not preserved at every extreme point")
    if lam is not None:
        failures.append("(a) operator is a scalar isometry")
    if bj_11.verdict:
        failures.append("(a) BJ orthogonality preserved at (1,1)")

    t = closure_operator
    along = {}
    for s in CLOSURE_TS:
        along[str(s)] = preserves_bj_at(space, t, R.vec((1, s))).verdict
    at_vertex = preserves_bj_at(space, t, R.vec((1, 1)))
    b = {
        "operator": t.to_dict()["matrix"],
        "bj_preserved_at_(1,t)": along,
        "bj_preserved_at_(1,1)": at_vertex.verdict,
    }
    if not all(along.values()):
        failures.append("(b) BJ orthogonality fails at some (1,t), t < 1")
    if at_vertex.verdict:
        failures.append("(b) BJ orthogonality preserved at (1,1)")

    report = {"schema": SCHEMA, "rho_not_isometry": a, "preserving_set_not_closed": b,
              "passed": not failures, "failures": failures}
    if failures:
        raise ReproductionFailure("; ".join(failures))
    return report


# -- equivalence matrix ------------------------------------------------------

def equivalence_matrix(space: PolyhedralSpace, t: LinearOperator) -> dict:
    """One row of the equivalence table, every column computed exactly.

    Columns: BJ preservation at all k-smooth points for each k; BJ preservation
    on every face interior (the whole sphere); rho, rho+ and rho- preservation
    at all smooth points; scalar isometry.
    """
    n = space.dim
    ksm = {k: all(preserves_bj_on_relint(space, t, f).verdict for f in ksmooth_faces(space, k))
           for k in range(1, n + 1)}
    dense = all(ksm.values())
    facets = faces_of_dim(space, n - 1)
    rho_cols = {v: all(preserves_rho_on_relint(space, t, f, v).verdict for f in facets)
                for v in ("rho", "rho_plus", "rho_minus")}
    lam = is_scalar_isometry(space, t)
    values = list(ksm.values()) + [dense] + list(rho_cols.values()) + [lam is not None]
    zero = t.is_zero()
    consistent = len(set(values)) == 1
    return {
        "operator": t.to_dict()["matrix"],
        "bj_ksmooth": {str(k): v for k, v in ksm.items()},
        "bj_dense": dense,
        "rho_smooth": rho_cols["rho"],
        "rho_plus_smooth": rho_cols["rho_plus"],
        "rho_minus_smooth": rho_cols["rho_minus"],
        "scalar_isometry": lam is not None,
        "lambda": None if lam is None else str(lam),
        "zero_operator": zero,
        "consistent": consistent,
        "violation": not consistent and not zero,
    }
