"""Deciding whether an operator preserves Birkhoff-James orthogonality at a point.

The decision rests on one reduction.  x^{⊥_B} is the union of the kernels
ker f, f in J(x), and T(ker f) is a subspace; a subspace lies in (Tx)^{⊥_B}
iff it lies in ker g for a single g in J(Tx).  ker f ⊆ ker(T*g) means
T*g = c f, and evaluating at x forces c = ||Tx|| / ||x||.  So, for Tx != 0,

    T preserves BJ orthogonality at x  <=>  (||Tx||/||x||) J(x) ⊆ T*(J(Tx)).

Both sides are polytopes in the dual, so it suffices to test each generator of
J(x) for membership in conv{T*g : g generates J(Tx)}: one exact LP each.  When
membership fails, Gordan's alternative gives y in ker f with T*g(y) > 0 for
every generator g, i.e. x ⊥_B y while Tx is not ⊥_B Ty.

On the relative interior of a face G, J(x) is constant; if moreover Tx/||Tx||
stays in the relative interior of one face H of the ball, J(Tx) is constant
too, and the criterion above no longer depends on x.  Enumerating the finitely
many nonempty regions (G, H) therefore decides preservation on a whole face
interior exactly (:func:`relint_regions`).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional, Sequence

from . import rational as R
from .errors import HypothesisViolated, InternalError, InvalidInput, NotBijective, NotProperSubspace, ZeroVector
from .faces import active_facets, face_samples, minimal_face, relative_interior_point, smoothness_order
from .lp import feasible_point, in_convex_hull
from .operators import LinearOperator, apply, is_bijective, pullback
from .ortho import is_bj_orthogonal, support_face
from .rational import Covec, Vec
from .space import Face, PolyhedralSpace, norm


@dataclass(frozen=True)
class PreservationCertificate:
    """Evidence for a pointwise verdict.

    Positive: ``containment`` pairs each generator f of J(x) with convex
    coefficients over ``image_generators`` (the generators g of J(Tx)) such
    that sum coeff_g T*g = scale * f.  Negative: ``witness`` is (f, y) with
    f in J(x), f(y) = 0 and Tx not ⊥_B Ty.
    """

    point: Vec
    verdict: bool
    degenerate: bool = False
    scale: Optional[Fraction] = None
    image_generators: tuple = ()
    containment: tuple = ()
    witness: Optional[tuple] = None

    def to_dict(self) -> dict:
        out = {"point": R.fmt_vec(self.point), "verdict": self.verdict, "degenerate": self.degenerate}
        if self.scale is not None:
            out["scale"] = str(self.scale)
        if self.witness is not None:
            f, y = self.witness
            out["witness"] = {"functional": R.fmt_vec(f), "direction": R.fmt_vec(y)}
        if self.containment:
            out["image_generators"] = [R.fmt_vec(g) for g in self.image_generators]
            out["containment"] = [
                {"functional": R.fmt_vec(f), "coefficients": R.fmt_vec(c)} for f, c in self.containment
            ]
        return out


def _check_op(space: PolyhedralSpace, t: LinearOperator):
    if t.dim != space.dim:
        raise InvalidInput(f"operator of size {t.dim} on a {space.dim}-dimensional space")


def _separating_direction(f: Covec, pulled: Sequence[Covec]) -> Vec:
    """y with f(y) = 0 and psi(y) >= 1 for every psi in ``pulled``."""
    n = len(f)
    y = feasible_point(
        n,
        equalities=[(f, 0)],
        inequalities=[(R.neg(p), -1) for p in pulled],
    )
    if y is None:
        raise InternalError("Gordan alternative produced no separating direction")
    return R.vec(R.primitive_int(y))


def preserves_bj_at(space: PolyhedralSpace, t: LinearOperator, x: Sequence) -> PreservationCertificate:
    """Exact verdict, with certificate, on whether x ⊥_B y implies Tx ⊥_B Ty for all y.

    x = 0 and Tx = 0 are reported as preserved with ``degenerate`` set: the
    defining implication is then vacuous or trivially true.
    """
    _check_op(space, t)
    x = space.check_point(x)
    if R.is_zero(x):
        return PreservationCertificate(x, True, degenerate=True)
    tx = apply(t, x)
    if R.is_zero(tx):
        return PreservationCertificate(x, True, degenerate=True)
    jx = support_face(space, x)
    jt = support_face(space, tx)
    c = jt.norm_value / jx.norm_value
    pulled = [pullback(t, g) for g in jt.generators]
    rows = []
    for f in jx.generators:
        target = R.scale(c, f)
        if target in pulled:
            coeffs = R.unit(len(pulled), pulled.index(target))
        elif len(pulled) == 1:
            coeffs = None
        else:
            coeffs = in_convex_hull(target, pulled)
        if coeffs is None:
            y = _separating_direction(f, pulled)
            return PreservationCertificate(x, False, scale=c, image_generators=jt.generators,
                                           witness=(f, y))
        rows.append((f, tuple(coeffs)))
    return PreservationCertificate(x, True, scale=c, image_generators=jt.generators,
                                   containment=tuple(rows))


def bj_verdict_at(space: PolyhedralSpace, t: LinearOperator, x: Sequence) -> bool:
    """Verdict of :func:`preserves_bj_at` without building a certificate."""
    tx = apply(t, x)
    if R.is_zero(x) or R.is_zero(tx):
        return True
    jx = support_face(space, x)
    jt = support_face(space, tx)
    c = jt.norm_value / jx.norm_value
    pulled = [pullback(t, g) for g in jt.generators]
    for f in jx.generators:
        target = R.scale(c, f)
        if target in pulled:
            continue
        if len(pulled) == 1 or in_convex_hull(target, pulled) is None:
            return False
    return True


def check_certificate(space: PolyhedralSpace, t: LinearOperator, cert: PreservationCertificate) -> bool:
    """Re-validate a certificate from scratch through the orthogonality module."""
    x = cert.point
    if cert.degenerate:
        return R.is_zero(x) or R.is_zero(apply(t, x))
    tx = apply(t, x)
    if not cert.verdict:
        f, y = cert.witness
        return (f in support_face(space, x).generators and R.dot(f, y) == 0
                and is_bj_orthogonal(space, x, y)
                and not is_bj_orthogonal(space, tx, apply(t, y)))
    jx = support_face(space, x)
    jt = support_face(space, tx)
    if tuple(jt.generators) != tuple(cert.image_generators):
        return False
    if sorted(f for f, _ in cert.containment) != sorted(jx.generators):
        return False
    c = jt.norm_value / jx.norm_value
    pulled = [pullback(t, g) for g in jt.generators]
    for f, coeffs in cert.containment:
        if any(a < 0 for a in coeffs) or sum(coeffs) != 1:
            return False
        if R.combo(coeffs, pulled) != R.scale(c, f):
            return False
    return True


def preserves_bj_on(space: PolyhedralSpace, t: LinearOperator, points: Iterable[Sequence],
                    collect_all: bool = False) -> tuple[bool, list]:
    """Conjunction over a finite set; stops at the first failure unless ``collect_all``."""
    certs = []
    ok = True
    for p in points:
        cert = preserves_bj_at(space, t, p)
        certs.append(cert)
        if not cert.verdict:
            ok = False
            if not collect_all:
                break
    return ok, certs


# -- rho-type relations ----------------------------------------------------

VARIANTS = ("rho", "rho_plus", "rho_minus")


def _pieces(gens: Sequence[Covec], variant: str) -> list:
    """Linearity pieces of the derivative v -> max/min/mean over ``gens``.

    Each piece is (constraints a.v <= 0, linear form) on which the derivative
    (up to a positive factor) equals that form.
    """
    m = len(gens)
    if m == 1:
        return [([], gens[0])]
    pieces = []
    if variant == "rho_plus":
        for i in range(m):
            pieces.append(([R.sub(gens[l], gens[i]) for l in range(m) if l != i], gens[i]))
    elif variant == "rho_minus":
        for i in range(m):
            pieces.append(([R.sub(gens[i], gens[l]) for l in range(m) if l != i], gens[i]))
    elif variant == "rho":
        for i in range(m):
            for j in range(m):
                cons = [R.sub(gens[l], gens[i]) for l in range(m) if l != i]
                cons += [R.sub(gens[j], gens[l]) for l in range(m) if l != j]
                pieces.append((cons, R.add(gens[i], gens[j])))
    else:
        raise InvalidInput(f"unknown variant {variant!r}")
    return pieces


def _derivative_sign_form(space, u, v, variant):
    vals = support_face(space, u).values(v)
    if variant == "rho_plus":
        return max(vals)
    if variant == "rho_minus":
        return min(vals)
    return max(vals) + min(vals)


@dataclass(frozen=True)
class RhoVerdict:
    point: Vec
    variant: str
    verdict: bool
    degenerate: bool = False
    witness: Optional[Vec] = None  # v with variant(x, v) = 0 but variant(Tx, Tv) != 0

    def to_dict(self) -> dict:
        out = {"point": R.fmt_vec(self.point), "variant": self.variant,
               "verdict": self.verdict, "degenerate": self.degenerate}
        if self.witness is not None:
            out["witness"] = R.fmt_vec(self.witness)
        return out


def preserves_rho_at(space: PolyhedralSpace, t: LinearOperator, x: Sequence, variant: str = "rho") -> RhoVerdict:
    """Decide: for all v, variant(x, v) = 0 implies variant(Tx, Tv) = 0.

    The null set of v -> variant(x, v) is a union of polyhedral cones, one per
    linearity piece; refining by the pieces of the image derivative makes both
    sides linear, and each cell is settled by two LPs.
    """
    _check_op(space, t)
    if variant not in VARIANTS:
        raise InvalidInput(f"unknown variant {variant!r}")
    x = space.check_point(x)
    if R.is_zero(x):
        raise ZeroVector("rho-orthogonality is undefined at 0")
    tx = apply(t, x)
    if R.is_zero(tx):
        return RhoVerdict(x, variant, True, degenerate=True)
    dom = _pieces(support_face(space, x).generators, variant)
    img = _pieces([pullback(t, g) for g in support_face(space, tx).generators], variant)
    n = space.dim
    for dcons, dform in dom:
        base_eq = [(dform, 0)]
        base_ineq = [(a, 0) for a in dcons]
        for icons, iform in img:
            ineq = base_ineq + [(a, 0) for a in icons]
            for sign in (1, -1):
                v = feasible_point(n, equalities=base_eq,
                                   inequalities=ineq + [(R.scale(-sign, iform), -1)])
                if v is not None:
                    v = R.vec(R.primitive_int(v))
                    if (_derivative_sign_form(space, x, v, variant) != 0
                            or _derivative_sign_form(space, tx, apply(t, v), variant) == 0):
                        raise InternalError("rho witness failed re-validation")
                    return RhoVerdict(x, variant, False, witness=v)
    return RhoVerdict(x, variant, True)


# -- exact decisions on face interiors -------------------------------------

@dataclass(frozen=True)
class Region:
    """Nonempty set of x in relint(face) whose image direction lies in relint(image_face).

    ``image_face`` is None for the region where Tx = 0.
    """

    face: Face
    image_face: Optional[Face]
    point: Vec


def relint_regions(space: PolyhedralSpace, t: LinearOperator, face: Face) -> Iterator[Region]:
    """Enumerate one representative point per nonempty region of relint(face).

    relint(face) is the set of strictly positive combinations of its vertices;
    by homogeneity the weights are normalised to alpha = 1 + beta with
    beta >= 0, and strict inequalities become slack-one inequalities.
    """
    _check_op(space, t)
    vids = sorted(face.vertex_ids)
    verts = [space.vertices[i] for i in vids]
    imgs = [apply(t, v) for v in verts]
    m = len(verts)
    n = space.dim

    def point_from(beta):
        x = R.combo([1 + b for b in beta[:m]], verts)
        return R.scale(1 / norm(space, x), x)

    # Tx = 0 region; empty when the vertex images are independent
    if R.rank(imgs) < m:
        eqs = [([img[r] for img in imgs], -sum(img[r] for img in imgs)) for r in range(n)]
        beta = feasible_point(m, equalities=eqs, nonneg=True)
        if beta is not None:
            yield Region(face, None, point_from(beta))

    if m == 1:
        x = verts[0]
        tx = imgs[0]
        if not R.is_zero(tx):
            yield Region(face, minimal_face(space, tx), x)
        return

    fvals = [[R.dot(h, img) for img in imgs] for h in space.facets]
    fsums = [sum(row) for row in fvals]
    nf = len(space.facets)

    def may_win(j, k):
        # facet j can strictly beat facet k at some positive weights
        return any(a > b for a, b in zip(fvals[j], fvals[k]))

    def may_tie(j, k):
        return fvals[j] == fvals[k] or (may_win(j, k) and may_win(k, j))

    # variables (beta, s) >= 0 with s the common value of the active facets
    for target in space.face_lattice:
        act = target.active_facet_ids
        if not all(may_win(j, k) for j in act for k in range(nf) if k not in act):
            continue
        if not all(may_tie(j, k) for j in act for k in act if j < k):
            continue
        eqs = [(tuple(fvals[j]) + (-1,), -fsums[j]) for j in act]
        ineqs = [(tuple(fvals[j]) + (-1,), -1 - fsums[j]) for j in range(nf) if j not in act]
        sol = feasible_point(m + 1, equalities=eqs, inequalities=ineqs, nonneg=True)
        if sol is not None:
            yield Region(face, target, point_from(sol))


@dataclass(frozen=True)
class FaceVerdict:
    face: Face
    verdict: bool
    regions: int
    failure: Optional[object] = None  # the failing pointwise certificate / verdict


@dataclass(frozen=True)
class _Bare:
    verdict: bool


def _relint_decide(space, t, face, pointwise: Callable) -> FaceVerdict:
    count = 0
    for region in relint_regions(space, t, face):
        count += 1
        res = pointwise(region.point)
        if not res.verdict:
            return FaceVerdict(face, False, count, res)
    return FaceVerdict(face, True, count)


def preserves_bj_on_relint(space: PolyhedralSpace, t: LinearOperator, face: Face,
                           certify: bool = True) -> FaceVerdict:
    """Exact: does T preserve BJ orthogonality at every point of relint(face)?

    With ``certify=False`` the failing point carries no certificate.
    """
    if certify:
        return _relint_decide(space, t, face, lambda x: preserves_bj_at(space, t, x))
    return _relint_decide(space, t, face, lambda x: _Bare(bj_verdict_at(space, t, x)))


def preserves_rho_on_relint(space: PolyhedralSpace, t: LinearOperator, face: Face,
                            variant: str = "rho") -> FaceVerdict:
    return _relint_decide(space, t, face, lambda x: preserves_rho_at(space, t, x, variant))


# -- structural results ----------------------------------------------------

def _on_face(space: PolyhedralSpace, face: Face, p: Vec) -> bool:
    return norm(space, p) == 1 and all(R.dot(space.facets[j], p) == 1 for j in face.active_facet_ids)


@dataclass(frozen=True)
class FaceTransport:
    zero: bool
    scale: Optional[Fraction] = None
    image_face: Optional[Face] = None
    hull_points_checked: int = 0
    hull_preserved: Optional[bool] = None


def face_transport(space: PolyhedralSpace, t: LinearOperator, face: Face, points: Sequence[Sequence],
                   check_hull: bool = False, hull_samples: int = 8, seed: int = 0) -> FaceTransport:
    """Either T(A) = 0, or ||Ta|| = k is constant on A and T(A)/k lies in one face G.

    With ``check_hull`` the preservation is also verified on the centroid of A
    and on seeded random convex combinations.
    """
    pts = [space.check_point(p) for p in points]
    if not pts:
        raise InvalidInput("empty point set")
    for p in pts:
        if not _on_face(space, face, p):
            raise InvalidInput(f"point {R.fmt_vec(p)} is not on the face")
    for p in pts:
        cert = preserves_bj_at(space, t, p)
        if not cert.verdict:
            raise HypothesisViolated(f"T does not preserve orthogonality at {R.fmt_vec(p)}", cert)
    norms = {norm(space, apply(t, p)) for p in pts}
    if len(norms) != 1:
        raise InternalError("||Tu|| differs between points of one face")
    k = norms.pop()

    hull_checked, hull_ok = 0, None
    if check_hull:
        rng = random.Random(seed)
        combos = [R.centroid(pts)]
        for _ in range(hull_samples):
            w = [Fraction(rng.randint(1, 9)) for _ in pts]
            s = sum(w)
            combos.append(R.combo([a / s for a in w], pts))
        hull_checked = len(combos)
        hull_ok = all(preserves_bj_at(space, t, c).verdict for c in combos)

    if k == 0:
        return FaceTransport(True, Fraction(0), None, hull_checked, hull_ok)
    common = frozenset.intersection(*(active_facets(space, apply(t, p)) for p in pts))
    if not common:
        raise InternalError("scaled image of the set lies in no common face")
    image = space.face_from_active(common)
    for p in pts:
        if not _on_face(space, image, R.scale(1 / k, apply(t, p))):
            raise InternalError("scaled image point is off the image face")
    return FaceTransport(False, k, image, hull_checked, hull_ok)


@dataclass(frozen=True)
class FacetTransport:
    facet: Face
    scale: Fraction
    image_facet: Face
    hypothesis: str  # "certified" or "sampled, not certified"
    samples: int


def int_facet_transport(space: PolyhedralSpace, t: LinearOperator, facet: Face,
                        samples: int = 3, exact: bool = False) -> FacetTransport:
    """The facet G with T(relint F)/||Tu|| inside relint G, for bijective T.

    The hypothesis is checked on ``face_samples`` unless ``exact`` is set, in
    which case it is decided on all of relint F.  The conclusion is checked on
    the sample images and on the images of the vertices of F (which pins down
    the whole image of F by convexity).
    """
    if facet.dim != space.dim - 1:
        raise InvalidInput("expected a facet")
    if not is_bijective(t):
        raise NotBijective("operator is not bijective")
    pts = face_samples(space, facet, samples)
    if exact:
        fv = preserves_bj_on_relint(space, t, facet)
        if not fv.verdict:
            raise HypothesisViolated("T does not preserve orthogonality on relint F", fv.failure)
        label = "certified"
    else:
        for p in pts:
            cert = preserves_bj_at(space, t, p)
            if not cert.verdict:
                raise HypothesisViolated(f"T does not preserve orthogonality at {R.fmt_vec(p)}", cert)
        label = "sampled, not certified"
    u = relative_interior_point(space, facet)
    k = norm(space, apply(t, u))
    image = minimal_face(space, apply(t, u))
    if image.dim != space.dim - 1:
        raise InternalError("image of a relative-interior point is not facet-interior")
    for p in pts:
        q = R.scale(1 / k, apply(t, p))
        if norm(space, q) != 1 or minimal_face(space, q) != image:
            raise InternalError("sampled image leaves the relative interior of the image facet")
    for i in facet.vertex_ids:
        if not _on_face(space, image, R.scale(1 / k, apply(t, space.vertices[i]))):
            raise InternalError("image of the facet is not inside the image facet")
    return FacetTransport(facet, k, image, label, len(pts))


def span_theorem_check(space: PolyhedralSpace, basis: Sequence[Sequence]) -> bool:
    """Do the generators of J(x), x over extreme points outside Y, span the dual?

    The union of the J(x) is used; see the README for why not the intersection.
    """
    ys = [space.check_point(b) for b in basis]
    if ys and R.rank(ys) >= space.dim:
        raise NotProperSubspace("Y must be a proper subspace")
    gens = set()
    for v in space.vertices:
        if not R.in_span(v, ys):
            gens.update(support_face(space, v).generators)
    return bool(gens) and R.rank(sorted(gens)) == space.dim


def inverse_image_smoothness_check(space: PolyhedralSpace, t: LinearOperator, x: Sequence) -> bool:
    """Whether 'Tx smooth implies x smooth' holds at x, given preservation at x."""
    cert = preserves_bj_at(space, t, x)
    if not cert.verdict:
        raise HypothesisViolated("T does not preserve orthogonality at x", cert)
    if cert.degenerate:
        raise HypothesisViolated("Tx = 0")
    x = space.check_point(x)
    return smoothness_order(space, apply(t, x)) != 1 or smoothness_order(space, x) == 1


def preserving_set_scan(space: PolyhedralSpace, t: LinearOperator, samples: int = 2,
                        exact: bool = True) -> dict:
    """Per-face preservation verdicts on sample points (and, if ``exact``, on
    the whole relative interior), plus the places where the preserving set
    fails to be closed: a face preserved on its interior with a vertex that is
    not preserved."""
    rows = []
    vertex_ok = {}
    for face in space.face_lattice:
        pts = face_samples(space, face, samples)
        verdicts = [(p, preserves_bj_at(space, t, p).verdict) for p in pts]
        row = {
            "dim": face.dim,
            "vertices": [R.fmt_vec(space.vertices[i]) for i in sorted(face.vertex_ids)],
            "samples": [{"point": R.fmt_vec(p), "preserved": ok} for p, ok in verdicts],
            "preserved": all(ok for _, ok in verdicts),
        }
        if exact:
            row["relint_preserved"] = preserves_bj_on_relint(space, t, face).verdict
        if face.dim == 0:
            vertex_ok[next(iter(face.vertex_ids))] = row["preserved"]
        rows.append((face, row))
    gaps = []
    for face, row in rows:
        interior_ok = row.get("relint_preserved", row["preserved"])
        if face.dim > 0 and interior_ok:
            bad = [i for i in sorted(face.vertex_ids) if not vertex_ok[i]]
            if bad:
                gaps.append({"face": row["vertices"],
                             "vertices_not_preserved": [R.fmt_vec(space.vertices[i]) for i in bad]})
    return {
        "faces": [row for _, row in rows],
        "preserved_everywhere": all(row.get("relint_preserved", row["preserved"]) for _, row in rows),
        "closure_gaps": gaps,
    }
