import pytest

from bjlab import rational as R
from bjlab.errors import EmptyCandidateSet, InternalError, InvalidInput, ReproductionFailure
from bjlab.kset import (
    CLOSURE_EXAMPLE,
    RHO_EXAMPLE,
    SearchConfig,
    candidate_set,
    equivalence_matrix,
    falsification_search,
    reproduce_counterexamples,
    validate_counterexample,
)
from bjlab.operators import LinearOperator, is_scalar_isometry, parse_operator
from bjlab.preservation import check_certificate, preserves_bj_at, preserves_bj_on_relint
from bjlab.spaces import l1, linf, random_space

from util import V

COLUMNS = ("bj_dense", "rho_smooth", "rho_plus_smooth", "rho_minus_smooth", "scalar_isometry")


def row_values(row):
    return list(row["bj_ksmooth"].values()) + [row[c] for c in COLUMNS]


def test_reproduction_passes():
    rep = reproduce_counterexamples()
    assert rep["passed"] and not rep["failures"]
    assert all(rep["rho_not_isometry"]["rho_preserved_at_extreme_points"].values())
    assert rep["rho_not_isometry"]["scalar_isometry"] is None
    assert rep["rho_not_isometry"]["bj_preserved_at_(1,1)"] is False
    assert all(rep["preserving_set_not_closed"]["bj_preserved_at_(1,t)"].values())
    assert rep["preserving_set_not_closed"]["bj_preserved_at_(1,1)"] is False


def test_identity_negative_control_fails():
    with pytest.raises(ReproductionFailure, match="scalar isometry"):
        reproduce_counterexamples(rho_operator=LinearOperator.identity(2))


def test_extreme_points_of_square_survive_search():
    rep = falsification_search(SearchConfig(linf(2), "extreme", budget=10_000, seed=7))
    assert rep.counterexamples == []
    assert rep.preserving and all(lam is not None for _, lam in rep.preserving)


def test_single_smooth_point_is_not_a_kset():
    cfg = SearchConfig(linf(2), "points", points=(V(1, 0),), budget=1000, seed=0)
    rep = falsification_search(cfg)
    assert rep.counterexamples
    cand = cfg.candidates()
    for t in rep.counterexamples:
        assert validate_counterexample(linf(2), t, cand)
    # the projection (x, 0) is one such operator
    proj = parse_operator("1,0;0,0")
    cert = preserves_bj_at(linf(2), proj, V(1, 0))
    assert cert.verdict and check_certificate(linf(2), proj, cert)
    assert is_scalar_isometry(linf(2), proj) is None


def test_octahedron_two_smooth_survives_search():
    rep = falsification_search(SearchConfig(l1(3), "ksmooth", k=2, budget=10_000, seed=1))
    assert rep.counterexamples == []


def test_centroid_surrogate_is_not_a_kset():
    # (2x, y) preserves at every edge centroid of the square, but not on
    # the whole interior of the horizontal edges
    s = linf(2)
    cents = candidate_set(s, "facet-interior", exact=False)
    assert all(preserves_bj_at(s, CLOSURE_EXAMPLE, p).verdict for p in cents.points)
    assert not all(preserves_bj_on_relint(s, CLOSURE_EXAMPLE, f).verdict
                   for f in candidate_set(s, "facet-interior").faces)
    rep = falsification_search(SearchConfig(s, "facet-interior", budget=2000, seed=1, exact=False))
    assert rep.counterexamples
    rep = falsification_search(SearchConfig(s, "facet-interior", budget=2000, seed=1))
    assert rep.counterexamples == []


def test_hyperplane_candidates():
    s = linf(2)
    cand = candidate_set(s, "hyperplane", hyperplane=V(1, 0))
    assert cand.points and all(p[0] == 1 for p in cand.points)
    rep = falsification_search(SearchConfig(s, "hyperplane", hyperplane=V(1, 0), budget=500, seed=2))
    assert rep.trials == 500


def test_reports_are_deterministic():
    cfg = SearchConfig(random_space(2, 5), "ksmooth", k=1, budget=700, seed=42, space_name="r")
    a = falsification_search(cfg).to_json(timing=False)
    b = falsification_search(cfg).to_json(timing=False)
    assert a == b
    assert '"schema": 1' in a and "wall_time" not in a
    c = falsification_search(SearchConfig(random_space(2, 5), "ksmooth", k=1, budget=700, seed=43,
                                          space_name="r")).to_json(timing=False)
    assert c != a


def test_config_errors():
    with pytest.raises(InvalidInput):
        SearchConfig(linf(2), budget=0).candidates()
    with pytest.raises(EmptyCandidateSet):
        SearchConfig(linf(2), "points", points=()).candidates()
    with pytest.raises(InvalidInput):
        SearchConfig(linf(2), "points", points=(V(0, 0),)).candidates()
    with pytest.raises(InvalidInput):
        candidate_set(linf(2), "spiral")


def test_equivalence_matrix_examples():
    row = equivalence_matrix(linf(3), LinearOperator.identity(3))
    assert all(row_values(row)) and row["lambda"] == "1" and not row["violation"]
    row = equivalence_matrix(linf(2), CLOSURE_EXAMPLE)
    assert not any(row_values(row)) and not row["violation"]
    row = equivalence_matrix(linf(2), parse_operator("0,3;3,0"))
    assert all(row_values(row)) and row["lambda"] == "3"


def test_equivalence_matrix_rho_example():
    # rho-preserving at the extreme points only; every column is false
    row = equivalence_matrix(linf(2), RHO_EXAMPLE)
    assert not any(row_values(row)) and row["consistent"]


def test_equivalence_matrix_zero_operator_is_flagged_separately():
    row = equivalence_matrix(linf(2), LinearOperator.zero(2))
    assert row["zero_operator"] and not row["violation"]
    assert row["bj_dense"] and not row["scalar_isometry"]


def test_equivalence_matrix_on_seeded_operators():
    import random
    from bjlab.kset import OperatorSampler
    for s in (linf(2), l1(3), random_space(3, 10, 4)):
        rng = random.Random(3)
        sampler = OperatorSampler(s, candidate_set(s, "extreme"), rng, 6)
        for i in range(14):
            row = equivalence_matrix(s, sampler.draw(i))
            assert not row["violation"], row
