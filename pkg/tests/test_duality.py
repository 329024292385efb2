import pytest

from chduality.duality import (
    CERTIFIED_HOLDS,
    FAILS_AT_NEARBY_POINT,
    INDETERMINATE,
    CertificateLine,
    TupleOnZ,
    VarietyContext,
    construct_counterexample_CM,
    construct_counterexample_nonCM,
    depth_condition_Z1,
    duality_certificate,
    generic_ci_through,
    is_complete_intersection_on,
    is_regular_sequence_on,
    normality,
    p_duality_classification,
    socle_dimension,
    standard_monomials,
    tensor_condition,
    threshold,
)
from chduality.errors import (
    CodimOutOfRange,
    ConditionNotMet,
    DegenerateInput,
    MissingDeclaration,
    NotArtinian,
    NotCM,
    NotCompleteIntersection,
    OutOfRange,
)
from chduality.ideal import Ideal, membership
from chduality.loci import Locus, LocusReport
from chduality.poly import RingSpec
from chduality.resolution import free_resolution
from conftest import corpus_context

XY = RingSpec(("x", "y"))


def polys(Z, *texts):
    return [Z.ring.parse(t) for t in texts]


def test_context_requires_flags():
    with pytest.raises(MissingDeclaration):
        VarietyContext.from_ideal(Ideal.parse(XY, ["x*y"]))
    Z = corpus_context("surface")
    assert (Z.p_Z, Z.dim_Z) == (2, 2)


def test_tuple_rejects_functions_vanishing_on_Z():
    Z = corpus_context("quadric3")
    with pytest.raises(ValueError):
        TupleOnZ.on(Z, polys(Z, "z1", "z1^2 + z2^2 + z3^2"))


def test_complete_intersection_examples():
    q = corpus_context("quadric3")
    assert is_complete_intersection_on(q, polys(q, "z1", "z2"))
    s = corpus_context("surface")
    assert is_complete_intersection_on(s, polys(s, "z1", "z3"))
    assert not is_complete_intersection_on(q, polys(q, "z1", "z1"))


def test_duality_certificate_examples():
    q3 = corpus_context("quadric3")
    assert duality_certificate(q3, polys(q3, "z1")).status == CERTIFIED_HOLDS
    v = duality_certificate(q3, polys(q3, "z1", "z2"))
    assert v.status == INDETERMINATE
    assert v.condition_table == [{"k": 0, "codim": 2, "bound": 3, "ok": False}]
    q4 = corpus_context("quadric4")
    assert duality_certificate(q4, polys(q4, "z1", "z2")).status == CERTIFIED_HOLDS
    with pytest.raises(NotCompleteIntersection):
        duality_certificate(q3, polys(q3, "z1", "z1"))


@pytest.mark.parametrize("name,p,status", [
    ("quadric4", 1, CERTIFIED_HOLDS),
    ("quadric4", 2, CERTIFIED_HOLDS),
    ("quadric4", 3, FAILS_AT_NEARBY_POINT),
    ("quadric3", 1, CERTIFIED_HOLDS),
    ("quadric3", 2, FAILS_AT_NEARBY_POINT),
    ("cusp", 1, FAILS_AT_NEARBY_POINT),
    ("surface", 1, FAILS_AT_NEARBY_POINT),
    ("surface", 2, INDETERMINATE),
])
def test_classification_examples(name, p, status):
    v = p_duality_classification(corpus_context(name), p)
    assert v.status == status
    if status == CERTIFIED_HOLDS:
        assert len(v.condition_table) == len(corpus_context(name).codims())
    if status == FAILS_AT_NEARBY_POINT:
        assert v.witness is not None and v.witness.verify()


def test_classification_branches():
    assert p_duality_classification(corpus_context("surface"), 1).branch == "non-cm"
    assert p_duality_classification(corpus_context("cusp"), 1).branch == "cm"
    assert threshold(corpus_context("surface")) == 1
    with pytest.raises(OutOfRange):
        p_duality_classification(corpus_context("quadric3"), 3)
    with pytest.raises(OutOfRange):
        p_duality_classification(corpus_context("quadric3"), 0)


def test_two_planes_meeting_in_a_point():
    R = RingSpec(("a", "b", "c", "d"))
    J = Ideal.parse(R, ["a*c", "a*d", "b*c", "b*d"], radical=True, pure=True)
    Z = VarietyContext.from_ideal(J)
    assert Z.codims() == {0: 2, 1: 2}
    v = p_duality_classification(Z, 1)
    assert v.status == FAILS_AT_NEARBY_POINT and v.branch == "non-cm"
    assert v.witness.verify()


def synthetic(codims: dict, dim: int) -> VarietyContext:
    """Context whose locus table is given directly; only the decision logic reads it."""
    R = RingSpec(tuple(f"x{i}" for i in range(dim + 1)))
    dummy = Ideal(R, R.gens())
    top = max(codims, default=0) + 1
    intrinsic = [Locus(k, dummy, codims.get(k)) for k in range(top + 1)]
    report = LocusReport(1, dim + 1, top + 1, [], intrinsic)
    return VarietyContext(Ideal(R, [R.var("x0")]), 1, dim, report, None)


@pytest.mark.parametrize("codims,dim,p,status,branch", [
    ({0: 1, 1: 3}, 3, 1, FAILS_AT_NEARBY_POINT, "nearby-cm"),
    ({0: 1, 1: 3}, 3, 2, FAILS_AT_NEARBY_POINT, "nearby-cm"),
    ({0: 3, 1: 2}, 3, 1, FAILS_AT_NEARBY_POINT, "non-cm"),
    ({0: 3, 1: 2}, 3, 2, INDETERMINATE, None),
    ({0: 3, 1: 3}, 3, 1, CERTIFIED_HOLDS, None),
    ({0: 2}, 3, 3, FAILS_AT_NEARBY_POINT, "cm"),
    ({}, 2, 2, CERTIFIED_HOLDS, None),
])
def test_classification_table(codims, dim, p, status, branch):
    v = p_duality_classification(synthetic(codims, dim), p, construct=False)
    assert (v.status, v.branch) == (status, branch)
    if status == FAILS_AT_NEARBY_POINT:
        assert v.existence_only


def test_regular_sequence_examples():
    s = corpus_context("surface")
    res = is_regular_sequence_on(s, polys(s, "z1", "z3"))
    assert not res.regular and res.failed_index == 2
    assert res.witness == s.ring.parse("z2")
    assert all(line.check(s.ring) for line in res.certificate)
    q = corpus_context("quadric3")
    assert is_regular_sequence_on(q, polys(q, "z1", "z2")).regular
    res = is_regular_sequence_on(q, polys(q, "z1", "z1"))
    assert not res.regular and res.witness == q.ring.one()


def test_depth_condition_examples():
    s = corpus_context("surface")
    assert not depth_condition_Z1(s, 2)
    assert depth_condition_Z1(s, 1)
    q = corpus_context("quadric3")
    assert all(depth_condition_Z1(q, k) for k in range(1, 6))
    with pytest.raises(OutOfRange):
        depth_condition_Z1(q, 0)


def test_tensor_condition_examples():
    q = corpus_context("quadric3")
    ok, rows = tensor_condition(q, polys(q, "z1", "z2"))
    assert ok and rows == []
    s = corpus_context("surface")
    ok, rows = tensor_condition(s, polys(s, "z1", "z3"))
    assert not ok and rows[0]["codim"] == 2 and rows[0]["bound"] == 3
    ok, _ = tensor_condition(s, polys(s, "z1"))
    assert ok


@pytest.mark.parametrize("gens,expected", [
    (["x^2", "x*y", "y^2"], 2),
    (["x", "y"], 1),
    (["x^2", "y^2"], 1),
    (["x^2", "x*y", "y^3"], 2),
    (["x^3", "y^3", "x^2*y^2"], 2),
    (["x^2 - y^2", "x*y"], 1),
])
def test_socle_dimension(gens, expected):
    q = Ideal.parse(XY, gens)
    data = socle_dimension(q)
    assert data.socle_dim == expected
    assert data.socle_dim == free_resolution(q).ranks[-1]
    assert data.length == len(standard_monomials(q))


def test_socle_requires_artinian():
    with pytest.raises(NotArtinian):
        socle_dimension(Ideal.parse(XY, ["x^2"]))
    with pytest.raises(NotArtinian):
        socle_dimension(Ideal.parse(XY, ["1"]))


def test_socle_matches_three_variable_resolution():
    R = RingSpec(("a", "b", "c"))
    for gens in (["a^2", "b^2", "c^2"], ["a", "b", "c"], ["a^2", "b^2", "c^2", "a*b", "a*c", "b*c"],
                 ["a^2 - b^2", "b^2 - c^2", "a*b", "a*c", "b*c"]):
        q = Ideal.parse(R, gens)
        assert socle_dimension(q).socle_dim == free_resolution(q).ranks[-1]


def test_generic_ci_through_examples():
    q = corpus_context("quadric3")
    m = Ideal(q.ring, q.ring.gens())
    f = generic_ci_through(m, q, 2, seed=3)
    assert f.p == 2 and all(g.total_degree() == 1 for g in f.f)
    assert is_complete_intersection_on(q, f)
    with pytest.raises(DegenerateInput):
        generic_ci_through(q.J_Z, q, 1)
    with pytest.raises(CodimOutOfRange):
        generic_ci_through(m, q, 3)
    s = corpus_context("surface")
    f = generic_ci_through(Ideal(s.ring, s.ring.gens()), s, 2, seed=0)
    assert is_complete_intersection_on(s, f)
    assert not is_regular_sequence_on(s, f).regular


def test_generic_ci_is_deterministic():
    s = corpus_context("surface")
    m = Ideal(s.ring, s.ring.gens())
    assert generic_ci_through(m, s, 2, seed=5).f == generic_ci_through(m, s, 2, seed=5).f


@pytest.mark.parametrize("name,q,g", [("quadric3", 2, "z3"), ("quadric4", 3, "z4"), ("cusp", 1, "w")])
def test_cm_counterexamples(name, q, g):
    Z = corpus_context(name)
    w = construct_counterexample_CM(Z, q, seed=0)
    assert w.g == Z.ring.parse(g)
    assert w.f.p == q
    assert w.verify()
    I = Z.with_tuple(w.f.f)
    assert not membership(w.g, I)
    for v in Z.ring.gens():
        assert membership(w.g * v, I)
    assert duality_certificate(Z, w.f).status != CERTIFIED_HOLDS


def test_cm_counterexample_errors():
    with pytest.raises(NotCM):
        construct_counterexample_CM(corpus_context("surface"), 2)
    with pytest.raises(CodimOutOfRange):
        construct_counterexample_CM(corpus_context("quadric4"), 2)


def test_noncm_counterexample():
    s = corpus_context("surface")
    w = construct_counterexample_nonCM(s, 1, seed=0)
    assert w.g == s.ring.parse("z2")
    assert w.f.p == 1 and w.verify()
    with pytest.raises(ConditionNotMet):
        construct_counterexample_nonCM(corpus_context("quadric3"), 1)
    with pytest.raises(ConditionNotMet):
        construct_counterexample_nonCM(s, 2)


def test_normality():
    assert not normality(corpus_context("cusp"))["normal"]
    assert normality(corpus_context("quadric3"))["normal"]
    assert not normality(corpus_context("surface"))["normal"]


def test_certificate_lines_detect_tampering():
    R = corpus_context("cusp").ring
    ideal = [R.parse("z^3 - w^2"), R.parse("z")]
    assert CertificateLine("member", ideal, R.parse("z*w")).check(R)
    assert not CertificateLine("member", ideal, R.parse("w")).check(R)
    assert CertificateLine("codim", ideal, value=2).check(R)
    assert not CertificateLine("codim", ideal, value=1).check(R)
    line = CertificateLine("non-member", ideal, R.parse("w"))
    assert CertificateLine.from_json(line.to_json(), R).check(R)


@pytest.mark.parametrize("seed", range(3))
def test_soundness_against_constructed_witnesses(corpus_name, seed):
    """A certified tuple never has a witness; every witness tuple is uncertified."""
    Z = corpus_context(corpus_name)
    for p in range(1, Z.dim_Z + 1):
        v = p_duality_classification(Z, p, seed=seed)
        if v.witness is not None:
            assert v.witness.verify()
            f = v.witness.f
            if f.p and is_complete_intersection_on(Z, f):
                assert duality_certificate(Z, f).status != CERTIFIED_HOLDS


@pytest.mark.parametrize("seed", range(4))
def test_certified_classification_certifies_sampled_tuples(corpus_name, seed):
    Z = corpus_context(corpus_name)
    m = Ideal(Z.ring, Z.ring.gens())
    for p in range(1, Z.dim_Z + 1):
        if p_duality_classification(Z, p, construct=False).status != CERTIFIED_HOLDS:
            continue
        f = generic_ci_through(m, Z, p, seed=seed)
        assert duality_certificate(Z, f).status == CERTIFIED_HOLDS


@pytest.mark.parametrize("seed", range(3))
def test_regular_sequences_are_complete_intersections(corpus_name, seed):
    Z = corpus_context(corpus_name)
    m = Ideal(Z.ring, Z.ring.gens())
    for p in range(1, Z.dim_Z + 1):
        f = generic_ci_through(m, Z, p, seed=seed)
        if is_regular_sequence_on(Z, f).regular:
            assert is_complete_intersection_on(Z, f)
