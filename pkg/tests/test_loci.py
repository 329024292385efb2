import random

import pytest

from chduality.errors import DegenerateInput, InvalidComplex, MissingDeclaration, NotHomogeneous
from chduality.ideal import Ideal, codim, radical_contains, same_radical, saturate
from chduality.loci import expected_ranks, intrinsic_loci, minors, rank_drop_locus, singular_locus
from chduality.poly import RingSpec
from chduality.resolution import FreeComplex, free_resolution, koszul_complex
from conftest import CORPUS_IDEALS, corpus_context, corpus_ideal

Q3 = RingSpec(("z1", "z2", "z3"))


def test_expected_ranks_examples():
    assert expected_ranks(koszul_complex(Q3.gens()[:2])) == [1, 1]
    assert expected_ranks(koszul_complex([Q3.parse("z1^2 + z2^2 + z3^2")])) == [1]
    res = corpus_context("surface").resolution
    r = expected_ranks(res) + [0]
    for k in range(1, res.length + 1):
        assert r[k - 1] + r[k] == res.ranks[k]
    bad = FreeComplex(Q3, [1, 1, 1], [[[Q3.var("z1")]], [[Q3.var("z2")]]])
    with pytest.raises(InvalidComplex):
        expected_ranks(bad)


def test_rank_drop_examples():
    z1, z2, _ = Q3.gens()
    assert rank_drop_locus(koszul_complex([z1, z2]), 1).same_as(Ideal(Q3, [z1, z2]))
    Q = Q3.parse("z1^2 + z2^2 + z3^2")
    assert rank_drop_locus(koszul_complex([Q]), 1).same_as(Ideal(Q3, [Q]))
    res = corpus_context("surface").resolution
    top = rank_drop_locus(res, 3)
    assert all(radical_contains(top, Ideal(top.ring, [v])) for v in top.ring.gens())
    assert not top.is_unit()


def test_tail_locus_lies_inside_Z():
    # V(Z_3) is contained in Z, so saturating by J_Z removes everything.
    Z = corpus_context("surface")
    top = rank_drop_locus(Z.resolution, 3)
    assert radical_contains(top, Z.J_Z)
    sat, _ = saturate(top, Z.J_Z)
    assert sat.is_unit()


def test_minors_of_identity():
    one, zero = Q3.one(), Q3.zero()
    M = [[one, zero, zero], [zero, one, zero], [zero, zero, one]]
    assert minors(M, 3, Q3) == [one]
    assert len(minors(M, 1, Q3)) == 1
    assert len(minors(M, 2, Q3)) == 1


def test_singular_locus_examples():
    sing = singular_locus(corpus_ideal("quadric3"))
    assert codim(sing) == 3
    cusp = singular_locus(corpus_ideal("cusp"))
    assert codim(cusp) == 2
    hyper = singular_locus(Ideal.parse(Q3, ["z1"], radical=True, pure=True))
    assert hyper.is_unit()
    with pytest.raises(MissingDeclaration):
        singular_locus(Ideal.parse(Q3, ["z1"]))
    with pytest.raises(DegenerateInput):
        singular_locus(Ideal.parse(Q3, ["z1^2"], radical=True, pure=True))


@pytest.mark.parametrize("name,expected", [
    ("quadric3", {0: 2}),
    ("quadric4", {0: 3}),
    ("cusp", {0: 1}),
    ("surface", {0: 2, 1: 2}),
])
def test_intrinsic_loci_examples(name, expected):
    Z = corpus_context(name)
    assert Z.codims() == expected
    report = Z.loci
    assert report.intrinsic[-1].empty
    for loc in report.nonempty_intrinsic():
        # every nonempty locus is the origin in these examples
        assert all(radical_contains(loc.ideal, Ideal(loc.ideal.ring, [v])) for v in loc.ideal.ring.gens())


def test_surface_second_locus_is_empty():
    report = corpus_context("surface").loci
    assert report.codim_in_Z(2) is None and report.intrinsic_ideal(2).is_unit()
    assert not report.is_cohen_macaulay()


def test_chain_and_ambient_equalities(corpus_name):
    Z = corpus_context(corpus_name)
    chain = Z.loci.ambient_chain
    for a, b in zip(chain, chain[1:]):
        # V(Z_(k+1)) ⊆ V(Z_k)
        assert radical_contains(b.ideal, a.ideal)
    for loc in chain[: Z.p_Z]:
        assert same_radical(loc.ideal, Z.J_Z)


def test_intrinsic_codims_lower_bound(corpus_name):
    for k, c in corpus_context(corpus_name).codims().items():
        if k >= 1:
            assert c >= k + 1


@pytest.mark.parametrize("seed", range(3))
def test_loci_ignore_generator_order(seed):
    variables, weights, gens = CORPUS_IDEALS["surface"]
    gens = list(gens)
    random.Random(seed).shuffle(gens)
    report = intrinsic_loci(Ideal.parse(RingSpec(variables, weights), gens, radical=True, pure=True))
    ref = corpus_context("surface").loci
    assert [l.codim for l in report.intrinsic] == [l.codim for l in ref.intrinsic]
    for a, b in zip(report.intrinsic, ref.intrinsic):
        assert same_radical(a.ideal, b.ideal)


def test_intrinsic_loci_errors():
    R = RingSpec(("x", "y"))
    with pytest.raises(NotHomogeneous):
        intrinsic_loci(Ideal.parse(R, ["x + y^2"], radical=True, pure=True))
    with pytest.raises(MissingDeclaration):
        intrinsic_loci(Ideal.parse(R, ["x*y"], radical=True))


def test_report_json():
    data = corpus_context("surface").loci.to_json()
    assert data["p"] == 2 and data["resolution_length"] == 3
    assert [e["codim"] for e in data["intrinsic"]] == [2, 2, None]
    assert free_resolution(corpus_ideal("surface")).ranks == [1, 4, 4, 1]
