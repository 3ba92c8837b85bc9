"""Jump loci, certificates, radicals, and the constancy harness."""

import pytest

from gradedfibers.errors import AlgebraError
from gradedfibers.modules import FreeModule, FreeMap, Presentation
from gradedfibers.rings import make_ring
from gradedfibers import loci, strands
from gradedfibers.specialize import FiberPoint


Rt = make_ring(["x", "y"], [1, 1], params=["t"])


def rank_two_example():
    # cokernel of [[x^2, x y], [t x, y]]: free off t = 1, where the
    # second column becomes a multiple of the first generator pattern
    gens = FreeModule(Rt, [(0,), (1,)])
    cols = [gens.element([Rt.poly("x^2"), Rt.poly("t*x")]),
            gens.element([Rt.poly("x*y"), Rt.poly("y")])]
    return Presentation(FreeMap.from_columns(gens, cols))


def test_nonfree_locus_of_multiplication_by_t():
    info = loci.nonfree_locus(Presentation.cyclic(Rt, [Rt.poly("t")]))
    assert info["ideal_strings"] == ["t"]
    assert info["stabilized"]
    assert not info["is_empty"]


def test_nonfree_locus_of_free_module():
    free = Presentation(FreeMap.from_columns(FreeModule(Rt, [(0,)]), []))
    info = loci.nonfree_locus(free)
    assert info["is_empty"]
    assert info["ideal_strings"] == ["1"]


def test_nonfree_locus_rank_two_example():
    info = loci.nonfree_locus(rank_two_example())
    assert info["ideal_strings"] == ["t - 1"]
    assert info["stabilized"]


def test_window_growth_leaves_locus_unchanged():
    pres = rank_two_example()
    a = loci.nonfree_locus(pres, slack=2)
    b = loci.nonfree_locus(pres, slack=4)
    assert a["ideal_strings"] == b["ideal_strings"]


def test_smith_module_is_locally_free():
    # projective-but-not-free happens globally; the local obstruction is empty
    A = make_ring(["x"], [1], params=["t"], relations=["t^2 - t"])
    pres = Presentation.cyclic(A, [A.poly("x"), A.poly("t")])
    info = loci.nonfree_locus(pres)
    assert info["is_empty"]


def test_duality_exclusion_of_free_module():
    free = Presentation(FreeMap.from_columns(FreeModule(Rt, [(0,)]), []))
    out = loci.duality_exclusion_locus(free)
    assert out["ideal_strings"] == ["1"]


def test_duality_exclusion_rank_two_example():
    out = loci.duality_exclusion_locus(rank_two_example())
    assert out["ideal_strings"] == ["t - 1"]
    assert out["detail"]["ext1"] == ["t - 1"]


def test_duality_exclusion_contains_bad_fiber():
    Rx = make_ring(["x"], [1], params=["t"])
    out = loci.duality_exclusion_locus(Presentation.cyclic(Rx, [Rx.poly("t*x")]))
    assert out["ideal_strings"] == ["t"]
    assert out["detail"]["module"] == ["t"]
    assert out["detail"]["ext1"] == ["t"]


def test_squarefree_part_and_factors():
    p = Rt.poly("t^3 - 2*t^2 + t")  # t (t-1)^2
    assert str(loci.squarefree_part(p)) == "t^2 - t"
    K = make_ring(["u"], [1], params=["s", "t"])
    facs = sorted(str(q) for q in loci.irreducible_factors(K.poly("s^2*t + s*t^2")))
    assert facs == ["s", "s + t", "t"]


def test_locus_radical_cases():
    K = make_ring(["u"], [1], params=["s", "t"])
    rad, exact = loci.locus_radical([K.poly("t^3 - t^2")], K)
    assert exact and [str(g) for g in rad] == ["t^2 - t"]
    rad, exact = loci.locus_radical([K.poly("s^2"), K.poly("t^2")], K)
    assert exact and sorted(str(g) for g in rad) == ["s", "t"]
    # positive dimensional and not principal: returned as-is, flag down
    rad, exact = loci.locus_radical([K.poly("s*t"), K.poly("s^2 + s*t")], K)
    assert not exact


def test_dense_open_certificate_polynomial_base():
    out = loci.dense_open_certificate([Rt.poly("t")], Rt)
    assert str(out["global"]) == "t"
    out = loci.dense_open_certificate([Rt.one()], Rt)
    assert str(out["global"]) == "1"


def test_dense_open_certificate_per_component():
    A = make_ring(["x"], [1], params=["t"], relations=["t^2 - t"])
    out = loci.dense_open_certificate([A.poly("t")], A)
    # V(t) swallows the whole (t)-component: no certificate there
    assert out["(t)"] is None
    assert str(out["(t - 1)"]) == "t"
    assert out["global"] is None


def katzman_presentation():
    K = make_ring(["u", "v"], [(1, 0), (1, 0)],
                  yvars=["x", "y"], ydegrees=[(0, 1), (0, 1)],
                  params=["s", "t"])
    f = K.poly("s*x^2*v^2 - (t + s)*x*y*u*v + t*y^2*u^2")
    return K, Presentation.cyclic(K, [f])


def test_katzman_jump_locus_designated_bidegrees():
    # the (-d, d) strand of H^2 tears exactly along s t (t^(d-1) + ... + s^(d-1))
    K, pres = katzman_presentation()
    out = loci.cohomology_jump_loci(pres, [(-2, 2)])
    assert [str(g) for g in out["ideal"]] == ["s^2*t + s*t^2"]
    facs = sorted(str(q) for q in loci.irreducible_factors(out["ideal"][0]))
    assert facs == ["s", "s + t", "t"]

    out3 = loci.cohomology_jump_loci(pres, [(-3, 3)])
    assert [str(g) for g in out3["ideal"]] == ["s^3*t + s^2*t^2 + s*t^3"]
    facs3 = sorted(str(q) for q in loci.irreducible_factors(out3["ideal"][0]))
    assert facs3 == ["s", "s^2 + s*t + t^2", "t"]


def test_cohomology_jump_locus_guards():
    K, pres = katzman_presentation()
    with pytest.raises(AlgebraError):
        loci.cohomology_jump_locus(pres, 5, (-2, 2))
    A = make_ring(["x"], [1], params=["t"], relations=["t^2 - t"])
    with pytest.raises(AlgebraError):
        loci.cohomology_jump_locus(Presentation.cyclic(A, [A.poly("x")]), 0, (0,))


def test_constancy_report_locally_but_not_globally_constant():
    A = make_ring(["x"], [1], params=["t"], relations=["t^2 - t"])
    pres = Presentation.cyclic(A, [A.poly("x"), A.poly("t")])
    rep = loci.constancy_report(pres, [(0,), (1,)], seed=3, samples=2)
    assert rep["locally_constant"] is True
    assert rep["globally_constant"] is False
    assert rep["components"]["(t)"]["generic_dims"]["0@0"] == 1
    assert rep["components"]["(t - 1)"]["generic_dims"]["0@0"] == 0
    for comp in rep["components"].values():
        assert comp["samples_match"]
        for row in comp["samples"]:
            assert row["match"]


def test_constancy_report_field_base():
    R = make_ring(["x", "y"], [1, 1])
    pres = Presentation.cyclic(R, [R.poly("x")])
    rep = loci.constancy_report(pres, [(0,), (-1,)])
    assert rep["globally_constant"] is True
    assert "(field base)" in rep["components"]


def test_locus_excludes_exactly_the_jumping_fibers():
    pres = rank_two_example()
    window = range(0, 5)
    generic = [strands.presentation_strand_dim(pres, (mu,))[0] for mu in window]
    for tv in (2, 3, -1):
        pt = FiberPoint.rational(Rt, {"t": tv})
        dims = [strands.presentation_strand_dim(pres, (mu,), pt) for mu in window]
        assert dims == generic, tv
    bad = FiberPoint.rational(Rt, {"t": 1})
    dims_bad = [strands.presentation_strand_dim(pres, (mu,), bad) for mu in window]
    assert dims_bad != generic
    assert dims_bad[3] == generic[3] + 1
