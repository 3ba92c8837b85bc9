"""Groebner engine: bases, normal forms, syzygies, ideal operations.

Property loops draw random ideals with a fixed seed; every invariant
asserted here is a consequence of the definitions, not of any chosen
basis, so the checks stay valid if internals change.
"""

import random

import pytest

from gradedfibers.errors import AlgebraError, BaseNotDomain
from gradedfibers.modules import FreeModule, FreeMap, Presentation
from gradedfibers.rings import PrimeField, make_ring
from gradedfibers import groebner


R2 = make_ring(["x", "y"], [1, 1])
R2t = make_ring(["x", "y"], [1, 1], params=["t"])


def test_ideal_gb_known_basis():
    gb = groebner.ideal_gb([R2.poly("x^2 + y^2"), R2.poly("x*y")], ring=R2)
    leads = sorted(g.leading_monomial() for g in gb)
    # x^2, xy and the derived y^3
    assert leads == [(0, 3), (1, 1), (2, 0)]


def test_ideal_membership_and_normal_form():
    gb = groebner.ideal_gb([R2.poly("x^2"), R2.poly("y^2")], ring=R2)
    assert groebner.ideal_contains(gb, R2.poly("x^3 + x*y^2"))
    assert not groebner.ideal_contains(gb, R2.poly("x*y"))
    nf = groebner.nf_poly(R2.poly("x^2 + x*y + y^2"), gb)
    assert nf == R2.poly("x*y")


def test_ideal_equal_ignores_generator_choice():
    a = [R2.poly("x + y"), R2.poly("y")]
    b = [R2.poly("x"), R2.poly("x + y")]
    assert groebner.ideal_equal(a, b, ring=R2)
    assert not groebner.ideal_equal([R2.poly("x")], b, ring=R2)


def test_random_combinations_stay_in_ideal():
    rng = random.Random(3)
    mono2 = R2.monomials_of_degree((2,))
    for _ in range(25):
        gens = []
        for _ in range(rng.randint(1, 3)):
            p = R2.zero()
            for m in rng.sample(mono2, rng.randint(1, 3)):
                p = p + rng.randint(-2, 2) * R2.monomial(m)
            if not p.is_zero():
                gens.append(p)
        if not gens:
            continue
        gb = groebner.ideal_gb(gens, ring=R2)
        # an explicit combination must reduce to zero
        comb = R2.zero()
        for g in gens:
            comb = comb + R2.poly("x - 2*y") * g
        assert groebner.ideal_contains(gb, comb)


def test_gb_idempotent():
    rng = random.Random(4)
    for _ in range(10):
        gens = [R2.poly(src) for src in
                rng.sample(["x^2", "x*y", "y^2", "x^2 - y^2", "x^2 + x*y"], 2)]
        gb1 = groebner.ideal_gb(gens, ring=R2)
        gb2 = groebner.ideal_gb(gb1, ring=R2)
        assert [g.terms for g in gb1] == [g.terms for g in gb2]


def test_module_gb_and_strand_dims():
    # coker [x, y] has Hilbert function 1, 1, 1, ... as R/(x... wait
    # the submodule generated by (x, y)-columns of R^1
    mod = FreeModule(R2, [(0,)])
    vecs = [mod.element([R2.poly("x")]), mod.element([R2.poly("y")])]
    gb = groebner.module_gb(vecs, mod)
    assert groebner.quotient_strand_dim(gb, (0,)) == 1
    assert groebner.quotient_strand_dim(gb, (1,)) == 0
    assert groebner.submodule_strand_dim(gb, (1,)) == 2
    assert groebner.submodule_strand_dim(gb, (2,)) == 3


def test_kernel_and_syzygies():
    # Koszul: syzygies of (x, y) are generated by (-y, x)
    mod = FreeModule(R2, [(0,)])
    vecs = [mod.element([R2.poly("x")]), mod.element([R2.poly("y")])]
    syz = groebner.syzygies(vecs, mod)
    assert len(syz) == 1
    s = syz[0]
    assert [str(c) for c in s.components()] in (["-y", "x"], ["y", "-x"])


def test_syzygy_columns_compose_to_zero():
    rng = random.Random(5)
    mono = R2.monomials_of_degree((2,))
    for _ in range(15):
        vecs = []
        mod = FreeModule(R2, [(0,), (1,)])
        for _ in range(3):
            a = rng.choice(mono)
            b = rng.choice(R2.monomials_of_degree((1,)))
            vecs.append(mod.element([R2.monomial(a), R2.monomial(b)]))
        syz = groebner.syzygies(vecs, mod)
        for s in syz:
            acc = mod.zero()
            for c, v in zip(s.components(), vecs):
                acc = acc + v.scale(c)
            assert acc.is_zero()


def test_preimage_gens():
    mod = FreeModule(R2, [(0,)])
    fmap = FreeMap.from_columns(mod, [mod.element([R2.poly("x^2")]),
                                      mod.element([R2.poly("x*y")])])
    pre = groebner.preimage_gens(fmap, [mod.element([R2.poly("x^2*y")])])
    # x^2*y = y * x^2 = x * xy: some preimage must exist
    assert pre
    for v in pre:
        img = fmap.apply(v)
        assert str(img.components()[0]) == "x^2*y"


def test_colon_and_saturation():
    gens = [R2.poly("x^2*y"), R2.poly("x*y^2")]
    col = groebner.colon_element(gens, R2.poly("x*y"), ring=R2)
    assert groebner.ideal_equal(col, [R2.poly("x"), R2.poly("y")], ring=R2)
    # (x^2 y, x y^2) = xy*(x, y), so saturating by the irrelevant ideal
    # peels the embedded component and leaves (xy)
    sat = groebner.saturate_ideal(gens, [R2.poly("x"), R2.poly("y")], ring=R2)
    assert groebner.ideal_equal(sat, [R2.poly("x*y")], ring=R2)


def test_intersect_ideals():
    a = [R2.poly("x")]
    b = [R2.poly("y")]
    meet = groebner.intersect_ideals(a, b, R2)
    assert groebner.ideal_equal(meet, [R2.poly("x*y")], ring=R2)


def test_eliminate_ideal():
    # image of the 2-uple embedding: eliminate x, y from (a - x^2, b - xy, c - y^2)
    R = make_ring(["x", "y", "a", "b", "c"], [1, 1, 2, 2, 2])
    gens = [R.poly("a - x^2"), R.poly("b - x*y"), R.poly("c - y^2")]
    elim = groebner.eliminate_ideal(gens, ["x", "y"], ring=R)
    assert any(g == R.poly("b^2 - a*c") or g == R.poly("a*c - b^2") for g in elim)


def test_gb_over_parameter_base():
    gb = groebner.ideal_gb([R2t.poly("t*x - y")], ring=R2t)
    # the x-block dominates the order, so the lead term is t*x; its base
    # coefficient t is the certificate that evaluation commutes off t = 0
    (g,) = gb
    exps, coeff = g.leading_term()
    assert exps == (1, 0, 1) and coeff == 1


def test_matrix_rank_generic():
    rank, _r, _c, minor = groebner.matrix_rank_generic(
        [[R2t.poly("t"), R2t.poly("1")], [R2t.poly("t^2"), R2t.poly("t")]], R2t)
    assert rank == 1
    rank2, _r, _c, minor2 = groebner.matrix_rank_generic(
        [[R2t.poly("t"), R2t.poly("1")], [R2t.poly("0"), R2t.poly("t - 1")]], R2t)
    assert rank2 == 2
    assert not minor2.is_zero()


def test_module_rank_and_torsion():
    pres = Presentation.cyclic(R2t, [R2t.poly("t*x")])
    tors, quo = groebner.torsion_submodule(pres)
    # t*x kills the class of 1 only after inverting nothing: R/(tx) is torsion-free
    # over the base; torsion here means base-torsion
    assert isinstance(tors, list)
    A = make_ring(["x"], [1], params=["z"], relations=["z^2 - z"])
    with pytest.raises(BaseNotDomain):
        groebner.torsion_submodule(Presentation.cyclic(A, [A.poly("z*x")]))


def test_presentation_of_submodule_roundtrip():
    mod = FreeModule(R2, [(0,)])
    vecs = [mod.element([R2.poly("x^2")]), mod.element([R2.poly("y^2")])]
    pres, incl = groebner.presentation_of_submodule(vecs, mod)
    assert pres.ngens == 2
    # one Koszul-type relation between x^2 and y^2
    assert len(pres.relations.cols) == 1


def test_quotient_dimension():
    gb = groebner.ideal_gb([R2.poly("x^2"), R2.poly("x*y"), R2.poly("y^3")], ring=R2)
    leads = [p.leading_monomial() for p in gb]
    assert groebner.quotient_dimension(leads, ring=R2) == 0
    gb2 = groebner.ideal_gb([R2.poly("x")], ring=R2)
    assert groebner.quotient_dimension([p.leading_monomial() for p in gb2],
                                       ring=R2) == 1


def test_quotient_vecdim():
    gb = groebner.ideal_gb([R2.poly("x^2"), R2.poly("x*y"), R2.poly("y^2")], ring=R2)
    leads = [p.leading_monomial() for p in gb]
    assert groebner.quotient_vecdim(leads, ring=R2) == 3  # 1, x, y
