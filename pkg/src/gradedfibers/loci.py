"""Closed loci in the parameter space where fiber behavior jumps.

All loci come out as ideals of the base (parameter-only polynomials).
The basic building block is the exactness-defect locus of two composable
strand matrices: the points where the ranks fail to add up to the exact
value.  Unions over degrees are ideal intersections, so the results stay
honest over reduced non-irreducible bases.
"""

from __future__ import annotations

from .errors import AlgebraError, InvalidFiber
from . import groebner, localcohom, resolution, strands
from .rings import Poly


def _squarefree_gens(gens):
    """Squarefree part of each generator, deduplicated.

    Multiplicities of individual generators never change the common
    vanishing set, and dropping them lets unions over growing degree
    windows reach a stable ideal instead of piling up powers.
    """
    out = []
    seen = set()
    for g in gens:
        s = squarefree_part(g)
        key = tuple(sorted(s.terms.items()))
        if key not in seen:
            seen.add(key)
            out.append(s)
    return out


def defect_locus(sm_in, sm_out, target_sum, ring):
    """Ideal of points where rank(sm_in) + rank(sm_out) < target_sum.

    The condition splits over the ways to cap the two ranks, so the
    locus is the intersection over a + b = target_sum - 1 of the ideals
    (minors of size a+1 of sm_in) + (minors of size b+1 of sm_out).
    The unit ideal encodes the empty locus, no generators the full base.
    """
    if target_sum <= 0:
        return [ring.one()]  # ranks are never negative: nothing can fail
    # rank caps beyond the matrix size are vacuous; after clamping, drop
    # the (a, b) pairs whose locus sits inside another pair's locus
    cap_in = min(sm_in.nrows, sm_in.ncols)
    cap_out = min(sm_out.nrows, sm_out.ncols)
    pairs = {(min(a, cap_in), min(target_sum - 1 - a, cap_out))
             for a in range(target_sum)}
    pairs = [p for p in pairs
             if not any(q != p and q[0] >= p[0] and q[1] >= p[1] for q in pairs)]
    acc = None
    for a, b in sorted(pairs):
        part = sm_in.minors_ideal(a + 1) + sm_out.minors_ideal(b + 1)
        if not part:
            # both rank caps hold identically: every point is in the locus
            return []
        part = groebner.ideal_gb(_squarefree_gens(part), ring=ring)
        if not part:
            return []  # all minors vanish on the base
        acc = part if acc is None else groebner.intersect_ideals(acc, part, ring)
        if not acc:
            return []
    return _squarefree_gens(acc)


def presentation_defect_at(res, mu, ring):
    """Locus where the evaluated resolution stops being exact at F_1 in
    degree mu, i.e. where the mu-strand of the module jumps."""
    sm1 = strands.strand_matrix(res.map(1), mu)
    sm2 = strands.strand_matrix(res.map(2), mu)
    v = sm1.ncols  # dim of the F_1 strand
    return defect_locus(sm2, sm1, v, ring)


def nonfree_locus(pres, window=None, slack=2, max_grow=24, stable_span=3):
    """Ideal of base points where some strand of the module jumps.

    Scans the degree window (auto-grown until the accumulated ideal is
    stable for stable_span consecutive degrees on the high end; the low
    end is exact since strands vanish below the smallest shift) and
    intersects the per-degree defect loci.

    Returns a dict with the ideal generators, the window that was used,
    whether it stabilized, and the per-degree contributions.
    """
    ring = pres.ring
    if ring.gdim != 1 and window is None:
        raise AlgebraError("multigraded loci need an explicit degree window")
    res = resolution.free_resolution(pres, 2)
    per_degree = {}
    acc = None

    def push(mu):
        nonlocal acc
        gens = presentation_defect_at(res, ring.deg_tuple(mu), ring)
        per_degree[mu] = [str(g) for g in gens]
        if acc == []:
            return False  # already the whole base
        if not gens:
            acc = []  # this degree jumps everywhere
            return True
        if acc is None:
            acc = gens
            return True
        before = [g.terms for g in acc]
        acc = groebner.intersect_ideals(acc, gens, ring)
        return [g.terms for g in acc] != before

    if window is not None:
        for mu in window:
            push(mu)
        stabilized = True
        used = list(window)
    else:
        shifts = [s[0] for m in res.modules for s in m.shifts]
        lo = min(shifts) if shifts else 0
        hi = (max(shifts) if shifts else 0) + slack
        used = list(range(lo, hi + 1))
        for mu in used:
            push(mu)
        stable = 0
        steps = 0
        stabilized = False
        mu = hi
        while steps < max_grow:
            mu += 1
            steps += 1
            used.append(mu)
            if push(mu):
                stable = 0
            else:
                stable += 1
                if stable >= stable_span:
                    stabilized = True
                    break
    gens = [ring.one()] if acc is None else acc
    return {
        "ideal": gens,
        "ideal_strings": [str(g) for g in gens],
        "window": used,
        "stabilized": stabilized,
        "per_degree": per_degree,
        "is_empty": _is_unit_ideal(gens, ring),
    }


def _is_unit_ideal(gens, ring):
    if not gens:
        return False  # zero ideal: the locus is everything
    gb = groebner.ideal_gb(list(gens), ring=ring)
    return any(g.constant_value() is not None and not g.is_zero() and
               g.constant_value() for g in gb)


def cohomology_jump_locus(pres, i, mu):
    """Locus where dim [H^i]_mu at the fiber exceeds the generic value.

    Needs an irreducible base: the generic strand ranks are compared
    against their pointwise values through minor ideals.
    """
    ring = pres.ring
    if not ring.base_is_domain:
        raise AlgebraError("per-component analysis is needed over a reducible base")
    r = ring.nx
    if not 0 <= i <= r:
        raise AlgebraError("cohomological index out of range")
    res = localcohom.free_resolution_for_cohomology(pres)
    mu = ring.deg_tuple(mu)
    j = r - i
    lam_out = strands.inverse_strand_matrix(res.map(j), mu)
    lam_in = strands.inverse_strand_matrix(res.map(j + 1), mu)
    target = lam_out.generic_rank()[0] + lam_in.generic_rank()[0]
    return defect_locus(lam_in, lam_out, target, ring)


def cohomology_jump_loci(pres, degrees, indices=None):
    """Union over degrees (and cohomological indices) of the jump loci."""
    ring = pres.ring
    r = ring.nx
    if indices is None:
        indices = range(r + 1)
    acc = None
    detail = {}
    for mu in degrees:
        for i in indices:
            gens = cohomology_jump_locus(pres, i, mu)
            detail[(i, ring.deg_tuple(mu))] = [str(g) for g in gens]
            if acc == []:
                continue
            if not gens:
                acc = []
            elif acc is None:
                acc = gens
            else:
                acc = groebner.intersect_ideals(acc, gens, ring)
    return {"ideal": [ring.one()] if acc is None else acc, "detail": detail}


def duality_exclusion_locus(pres, window=None, slack=2):
    """Locus to avoid when reading fiber cohomology off the generic one.

    Union of the jump loci of the module itself, of its Ext modules
    against the ring, and of the top dual cokernel.  Off this closed set
    evaluation commutes with everything we compute.
    """
    ring = pres.ring
    r = ring.nx
    pieces = [("module", pres)]
    exts = resolution.ext_presentations(pres, max_j=r)
    for jj, e in enumerate(exts):
        pieces.append(("ext%d" % jj, e))
    pieces.append(("top_dual", resolution.top_dual_cokernel(pres)))
    acc = None
    detail = {}
    for name, piece in pieces:
        if piece.ngens == 0:
            detail[name] = ["1"]  # the zero module is free everywhere
            continue
        info = nonfree_locus(piece, window=window, slack=slack)
        detail[name] = info["ideal_strings"]
        gens = info["ideal"]
        if acc == []:
            continue
        if not gens:
            acc = []
        elif acc is None:
            acc = gens
        else:
            acc = groebner.intersect_ideals(acc, gens, ring)
    gens = [ring.one()] if acc is None else acc
    return {"ideal": gens, "ideal_strings": [str(g) for g in gens],
            "detail": detail}


# -- radicals and components (parameter-only ideals) -------------------------


def _to_sympy(p):
    import sympy

    ring = p.ring
    syms = [sympy.Symbol(n) for n in ring.names]
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        if ring.field.char == 0:
            term = sympy.Rational(c.numerator, c.denominator)
        else:
            term = sympy.Integer(c.v)
        for s, a in zip(syms, e):
            if a:
                term = term * s ** a
        expr = expr + term
    return expr, syms


def _from_sympy(expr, ring):
    import sympy
    from fractions import Fraction

    poly = sympy.Poly(sympy.expand(expr), *[sympy.Symbol(n) for n in ring.names])
    terms = {}
    for monom, coeff in poly.terms():
        q = sympy.Rational(coeff)
        c = ring.field.coerce(Fraction(int(q.p), int(q.q)))
        if c:
            terms[tuple(int(a) for a in monom)] = c
    return Poly(ring, terms)


def squarefree_part(p):
    """Product of the distinct irreducible factors, content dropped."""
    import sympy

    if p.is_zero():
        return p
    if p.ring.field.char != 0:
        return p.primitive()  # no multivariate factorization over GF(p) here
    expr, _ = _to_sympy(p)
    _c, factors = sympy.factor_list(expr)
    acc = p.ring.one()
    for base, _mult in factors:
        acc = acc * _from_sympy(base, p.ring)
    return acc.primitive()


def irreducible_factors(p):
    """Distinct irreducible factors over the rationals, content dropped."""
    import sympy

    if p.ring.field.char != 0:
        return [p.primitive()]
    expr, _ = _to_sympy(p)
    _c, factors = sympy.factor_list(expr)
    return [_from_sympy(base, p.ring).primitive() for base, _m in factors]


def locus_radical(gens, ring):
    """(radical generators, exact flag) for a parameter-only ideal.

    Principal ideals get squarefree parts; zero-dimensional ideals get
    the classical univariate-eliminant treatment; anything else is
    returned as-is with the flag down.
    """
    gens = [g for g in (ring.poly(g) for g in gens) if not g.is_zero()]
    if not gens:
        return [], True
    gb = groebner.ideal_gb(gens, ring=ring)
    if len(gb) == 1:
        return [squarefree_part(gb[0])], True
    leads = [g.leading_term()[0] for g in gb]
    znames = list(ring.znames)
    zidx = [ring.var_index(n) for n in znames]
    pure = {}
    for e in leads:
        nzpos = [k for k, a in enumerate(e) if a]
        if len(nzpos) == 1 and nzpos[0] in zidx:
            pure[nzpos[0]] = True
    if len(pure) == len(zidx) and ring.field.char == 0:
        # zero dimensional in the parameters: add squarefree eliminants
        extra = []
        for name in znames:
            others = [n for n in znames if n != name]
            eliminated = groebner.eliminate_ideal(gb, others, ring=ring)
            univ = [g for g in eliminated if g.support_vars() <= {name}]
            if univ:
                extra.append(squarefree_part(univ[0]))
        rad = groebner.ideal_gb(list(gb) + extra, ring=ring)
        return rad, True
    return gb, False


def dense_open_certificate(gens, ring):
    """Per component of the base, an element of the ideal that survives
    restriction to that component, or None when the ideal dies there.

    A returned polynomial a for component P certifies that V(gens) meets
    V(P) in a proper closed subset: D(a) is dense open in V(P) and
    avoids the locus.  A "global" entry holds one element working for
    every component at once, when a product does the job.
    """
    gens = [ring.poly(g) for g in gens]
    comps = ring.minimal_primes()
    if not comps:
        comps = ((),)
    out = {}
    per_comp = []
    for prime in comps:
        key = "(" + ", ".join(str(q) for q in prime) + ")"
        found = None
        pgb = groebner.ideal_gb(list(prime), ring=ring) if prime else []
        for g in gens:
            if _not_in_component(g, pgb, ring):
                found = g
                break
        if found is None:
            for a in range(len(gens)):
                for b in range(a + 1, len(gens)):
                    cand = gens[a] + gens[b]
                    if _not_in_component(cand, pgb, ring):
                        found = cand
                        break
                if found is not None:
                    break
        out[key] = found
        per_comp.append(found)
    if all(c is not None for c in per_comp) and per_comp:
        prod = ring.one()
        for c in per_comp:
            prod = prod * c
        ok = True
        for prime in comps:
            pgb = groebner.ideal_gb(list(prime), ring=ring) if prime else []
            if not _not_in_component(prod, pgb, ring):
                ok = False
                break
        out["global"] = prod if ok else None
    else:
        out["global"] = None
    return out


def _not_in_component(g, prime_gb, ring):
    if not prime_gb:
        return not g.is_zero()
    return not groebner.nf_poly(g, prime_gb).is_zero()


# -- constancy harness -------------------------------------------------------


def constancy_report(pres, degrees, seed=0, samples=2, avoid=(), cross_check=True):
    """Fiber cohomology across the components of the base.

    For every minimal prime the generic point of its component gives the
    per-component table; rational sample points on the component (off
    the avoided locus and off the other components) must reproduce it.
    Returns per-component dims, the sample evidence, and whether the
    function is constant within components and across them.
    """
    import random

    from .specialize import FiberPoint, sample_rational_point

    ring = pres.ring
    if ring.nz == 0:
        table = localcohom.local_cohomology_table(pres, degrees, cross_check=cross_check)
        return {
            "components": {"(field base)": {
                "generic_dims": sorted_dims(table),
                "samples": [],
                "samples_match": True,
            }},
            "locally_constant": True,
            "globally_constant": True,
        }
    rng = random.Random(seed)
    comps = ring.minimal_primes()
    if not comps:
        comps = ((),)
    report = {}
    dims_per_comp = []
    locally_constant = True
    for prime in comps:
        key = "(" + ", ".join(str(q) for q in prime) + ")" if prime else "(0)"
        point = FiberPoint.generic(ring, list(prime)) if prime else None
        table = localcohom.local_cohomology_table(
            pres, degrees, point=point, cross_check=cross_check)
        gdims = sorted_dims(table)
        sample_rows = []
        ok = True
        other_avoid = []
        for other in comps:
            if other == prime:
                continue
            pgb = groebner.ideal_gb(list(prime), ring=ring) if prime else []
            for q in other:
                if _not_in_component(q, pgb, ring):
                    other_avoid.append(q)
                    break
        for _ in range(samples):
            try:
                pt = sample_rational_point(
                    ring, rng, avoid=list(avoid) + other_avoid, on=list(prime))
            except InvalidFiber:
                break  # no rational points found on this component
            t2 = localcohom.local_cohomology_table(
                pres, degrees, point=pt, cross_check=cross_check)
            sdims = sorted_dims(t2)
            match = sdims == gdims
            ok = ok and match
            sample_rows.append({"point": pt.describe(), "dims": sdims, "match": match})
        locally_constant = locally_constant and ok
        report[key] = {
            "generic_dims": gdims,
            "samples": sample_rows,
            "samples_match": ok,
        }
        dims_per_comp.append(tuple(sorted(gdims.items())))
    globally_constant = len(set(dims_per_comp)) <= 1
    return {
        "components": report,
        "locally_constant": locally_constant,
        "globally_constant": globally_constant,
    }


def sorted_dims(table):
    return {"%d@%s" % (i, ",".join(str(a) for a in deg)): d
            for (i, deg), d in sorted(table.dims.items())}
