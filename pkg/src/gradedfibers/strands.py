"""Degree strands of free modules and maps, over the parameter ring.

A strand of a free module at degree mu is the finite free module over
the base spanned by the (component, monomial) pairs of that degree; a
map of free modules restricts to a matrix with base-ring entries.  The
same machinery covers the inverse-monomial strands used for top local
cohomology, where multiplication kills any term that escapes back to
nonnegative exponents.

Ranks come in two flavors: at a fiber point (exact linear algebra over
the residue field, or over the residue domain for a generic point) and
generically over the base, with a certifying minor whose nonvanishing
locus is where the generic rank is attained.
"""

from __future__ import annotations

from .errors import AlgebraError, BaseNotDomain
from . import groebner


def strand_basis(module, mu):
    """Labels (component, exponents) of the monomial basis of [F]_mu."""
    ring = module.ring
    mu = ring.deg_tuple(mu)
    out = []
    for i, s in enumerate(module.shifts):
        want = tuple(a - b for a, b in zip(mu, s))
        for m in ring.monomials_of_degree(want):
            out.append((i, m))
    return out


def inverse_strand_basis(module, mu):
    """Labels for the inverse-monomial strand (negative x exponents)."""
    ring = module.ring
    mu = ring.deg_tuple(mu)
    out = []
    for i, s in enumerate(module.shifts):
        want = tuple(a - b for a, b in zip(mu, s))
        for m in ring.inverse_monomials_of_degree(want):
            out.append((i, m))
    return out


class StrandMatrix:
    """A strand of a graded map: rows and columns labeled by monomials,
    entries in the base ring (z-only polynomials of the ambient ring)."""

    __slots__ = ("ring", "rows", "cols", "entries", "_reduction")

    def __init__(self, ring, rows, cols, entries):
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self._reduction = None

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.cols)

    def is_zero(self):
        return all(p.is_zero() for row in self.entries for p in row)

    def entry_strings(self):
        return [[str(p) for p in row] for row in self.entries]

    def evaluate(self, point):
        """Scalar matrix at a rational point of the base."""
        return [[point.evaluate_scalar(p) for p in row] for row in self.entries]

    def reduced(self):
        """Clear unit entries: (smaller StrandMatrix, pivot count).

        A nonzero constant entry is a unit of the base, so elementary
        row and column operations split it off; these stay invertible
        at every fiber.  By Fitting's lemma the size-s minors of the
        original generate the same ideal as the size-(s - pivots)
        minors of the reduction, and every evaluated rank drops by
        exactly pivots.
        """
        if self._reduction is not None:
            return self._reduction
        field = self.ring.field
        ent = [list(row) for row in self.entries]
        rows = list(self.rows)
        cols = list(self.cols)
        piv = 0
        while ent and ent[0]:
            hit = None
            for i, row in enumerate(ent):
                for j, p in enumerate(row):
                    c = p.constant_value()
                    if c:
                        hit = (i, j, c)
                        break
                if hit:
                    break
            if hit is None:
                break
            i, j, c = hit
            inv = field.one / c
            prow = ent[i]
            for k, row in enumerate(ent):
                f = row[j]
                if k == i or f.is_zero():
                    continue
                scale = f.map_coeffs(lambda v: v * inv)
                ent[k] = [row[l] - scale * prow[l] for l in range(len(row))]
            del ent[i], rows[i]
            for row in ent:
                del row[j]
            del cols[j]
            piv += 1
        red = StrandMatrix(self.ring, rows, cols, ent)
        red._reduction = (red, 0)
        self._reduction = (red, piv)
        return self._reduction

    def rank_at(self, point):
        """Rank of the strand at a fiber point (rational or generic)."""
        red, piv = self.reduced()
        if piv:
            return piv + red.rank_at(point)
        if point.is_rational:
            return scalar_rank(self.evaluate(point), self.ring.field)
        ring = point.residue_ring
        rows = [[point.evaluate_poly(p) for p in row] for row in self.entries]
        if not rows or not rows[0]:
            return 0
        rank, _r, _c, _m = groebner.matrix_rank_generic(rows, ring)
        return rank

    def generic_rank(self):
        """(rank over Frac(base), certifying minor) for a domain base."""
        if not self.entries or not self.entries[0]:
            return 0, self.ring.one()
        red, piv = self.reduced()
        if piv:
            rank, minor = red.generic_rank()
            return rank + piv, minor
        rank, _r, _c, minor = groebner.matrix_rank_generic(self.entries, self.ring)
        return rank, minor

    def minors_ideal(self, size):
        """Generators of the ideal of size x size minors, as base polys."""
        from itertools import combinations
        from math import comb

        if size <= 0:
            return [self.ring.one()]
        if size > min(self.nrows, self.ncols):
            return []
        red, piv = self.reduced()
        if piv:
            return red.minors_ideal(size - piv)
        ring = self.ring
        if ring.nz == 1 and not ring.base_rel:
            return self._pid_minors(size)
        if comb(self.nrows, size) * comb(self.ncols, size) > 200000:
            raise AlgebraError(
                "minor enumeration too large (%d x %d strand, size %d); "
                "use a smaller degree window" % (self.nrows, self.ncols, size))
        out = []
        for rset in combinations(range(self.nrows), size):
            for cset in combinations(range(self.ncols), size):
                sub = [[self.entries[i][j] for j in cset] for i in rset]
                d = groebner._exact_det(sub, self.ring)
                if not d.is_zero():
                    out.append(d)
        return out

    def _pid_minors(self, size):
        """Minors ideal over a univariate polynomial base.

        That base is a principal ideal domain, so unimodular row and
        column operations diagonalize the strand and the size-s minors
        ideal is generated by the gcd of the s-fold products of the
        diagonal.  No minor is ever enumerated.
        """
        ring = self.ring
        field = ring.field
        zslot = ring.ngraded
        rows = [[_ucoeffs(p, zslot) for p in row] for row in self.entries]
        diag = [d for d in _smith_diagonal(rows, field) if d]
        if len(diag) < size:
            return []
        # gcd over all size-subsets of products, by one pass of the
        # subset-product dp; None stands for the zero polynomial
        best = [None] * (size + 1)
        best[0] = [field.one]
        for d in diag:
            for m in range(size, 0, -1):
                if best[m - 1] is None:
                    continue
                cand = _umul(best[m - 1], d, field)
                best[m] = cand if best[m] is None else _ugcd(best[m], cand, field)
        g = best[size]
        if g is None:
            return []
        if len(g) == 1:
            return [ring.one()]
        terms = {}
        for e, c in enumerate(g):
            if c:
                exps = [0] * len(ring.names)
                exps[zslot] = e
                terms[tuple(exps)] = c
        from .rings import Poly

        return [Poly(ring, terms).primitive()]


# -- univariate base arithmetic (coefficient lists, index = exponent) --------


def _ucoeffs(p, zslot):
    """Base poly to a dense coefficient list; [] is zero."""
    out = []
    for e, c in p.terms.items():
        k = e[zslot]
        if k >= len(out):
            out.extend([p.ring.field.zero] * (k + 1 - len(out)))
        out[k] = c
    while out and not out[-1]:
        out.pop()
    return out


def _umul(a, b, field):
    if not a or not b:
        return []
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    while out and not out[-1]:
        out.pop()
    return out


def _usubmul(a, q, shift, b, field):
    """a - q * u^shift * b in place-ish; returns trimmed copy."""
    out = list(a) + [field.zero] * max(0, shift + len(b) - len(a))
    for j, y in enumerate(b):
        if y:
            out[shift + j] = out[shift + j] - q * y
    while out and not out[-1]:
        out.pop()
    return out


def _udivmod(a, b, field):
    q = [field.zero] * max(0, len(a) - len(b) + 1)
    r = list(a)
    inv = field.one / b[-1]
    while len(r) >= len(b):
        c = r[-1] * inv
        k = len(r) - len(b)
        q[k] = c
        r = _usubmul(r, c, k, b, field)
        if len(r) >= len(b) and not r[-1]:
            while r and not r[-1]:
                r.pop()
    return q, r


def _ugcd(a, b, field):
    a, b = list(a), list(b)
    while b:
        _q, r = _udivmod(a, b, field)
        a, b = b, r
    if a:
        inv = field.one / a[-1]
        a = [c * inv for c in a]  # monic keeps coefficient growth down
    return a


def _smith_diagonal(mat, field):
    """Diagonal of a PID-unimodular diagonalization; entries may repeat
    or violate divisibility, which minors ideals do not care about."""
    m = [list(row) for row in mat]
    diag = []
    while m and m[0]:
        nr, nc = len(m), len(m[0])
        pivot = None
        for i in range(nr):
            for j in range(nc):
                if m[i][j] and (pivot is None or len(m[i][j]) < len(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        m[0], m[i] = m[i], m[0]
        for row in m:
            row[0], row[j] = row[j], row[0]
        p = m[0][0]
        dirty = False
        for k in range(1, nr):
            if m[k][0]:
                q, _r = _udivmod(m[k][0], p, field)
                m[k] = [_usubmul(m[k][l], field.one, 0, _umul(q, m[0][l], field), field)
                        for l in range(nc)]
                if m[k][0]:
                    dirty = True
        for l in range(1, nc):
            if m[0][l]:
                q, _r = _udivmod(m[0][l], p, field)
                for row in m:
                    row[l] = _usubmul(row[l], field.one, 0, _umul(q, row[0], field), field)
                if m[0][l]:
                    dirty = True
        if dirty:
            continue  # a remainder of smaller degree became the next pivot
        diag.append(p)
        m = [row[1:] for row in m[1:]]
    return diag


def _split_xy_z(ring, exps):
    ng = ring.ngraded
    return exps[:ng] + (0,) * ring.nz, (0,) * ng + exps[ng:]


def strand_matrix(fmap, mu):
    """The matrix of [fmap]_mu over the base ring, monomial bases."""
    ring = fmap.ring
    rows = strand_basis(fmap.target, mu)
    cols = strand_basis(fmap.source, mu)
    row_index = {lab: k for k, lab in enumerate(rows)}
    entries = [[ring.zero() for _ in cols] for _ in rows]
    ng = ring.ngraded
    for cidx, (j, m) in enumerate(cols):
        col = fmap.cols[j]
        acc = {}
        for (i, e), c in col.data.items():
            xy = tuple(e[k] + m[k] for k in range(ng))
            z = e[ng:]
            lab = (i, xy + (0,) * ring.nz)
            acc.setdefault(lab, {})
            zexp = (0,) * ng + z
            prev = acc[lab].get(zexp)
            acc[lab][zexp] = c if prev is None else prev + c
        for lab, zterms in acc.items():
            ridx = row_index.get(lab)
            if ridx is None:
                raise AlgebraError("map is not homogeneous across the strand")
            zterms = {e: c for e, c in zterms.items() if c}
            from .rings import Poly

            entries[ridx][cidx] = Poly(ring, zterms)
    return StrandMatrix(ring, rows, cols, entries)


def inverse_strand_matrix(fmap, mu):
    """Strand of the map induced on top local cohomology of free modules.

    Basis labels carry negative x exponents; multiplying by a monomial
    adds exponents and kills the term if any x exponent becomes >= 0.
    """
    ring = fmap.ring
    rows = inverse_strand_basis(fmap.target, mu)
    cols = inverse_strand_basis(fmap.source, mu)
    row_index = {lab: k for k, lab in enumerate(rows)}
    entries = [[ring.zero() for _ in cols] for _ in rows]
    nx = ring.nx
    ng = ring.ngraded
    from .rings import Poly

    for cidx, (j, m) in enumerate(cols):
        col = fmap.cols[j]
        acc = {}
        for (i, e), c in col.data.items():
            new = tuple(e[k] + m[k] for k in range(ng))
            if any(new[k] >= 0 for k in range(nx)):
                continue  # escaped the inverse range: dies in cohomology
            lab = (i, new + (0,) * ring.nz)
            zexp = (0,) * ng + e[ng:]
            slot = acc.setdefault(lab, {})
            prev = slot.get(zexp)
            slot[zexp] = c if prev is None else prev + c
        for lab, zterms in acc.items():
            ridx = row_index.get(lab)
            if ridx is None:
                raise AlgebraError("map is not homogeneous across the strand")
            zterms = {e: c for e, c in zterms.items() if c}
            entries[ridx][cidx] = Poly(ring, zterms)
    return StrandMatrix(ring, rows, cols, entries)


def scalar_rank(rows, field):
    """Gaussian elimination rank over the coefficient field."""
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    rank = 0
    row = 0
    for col in range(nc):
        piv = None
        for i in range(row, nr):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = field.one / m[row][col]
        for i in range(row + 1, nr):
            if m[i][col]:
                f = m[i][col] * inv
                for j in range(col, nc):
                    m[i][j] = m[i][j] - f * m[row][j]
        row += 1
        rank += 1
        if row == nr:
            break
    return rank


def presentation_strand_dim(pres, mu, point=None):
    """dim over the fiber of [M]_mu for a presented module.

    With point=None the base must be a domain and the result is the
    dimension over the generic fiber, returned as (dim, certificate).
    """
    sm = strand_matrix(pres.relations, mu)
    total = sm.nrows
    if point is not None:
        return total - sm.rank_at(point)
    rank, minor = sm.generic_rank()
    return total - rank, minor


def free_complex_strand_homology(complex_, mu, point):
    """Fiber homology dims [h_0, ..., h_length] of a free chain complex."""
    dims = []
    ranks = [0]
    for i in range(1, complex_.length + 1):
        ranks.append(strand_matrix(complex_.map(i), mu).rank_at(point))
    ranks.append(0)
    for i in range(complex_.length + 1):
        v = len(strand_basis(complex_.module(i), mu))
        dims.append(v - ranks[i] - ranks[i + 1])
    return dims


class PresentedComplex:
    """A chain complex whose terms are presented modules.

    terms[i] is a Presentation; maps[i-1] induces d_i on generator
    modules (it must carry relations into relations, which is not
    rechecked here).
    """

    __slots__ = ("terms", "maps")

    def __init__(self, terms, maps):
        if len(terms) != len(maps) + 1:
            raise AlgebraError("need one more term than maps")
        self.terms = list(terms)
        self.maps = list(maps)

    @property
    def length(self):
        return len(self.maps)

    def gen_map(self, i):
        from .modules import FreeMap

        if 1 <= i <= len(self.maps):
            return self.maps[i - 1]
        src = self.terms[i].gens_module if 0 <= i < len(self.terms) else None
        tgt = self.terms[i - 1].gens_module if 1 <= i <= len(self.terms) else None
        ring = self.terms[0].ring
        from .modules import FreeModule

        if src is None:
            src = FreeModule(ring, [])
        if tgt is None:
            tgt = FreeModule(ring, [])
        return FreeMap(src, tgt, [tgt.zero() for _ in range(src.rank)], check=False)


def _augmented_rank(phi_rows, psi_rows, field):
    """rank [phi | psi] for scalar matrices sharing a row space."""
    rows = []
    for i in range(len(phi_rows)):
        rows.append(list(phi_rows[i]) + list(psi_rows[i]))
    if not rows:
        return 0
    return scalar_rank(rows, field)


def presented_complex_strand_homology(pc, mu, point):
    """Fiber homology dims of a presented complex, cross-checked two ways.

    The direct route does linear algebra in the evaluated quotient
    spaces; the cokernel route uses only right-exact constructions.
    Both compute the homology of the evaluated complex, so a mismatch
    is an internal error, not a mathematical phenomenon.
    """
    if not point.is_rational:
        raise AlgebraError("fiber homology needs a rational point")
    field = pc.terms[0].ring.field
    n = pc.length
    # evaluated generator strands V_i, relation matrices B_i, maps Phi_i
    V, B, Phi = [], [], [None]
    for i in range(n + 1):
        pres = pc.terms[i]
        V.append(strand_basis(pres.gens_module, mu))
        B.append(strand_matrix(pres.relations, mu).evaluate(point))
    for i in range(1, n + 1):
        Phi.append(strand_matrix(pc.gen_map(i), mu).evaluate(point))

    def rank_of(mat):
        if not mat or not mat[0]:
            return 0
        return scalar_rank(mat, field)

    def hcat(a, b):
        if a is None:
            a = [[] for _ in b] if b is not None else []
        if b is None:
            b = [[] for _ in a]
        return [list(x) + list(y) for x, y in zip(a, b)]

    rank_B = [rank_of(B[i]) for i in range(n + 1)]
    dim_C = [len(V[i]) - rank_B[i] for i in range(n + 1)]

    # direct route: ranks of induced maps between quotients
    r_bar = [0] * (n + 2)
    for i in range(1, n + 1):
        r_bar[i] = rank_of(hcat(Phi[i], B[i - 1])) - rank_B[i - 1]
    direct = [dim_C[i] - r_bar[i] - r_bar[i + 1] for i in range(n + 1)]

    # cokernel route: K_i = coker[Phi_{i+1} | psi_i], all right exact
    dim_K = []
    for i in range(n + 1):
        phi_next = Phi[i + 1] if i + 1 <= n else None
        dim_K.append(len(V[i]) - rank_of(hcat(phi_next, B[i])))
    fourterm = []
    for i in range(n + 1):
        val = dim_K[i]
        if i >= 1:
            val += dim_K[i - 1] - (len(V[i - 1]) - rank_B[i - 1])
        fourterm.append(val)

    if direct != fourterm:
        raise AlgebraError(
            "strand homology routes disagree: %r vs %r" % (direct, fourterm))
    return direct


def fiber_exactness_report(pc, mu, point):
    """Compare homology-then-evaluate against evaluate-then-homology.

    Returns a list of (dim after evaluation, dim of evaluated symbolic
    homology, agree?) triples, one per homological position.  Genuine
    disagreements are the base-change failures this machinery exists to
    locate; they can only appear at positions >= 1.
    """
    fiber_dims = presented_complex_strand_homology(pc, mu, point)
    out = []
    for i in range(pc.length + 1):
        sym = _symbolic_homology_strand_dim(pc, i, mu, point)
        out.append((fiber_dims[i], sym, fiber_dims[i] == sym))
    return out


def _symbolic_homology_strand_dim(pc, i, mu, point):
    """dim at the fiber of the strand of H_i computed over the base."""
    pres, _incl = _presented_complex_homology(pc, i)
    sm = strand_matrix(pres.relations, mu)
    return sm.nrows - sm.rank_at(point)


def _presented_complex_homology(pc, i):
    """Presentation over R of H_i of a presented complex."""
    from .modules import FreeMap

    term = pc.terms[i]
    f0 = term.gens_module
    rel_cols = [c for c in term.relations.cols if c.data]
    d_out = pc.gen_map(i)
    d_in = pc.gen_map(i + 1)
    # cycles: preimage of relations of the target under d_i
    if i == 0 or d_out.target.rank == 0:
        kgens = [f0.basis_vector(k) for k in range(f0.rank)]
    else:
        tgt_rels = [c for c in pc.terms[i - 1].relations.cols if c.data]
        kgens = groebner.preimage_gens(d_out, tgt_rels)
    bgens = [c for c in d_in.cols if c.data] + rel_cols
    return groebner.subquotient_presentation(kgens, bgens, f0)
