"""Brute-force group-algebra canonicalizer used as ground truth.

For each orbit of monomial signatures the whole space is materialised: every
*ordered* product of every arrangement of every factor, for every signature
the summation indices can be renamed into.  The relation space is spanned by

* single-factor relations (declared symmetries and identities) with the other
  factors fixed,
* equality of products that differ by the order of their factors,
* equality of products that differ by a renaming of the summation indices,

and a polynomial is projected onto the lexicographically smallest coordinate
complement.  Nothing here uses the relation-space, group or canon modules;
row reduction is done by sympy's sparse ``DomainMatrix``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .core import ElementarySymbol, Monomial, Polynomial
from .errors import ResourceError

DEFAULT_MAX_DIMENSION = 5040


def _qq(c: Fraction):
    return QQ(c.numerator, c.denominator)


def _frac(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


def _rename(symbols, mapping):
    return tuple(ElementarySymbol(s.type, (mapping.get(i, i) for i in s.indices)) for s in symbols)


def _permute_slots(s: ElementarySymbol, perm):
    return ElementarySymbol(s.type, (s.indices[q] for q in perm))


def _difference(a, b):
    return {} if a == b else {a: Fraction(1), b: Fraction(-1)}


def _class_key(m: Monomial):
    """Smallest signature over all renamings of the summation indices."""
    ds = m.dummies
    best = None
    for images in itertools.permutations(ds):
        mp = dict(zip(ds, images))
        sig = tuple(sorted((f.type._key, tuple(sorted(mp.get(i, i) for i in f.indices))) for f in m.factors))
        if best is None or sig < best:
            best = sig
    return best


class FullSpace:
    """The full space spanned by one signature orbit, with its relations."""

    def __init__(self, representative: Monomial, max_dimension=DEFAULT_MAX_DIMENSION):
        factors = representative.factors
        dummies = representative.dummies
        renamings = [dict(zip(dummies, im)) for im in itertools.permutations(dummies)]

        signatures = set()
        for mp in renamings:
            signatures.add(
                tuple(
                    sorted(
                        ((f.type, tuple(sorted(mp.get(i, i) for i in f.indices))) for f in factors),
                        key=lambda s: (s[0]._key, s[1]),
                    )
                )
            )
        k = len(factors)
        per_sig = math.factorial(k) * math.prod(math.factorial(f.type.arity) for f in factors)
        basis = set()
        for sig in sorted(signatures, key=lambda g: [(t._key, i) for t, i in g]):
            choices = []
            for t, idx in sig:
                arr = sorted(set(itertools.permutations(idx)))
                choices.append([ElementarySymbol(t, a) for a in arr])
            for combo in itertools.product(*choices):
                for order in itertools.permutations(combo):
                    basis.add(tuple(order))
                if len(basis) > max_dimension:
                    raise ResourceError(
                        f"oracle space dimension exceeds cap {max_dimension} "
                        f"({len(signatures)} signatures x {per_sig} ordered products)"
                    )
        # descending order: leftmost pivots are the largest products
        self.basis = sorted(basis, reverse=True)
        self.col = {b: j for j, b in enumerate(self.basis)}
        self.dimension = len(self.basis)
        self.dummies = dummies
        self.key = _class_key(representative)

        rows = []
        col = self.col
        transpositions = [{a: b, b: a} for a, b in zip(dummies, dummies[1:])]
        for b in self.basis:
            j = col[b]
            for pos, e in enumerate(b):
                for perm, sign in e.type.symmetries:
                    other = b[:pos] + (_permute_slots(e, perm),) + b[pos + 1 :]
                    row = {j: Fraction(1)}
                    row[col[other]] = row.get(col[other], 0) - sign
                    rows.append(row)
                for ident in e.type.identities:
                    row = {}
                    for c, perm in ident:
                        other = b[:pos] + (_permute_slots(e, perm),) + b[pos + 1 :]
                        row[col[other]] = row.get(col[other], 0) + c
                    rows.append(row)
            for pos in range(len(b) - 1):
                swapped = b[:pos] + (b[pos + 1], b[pos]) + b[pos + 2 :]
                rows.append(_difference(j, col[swapped]))
            for t in transpositions:
                rows.append(_difference(j, col[_rename(b, t)]))
        rows = [{c: _qq(v) for c, v in r.items() if v} for r in rows]
        rows = [r for r in rows if r]
        if rows:
            mat = DomainMatrix(dict(enumerate(rows)), (len(rows), self.dimension), QQ)
            rref, pivots = mat.rref()
            sdm = rref.rep.to_sdm() if hasattr(rref.rep, "to_sdm") else rref.rep
            self.pivot_rows = {}
            for r in sdm.values():
                if r:
                    p = min(r)
                    self.pivot_rows[p] = {c: _frac(v) for c, v in r.items()}
        else:
            self.pivot_rows = {}
        self.relation_rank = len(self.pivot_rows)
        self.complement = [self.basis[j] for j in range(self.dimension) if j not in self.pivot_rows]

    def coordinates(self, p: Polynomial) -> dict[int, Fraction]:
        vec = {}
        for m, c in p.terms.items():
            j = self.col[m.factors]
            vec[j] = vec.get(j, 0) + c
        return vec

    def project(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        out = dict(vec)
        for p, row in self.pivot_rows.items():
            f = out.get(p)
            if not f:
                continue
            for c, v in row.items():
                nv = out.get(c, 0) - f * v
                if nv:
                    out[c] = nv
                else:
                    out.pop(c, None)
        return out

    def canonical(self, p: Polynomial) -> Polynomial:
        vec = self.project(self.coordinates(p))
        return Polynomial({Monomial(self.basis[j]): c for j, c in vec.items()})

    def in_relations(self, p: Polynomial) -> bool:
        return not self.project(self.coordinates(p))

    def quotient_rank(self, polys) -> int:
        vecs = [self.project(self.coordinates(q)) for q in polys]
        vecs = [v for v in vecs if v]
        if not vecs:
            return 0
        mat = DomainMatrix(
            {i: {c: _qq(x) for c, x in v.items()} for i, v in enumerate(vecs)},
            (len(vecs), self.dimension),
            QQ,
        )
        return mat.rank()


class Oracle:
    """Caches one :class:`FullSpace` per signature orbit."""

    def __init__(self, max_dimension=DEFAULT_MAX_DIMENSION):
        self.max_dimension = max_dimension
        self._spaces: dict = {}

    def space_for(self, m: Monomial) -> FullSpace:
        key = (_class_key(m), tuple(sorted(set(m.free_indices))), m.dummies)
        space = self._spaces.get(key)
        if space is None:
            space = FullSpace(m, self.max_dimension)
            self._spaces[key] = space
        return space

    def _split(self, p: Polynomial):
        groups: dict = {}
        for m, c in p.terms.items():
            space = self.space_for(m)
            groups.setdefault(id(space), (space, {}))[1][m] = c
        return [(space, Polynomial(terms)) for space, terms in groups.values()]

    def canonical(self, p: Polynomial) -> Polynomial:
        out = Polynomial()
        for space, part in self._split(p):
            out = out + space.canonical(part)
        return out

    def equal(self, p: Polynomial, q: Polynomial) -> bool:
        return self.canonical(p - q).is_zero()

    def independent(self, m1: Monomial, m2: Monomial) -> bool:
        """True iff the classes of m1 and m2 span subspaces meeting only in 0."""
        s1, s2 = self.space_for(m1), self.space_for(m2)
        if s1 is not s2:
            return True
        a, b = Polynomial.from_monomial(m1), Polynomial.from_monomial(m2)
        return s1.quotient_rank([a, b]) == s1.quotient_rank([a]) + s1.quotient_rank([b])


_default = Oracle()


def oracle_canonical(p: Polynomial) -> Polynomial:
    return _default.canonical(p)


def oracle_equal(p: Polynomial, q: Polynomial) -> bool:
    return _default.equal(p, q)
