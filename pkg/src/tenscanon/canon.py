"""Canonical representation of tensor polynomials.

Pipeline for one monomial ``m``:

1. ``reduce``: rewrite each factor over the canonical basis of its signature
   and expand (the projector onto reduced monomials).
2. ``extremal_signature``: find a renaming of the summation indices taking
   the signature of ``m`` to the minimum of its orbit.
3. ``average``: average the reduced images of the extremal representative
   over the stabilizer of the minimal signature.

The average over the stabilizer kills exactly the renaming relations that
survive inside one signature, so two polynomials have equal images iff they
agree modulo all relations.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .core import Monomial, Polynomial, monomial_signature
from .errors import UsageError
from .group import (
    IndexPermutation,
    PermutationGroup,
    SearchStats,
    apply_to_monomial,
    default_max_nodes,
    minimize_signature,
)
from .relspace import SpaceCache, default_cache


@dataclass
class CanonicalForm:
    polynomial: Polynomial
    provenance: list = field(default_factory=list)  # (sig_min, stabilizer order) per input orbit
    stats: SearchStats = field(default_factory=SearchStats)

    def is_zero(self) -> bool:
        return self.polynomial.is_zero()

    def __eq__(self, other):
        if isinstance(other, CanonicalForm):
            return self.polynomial == other.polynomial
        if isinstance(other, Polynomial):
            return self.polynomial == other
        return NotImplemented

    def __str__(self):
        return str(self.polynomial)


class Canonicalizer:
    """Holds the relation-space cache and memo tables for one declaration set.

    Instances may be shared between threads; the memo dicts only ever gain
    entries whose values are deterministic.
    """

    def __init__(self, cache: SpaceCache | None = None, max_nodes: int | None = None):
        self.cache = cache if cache is not None else default_cache
        self.max_nodes = max_nodes or default_max_nodes()
        self._symbol_memo: dict = {}
        self._reduce_memo: dict = {}
        self._sig_memo: dict = {}
        self._kappa_memo: dict = {}

    # ------------------------------------------------------------- projector

    def rewrite_factor(self, e):
        out = self._symbol_memo.get(e)
        if out is None:
            out = self.cache.rewrite(e)
            self._symbol_memo[e] = out
        return out

    def is_reduced(self, m: Monomial) -> bool:
        for f in m.factors:
            comb = self.rewrite_factor(f)
            if len(comb) != 1 or comb[0][0] != f or comb[0][1] != 1:
                return False
        return True

    def reduce(self, m: Monomial) -> Polynomial:
        out = self._reduce_memo.get(m)
        if out is not None:
            return out
        partial = {(): Fraction(1)}
        for f in m.factors:
            comb = self.rewrite_factor(f)
            nxt = {}
            for fs, c in partial.items():
                for s, k in comb:
                    key = fs + (s,)
                    nxt[key] = nxt.get(key, 0) + c * k
            partial = {k: v for k, v in nxt.items() if v}
        acc = {}
        for fs, c in partial.items():
            mm = Monomial(fs)
            acc[mm] = acc.get(mm, 0) + c
        out = Polynomial(acc)
        self._reduce_memo[m] = out
        return out

    def reduce_polynomial(self, p: Polynomial) -> Polynomial:
        acc = {}
        for m, c in p.terms.items():
            for r, k in self.reduce(m).terms.items():
                acc[r] = acc.get(r, 0) + c * k
        return Polynomial(acc)

    # ------------------------------------------------------- extremal orbit

    def _minimize(self, sig, stats):
        hit = self._sig_memo.get(sig)
        nodes = 0
        if hit is None:
            local = SearchStats()
            hit = minimize_signature(sig, max_nodes=self.max_nodes, stats=local)
            nodes = local.nodes
            self._sig_memo[sig] = hit
        sig_min, witness, stab = hit
        if stats is not None:
            stats.nodes += nodes
            stats.stabilizer_order = max(stats.stabilizer_order, stab.order)
        return sig_min, witness, stab

    def extremal_signature(self, m: Monomial, stats=None):
        sig_min, witness, _ = self._minimize(monomial_signature(m), stats)
        return sig_min, witness

    def stabilizer_of(self, m: Monomial, stats=None) -> PermutationGroup:
        """Stabilizer of the signature of ``m``, which must be extremal."""
        sig = monomial_signature(m)
        sig_min, _, stab = self._minimize(sig, stats)
        if sig != sig_min:
            raise UsageError(f"{m} does not have an extremal signature")
        return stab

    # -------------------------------------------------------------- average

    def _orbit(self, m: Monomial, gens) -> list[Monomial]:
        seen = {m}
        queue = deque([m])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = x.rename(g.mapping)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return list(seen)

    def _orbit_average(self, m: Monomial, stab: PermutationGroup) -> Polynomial:
        # each distinct image occurs |Stab|/|orbit| times in the group sum
        images = self._orbit(m, stab.generators)
        acc = {}
        for y in images:
            for r, k in self.reduce(y).terms.items():
                acc[r] = acc.get(r, 0) + k
        n = len(images)
        return Polynomial({r: c / n for r, c in acc.items()})

    def average(self, m: Monomial, stats=None) -> Polynomial:
        """Stabilizer average of a reduced extremal monomial."""
        if not self.is_reduced(m):
            raise UsageError(f"{m} is not reduced")
        stab = self.stabilizer_of(m, stats)
        return self._orbit_average(m, stab)

    def average_full_group(self, p: Polynomial) -> Polynomial:
        """Average over every renaming of the summation indices (small cases)."""
        import itertools

        acc = {}
        for m, c in p.terms.items():
            ds = m.dummies
            perms = list(itertools.permutations(ds))
            for images in perms:
                g = IndexPermutation.from_images(ds, images)
                y = apply_to_monomial(g, m)
                acc[y] = acc.get(y, 0) + c / len(perms)
        return Polynomial(acc)

    # --------------------------------------------------------- canonicalize

    def canonical_monomial(self, m: Monomial, stats=None, provenance=None) -> Polynomial:
        """Canonical image of one monomial with coefficient 1.

        Equivalent to reduce -> witness -> average, but the witness is applied
        before reducing: averaging over the stabilizer commutes with the
        projector, so one orbit of the raw monomial suffices.
        """
        sig = monomial_signature(m)
        sig_min, witness, stab = self._minimize(sig, stats)
        if provenance is not None:
            provenance.append((sig_min, stab.order))
        out = self._kappa_memo.get(m)
        if out is None:
            out = self._orbit_average(m.rename(witness.mapping), stab)
            self._kappa_memo[m] = out
        return out

    def canonicalize(self, p: Polynomial) -> CanonicalForm:
        stats = SearchStats()
        provenance = []
        acc = {}
        for m, c in p.items():
            for r, k in self.canonical_monomial(m, stats, provenance).terms.items():
                acc[r] = acc.get(r, 0) + c * k
        return CanonicalForm(Polynomial(acc), provenance, stats)

    def canonicalize_pipeline(self, p: Polynomial) -> Polynomial:
        """Literal reduce -> extremal witness -> average composition."""
        acc = {}
        for m, c in p.terms.items():
            for r, k in self.reduce(m).terms.items():
                sig_min, witness = self.extremal_signature(r)
                star = self.reduce(r.rename(witness.mapping))
                for s, v in star.terms.items():
                    for t, w in self.average(s).terms.items():
                        acc[t] = acc.get(t, 0) + c * k * v * w
        return Polynomial(acc)

    def equal_mod_relations(self, p: Polynomial, q: Polynomial) -> bool:
        return self.canonicalize(p - q).is_zero()


_default = Canonicalizer()


def reduce(m: Monomial) -> Polynomial:
    return _default.reduce(m)


def extremal_signature(m: Monomial):
    return _default.extremal_signature(m)


def average(m: Monomial) -> Polynomial:
    return _default.average(m)


def canonicalize(p: Polynomial) -> CanonicalForm:
    return _default.canonicalize(p)


def equal_mod_relations(p: Polynomial, q: Polynomial) -> bool:
    return _default.equal_mod_relations(p, q)
