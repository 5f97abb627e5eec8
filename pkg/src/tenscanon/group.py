"""Renamings of summation indices and their action on monomials and signatures.

The renaming group of a monomial is the full symmetric group on its summation
indices.  It is never enumerated wholesale: the stabilizer of a signature is
found by a backtracking search that only looks for one new generator per
point-stabilizer orbit, and the minimal signature of an orbit is found by a
branch-and-bound search pruned by that stabilizer.
"""

from __future__ import annotations

import itertools
import os
from collections import Counter, deque
from dataclasses import dataclass

from .core import Index, Monomial, Signature
from .errors import ResourceError, UsageError

DEFAULT_MAX_NODES = 10**6


def default_max_nodes() -> int:
    env = os.environ.get("TENSCANON_MAX_ORBIT")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise UsageError(f"TENSCANON_MAX_ORBIT must be an integer, got {env!r}") from None
        if value < 1:
            raise UsageError("TENSCANON_MAX_ORBIT must be positive")
        return value
    return DEFAULT_MAX_NODES


class IndexPermutation:
    """A bijection of index labels, the identity outside its support."""

    __slots__ = ("mapping", "_hash")

    def __init__(self, mapping=None):
        mapping = {k: v for k, v in (mapping or {}).items() if k != v}
        if set(mapping) != set(mapping.values()):
            raise UsageError("renaming is not a bijection on its support")
        self.mapping = mapping
        self._hash = hash(frozenset(mapping.items()))

    @classmethod
    def identity(cls) -> "IndexPermutation":
        return cls()

    @classmethod
    def swap(cls, a: Index, b: Index) -> "IndexPermutation":
        return cls({a: b, b: a})

    @classmethod
    def from_images(cls, domain, images) -> "IndexPermutation":
        return cls(dict(zip(domain, images)))

    @property
    def support(self) -> frozenset:
        return frozenset(self.mapping)

    def is_identity(self) -> bool:
        return not self.mapping

    def __call__(self, i: Index) -> Index:
        return self.mapping.get(i, i)

    def __mul__(self, other: "IndexPermutation") -> "IndexPermutation":
        """Composition: ``(g * h)(x) == g(h(x))``."""
        keys = set(self.mapping) | set(other.mapping)
        return IndexPermutation({k: self(other(k)) for k in keys})

    def inverse(self) -> "IndexPermutation":
        return IndexPermutation({v: k for k, v in self.mapping.items()})

    def __eq__(self, other):
        return isinstance(other, IndexPermutation) and self.mapping == other.mapping

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.mapping:
            return "IndexPermutation()"
        pairs = ", ".join(f"{k}->{v}" for k, v in sorted(self.mapping.items()))
        return f"IndexPermutation({pairs})"


class PermutationGroup:
    """A finite group of renamings, kept as an explicit element list."""

    def __init__(self, generators=(), elements=None, max_elements=None):
        self.generators = [g for g in generators if not g.is_identity()]
        if elements is None:
            elements = _closure(self.generators, max_elements or default_max_nodes())
        self.elements = list(elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g):
        return g in set(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


def _closure(generators, cap):
    ident = IndexPermutation()
    seen = {ident}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in generators:
            h = s * g
            if h not in seen:
                seen.add(h)
                if len(seen) > cap:
                    raise ResourceError(f"group has more than {cap} elements")
                queue.append(h)
    return sorted(seen, key=lambda g: sorted(g.mapping.items()))


@dataclass
class SearchStats:
    """Counters reported by the searches (accumulated across calls)."""

    nodes: int = 0
    stabilizer_order: int = 1
    orbit_size: int | None = None


# ------------------------------------------------------------------- actions


def _check_renaming(g: IndexPermutation, dummies):
    for i in g.support:
        if not i.is_dummy:
            raise UsageError(f"renaming moves free index {i}")
        if i not in dummies:
            raise UsageError(f"renaming moves {i}, which is not a summation index of the monomial")


def apply_to_monomial(g: IndexPermutation, m: Monomial) -> Monomial:
    _check_renaming(g, set(m.dummies))
    return m.rename(g.mapping)


def apply_to_signature(g: IndexPermutation, sig) -> tuple[Signature, ...]:
    return tuple(sorted(s.rename(g.mapping) for s in sig))


def sig_dummies(sig) -> tuple[Index, ...]:
    return tuple(sorted({i for s in sig for i in s.sorted_indices if i.is_dummy}))


def _resolve_dummies(sig, dummies):
    present = sig_dummies(sig)
    if dummies is None:
        return present
    dummies = tuple(sorted(dummies))
    for d in dummies:
        if not d.is_dummy:
            raise UsageError(f"{d} is not a summation index")
    return dummies


def orbit_with_witnesses(sig, dummies=None, max_orbit=None) -> dict:
    """Map each signature in the orbit to one renaming producing it."""
    cap = max_orbit or default_max_nodes()
    sig = tuple(sorted(sig))
    dummies = _resolve_dummies(sig, dummies)
    gens = [IndexPermutation.swap(a, b) for a, b in zip(dummies, dummies[1:])]
    found = {sig: IndexPermutation()}
    queue = deque([sig])
    while queue:
        s = queue.popleft()
        w = found[s]
        for t in gens:
            u = apply_to_signature(t, s)
            if u not in found:
                found[u] = t * w
                if len(found) > cap:
                    raise ResourceError(f"signature orbit exceeds {cap} elements")
                queue.append(u)
    return found


def orbit_of_signature(sig, dummies=None, max_orbit=None) -> set:
    return set(orbit_with_witnesses(sig, dummies, max_orbit))


def brute_force_orbit(sig, dummies=None) -> dict:
    """Orbit by enumerating every renaming (small cases only)."""
    sig = tuple(sorted(sig))
    dummies = _resolve_dummies(sig, dummies)
    out = {}
    for images in itertools.permutations(dummies):
        g = IndexPermutation.from_images(dummies, images)
        out.setdefault(apply_to_signature(g, sig), g)
    return out


# ----------------------------------------------------------- encoded searches


class _Encoded:
    """A monomial signature on integers: free indices ``0..F-1`` by rank,
    summation index with new number ``k`` as ``F + k``."""

    def __init__(self, sig, dummies):
        self.sig = tuple(sorted(sig))
        self.dummies = tuple(dummies)
        others = sorted({i for s in self.sig for i in s.sorted_indices if i not in set(self.dummies)})
        types = sorted({s.type._key for s in self.sig})
        trank = {k: r for r, k in enumerate(types)}
        frank = {i: r for r, i in enumerate(others)}
        drank = {d: r for r, d in enumerate(self.dummies)}
        self.n = len(self.dummies)
        self.F = len(others)
        self.factors = []
        for s in self.sig:
            color = (trank[s.type._key], tuple(frank[i] for i in s.sorted_indices if i in frank))
            dset = frozenset(drank[i] for i in s.sorted_indices if i in drank)
            self.factors.append((color, dset))
        self.containing = [[k for k, (_, ds) in enumerate(self.factors) if x in ds] for x in range(self.n)]
        self.profile = [tuple(sorted(self.factors[k][0] for k in ks)) for ks in self.containing]

    def key_of(self, newname) -> tuple:
        """Encoded signature after renaming old dummy ``x`` to number ``newname[x]``."""
        F = self.F
        return tuple(
            sorted(
                (color[0], color[1] + tuple(sorted(F + newname[x] for x in dset)))
                for color, dset in self.factors
            )
        )

    def lower_bound(self, newname, depth) -> tuple:
        """Smallest signature key any completion of a partial renaming can reach.

        Unassigned dummies of a factor are filled with the smallest numbers
        still free, which no completion can beat factor by factor."""
        F = self.F
        parts = []
        for color, dset in self.factors:
            known = sorted(F + newname[x] for x in dset if x in newname)
            u = len(dset) - len(known)
            parts.append((color[0], color[1] + tuple(known) + tuple(range(F + depth, F + depth + u))))
        parts.sort()
        return tuple(parts)

    def consistent(self, phi: dict) -> bool:
        """Can the partial map ``phi`` (old -> old) extend to a stabilizer element?"""
        image = set(phi.values())
        left, right = Counter(), Counter()
        for color, dset in self.factors:
            left[(color, frozenset(phi[x] for x in dset if x in phi))] += 1
            right[(color, dset & image)] += 1
        return left == right

    def decode_perm(self, images) -> IndexPermutation:
        return IndexPermutation({self.dummies[x]: self.dummies[y] for x, y in enumerate(images)})


def _tick(stats, cap):
    stats.nodes += 1
    if stats.nodes > cap:
        raise ResourceError(f"search exceeded {cap} nodes")


def _find_element(enc: _Encoded, fixed, b, c, stats, cap):
    """A stabilizer element fixing ``fixed`` pointwise and sending b to c."""
    n = enc.n
    phi = {x: x for x in fixed}
    phi[b] = c
    _tick(stats, cap)
    if enc.profile[b] != enc.profile[c] or not enc.consistent(phi):
        return None
    order = [x for x in range(n) if x not in phi]
    used = set(phi.values())

    def extend(k):
        if k == len(order):
            return tuple(phi[x] for x in range(n))
        x = order[k]
        for y in range(n):
            if y in used or enc.profile[y] != enc.profile[x]:
                continue
            phi[x] = y
            used.add(y)
            _tick(stats, cap)
            if enc.consistent(phi):
                res = extend(k + 1)
                if res is not None:
                    return res
            used.discard(y)
            del phi[x]
        return None

    return extend(0)


def _orbit_of(point, gens):
    orbit = {point}
    stack = [point]
    while stack:
        p = stack.pop()
        for g in gens:
            q = g[p]
            if q not in orbit:
                orbit.add(q)
                stack.append(q)
    return orbit


def _stabilizer_generators(enc: _Encoded, stats, cap):
    n = enc.n
    gens: list[tuple[int, ...]] = []
    for i in reversed(range(n)):
        fixed = list(range(i))
        orbit = _orbit_of(i, gens)
        for c in range(i + 1, n):
            if c in orbit:
                continue
            g = _find_element(enc, fixed, i, c, stats, cap)
            if g is not None:
                gens.append(g)
                orbit = _orbit_of(i, gens)
    return gens


def _closure_tuples(gens, n, cap):
    ident = tuple(range(n))
    seen = {ident}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = tuple(s[g[x]] for x in range(n))
            if h not in seen:
                seen.add(h)
                if len(seen) > cap:
                    raise ResourceError(f"stabilizer has more than {cap} elements")
                queue.append(h)
    return sorted(seen)


def stabilizer(sig, dummies=None, max_nodes=None, stats=None) -> PermutationGroup:
    """The renamings of ``dummies`` that fix the monomial signature ``sig``."""
    cap = max_nodes or default_max_nodes()
    stats = stats if stats is not None else SearchStats()
    enc = _Encoded(sig, _resolve_dummies(tuple(sorted(sig)), dummies))
    gens = _stabilizer_generators(enc, stats, cap)
    elements = _closure_tuples(gens, enc.n, cap)
    stats.stabilizer_order = len(elements)
    return PermutationGroup(
        [enc.decode_perm(g) for g in gens],
        elements=[enc.decode_perm(g) for g in elements],
    )


def minimize_signature(sig, dummies=None, max_nodes=None, stats=None):
    """Lexicographically minimal signature in the orbit of ``sig``.

    Returns ``(sig_min, witness, stab)`` where ``witness`` maps ``sig`` to
    ``sig_min`` and ``stab`` is the stabilizer of ``sig_min``.
    """
    cap = max_nodes or default_max_nodes()
    stats = stats if stats is not None else SearchStats()
    sig = tuple(sorted(sig))
    dummies = _resolve_dummies(sig, dummies)
    enc = _Encoded(sig, dummies)
    n = enc.n
    gens = _stabilizer_generators(enc, stats, cap)
    elements = _closure_tuples(gens, n, cap)

    best = [None, None]

    def dfs(prefix, newname, group, bound):
        depth = len(prefix)
        if depth == n:
            best[0], best[1] = bound, list(prefix)
            return
        remaining = [x for x in range(n) if x not in newname]
        reps, seen = [], set()
        for x in remaining:
            if x in seen:
                continue
            seen.update(g[x] for g in group)
            reps.append(x)
        children = []
        for x in reps:
            _tick(stats, cap)
            newname[x] = depth
            lb = enc.lower_bound(newname, depth + 1)
            del newname[x]
            children.append((lb, x))
        children.sort()
        for lb, x in children:
            if best[0] is not None and lb >= best[0]:
                break
            newname[x] = depth
            prefix.append(x)
            dfs(prefix, newname, [g for g in group if g[x] == x], lb)
            prefix.pop()
            del newname[x]

    _tick(stats, cap)
    dfs([], {}, elements, enc.lower_bound({}, 0))
    order = best[1]
    witness = IndexPermutation({dummies[x]: dummies[k] for k, x in enumerate(order)})
    sig_min = apply_to_signature(witness, sig)
    # stabilizer of sig_min is the conjugate witness * Stab(sig) * witness^-1
    winv = witness.inverse()
    conj = [witness * enc.decode_perm(g) * winv for g in gens]
    stab = PermutationGroup(conj, elements=[witness * enc.decode_perm(g) * winv for g in elements])
    stats.stabilizer_order = len(elements)
    return sig_min, witness, stab


def brute_force_minimum(sig, dummies=None):
    """Minimal signature over all renamings, by enumeration."""
    orbit = brute_force_orbit(sig, dummies)
    s = min(orbit)
    return s, orbit[s]
