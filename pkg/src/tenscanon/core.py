"""Expression data model: indices, tensor types, symbols, monomials, polynomials.

Everything here is immutable once built.  Coefficients are ``Fraction`` so
that averaging over finite groups stays exact.

Index order is global: free indices come first (declared ones in declaration
order, then undeclared ones in natural name order), followed by the summation
indices ``d1 < d2 < ...``.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from fractions import Fraction
from functools import total_ordering

from .errors import ExpressionError, UsageError

FREE, DUMMY = 0, 1
UNDECLARED = 1 << 30

_CHUNK = re.compile(r"(\d+)")


def natural_key(name: str) -> tuple:
    """Sort key that orders ``i2`` before ``i10``."""
    out = []
    for part in _CHUNK.split(name):
        if not part:
            continue
        out.append((0, int(part), "") if part.isdigit() else (1, 0, part))
    return tuple(out)


class Index:
    """An abstract index label.

    Two dummies with the same number are equal regardless of their display
    name; free indices are identified by name.
    """

    __slots__ = ("kind", "name", "_key", "_hash")

    def __init__(self, kind: int, name: str, key: tuple):
        self.kind = kind
        self.name = name
        self._key = key
        self._hash = hash(key)

    @property
    def is_dummy(self) -> bool:
        return self.kind == DUMMY

    @property
    def number(self) -> int:
        """Position of a dummy in the summation pool (1-based)."""
        if self.kind != DUMMY:
            raise UsageError(f"{self.name} is not a summation index")
        return self._key[1]

    def __eq__(self, other):
        return isinstance(other, Index) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        if not isinstance(other, Index):
            return NotImplemented
        return self._key < other._key

    def __le__(self, other):
        if not isinstance(other, Index):
            return NotImplemented
        return self._key <= other._key

    def __gt__(self, other):
        if not isinstance(other, Index):
            return NotImplemented
        return self._key > other._key

    def __ge__(self, other):
        if not isinstance(other, Index):
            return NotImplemented
        return self._key >= other._key

    def __repr__(self):
        return f"Index({self.name!r}{', dummy' if self.kind == DUMMY else ''})"

    def __str__(self):
        return self.name


def free_index(name: str, position: int = UNDECLARED) -> Index:
    return Index(FREE, name, (FREE, position, natural_key(name), name))


def dummy_index(number: int, pool: tuple[str, ...] = ()) -> Index:
    if number < 1:
        raise UsageError("summation indices are numbered from 1")
    name = pool[number - 1] if number <= len(pool) else f"d{number}"
    return Index(DUMMY, name, (DUMMY, number, (), ""))


def _norm_perm(perm, arity):
    perm = tuple(perm)
    if sorted(perm) != list(range(arity)):
        raise UsageError(f"{perm} is not a permutation of {arity} slots")
    return perm


class TensorType:
    """A tensor head with its slot symmetries and multi-term identities.

    ``symmetries`` holds pairs ``(perm, sign)`` meaning ``e = sign * perm(e)``
    and ``identities`` holds sums ``[(coeff, perm), ...]`` meaning
    ``sum coeff * perm(e) = 0``.  A slot permutation is 0-based and acts by
    ``perm(e)[p] = e[perm[p]]``.
    """

    __slots__ = ("name", "arity", "symmetries", "identities", "position", "_key")

    def __init__(self, name, arity, symmetries=(), identities=(), position=0):
        if arity < 1:
            raise UsageError("tensor arity must be at least 1")
        self.name = name
        self.arity = arity
        self.symmetries = tuple((_norm_perm(p, arity), int(s)) for p, s in symmetries)
        for _, s in self.symmetries:
            if s not in (1, -1):
                raise UsageError(f"symmetry sign must be +1 or -1, got {s}")
        self.identities = tuple(
            tuple((Fraction(c), _norm_perm(p, arity)) for c, p in ident)
            for ident in identities
        )
        self.position = position
        self._key = (position, name)

    def relation_perms(self):
        """Every slot permutation that occurs in a symmetry or identity."""
        perms = [p for p, _ in self.symmetries]
        for ident in self.identities:
            perms.extend(p for _, p in ident)
        return perms

    def _ident(self):
        return (self.name, self.arity, self.symmetries, self.identities)

    def __eq__(self, other):
        return isinstance(other, TensorType) and self._ident() == other._ident()

    def __hash__(self):
        return hash((self.name, self.arity))

    def __repr__(self):
        return f"TensorType({self.name!r}, {self.arity})"


@total_ordering
class ElementarySymbol:
    """A single tensor factor ``t(i1, ..., in)``."""

    __slots__ = ("type", "indices", "_key", "_hash")

    def __init__(self, type: TensorType, indices: Iterable[Index]):
        indices = tuple(indices)
        if len(indices) != type.arity:
            raise ExpressionError(
                f"{type.name} takes {type.arity} indices, got {len(indices)}"
            )
        self.type = type
        self.indices = indices
        self._key = (type._key, indices)
        self._hash = hash(self._key)

    @property
    def signature(self) -> "Signature":
        return signature_of(self)

    def with_indices(self, indices) -> "ElementarySymbol":
        return ElementarySymbol(self.type, indices)

    def rename(self, mapping: Mapping[Index, Index]) -> "ElementarySymbol":
        return ElementarySymbol(self.type, (mapping.get(i, i) for i in self.indices))

    def __eq__(self, other):
        return isinstance(other, ElementarySymbol) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        if not isinstance(other, ElementarySymbol):
            return NotImplemented
        return self._key < other._key

    def __repr__(self):
        return f"ElementarySymbol({self})"

    def __str__(self):
        return f"{self.type.name}({','.join(i.name for i in self.indices)})"


@total_ordering
class Signature:
    """A tensor type together with the ascending sort of an index multiset."""

    __slots__ = ("type", "sorted_indices", "_key", "_hash")

    def __init__(self, type: TensorType, sorted_indices: Iterable[Index]):
        self.type = type
        self.sorted_indices = tuple(sorted_indices)
        self._key = (type._key, self.sorted_indices)
        self._hash = hash(self._key)

    def rename(self, mapping: Mapping[Index, Index]) -> "Signature":
        return Signature(self.type, sorted(mapping.get(i, i) for i in self.sorted_indices))

    def __eq__(self, other):
        return isinstance(other, Signature) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        if not isinstance(other, Signature):
            return NotImplemented
        return self._key < other._key

    def __repr__(self):
        return f"Signature({self})"

    def __str__(self):
        return f"({self.type.name},({','.join(i.name for i in self.sorted_indices)}))"


def signature_of(e: ElementarySymbol) -> Signature:
    return Signature(e.type, sorted(e.indices))


def compare_lex(a, b) -> int:
    """Three-way lexicographic comparison of two sequences (-1, 0 or 1)."""
    try:
        for x, y in zip(a, b):
            if x < y:
                return -1
            if y < x:
                return 1
    except TypeError as exc:
        raise UsageError(f"cannot compare {a!r} with {b!r}") from exc
    return (len(a) > len(b)) - (len(a) < len(b))


@total_ordering
class Monomial:
    """A commutative product of symbols, stored with factors sorted.

    Coefficients live in :class:`Polynomial`; a monomial is a basis element.
    """

    __slots__ = ("factors", "_hash")

    def __init__(self, factors: Iterable[ElementarySymbol] = (), check: bool = False):
        self.factors = tuple(sorted(factors))
        self._hash = hash(self.factors)
        if check:
            self.validate()

    def validate(self):
        counts = {}
        for f in self.factors:
            if len(set(f.indices)) != len(f.indices):
                raise ExpressionError(f"index repeated inside factor {f}")
            for i in f.indices:
                counts[i] = counts.get(i, 0) + 1
        for i, n in counts.items():
            if n > 2:
                raise ExpressionError(f"index {i} occurs {n} times")
            if i.is_dummy and n != 2:
                raise ExpressionError(f"summation index {i} occurs {n} time(s)")
            if not i.is_dummy and n != 1:
                raise ExpressionError(f"free index {i} occurs {n} times")
        return self

    @property
    def dummies(self) -> tuple[Index, ...]:
        return tuple(sorted({i for f in self.factors for i in f.indices if i.is_dummy}))

    @property
    def free_indices(self) -> tuple[Index, ...]:
        return tuple(sorted({i for f in self.factors for i in f.indices if not i.is_dummy}))

    @property
    def signature(self) -> tuple[Signature, ...]:
        return monomial_signature(self)

    def rename(self, mapping: Mapping[Index, Index]) -> "Monomial":
        return Monomial(f.rename(mapping) for f in self.factors)

    def __mul__(self, other):
        if isinstance(other, Monomial):
            return Monomial(self.factors + other.factors)
        return NotImplemented

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.factors == other.factors

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        if not isinstance(other, Monomial):
            return NotImplemented
        return self.factors < other.factors

    def __len__(self):
        return len(self.factors)

    def __repr__(self):
        return f"Monomial({self})"

    def __str__(self):
        return "*".join(map(str, self.factors)) if self.factors else "1"


def monomial_signature(m: Monomial) -> tuple[Signature, ...]:
    """Sorted tuple of the factor signatures (the monomial signature)."""
    return tuple(sorted(signature_of(f) for f in m.factors))


def _as_fraction(c) -> Fraction:
    if isinstance(c, float):
        raise UsageError("floating point coefficients are not allowed")
    return Fraction(c)


class Polynomial:
    """Formal rational linear combination of monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | Iterable = ()):
        acc: dict[Monomial, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            c = _as_fraction(c)
            if c:
                acc[m] = acc.get(m, 0) + c
        self.terms = {m: c for m, c in acc.items() if c}

    @classmethod
    def from_monomial(cls, m: Monomial, coeff=1) -> "Polynomial":
        return cls({m: coeff})

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls()

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        """Terms in ascending monomial order."""
        return sorted(self.terms.items())

    def monomials(self):
        return sorted(self.terms)

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(out)

    def __neg__(self):
        return Polynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "Polynomial":
        c = _as_fraction(c)
        return Polynomial({m: c * v for m, v in self.terms.items()})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = product_apart(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(out)

    def rename(self, mapping: Mapping[Index, Index]) -> "Polynomial":
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            r = m.rename(mapping)
            out[r] = out.get(r, 0) + c
        return Polynomial(out)

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"

    def __str__(self):
        return format_polynomial(self)


def product_apart(m1: Monomial, m2: Monomial) -> Monomial:
    """Product of two monomials with the summation indices of ``m2`` renamed
    past those of ``m1``.  Shared free indices are rejected."""
    shared = set(m1.free_indices) & set(m2.free_indices)
    if shared:
        names = ", ".join(sorted(i.name for i in shared))
        raise ExpressionError(f"free index {names} shared by both factors of a product")
    d1 = m1.dummies
    shift = max((d.number for d in d1), default=0)
    pool_names = {d.number: d.name for d in d1}
    mapping = {}
    for d in m2.dummies:
        n = d.number + shift
        mapping[d] = Index(DUMMY, pool_names.get(n, f"d{n}"), (DUMMY, n, (), ""))
    return m1 * m2.rename(mapping)


def format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    parts = []
    for k, (m, c) in enumerate(p.items()):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not m.factors:
            body = format_coefficient(mag)
        elif mag == 1:
            body = str(m)
        else:
            body = f"{format_coefficient(mag)}*{m}"
        if k == 0:
            parts.append(body if sign == "+" else "-" + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)
