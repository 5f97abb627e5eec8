"""Relation spaces of single-symbol signatures and their canonical bases.

For a signature ``(t, sorted indices)`` the symbols are all distinct
arrangements of the index multiset.  Relations come from the declared slot
symmetries (``e - sign * perm(e)``) and multi-term identities, instantiated at
every arrangement.  After row reduction the non-pivot symbols form the
lexicographically smallest basis of the quotient, and each pivot symbol is
rewritten over them.

Spaces depend only on the tensor type and the multiplicity pattern of the
indices, so they are computed once on integer placeholders and transported to
concrete indices.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from .core import ElementarySymbol, Signature, TensorType, format_coefficient, signature_of
from .errors import DeclarationError, UsageError
from .linalg import RowReducer


def multiplicity_pattern(sorted_indices) -> tuple[int, ...]:
    return tuple(len(list(g)) for _, g in itertools.groupby(sorted_indices))


def arrangements(pattern: tuple[int, ...]) -> list[tuple[int, ...]]:
    """All distinct arrangements of the placeholder multiset, ascending."""
    base = [j for j, n in enumerate(pattern) for _ in range(n)]
    if all(n == 1 for n in pattern):
        return list(itertools.permutations(base))
    return sorted(set(itertools.permutations(base)))


def apply_slots(perm, arr):
    return tuple(arr[q] for q in perm)


@dataclass
class GenericSpace:
    """Relation space on placeholder indices ``0..k-1``."""

    type: TensorType
    pattern: tuple[int, ...]
    symbols: list[tuple[int, ...]]
    rows: list[dict[int, Fraction]]
    basis: list[int]
    rewrite: dict[tuple[int, ...], tuple[tuple[tuple[int, ...], Fraction], ...]] = field(repr=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)


def build_generic_space(type: TensorType, pattern: tuple[int, ...]) -> GenericSpace:
    symbols = arrangements(pattern)
    col = {a: k for k, a in enumerate(symbols)}
    red = RowReducer()
    for a in symbols:
        ia = col[a]
        for perm, sign in type.symmetries:
            ib = col[apply_slots(perm, a)]
            row = {ia: Fraction(1)}
            row[ib] = row.get(ib, 0) - sign
            red.add(row)
        for ident in type.identities:
            row = {}
            for c, perm in ident:
                ib = col[apply_slots(perm, a)]
                row[ib] = row.get(ib, 0) + c
            red.add(row)
    basis = [k for k in range(len(symbols)) if k not in red.pivots]
    rewrite = {}
    for k, a in enumerate(symbols):
        if k in red.pivots:
            row = red.pivots[k]
            rewrite[a] = tuple((symbols[j], -v) for j, v in sorted(row.items()) if j != k)
        else:
            rewrite[a] = ((a, Fraction(1)),)
    return GenericSpace(type, pattern, symbols, red.rref_rows(), basis, rewrite)


class SpaceCache:
    """Thread-safe memo of generic spaces keyed by (type, multiplicity pattern).

    ``builds`` counts how many spaces were actually row-reduced.
    """

    def __init__(self):
        self._spaces: dict = {}
        self._lock = threading.Lock()
        self.builds = 0

    def generic(self, type: TensorType, pattern: tuple[int, ...]) -> GenericSpace:
        key = (type, pattern)
        space = self._spaces.get(key)
        if space is None:
            space = build_generic_space(type, pattern)
            with self._lock:
                self.builds += 1
                space = self._spaces.setdefault(key, space)
        return space

    def rewrite(self, e: ElementarySymbol) -> list[tuple[ElementarySymbol, Fraction]]:
        """``e`` as a combination of canonical symbols of its signature."""
        values = sorted(set(e.indices))
        rank = {v: j for j, v in enumerate(values)}
        pattern = multiplicity_pattern(sorted(e.indices))
        space = self.generic(e.type, pattern)
        arr = tuple(rank[i] for i in e.indices)
        return [
            (ElementarySymbol(e.type, (values[j] for j in b)), c)
            for b, c in space.rewrite[arr]
        ]

    def clear(self):
        with self._lock:
            self._spaces.clear()


default_cache = SpaceCache()


@dataclass
class SignatureSpace:
    """Relation space of one concrete signature."""

    signature: Signature
    symbols: list[ElementarySymbol]
    relation_rows: list[dict[int, Fraction]]
    canonical_basis: list[ElementarySymbol]
    rewrite_table: dict[ElementarySymbol, dict[ElementarySymbol, Fraction]] = field(repr=False)

    @property
    def relation_rank(self) -> int:
        return len(self.relation_rows)

    def dense_rows(self) -> list[list[Fraction]]:
        n = len(self.symbols)
        return [[row.get(j, Fraction(0)) for j in range(n)] for row in self.relation_rows]

    def to_json(self) -> dict:
        return {
            "signature": str(self.signature),
            "symbols": [str(s) for s in self.symbols],
            "rref": [[format_coefficient(v) for v in row] for row in self.dense_rows()],
            "canonical_basis": [str(s) for s in self.canonical_basis],
            "rewrite": {
                str(s): [{"coeff": format_coefficient(c), "symbol": str(b)} for b, c in comb.items()]
                for s, comb in self.rewrite_table.items()
            },
        }


def _transport(sig: Signature, space: GenericSpace) -> SignatureSpace:
    values = sorted(set(sig.sorted_indices))

    def concrete(arr):
        return ElementarySymbol(sig.type, (values[j] for j in arr))

    symbols = [concrete(a) for a in space.symbols]
    table = {
        concrete(a): {concrete(b): c for b, c in comb} for a, comb in space.rewrite.items()
    }
    return SignatureSpace(
        signature=sig,
        symbols=symbols,
        relation_rows=[dict(r) for r in space.rows],
        canonical_basis=[symbols[k] for k in space.basis],
        rewrite_table=table,
    )


def cached_space_for(sig: Signature, cache: SpaceCache | None = None) -> SignatureSpace:
    cache = default_cache if cache is None else cache
    space = cache.generic(sig.type, multiplicity_pattern(sig.sorted_indices))
    return _transport(sig, space)


def build_signature_space(sig: Signature, decls=None) -> SignatureSpace:
    """Build the space of ``sig`` from scratch (no cache).

    ``decls`` may be a DeclarationSet; when given, the signature's type must be
    declared there.
    """
    if decls is not None and decls.types.get(sig.type.name) != sig.type:
        raise UsageError(f"tensor {sig.type.name} is not declared")
    space = build_generic_space(sig.type, multiplicity_pattern(sig.sorted_indices))
    return _transport(sig, space)


def rewrite_symbol(e: ElementarySymbol, space: SignatureSpace) -> dict[ElementarySymbol, Fraction]:
    if signature_of(e) != space.signature:
        raise UsageError(f"{e} does not have signature {space.signature}")
    return dict(space.rewrite_table[e])


def check_type(type: TensorType) -> None:
    """Reject a declaration under which every symbol of the type vanishes."""
    space = build_generic_space(type, (1,) * type.arity)
    if not space.basis:
        raise DeclarationError(
            f"declarations of {type.name} force every symbol to zero (relation space is everything)"
        )
