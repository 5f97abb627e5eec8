"""Canonical forms of tensor polynomials with abstract indices.

Typical use::

    from tenscanon import parse_declarations, parse_polynomial, canonicalize

    decls = parse_declarations(open("riemann.td").read())
    p = parse_polynomial("Ri(i,j,k,l) + Ri(i,l,j,k) + Ri(i,k,l,j)", decls)
    canonicalize(p).is_zero()   # True
"""

from .canon import (
    CanonicalForm,
    Canonicalizer,
    average,
    canonicalize,
    equal_mod_relations,
    extremal_signature,
    reduce,
)
from .core import (
    ElementarySymbol,
    Index,
    Monomial,
    Polynomial,
    Signature,
    TensorType,
    compare_lex,
    dummy_index,
    free_index,
    monomial_signature,
    signature_of,
)
from .errors import (
    DeclarationError,
    ExpressionError,
    ParseError,
    ResourceError,
    TensCanonError,
    UsageError,
)
from .group import (
    IndexPermutation,
    PermutationGroup,
    apply_to_monomial,
    orbit_of_signature,
    stabilizer,
)
from .mgraph import are_independent, build_graph, canonical_label
from .oracle import Oracle, oracle_canonical, oracle_equal
from .parser import DeclarationSet, parse_declarations, parse_polynomial
from .relspace import build_signature_space, cached_space_for, rewrite_symbol

__version__ = "0.1.0"
