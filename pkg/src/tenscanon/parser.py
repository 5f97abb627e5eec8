"""Text formats for tensor declarations (``.td``) and polynomials (``.tp``).

Declarations::

    indices i, j, k, l;            # optional: order of free indices
    dummies a, b, c;               # optional: display names for d1, d2, ...
    tensor g(2) { sym(1,2); }
    tensor Ri(4) {
        asym(1,2); asym(3,4); sym_pair((1,2),(3,4));
        cyclic3(2,3,4);            # e + (1,4,2,3) + (1,3,4,2) = 0
    }
    tensor W(4) {
        perm(2,1,3,4) = -1;
        identity: (1,2,3,4) + (1,4,2,3) + (1,3,4,2) = 0;
    }

Slots are 1-based.  A permutation ``(p1,...,pn)`` denotes the symbol whose
k-th slot holds the index originally in slot ``pk``.

Polynomials are sums of products such as ``1/2*g(i,j) - Ri(i,j,k,l)*Ri(k,l,m,n)``.
An index occurring twice in a term is a summation index; it is renamed to the
summation pool (``d1, d2, ...``) preserving the order of the input names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    UNDECLARED,
    ElementarySymbol,
    Monomial,
    Polynomial,
    TensorType,
    dummy_index,
    free_index,
    natural_key,
)
from .errors import DeclarationError, ExpressionError, ParseError

_TOKEN = re.compile(
    r"(?P<WS>[ \t\r\f\v]+)|(?P<NL>\n)|(?P<COMMENT>(?:#|//)[^\n]*)"
    r"|(?P<NAME>[A-Za-z_][A-Za-z_0-9']*)|(?P<INT>\d+)|(?P<OP>[(){};,=:+\-*/\[\]])"
)
_RESERVED = re.compile(r"d\d+")


@dataclass
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str, source=None) -> list[Token]:
    tokens = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1, source)
        kind = m.lastgroup
        if kind == "NL":
            line += 1
            start = m.end()
        elif kind not in ("WS", "COMMENT"):
            tokens.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - start + 1))
    return tokens


class _Stream:
    def __init__(self, text, source=None):
        self.tokens = tokenize(text, source)
        self.k = 0
        self.source = source

    @property
    def peek(self) -> Token:
        return self.tokens[self.k]

    def next(self) -> Token:
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek
        return ParseError(message, tok.line, tok.column, self.source)

    def semantic(self, message, tok, cls=DeclarationError):
        where = f"{self.source + ':' if self.source else ''}{tok.line}:{tok.column}: "
        return cls(where + message)

    def accept(self, text) -> Token | None:
        if self.peek.kind in ("OP", "NAME") and self.peek.text == text:
            return self.next()
        return None

    def expect(self, text) -> Token:
        tok = self.accept(text)
        if tok is None:
            found = self.peek.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return tok

    def expect_kind(self, kind) -> Token:
        if self.peek.kind != kind:
            found = self.peek.text or "end of input"
            raise self.error(f"expected {kind.lower()}, found {found!r}")
        return self.next()


@dataclass
class DeclarationSet:
    types: dict[str, TensorType] = field(default_factory=dict)
    free_indices: list[str] = field(default_factory=list)
    dummy_pool: list[str] = field(default_factory=list)

    def add(self, type: TensorType) -> TensorType:
        if type.name in self.types:
            raise DeclarationError(f"tensor {type.name} declared twice")
        self.types[type.name] = type
        return type

    def __getitem__(self, name) -> TensorType:
        return self.types[name]

    def free(self, name):
        try:
            pos = self.free_indices.index(name)
        except ValueError:
            pos = UNDECLARED
        return free_index(name, pos)

    def dummy(self, number):
        return dummy_index(number, tuple(self.dummy_pool))


# ---------------------------------------------------------------- declarations


def _int_list(ts: _Stream) -> list[tuple[int, Token]]:
    ts.expect("(")
    out = [(int(ts.peek.text), ts.expect_kind("INT"))]
    while ts.accept(","):
        out.append((int(ts.peek.text), ts.expect_kind("INT")))
    ts.expect(")")
    return out


def _signed_unit(ts: _Stream) -> int:
    sign = 1
    if ts.accept("-"):
        sign = -1
    else:
        ts.accept("+")
    tok = ts.expect_kind("INT")
    if tok.text != "1":
        raise ts.semantic(f"symmetry sign must be +1 or -1, got {'-' if sign < 0 else ''}{tok.text}", tok)
    return sign


def _slots(ts, items, arity, distinct=True):
    seen = set()
    out = []
    for n, tok in items:
        if not 1 <= n <= arity:
            raise ts.semantic(f"slot {n} out of range 1..{arity}", tok)
        if distinct and n in seen:
            raise ts.semantic(f"slot {n} listed twice", tok)
        seen.add(n)
        out.append(n - 1)
    return out


def _transposition(arity, a, b):
    p = list(range(arity))
    p[a], p[b] = p[b], p[a]
    return tuple(p)


def _perm_from(ts, items, arity, tok):
    if len(items) != arity:
        raise ts.semantic(f"permutation has {len(items)} slots, tensor has {arity}", tok)
    perm = _slots(ts, items, arity)
    return tuple(perm)


def _rational(ts: _Stream) -> Fraction:
    num = int(ts.expect_kind("INT").text)
    if ts.accept("/"):
        tok = ts.expect_kind("INT")
        den = int(tok.text)
        if den == 0:
            raise ts.error("division by zero", tok)
        return Fraction(num, den)
    return Fraction(num)


def _perm_literal(ts: _Stream) -> list[tuple[int, Token]]:
    closing = "]" if ts.accept("[") else None
    if closing is None:
        ts.expect("(")
        closing = ")"
    out = [(int(ts.peek.text), ts.expect_kind("INT"))]
    while ts.accept(","):
        out.append((int(ts.peek.text), ts.expect_kind("INT")))
    ts.expect(closing)
    return out


def _identity(ts: _Stream, arity):
    terms = []
    while ts.peek.text != "=" or not terms:
        sign = 1
        if ts.accept("-"):
            sign = -1
        elif not ts.accept("+") and terms:
            raise ts.error(f"expected '+', '-' or '=', found {ts.peek.text or 'end of input'!r}")
        coeff = Fraction(1)
        if ts.peek.kind == "INT":
            coeff = _rational(ts)
            ts.expect("*")
        tok = ts.peek
        items = _perm_literal(ts)
        terms.append((sign * coeff, _perm_from(ts, items, arity, tok)))
    ts.expect("=")
    z = ts.expect_kind("INT")
    if z.text != "0":
        raise ts.error("identity must be of the form '... = 0'", z)
    return tuple(terms)


def _tensor_body(ts: _Stream, name, arity):
    symmetries, identities = [], []
    while not ts.accept("}"):
        tok = ts.expect_kind("NAME")
        kw = tok.text
        if kw in ("sym", "asym"):
            slots = _slots(ts, _int_list(ts), arity)
            if len(slots) < 2:
                raise ts.semantic(f"{kw} needs at least two slots", tok)
            sign = 1 if kw == "sym" else -1
            for a, b in zip(slots, slots[1:]):
                symmetries.append((_transposition(arity, a, b), sign))
        elif kw == "sym_pair":
            ts.expect("(")
            left = _slots(ts, _int_list(ts), arity)
            ts.expect(",")
            right = _slots(ts, _int_list(ts), arity)
            ts.expect(")")
            if len(left) != len(right):
                raise ts.semantic("sym_pair blocks must have equal length", tok)
            if set(left) & set(right):
                raise ts.semantic("sym_pair blocks overlap", tok)
            sign = 1
            if ts.accept("="):
                sign = _signed_unit(ts)
            p = list(range(arity))
            for a, b in zip(left, right):
                p[a], p[b] = b, a
            symmetries.append((tuple(p), sign))
        elif kw == "cyclic3":
            items = _int_list(ts)
            if len(items) != 3:
                raise ts.semantic("cyclic3 takes exactly three slots", tok)
            a, b, c = _slots(ts, items, arity)
            p1, p2 = list(range(arity)), list(range(arity))
            p1[a], p1[b], p1[c] = c, a, b
            p2[a], p2[b], p2[c] = b, c, a
            identities.append(
                ((1, tuple(range(arity))), (1, tuple(p1)), (1, tuple(p2)))
            )
        elif kw == "perm":
            items = _int_list(ts)
            perm = _perm_from(ts, items, arity, tok)
            ts.expect("=")
            symmetries.append((perm, _signed_unit(ts)))
        elif kw == "identity":
            ts.expect(":")
            identities.append(_identity(ts, arity))
        else:
            raise ts.error(f"unknown symmetry statement {kw!r}", tok)
        ts.expect(";")
    return symmetries, identities


def parse_declarations(text: str, source=None) -> DeclarationSet:
    from .relspace import check_type

    ts = _Stream(text, source)
    decls = DeclarationSet()
    while ts.peek.kind != "EOF":
        tok = ts.expect_kind("NAME")
        if tok.text in ("indices", "dummies"):
            names = [ts.expect_kind("NAME").text]
            while ts.accept(","):
                names.append(ts.expect_kind("NAME").text)
            ts.expect(";")
            target = decls.free_indices if tok.text == "indices" else decls.dummy_pool
            for n in names:
                if n in decls.free_indices or n in decls.dummy_pool:
                    raise ts.semantic(f"index {n} declared twice", tok)
                target.append(n)
        elif tok.text == "tensor":
            name_tok = ts.expect_kind("NAME")
            ts.expect("(")
            ar_tok = ts.expect_kind("INT")
            arity = int(ar_tok.text)
            if arity < 1:
                raise ts.semantic("tensor arity must be at least 1", ar_tok)
            ts.expect(")")
            ts.expect("{")
            syms, idents = _tensor_body(ts, name_tok.text, arity)
            if name_tok.text in decls.types:
                raise ts.semantic(f"tensor {name_tok.text} declared twice", name_tok)
            t = TensorType(name_tok.text, arity, syms, idents, position=len(decls.types))
            try:
                check_type(t)
            except DeclarationError as exc:
                raise ts.semantic(str(exc), name_tok) from None
            decls.add(t)
        else:
            raise ts.error(f"expected 'tensor', 'indices' or 'dummies', found {tok.text!r}", tok)
    return decls


# ----------------------------------------------------------------- polynomials


def _factor(ts: _Stream, decls: DeclarationSet):
    name = ts.expect_kind("NAME")
    t = decls.types.get(name.text)
    if t is None:
        raise ts.semantic(f"unknown tensor {name.text!r}", name, ExpressionError)
    ts.expect("(")
    idx = []
    while True:
        tok = ts.peek
        if tok.kind not in ("NAME", "INT"):
            raise ts.error(f"expected an index, found {tok.text or 'end of input'!r}")
        idx.append(ts.next())
        if not ts.accept(","):
            break
    ts.expect(")")
    if len(idx) != t.arity:
        raise ts.semantic(f"{t.name} takes {t.arity} indices, got {len(idx)}", name, ExpressionError)
    return t, idx, name


def _term(ts: _Stream, decls, sign):
    coeff = Fraction(sign)
    raw = []
    while True:
        if ts.peek.kind == "INT":
            coeff *= _rational(ts)
        else:
            raw.append(_factor(ts, decls))
        if not ts.accept("*"):
            break
    return coeff, raw


def _build_monomial(ts, decls: DeclarationSet, raw) -> Monomial:
    counts: dict[str, int] = {}
    first: dict[str, Token] = {}
    for t, idx, name_tok in raw:
        seen = set()
        for tok in idx:
            if tok.text in seen:
                raise ts.semantic(
                    f"index {tok.text} repeated within a single factor {t.name}",
                    tok,
                    ExpressionError,
                )
            seen.add(tok.text)
            counts[tok.text] = counts.get(tok.text, 0) + 1
            first.setdefault(tok.text, tok)
    pool = decls.dummy_pool
    for n, k in counts.items():
        if k > 2:
            raise ts.semantic(f"index {n} occurs {k} times in one term", first[n], ExpressionError)
        if k == 2 and n in decls.free_indices:
            raise ts.semantic(f"declared free index {n} used as a summation index", first[n], ExpressionError)
        if k == 1 and n in pool:
            raise ts.semantic(f"declared summation index {n} occurs only once", first[n], ExpressionError)
        if k == 1 and _RESERVED.fullmatch(n):
            raise ts.semantic(f"index name {n} is reserved for summation indices", first[n], ExpressionError)
    dummies = sorted(
        (n for n, k in counts.items() if k == 2),
        key=lambda n: (pool.index(n) if n in pool else UNDECLARED, natural_key(n), n),
    )
    mapping = {n: decls.dummy(k + 1) for k, n in enumerate(dummies)}
    factors = []
    for t, idx, _ in raw:
        factors.append(
            ElementarySymbol(t, (mapping[tok.text] if tok.text in mapping else decls.free(tok.text) for tok in idx))
        )
    return Monomial(factors)


def parse_polynomial(text: str, decls: DeclarationSet, source=None) -> Polynomial:
    ts = _Stream(text, source)
    if ts.peek.kind == "EOF":
        raise ts.error("empty expression")
    terms: dict[Monomial, Fraction] = {}
    sign = 1
    if ts.accept("-"):
        sign = -1
    else:
        ts.accept("+")
    while True:
        coeff, raw = _term(ts, decls, sign)
        m = _build_monomial(ts, decls, raw)
        terms[m] = terms.get(m, 0) + coeff
        if ts.accept("+"):
            sign = 1
        elif ts.accept("-"):
            sign = -1
        elif ts.peek.kind == "EOF":
            break
        else:
            raise ts.error(f"unexpected {ts.peek.text!r}")
    return Polynomial(terms)
