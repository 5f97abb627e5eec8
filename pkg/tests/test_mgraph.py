import random

import pytest

from randgen import pool_decls, random_contraction, random_renaming
from tenscanon import Canonicalizer, Oracle, parse_declarations, parse_polynomial
from tenscanon.core import Monomial, monomial_signature
from tenscanon.errors import UsageError
from tenscanon.group import apply_to_signature, minimize_signature
from tenscanon.mgraph import (
    are_independent,
    automorphism_renamings,
    build_graph,
    canonical_label,
    certificate,
    slot_classes,
)
from tenscanon.relspace import SpaceCache

DECLS = pool_decls()


def mono(P, text):
    (m,) = P(text).monomials()
    return m


def test_parallel_edges(P):
    g = build_graph(mono(P, "Ri(a,b,x,y)*Ri(x,y,c,e)"))
    assert g.n == 2
    assert [(e[5] + 1, e[6] + 1) for e in g.edges] == [(3, 1), (4, 2)]


def test_edgeless_and_single_vertex(P):
    m = mono(P, "Ri(i,j,k,l)")
    g = build_graph(m)
    assert g.edges == []
    colors, edges = canonical_label(g).certificate
    assert colors == tuple(g.colors) and edges == ()


def test_requires_canonical_factors(P):
    with pytest.raises(UsageError):
        build_graph(mono(P, "Ri(b,a,x,y)*Ri(x,y,c,e)"), Canonicalizer(SpaceCache()))


def test_renaming_gives_identical_graph(P):
    a = build_graph(mono(P, "T(x,i)*T(j,x)*g(y,z)*A(y,z)"))
    b = build_graph(mono(P, "T(q,i)*T(j,q)*g(s,r)*A(s,r)"))
    assert a.colors == b.colors
    assert [e[:4] for e in a.edges] == [e[:4] for e in b.edges]


def test_crosswise_riemann_contraction(P):
    # all four Riemann slots fall in one class, and the two patterns are
    # genuinely dependent, so the certificates must agree
    m1 = mono(P, "Ri(a,b,x,y)*Ri(x,y,c,e)")
    m2 = mono(P, "Ri(a,b,x,y)*Ri(x,c,y,e)")
    assert slot_classes(m1.factors[0].type) == (0, 0, 0, 0)
    assert certificate(m1) == certificate(m2)
    assert not Oracle().independent(m1, m2)


def test_crosswise_without_symmetry():
    d = parse_declarations("tensor Q(4) { }")
    (m1,) = parse_polynomial("Q(a,b,x,y)*Q(x,y,c,e)", d).monomials()
    (m2,) = parse_polynomial("Q(a,b,x,y)*Q(x,c,y,e)", d).monomials()
    assert certificate(m1) != certificate(m2)
    assert are_independent(m1, m2)
    assert Oracle().independent(m1, m2)


def test_riemann_square_vs_ricci_square(P):
    m1 = mono(P, "Ri(a,b,c,e)*Ri(a,b,c,e)")
    m2 = mono(P, "Ric(a,b)*Ric(a,b)")
    assert are_independent(m1, m2)
    assert Oracle().independent(m1, m2)
    assert not are_independent(m1, m1)
    assert not are_independent(m1, mono(P, "Ri(p,q,r,s)*Ri(p,q,r,s)"))


def _instances(n, seed):
    rng = random.Random(seed)
    return [random_contraction(rng, DECLS, factors=rng.randint(2, 4), max_dummies=rng.randint(1, 6)) for _ in range(n)]


@pytest.mark.parametrize("m", _instances(100, 21))
def test_certificate_invariance(m):
    rng = random.Random(hash(str(m)) & 0xFFFF)
    g = random_renaming(rng, m)
    shuffled = list(m.rename(g.mapping).factors)
    rng.shuffle(shuffled)
    assert certificate(Monomial(shuffled)) == certificate(m)


@pytest.mark.parametrize("m", _instances(60, 22))
def test_automorphisms_stabilize_minimal_signature(m):
    sig_min, witness, stab = minimize_signature(monomial_signature(m))
    m_star = m.rename(witness.mapping)
    g = build_graph(m_star)
    lab = canonical_label(g)
    sig = monomial_signature(m_star)
    for h in automorphism_renamings(g, lab):
        assert apply_to_signature(h, sig) == sig_min
        assert h in stab
