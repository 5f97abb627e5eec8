import random
from fractions import Fraction

import pytest

from randgen import pool_decls, random_polynomial
from tenscanon import Oracle, oracle_canonical, oracle_equal
from tenscanon.core import Polynomial
from tenscanon.errors import ResourceError


def test_delta_projection(P):
    (gij,) = P("g(i,j)").monomials()
    (gji,) = P("g(j,i)").monomials()
    a, b = Fraction(2, 3), Fraction(-5, 7)
    t = Polynomial.from_monomial(gij, a) + Polynomial.from_monomial(gji, b)
    assert oracle_canonical(t) == Polynomial.from_monomial(gij, a + b)
    assert oracle_canonical(Polynomial.from_monomial(gij) - Polynomial.from_monomial(gji)).is_zero()


def test_full_space_counts(P):
    o = Oracle()
    (m,) = P("T(x,i)*T(x,j)").monomials()
    space = o.space_for(m)
    # one signature orbit of size 1, 2! orders times 2!*2! arrangements
    assert space.dimension == 8
    # T(x,i)T(x,j), T(x,i)T(j,x), T(i,x)T(x,j), T(i,x)T(j,x)
    assert len(space.complement) == 4


def test_quadratic_riemann_fixture(P):
    # the relation later frozen as an acceptance fixture
    assert oracle_equal(P("Ri(a,b,c,d)*Ri(a,c,b,d)"), P("1/2*Ri(a,b,c,d)*Ri(a,b,c,d)"))
    assert not oracle_equal(P("Ri(a,b,c,d)*Ri(a,b,c,d)"), P("0*g(i,j)"))


def test_dimension_cap(P):
    with pytest.raises(ResourceError):
        Oracle(max_dimension=100).canonical(P("Ri(a,b,c,d)*Ri(a,b,c,d)"))


def test_projection_linear_and_idempotent():
    d = pool_decls()
    rng = random.Random(61)
    o = Oracle()
    for _ in range(40):
        p, shape = random_polynomial(rng, d)
        q, _ = random_polynomial(rng, d, shape)
        cp = o.canonical(p)
        assert o.canonical(cp) == cp
        assert o.canonical(p + q.scale(3)) == cp + o.canonical(q).scale(3)
        assert o.equal(p, cp)


def test_independence(P):
    o = Oracle()
    (a,) = P("T(x,y)*T(x,y)").monomials()
    (b,) = P("T(x,y)*T(y,x)").monomials()
    (c,) = P("T(p,q)*T(q,p)").monomials()
    assert o.independent(a, b)
    assert not o.independent(b, c)
    (z,) = P("A(x,y)*g(x,y)").monomials()
    assert o.independent(z, a)  # a zero class meets everything in 0 only
