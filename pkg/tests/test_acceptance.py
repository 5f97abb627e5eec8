"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line (shown in the terminal summary and
printed when run with ``-s``) before asserting.
"""

import itertools
import math
import random
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES, RIEMANN_TD
from randgen import (
    monomial_of_shape,
    pool_decls,
    random_coeff,
    random_contraction,
    random_polynomial,
    random_renaming,
)
from tenscanon import (
    Canonicalizer,
    Oracle,
    Polynomial,
    parse_declarations,
    parse_polynomial,
)
from tenscanon.core import ElementarySymbol, Monomial, Signature, monomial_signature
from tenscanon.errors import ResourceError
from tenscanon.group import (
    IndexPermutation,
    minimize_signature,
    orbit_of_signature,
    stabilizer,
)
from tenscanon.mgraph import are_independent, certificate
from tenscanon.relspace import SpaceCache, apply_slots, build_signature_space


def report(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def rd():
    return parse_declarations(RIEMANN_TD)


def fresh():
    return Canonicalizer(SpaceCache())


def test_1_riemann_basis(rd):
    t0 = time.perf_counter()
    sig = Signature(rd["Ri"], [rd.free(str(k)) for k in (1, 2, 3, 4)])
    basis = [str(s) for s in build_signature_space(sig, rd).canonical_basis]
    dt = time.perf_counter() - t0
    ok = basis == ["Ri(1,2,3,4)", "Ri(1,3,2,4)"] and dt < 1.0
    report(1, ok, f"canonical basis {basis} in {dt:.3f} s (limit 1 s)")


def test_2_bianchi_vanishing(rd):
    t0 = time.perf_counter()
    form = fresh().canonicalize(parse_polynomial("Ri(i,j,k,l) + Ri(i,l,j,k) + Ri(i,k,l,j)", rd))
    dt = time.perf_counter() - t0
    report(2, form.is_zero() and dt < 1.0, f"canonical form '{form}' in {dt:.3f} s (limit 1 s)")


def test_3_delta_projection(rd):
    rng = random.Random(2024)
    pairs = [(Fraction(3, 4), Fraction(-3, 4)), (Fraction(-2), Fraction(2))]
    while len(pairs) < 20:
        pairs.append((Fraction(rng.randint(-9, 9), rng.randint(1, 7)), Fraction(rng.randint(-9, 9), rng.randint(1, 7))))
    (gij,) = parse_polynomial("g(i,j)", rd).monomials()
    (gji,) = parse_polynomial("g(j,i)", rd).monomials()
    oracle, engine = Oracle(), fresh()
    bad = 0
    for a, b in pairs:
        t = Polynomial.from_monomial(gij, a) + Polynomial.from_monomial(gji, b)
        expect = Polynomial.from_monomial(gij, a + b)
        o = oracle.canonical(t)
        k = engine.canonicalize(t).polynomial
        if o != expect or k != o:
            bad += 1
        if a == -b and not (o.is_zero() and k.is_zero()):
            bad += 1
    report(3, bad == 0, f"{len(pairs)} (alpha, beta) pairs, {bad} mismatches, alpha=-beta cases vanish")


RICCI_FAMILY = [
    ("Ric(a,b)*T(a,b)", "Ric(b,a)*T(a,b)"),
    ("Ric(a,b)*A(a,c)*T(b,c)", "Ric(b,a)*A(a,c)*T(b,c)"),
    ("Ric(a,b)*Ri(a,c,b,d)*g(c,d)", "Ric(b,a)*Ri(a,c,b,d)*g(c,d)"),
    ("Ric(a,b)*g(a,i)*g(b,j)", "Ric(b,a)*g(a,i)*g(b,j)"),
    ("Ric(a,b)*Ric(a,c)*T(b,c)", "Ric(b,a)*Ric(a,c)*T(b,c)"),
    ("Ric(a,b)*V(a)*V(b)", "Ric(b,a)*V(a)*V(b)"),
    ("Ric(a,b)*Ri(i,a,j,b)", "Ric(b,a)*Ri(i,a,j,b)"),
    ("Ric(a,b)*T(a,i)*T(j,b)", "Ric(b,a)*T(a,i)*T(j,b)"),
    ("Ric(i,j)*V(k)", "Ric(j,i)*V(k)"),
    ("Ric(a,b)*Ri(a,i,j,k)*T(b,l)", "Ric(b,a)*Ri(a,i,j,k)*T(b,l)"),
]


def test_4_dummy_renaming_invariance(rd):
    engine = fresh()
    verdicts = [engine.equal_mod_relations(parse_polynomial(x, rd), parse_polynomial(y, rd)) for x, y in RICCI_FAMILY]
    report(4, all(verdicts) and len(verdicts) == 10, f"{sum(verdicts)}/{len(verdicts)} Ricci contractions equal")


def test_5_quadratic_riemann(rd):
    # relation first established on the oracle's full Riemann-pair space
    t0 = time.perf_counter()
    engine = fresh()
    lhs = engine.canonicalize(parse_polynomial("Ri(a,b,c,d)*Ri(a,c,b,d)", rd)).polynomial
    rhs = engine.canonicalize(parse_polynomial("Ri(a,b,c,d)*Ri(a,b,c,d)", rd)).polynomial.scale(Fraction(1, 2))
    dt = time.perf_counter() - t0
    report(5, lhs == rhs and not lhs.is_zero() and dt < 5.0, f"kappa(RR') = {lhs}, 1/2 kappa(RR) = {rhs}, {dt:.3f} s (limit 5 s)")


# ------------------------------------------------------------ criterion 6


def _disguise(rng, p, decls):
    """An expression equal to ``p`` modulo relations but written differently."""
    acc = Polynomial()
    for m, c in p.items():
        m = m.rename(random_renaming(rng, m).mapping)
        factors = list(m.factors)
        k = rng.randrange(len(factors))
        e = factors[k]
        coeff = c
        if e.type.symmetries:
            perm, sign = rng.choice(e.type.symmetries)
            factors[k] = e.with_indices(apply_slots(perm, e.indices))
            coeff = c * sign
        acc = acc + Polynomial.from_monomial(Monomial(factors), coeff)
        if e.type.identities:
            # add a multiple of a multi-term identity, which is zero
            ident = rng.choice(e.type.identities)
            lam = random_coeff(rng) or 1
            for w, perm in ident:
                fs = factors[:k] + [e.with_indices(apply_slots(perm, e.indices))] + factors[k + 1 :]
                acc = acc + Polynomial.from_monomial(Monomial(fs), lam * w)
    return acc


def test_6_oracle_equivalence_sweep():
    decls = pool_decls()
    rng = random.Random(6)
    t0 = time.perf_counter()
    families, polys = [], []
    while len(polys) < 200:
        shape = None
        fam = []
        for _ in range(5):
            p, shape = random_polynomial(rng, decls, shape)
            fam.append(p)
        families.append(fam)
        polys.extend(fam)
    pairs = [pair for fam in families for pair in itertools.combinations(fam, 2)]
    pairs += [(p, _disguise(rng, p, decls)) for p in polys]
    engine, oracle = fresh(), Oracle()
    agree = equal = 0
    for p, q in pairs:
        a = engine.equal_mod_relations(p, q)
        b = oracle.equal(p, q)
        agree += a == b
        equal += b
    dt = time.perf_counter() - t0
    ok = agree == len(pairs) and len(pairs) >= 500 and dt < 600
    report(6, ok, f"{len(polys)} polynomials, {agree}/{len(pairs)} pairs agree ({equal} equal), {dt:.1f} s (limit 600 s)")


# ------------------------------------------------------------ criterion 7


def test_7_property_suite():
    decls = pool_decls()
    rng = random.Random(7)
    engine = fresh()
    n = 100
    counts = {}

    def polys():
        return [random_polynomial(rng, decls)[0] for _ in range(n)]

    ok = 0
    for p in polys():
        q, _ = random_polynomial(rng, decls)
        a, b = random_coeff(rng), random_coeff(rng)
        k = engine.canonicalize
        ok += k(p.scale(a) + q.scale(b)).polynomial == k(p).polynomial.scale(a) + k(q).polynomial.scale(b)
    counts["linearity"] = ok

    ok = 0
    for p in polys():
        cp = engine.canonicalize(p).polynomial
        ok += engine.canonicalize(cp).polynomial == cp
    counts["idempotence"] = ok

    ok = 0
    for p in polys():
        image = Polynomial()
        for m, c in p.items():
            image = image + Polynomial.from_monomial(m.rename(random_renaming(rng, m).mapping), c)
        ok += engine.canonicalize(image) == engine.canonicalize(p)
    counts["renaming invariance"] = ok

    ok = total = 0
    while total < n:
        m = random_contraction(rng, decls, factors=rng.randint(2, 3), max_dummies=rng.randint(1, 4))
        if not m.dummies:
            continue
        total += 1
        sig_min, _, stab = minimize_signature(monomial_signature(m))
        ds = m.dummies
        results = set()
        for images in itertools.permutations(ds):
            w = IndexPermutation.from_images(ds, images)
            if tuple(sorted(s.rename(w.mapping) for s in monomial_signature(m))) == sig_min:
                results.add(engine._orbit_average(m.rename(w.mapping), stab))
        ok += len(results) == 1
    counts["witness independence"] = ok

    ok = 0
    for _ in range(n):
        m = random_contraction(rng, decls, factors=rng.randint(2, 4), max_dummies=rng.randint(1, 6))
        sig = monomial_signature(m)
        ok += len(orbit_of_signature(sig)) * stabilizer(sig).order == math.factorial(len(m.dummies))
    counts["orbit-stabilizer"] = ok

    ok = 0
    for _ in range(n):
        m = random_contraction(rng, decls, factors=rng.randint(2, 4), max_dummies=rng.randint(1, 6))
        fs = list(m.rename(random_renaming(rng, m).mapping).factors)
        rng.shuffle(fs)
        ok += certificate(Monomial(fs)) == certificate(m)
    counts["certificate invariance"] = ok

    detail = ", ".join(f"{k} {v}/{n}" for k, v in counts.items())
    report(7, all(v == n for v in counts.values()), detail)


def test_8_cyclic_riemann(rd):
    p = parse_polynomial("Ri(a,b,c,d)*Ri(c,d,e,f)*Ri(e,f,g,h)*Ri(g,h,a,b)", rd)
    t0 = time.perf_counter()
    form = fresh().canonicalize(p)
    dt = time.perf_counter() - t0
    limit = math.factorial(8) / 100
    ok = dt < 10 and form.stats.nodes < limit and not form.is_zero()
    report(
        8,
        ok,
        f"{dt:.3f} s (limit 10 s), {form.stats.nodes} search nodes (limit {limit:.0f} = 1% of 8!), "
        f"stabilizer order {form.stats.stabilizer_order}",
    )


def test_9_independence_soundness():
    decls = pool_decls()
    rng = random.Random(9)
    oracle = Oracle()
    flagged = confirmed = same_orbit = 0
    attempts = 0
    while flagged < 50 and attempts < 5000:
        attempts += 1
        if rng.random() < 0.7:
            # same signature: permute the slots of one factor
            m1 = random_contraction(rng, decls, factors=2, max_dummies=rng.randint(1, 3))
            fs = list(m1.factors)
            k = rng.randrange(len(fs))
            idx = list(fs[k].indices)
            rng.shuffle(idx)
            fs[k] = ElementarySymbol(fs[k].type, idx)
            m2 = Monomial(fs)
        else:
            _, shape = random_polynomial(rng, decls)
            m1, m2 = monomial_of_shape(rng, decls, shape), monomial_of_shape(rng, decls, shape)
        if not are_independent(m1, m2):
            continue
        try:
            verdict = oracle.independent(m1, m2)
            shared = oracle.space_for(m1) is oracle.space_for(m2)
        except ResourceError:
            continue
        flagged += 1
        confirmed += verdict
        same_orbit += shared
    ok = flagged == 50 and confirmed == flagged
    report(9, ok, f"{flagged} pairs flagged independent ({same_orbit} in a shared oracle space), {flagged - confirmed} false verdicts")
