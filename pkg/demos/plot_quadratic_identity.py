"""
A quadratic Riemann identity
============================

Two full contractions of a pair of Riemann tensors differ by a factor of
two.  The fast canonicalizer and the brute-force oracle agree.
"""

import time
from fractions import Fraction
from pathlib import Path

from tenscanon import Canonicalizer, Oracle, parse_declarations, parse_polynomial

decls = parse_declarations((Path(__file__).parent / "data" / "riemann.td").read_text())
engine = Canonicalizer()

rr = parse_polynomial("Ri(a,b,c,d)*Ri(a,b,c,d)", decls)
rr_cross = parse_polynomial("Ri(a,b,c,d)*Ri(a,c,b,d)", decls)

t0 = time.perf_counter()
k1 = engine.canonicalize(rr)
k2 = engine.canonicalize(rr_cross)
print(f"kappa(RR)  = {k1}")
print(f"kappa(RR') = {k2}")
print("RR' == RR/2:", k2.polynomial == k1.polynomial.scale(Fraction(1, 2)))
print(f"fast path: {1000 * (time.perf_counter() - t0):.1f} ms")

# %%
# The oracle builds the whole space of ordered products and row reduces it.
t0 = time.perf_counter()
oracle = Oracle()
print("oracle agrees:", oracle.equal(rr_cross, parse_polynomial("1/2*Ri(a,b,c,d)*Ri(a,b,c,d)", decls)))
space = oracle.space_for(rr.monomials()[0])
print(f"oracle space: {space.dimension} products, {space.relation_rank} independent relations")
print(f"oracle: {time.perf_counter() - t0:.2f} s")
