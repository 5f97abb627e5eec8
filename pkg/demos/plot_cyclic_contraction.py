"""
A four-factor cyclic contraction
================================

Eight summation indices give 8! = 40320 renamings.  The search for the
minimal signature only walks a small part of that tree.
"""

import math
import time
from pathlib import Path

from tenscanon import Canonicalizer, parse_declarations, parse_polynomial
from tenscanon.group import orbit_of_signature
from tenscanon.core import monomial_signature

decls = parse_declarations((Path(__file__).parent / "data" / "riemann.td").read_text())
p = parse_polynomial("Ri(a,b,c,d)*Ri(c,d,e,f)*Ri(e,f,g,h)*Ri(g,h,a,b)", decls)

t0 = time.perf_counter()
form = Canonicalizer().canonicalize(p)
dt = time.perf_counter() - t0

print("input:    ", p)
print("canonical:", form)
print(f"time {1000 * dt:.1f} ms, nodes {form.stats.nodes}, |Stab| {form.stats.stabilizer_order}")

orbit = orbit_of_signature(monomial_signature(p.monomials()[0]))
print(f"|orbit| * |Stab| = {len(orbit)} * {form.stats.stabilizer_order} = {len(orbit) * form.stats.stabilizer_order}")
print("8! =", math.factorial(8))
