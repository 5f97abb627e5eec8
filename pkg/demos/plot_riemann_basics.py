"""
Riemann symmetries and the Bianchi identity
===========================================

Declare the Riemann tensor, look at the canonical basis of one signature
and watch the cyclic identity vanish.
"""

from pathlib import Path

from tenscanon import Canonicalizer, Monomial, Polynomial, parse_declarations, parse_polynomial
from tenscanon.core import Signature
from tenscanon.relspace import build_signature_space

here = Path(__file__).parent
decls = parse_declarations((here / "data" / "riemann.td").read_text())
engine = Canonicalizer()

# %%
# Of the 24 arrangements of Ri(1,2,3,4) only two survive the relations.
sig = Signature(decls["Ri"], [decls.free(k) for k in "1234"])
space = build_signature_space(sig)
print("symbols:", len(space.symbols), "relations:", space.relation_rank)
print("basis:", [str(s) for s in space.canonical_basis])

# every other arrangement is rewritten over that basis
for e in space.symbols[:6]:
    comb = Polynomial({Monomial([b]): c for b, c in space.rewrite_table[e].items()})
    print(f"  {e} -> {comb}")

# %%
# The cyclic sum is zero.
p = parse_polynomial("Ri(i,j,k,l) + Ri(i,l,j,k) + Ri(i,k,l,j)", decls)
print(p, "=", engine.canonicalize(p))

# %%
# Pair antisymmetry flips signs, pair exchange permutes.
for text in ["Ri(j,i,k,l)", "Ri(k,l,i,j)", "Ri(i,l,j,k)"]:
    print(text, "=", engine.canonicalize(parse_polynomial(text, decls)))
