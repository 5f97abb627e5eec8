"""
Monomial graphs
===============

Factors become vertices, summation indices become edges.  Monomials with
different certificates can never be related.
"""

from pathlib import Path

from tenscanon import Oracle, parse_declarations, parse_polynomial
from tenscanon.mgraph import are_independent, build_graph, canonical_label

decls = parse_declarations((Path(__file__).parent / "data" / "riemann.td").read_text())


def mono(text):
    (m,) = parse_polynomial(text, decls).monomials()
    return m


for text in ["T(x,y)*T(x,y)", "T(x,y)*T(y,x)", "T(p,q)*T(q,p)", "Ri(a,b,x,y)*Ri(x,y,c,e)"]:
    lab = canonical_label(build_graph(mono(text)))
    print(f"{text:28s} {lab.certificate_string}")

# %%
oracle = Oracle()
pairs = [("T(x,y)*T(x,y)", "T(x,y)*T(y,x)"), ("T(x,y)*T(y,x)", "T(p,q)*T(q,p)")]
for a, b in pairs:
    print(a, "vs", b, "independent:", are_independent(mono(a), mono(b)), "oracle:", oracle.independent(mono(a), mono(b)))
