"""Colored multigraphs of monomials and their canonical labeling.

A vertex per factor, colored by its type and the placement of its free
indices; an edge per summation index joining the two factors that carry it.
Each edge end is labelled with the slot it occupies, taken modulo the orbits
of the slot permutations that occur in the type's relations: relations only
ever move an index within such an orbit, so related monomials always have
isomorphic graphs.

Canonical labeling is individualization-refinement: refine vertex colors
until stable, branch on every vertex of the first non-singleton cell, and
keep the smallest encoding over all discrete leaves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Index, Monomial, TensorType
from .errors import ResourceError, UsageError
from .group import IndexPermutation, default_max_nodes

_slot_memo: dict = {}


def slot_classes(t: TensorType) -> tuple[int, ...]:
    """Smallest slot of each slot's orbit under the type's relation perms."""
    hit = _slot_memo.get(t)
    if hit is not None:
        return hit
    parent = list(range(t.arity))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for perm in t.relation_perms():
        for p, q in enumerate(perm):
            a, b = find(p), find(q)
            if a != b:
                parent[max(a, b)] = min(a, b)
    out = tuple(find(p) for p in range(t.arity))
    _slot_memo[t] = out
    return out


@dataclass
class ColoredMonomialGraph:
    colors: list  # per vertex: (type key, type name, ((slot class, free index), ...))
    edges: list  # (u, class at u, v, class at v, dummy, slot at u, slot at v)
    factors: tuple = field(default=(), repr=False)

    @property
    def n(self) -> int:
        return len(self.colors)

    def to_json(self) -> dict:
        return {
            "vertices": [
                {
                    "factor": str(f),
                    "type": c[1],
                    "free": [{"index": i.name, "slot_class": k + 1} for k, i in c[2]],
                }
                for f, c in zip(self.factors, self.colors)
            ],
            "edges": [
                {
                    "index": d.name,
                    "ends": [
                        {"vertex": u, "slot": su + 1, "slot_class": cu + 1},
                        {"vertex": v, "slot": sv + 1, "slot_class": cv + 1},
                    ],
                }
                for u, cu, v, cv, d, su, sv in self.edges
            ],
        }


@dataclass
class CanonicalLabeling:
    order: list[int]  # order[k] = vertex placed at position k
    certificate: tuple
    automorphisms: list[tuple[int, ...]]  # vertex permutations: v -> image
    nodes: int = 0

    @property
    def certificate_string(self) -> str:
        colors, edges = self.certificate
        vs = ";".join(f"{c[1]}[{','.join(f'{k + 1}:{i}' for k, i in c[2])}]" for c in colors)
        es = ";".join(f"{u}.{a + 1}-{v}.{b + 1}" for u, a, v, b in edges)
        return f"{vs}|{es}"


def build_graph(m: Monomial, canonicalizer=None) -> ColoredMonomialGraph:
    if canonicalizer is not None and not canonicalizer.is_reduced(m):
        raise UsageError(f"{m} has factors that are not canonical symbols")
    colors, ends = [], {}
    for v, f in enumerate(m.factors):
        cls = slot_classes(f.type)
        free = []
        for s, i in enumerate(f.indices):
            if i.is_dummy:
                ends.setdefault(i, []).append((v, s))
            else:
                free.append((cls[s], i))
        colors.append((f.type._key, f.type.name, tuple(sorted(free, key=lambda x: (x[0], x[1])))))
    edges = []
    for d in sorted(ends):
        pts = ends[d]
        if len(pts) != 2 or pts[0][0] == pts[1][0]:
            raise UsageError(f"summation index {d} does not join two distinct factors")
        (u, su), (v, sv) = pts
        cu, cv = slot_classes(m.factors[u].type)[su], slot_classes(m.factors[v].type)[sv]
        edges.append((u, cu, v, cv, d, su, sv))
    return ColoredMonomialGraph(colors, edges, m.factors)


def _ranks(values):
    distinct = sorted(set(values))
    r = {x: k for k, x in enumerate(distinct)}
    return [r[x] for x in values]


def _refine(col, adj):
    while True:
        sigs = [(col[u], tuple(sorted((a, b, col[v]) for a, b, v in adj[u]))) for u in range(len(col))]
        new = _ranks(sigs)
        if len(set(new)) == len(set(col)):
            return new
        col = new


def _encode(g: ColoredMonomialGraph, pos):
    inv = sorted(range(g.n), key=lambda v: pos[v])
    colors = tuple(g.colors[v] for v in inv)
    edges = []
    for u, a, v, b, *_ in g.edges:
        x, y = (pos[u], a), (pos[v], b)
        if y < x:
            x, y = y, x
        edges.append((x[0], x[1], y[0], y[1]))
    return colors, tuple(sorted(edges))


def canonical_label(g: ColoredMonomialGraph, max_nodes=None) -> CanonicalLabeling:
    cap = max_nodes or default_max_nodes()
    n = g.n
    adj = [[] for _ in range(n)]
    for u, a, v, b, *_ in g.edges:
        adj[u].append((a, b, v))
        adj[v].append((b, a, u))
    init = _ranks([(c[0], c[1], c[2]) for c in g.colors])
    best = {"cert": None, "pos": None, "autos": [], "nodes": 0}

    def search(col):
        best["nodes"] += 1
        if best["nodes"] > cap:
            raise ResourceError(f"canonical labeling exceeded {cap} nodes")
        col = _refine(col, adj)
        if len(set(col)) == n:
            cert = _encode(g, col)
            if best["cert"] is None or cert < best["cert"]:
                best["cert"], best["pos"], best["autos"] = cert, col, []
            elif cert == best["cert"]:
                # vertex at position k in this leaf maps to the best leaf's vertex at k
                inv_best = sorted(range(n), key=lambda v: best["pos"][v])
                best["autos"].append(tuple(inv_best[col[v]] for v in range(n)))
            return
        sizes = {}
        for c in col:
            sizes[c] = sizes.get(c, 0) + 1
        target = min(c for c, k in sizes.items() if k > 1)
        for v in range(n):
            if col[v] == target:
                search([2 * c + (0 if u == v else 1) for u, c in enumerate(col)])

    search(init)
    pos = best["pos"] or []
    order = sorted(range(n), key=lambda v: pos[v])
    return CanonicalLabeling(order, best["cert"], best["autos"], best["nodes"])


def certificate(m: Monomial, canonicalizer=None) -> tuple:
    return canonical_label(build_graph(m, canonicalizer)).certificate


def are_independent(m1: Monomial, m2: Monomial, canonicalizer=None) -> bool:
    """True when the graphs are non-isomorphic, which rules out any relation."""
    return certificate(m1, canonicalizer) != certificate(m2, canonicalizer)


def automorphism_renamings(g: ColoredMonomialGraph, labeling: CanonicalLabeling) -> list[IndexPermutation]:
    """Translate vertex automorphisms into renamings of the summation indices."""
    out = []
    for perm in labeling.automorphisms:
        pool: dict = {}
        for u, a, v, b, d, *_ in g.edges:
            pool.setdefault((u, a, v, b), []).append(d)
            pool.setdefault((v, b, u, a), []).append(d)
        used: set[Index] = set()
        mapping = {}
        for u, a, v, b, d, *_ in g.edges:
            key = (perm[u], a, perm[v], b)
            target = next(x for x in pool[key] if x not in used)
            used.add(target)
            mapping[d] = target
        out.append(IndexPermutation(mapping))
    return out
