"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 resource cap exceeded,
3 disagreement with the brute-force oracle (only with ``--oracle-check``).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from pathlib import Path

from .canon import Canonicalizer
from .core import Signature, format_coefficient
from .errors import ResourceError, TensCanonError
from .group import default_max_nodes
from .mgraph import build_graph, canonical_label
from .oracle import Oracle
from .parser import parse_declarations, parse_polynomial
from .relspace import SpaceCache, build_signature_space

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE, EXIT_ORACLE = 0, 1, 2, 3


class _Disagreement(Exception):
    pass


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--decls", required=True, help="declaration file (.td)")
    common.add_argument("--format", choices=("text", "json"), default=None)
    common.add_argument("--max-orbit", type=_positive, default=None, help="search node cap")
    common.add_argument("--oracle-check", action="store_true", help="cross-check with the brute-force oracle")
    common.add_argument("--timing", action="store_true", help="report wall-clock time")

    ap = argparse.ArgumentParser(prog="tenscanon", description="Canonical forms of tensor polynomials.")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("canon", parents=[common], help="canonicalize polynomial files")
    p.add_argument("inputs", nargs="+", help="polynomial files (.tp)")
    p = sub.add_parser("equal", parents=[common], help="test two polynomials for equality")
    p.add_argument("left")
    p.add_argument("right")
    p = sub.add_parser("basis", parents=[common], help="dump the relation space of a tensor type")
    p.add_argument("--type", required=True, dest="type_name")
    p.add_argument("--indices", default=None, help="comma-separated index names (default 1..arity)")
    p = sub.add_parser("graph", parents=[common], help="dump monomial graphs and certificates")
    p.add_argument("inputs", nargs="+")
    return ap


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise TensCanonError(f"cannot read {path}: {exc.strerror}") from None


_FLAT = re.compile(r"\[\s*((?:\"[^\"]*\"|[-\d.]+)(?:,\s*(?:\"[^\"]*\"|[-\d.]+))*)\s*\]")


def _dumps(doc) -> str:
    """Indented JSON with arrays of scalars kept on one line."""
    text = json.dumps(doc, indent=2)
    return _FLAT.sub(lambda m: "[" + re.sub(r",\s+", ", ", m.group(1)) + "]", text) + "\n"


def _terms_json(poly):
    return [{"coeff": format_coefficient(c), "factors": [str(f) for f in m.factors]} for m, c in poly.items()]


def _canon(args, decls, out, err):
    docs, lines, pairs = [], [], []
    for path in args.inputs:
        engine = Canonicalizer(SpaceCache(), max_nodes=args.max_orbit)
        p = parse_polynomial(_read(path), decls, source=path)
        t0 = time.perf_counter()
        form = engine.canonicalize(p)
        millis = (time.perf_counter() - t0) * 1000
        pairs.append((path, p, form.polynomial))
        doc = {
            "input": str(p),
            "canonical": _terms_json(form.polynomial),
            "stats": {"orbit": form.stats.nodes, "stabilizer": form.stats.stabilizer_order},
        }
        if args.timing:
            doc["stats"]["millis"] = round(millis, 3)
        docs.append(doc)
        text = str(form)
        lines.append(f"{path}: {text}" if len(args.inputs) > 1 else text)
        if args.timing and args.format != "json":
            print(f"{path}: {millis:.3f} ms", file=err)
    if args.format == "json":
        out.write(_dumps(docs[0] if len(docs) == 1 else docs))
    else:
        out.write("\n".join(lines) + "\n")
    if args.oracle_check:
        oracle = Oracle()
        for path, p, canonical in pairs:
            if not oracle.equal(p, canonical):
                raise _Disagreement(f"{path}: canonical form is not congruent to the input")


def _equal(args, decls, out, err):
    engine = Canonicalizer(SpaceCache(), max_nodes=args.max_orbit)
    p = parse_polynomial(_read(args.left), decls, source=args.left)
    q = parse_polynomial(_read(args.right), decls, source=args.right)
    t0 = time.perf_counter()
    verdict = engine.equal_mod_relations(p, q)
    millis = (time.perf_counter() - t0) * 1000
    if args.format == "json":
        doc = {"left": str(p), "right": str(q), "equal": verdict}
        if args.timing:
            doc["millis"] = round(millis, 3)
        out.write(_dumps(doc))
    else:
        out.write(("equal" if verdict else "not equal") + "\n")
        if args.timing:
            print(f"{millis:.3f} ms", file=err)
    if args.oracle_check and Oracle().equal(p, q) != verdict:
        raise _Disagreement("oracle disagrees with the equality verdict")


def _basis(args, decls, out, err):
    t = decls.types.get(args.type_name)
    if t is None:
        raise TensCanonError(f"unknown tensor {args.type_name!r}")
    names = args.indices.split(",") if args.indices else [str(k + 1) for k in range(t.arity)]
    names = [n.strip() for n in names]
    if len(names) != t.arity:
        raise TensCanonError(f"{t.name} takes {t.arity} indices, got {len(names)}")
    sig = Signature(t, sorted(decls.free(n) for n in names))
    space = build_signature_space(sig, decls)
    if args.format == "text":
        out.write("\n".join(str(s) for s in space.canonical_basis) + "\n")
    else:
        out.write(_dumps(space.to_json()))


def _graph(args, decls, out, err):
    docs, lines = [], []
    for path in args.inputs:
        engine = Canonicalizer(SpaceCache(), max_nodes=args.max_orbit)
        p = parse_polynomial(_read(path), decls, source=path)
        graphs = []
        for m, c in engine.reduce_polynomial(p).items():
            g = build_graph(m, engine)
            lab = canonical_label(g, max_nodes=args.max_orbit)
            entry = {"monomial": str(m), "coeff": format_coefficient(c)}
            entry.update(g.to_json())
            entry["certificate"] = lab.certificate_string
            graphs.append(entry)
            lines.append(f"{m}\t{lab.certificate_string}")
        docs.append({"input": str(p), "graphs": graphs})
    if args.format == "json":
        out.write(_dumps(docs[0] if len(docs) == 1 else docs))
    else:
        out.write("\n".join(lines) + "\n")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.max_orbit is None:
            args.max_orbit = default_max_nodes()
        decls = parse_declarations(_read(args.decls), source=args.decls)
        handler = {"canon": _canon, "equal": _equal, "basis": _basis, "graph": _graph}[args.command]
        handler(args, decls, stdout, stderr)
    except ResourceError as exc:
        print(f"tenscanon: resource limit: {exc}", file=stderr)
        return EXIT_RESOURCE
    except _Disagreement as exc:
        print(f"tenscanon: oracle check failed: {exc}", file=stderr)
        return EXIT_ORACLE
    except TensCanonError as exc:
        print(f"tenscanon: error: {exc}", file=stderr)
        return EXIT_INPUT
    return EXIT_OK


def main():
    sys.exit(run())
