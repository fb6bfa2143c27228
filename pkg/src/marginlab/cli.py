"""Command-line front end.

Subcommands: ``analyze`` (full consistency report), ``bayes`` (exact
Bayes-risk queries with verified witnesses), ``vertices`` (exact vertex
dumps), ``plotdata`` (barycentric geometry for three outputs), and
``corpus`` (built-in losses).  Output is deterministic; exit status
reports tool success only, never verdicts.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .consistency import ReportConfig, build_report
from .corpus import corpus_description, corpus_loss, corpus_names
from .documents import (
    LossDocument,
    ParseError,
    geometry_document_json,
    loss_document_json,
    parse_loss_document,
    parse_rational_literal,
    report_document_json,
)
from .errors import PreconditionError, ResourceCapError, StructuralError
from .linalg import dot
from .losses import as_simplex_point
from .polytopes import (
    TRANSPORT_ENUM_CAP,
    active_sets,
    enumerate_vertices,
    epigraph_polytope,
    prediction_set,
    transportation_polytope,
)
from .rationals import rational_str
from .risks import (
    bayes_risk_l,
    bayes_risk_m,
    bayes_risk_m_dual,
    bayes_risk_mm,
    bayes_risk_rm,
    conjugate_neg_hm,
    frobenius,
    in_restriction_cone,
    in_transport_polytope,
)


def _load_document(args) -> LossDocument:
    if args.corpus is not None:
        return LossDocument(name=args.corpus, loss=corpus_loss(args.corpus))
    text = Path(args.input).read_text()
    return parse_loss_document(text)


def _add_input_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--input", help="path to a loss document (JSON)")
    group.add_argument("--corpus", help="name of a built-in loss", choices=corpus_names())


def _parse_vector(text: str):
    try:
        return tuple(parse_rational_literal(tok.strip()) for tok in text.split(","))
    except ParseError as exc:
        raise ParseError(f"invalid rational vector {text!r}: {exc}") from exc


def _fmt_point(q) -> str:
    return "(" + ", ".join(rational_str(x) for x in q) + ")"


def _fmt_matrix(rows) -> str:
    return "; ".join(_fmt_point(row) for row in rows)


def _cmd_analyze(args) -> int:
    doc = _load_document(args)
    config = ReportConfig(output_cap=args.cap, grid_n=args.grid, seed=args.seed)
    report = build_report(doc.loss, config)
    out = sys.stdout
    print(f"loss: {doc.name} (k={report.k})", file=out)
    print(
        f"symmetric: {'yes' if report.symmetric else 'no'}"
        f"    distance: {'yes' if report.distance.is_distance else 'no'}",
        file=out,
    )
    nec = report.necessary
    if nec is None:
        print("necessary condition: not applicable (asymmetric loss)", file=out)
    elif nec.holds:
        suffix = " (vacuous: two outputs)" if nec.vacuous else ""
        print(f"necessary condition: holds{suffix}", file=out)
    else:
        triple = ",".join(str(y + 1) for y in nec.violating_triple)
        print(f"necessary condition: fails on triple ({triple})", file=out)
    tree = report.tree
    if tree.certified:
        edges = ", ".join(
            f"{u + 1}-{v + 1} ({rational_str(w)})" for u, v, w in tree.certificate.edges
        )
        print(f"tree certificate: certified; edges: {edges}", file=out)
    else:
        print(f"tree certificate: not certified ({tree.reason})", file=out)
    minima = ", ".join(rational_str(m) for m in report.rm_simple.minima)
    print(
        f"prediction-set positivity: {'holds' if report.rm_simple.holds else 'fails'};"
        f" minima: {minima}",
        file=out,
    )
    print(f"vertex disjunction: {report.a1.status}", file=out)
    dom = report.dominant
    if dom.applicable:
        state = "verified" if dom.verified else "FAILED"
        print(
            f"dominant-label identity: {state} on {dom.points_checked} points",
            file=out,
        )
    else:
        print("dominant-label identity: not applicable", file=out)
    checks = ", ".join(f"{k}={v}" for k, v in sorted(report.embedding.items()))
    print(f"embedding checks: {checks}", file=out)
    print("verdicts:", file=out)
    for name in ("max_margin", "restricted_max_margin", "max_min_margin"):
        verdict = report.verdicts[name]
        just = ", ".join(verdict.justification)
        print(f"  {name.replace('_', '-')}: {verdict.status}   [{just}]", file=out)
    if args.out:
        Path(args.out).write_text(
            report_document_json(report, doc, config, __version__)
        )
        print(f"report written to {args.out}", file=out)
    return 0


def _verify_bayes_witness(which, loss, q, value, witness) -> None:
    ok = False
    if which in ("L", "MM"):
        ok = isinstance(witness, int) and dot(loss.row(witness), q) == value
    elif which == "M":
        ok = in_transport_polytope(witness, q) and frobenius(loss.entries, witness) == value
    elif which == "RM":
        ok = (
            in_transport_polytope(witness, q)
            and in_restriction_cone(witness, loss)
            and frobenius(loss.entries, witness) == value
        )
    elif which == "M-dual":
        k = loss.k
        feasible = all(
            witness[y] + witness[z] >= 2 * loss.entries[y][z]
            for y in range(k)
            for z in range(y, k)
        )
        ok = feasible and dot(witness, q) == value
    elif which == "conj":
        best, pairs = witness
        ok = best == value and all(
            loss.entries[y][z] + (q[y] + q[z]) / 2 == value for y, z in pairs
        )
    if not ok:
        raise StructuralError("internal witness failed its verification check")


def _cmd_bayes(args) -> int:
    doc = _load_document(args)
    loss = doc.loss
    vector = _parse_vector(args.q)
    if len(vector) != loss.k:
        raise StructuralError(f"vector has length {len(vector)}, expected {loss.k}")
    which = args.which
    if which == "conj":
        value, pairs = conjugate_neg_hm(loss, vector)
        _verify_bayes_witness(which, loss, vector, value, (value, pairs))
        shown = ", ".join(f"({y + 1},{z + 1})" for y, z in pairs)
        print(f"conjugate value: {rational_str(value)}")
        print(f"maximizing pairs: {shown}")
        return 0
    q = as_simplex_point(vector)
    if which == "L":
        risk = bayes_risk_l(loss, q)
    elif which == "M":
        risk = bayes_risk_m(loss, q)
    elif which == "RM":
        risk = bayes_risk_rm(loss, q)
    elif which == "MM":
        risk = bayes_risk_mm(loss, q)
    else:
        risk = bayes_risk_m_dual(loss, q)
    _verify_bayes_witness(which, loss, q, risk.value, risk.witness)
    print(f"value: {rational_str(risk.value)}")
    if which in ("L", "MM"):
        print(f"witness output: {risk.witness + 1}")
    elif which in ("M", "RM"):
        print(f"witness plan: {_fmt_matrix(risk.witness)}")
    else:
        print(f"witness dual vector: {_fmt_point(risk.witness)}")
    return 0


def _cmd_vertices(args) -> int:
    doc = _load_document(args)
    loss = doc.loss
    cap = args.cap + 1
    target = args.target
    if target.startswith("pred-set:"):
        y = int(target.split(":", 1)[1]) - 1
        if not 0 <= y < loss.k:
            raise StructuralError(f"output index {y + 1} out of range")
        pred = prediction_set(loss, y)
        vertices = pred.vertices(cap=cap)
        print(f"prediction set of output {y + 1}: {len(vertices)} vertices")
        row_y = loss.row(y)
        for q in vertices:
            tight = tuple(
                z + 1
                for z in range(loss.k)
                if dot(loss.row(z), q) == dot(row_y, q)
            )
            zeros = tuple(z + 1 for z in range(loss.k) if q[z] == 0)
            print(f"  {_fmt_point(q)}  S={list(tight)} T={list(zeros)}")
    elif target == "epigraph":
        if loss.k > args.cap:
            raise ResourceCapError(
                f"epigraph enumeration for k={loss.k} exceeds the cap {args.cap}"
            )
        p = epigraph_polytope(loss)
        vertices = enumerate_vertices(p, cap=loss.k + 1)
        print(f"epigraph region: {len(vertices)} vertices")
        for x in vertices:
            sets = active_sets(p, x)
            print(
                f"  {_fmt_point(x)}  S={[y + 1 for y in sets.S]}"
                f" T={[y + 1 for y in sets.T]} vertex={sets.is_vertex}"
            )
    elif target == "transport":
        if args.q is None:
            raise StructuralError("--q is required for the transport target")
        q = as_simplex_point(_parse_vector(args.q))
        if len(q) != loss.k:
            raise StructuralError(f"vector has length {len(q)}, expected {loss.k}")
        if loss.k > TRANSPORT_ENUM_CAP or loss.k > args.cap:
            raise ResourceCapError(
                f"transport enumeration is capped at k={min(TRANSPORT_ENUM_CAP, args.cap)};"
                f" got k={loss.k}"
            )
        p = transportation_polytope(q)
        vertices = enumerate_vertices(p, cap=loss.k * loss.k)
        print(f"transport polytope at {_fmt_point(q)}: {len(vertices)} vertices")
        for flat in vertices:
            zeros = [
                (e // loss.k + 1, e % loss.k + 1) for e, x in enumerate(flat) if x == 0
            ]
            print(f"  {_fmt_point(flat)}  zero-pattern={zeros}")
    else:
        raise StructuralError(
            "target must be pred-set:N, epigraph, or transport"
        )
    return 0


def _cmd_plotdata(args) -> int:
    doc = _load_document(args)
    text = geometry_document_json(doc)
    if args.out:
        Path(args.out).write_text(text)
        print(f"geometry written to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_corpus(args) -> int:
    if args.name is not None:
        doc = LossDocument(name=args.name, loss=corpus_loss(args.name))
        sys.stdout.write(loss_document_json(doc))
        return 0
    print("built-in losses:")
    for name in corpus_names():
        loss = corpus_loss(name)
        print(f"  {name:16s} k={loss.k}  {corpus_description(name)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="marginlab",
        description="Exact consistency analysis of margin losses.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full consistency report")
    _add_input_flags(p)
    p.add_argument("--out", help="write the report document to this path")
    p.add_argument("--cap", type=int, default=10, help="vertex enumeration cap on k")
    p.add_argument("--grid", type=int, default=None, help="grid denominator (default 2k)")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled spot checks")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("bayes", help="exact Bayes-risk query")
    _add_input_flags(p)
    p.add_argument("--q", required=True, help="comma-separated exact rationals")
    p.add_argument(
        "--which",
        required=True,
        choices=["L", "M", "RM", "MM", "M-dual", "conj"],
        help="risk to evaluate (conj treats --q as a score vector)",
    )
    p.set_defaults(func=_cmd_bayes)

    p = sub.add_parser("vertices", help="exact vertex dump")
    _add_input_flags(p)
    p.add_argument("--target", required=True, help="pred-set:N | epigraph | transport")
    p.add_argument("--q", help="marginals for the transport target")
    p.add_argument("--cap", type=int, default=10, help="vertex enumeration cap on k")
    p.set_defaults(func=_cmd_vertices)

    p = sub.add_parser("plotdata", help="barycentric geometry document (k=3)")
    _add_input_flags(p)
    p.add_argument("--out", help="write the geometry document to this path")
    p.set_defaults(func=_cmd_plotdata)

    p = sub.add_parser("corpus", help="list built-in losses")
    p.add_argument("--name", choices=corpus_names(), help="dump one entry as a loss document")
    p.set_defaults(func=_cmd_corpus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, StructuralError, PreconditionError, ResourceCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
