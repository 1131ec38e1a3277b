"""Command line: verify, product, btransform and catalog.

Exit codes: 0 when the input is a valid structure and its classification was
computed, 1 when an axiom (or the closedness of B) fails, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..catalog import UnknownEntryError, catalog_get, catalog_list
from ..constructions import ClassicalACM, cokahler_triple, product_J1, product_J2
from ..frame import FrameContext, exterior_derivative, product_context
from ..structures import AxiomError, GenContactMetric, bfield, classify_contact, e_bracket
from .document import Document, DocumentError, dumps, load, parse_two_form
from .report import analyze, render_text

__all__ = ["main", "build_parser", "entry_document"]

EXIT_OK, EXIT_AXIOM, EXIT_MALFORMED = 0, 1, 2


class _Malformed(Exception):
    pass


def entry_document(entry_id: str) -> Document:
    e = catalog_get(entry_id)
    return Document(e.kind, e.payload, e.id)


def _emit(report: dict, fmt: str):
    if fmt == "json":
        print(json.dumps(report, indent=2, ensure_ascii=False))
    else:
        print(render_text(report))


def _load(path: str) -> Document:
    try:
        return load(path)
    except DocumentError as e:
        raise _Malformed(f"{path}: {e}") from None


def _check_twist(frame: FrameContext, twisted: bool | None):
    if twisted and frame.H is None:
        raise _Malformed("--twisted given but the frame carries no H")


def cmd_verify(args) -> int:
    doc = _load(args.path)
    _check_twist(doc.frame, args.twisted)
    report = analyze(doc.kind, doc.payload, args.twisted, doc.id or Path(args.path).stem)
    _emit(report, args.format)
    return EXIT_OK if report["valid"] else EXIT_AXIOM


def _as_metric(doc: Document, path: str) -> GenContactMetric:
    if doc.kind == "gacm":
        return doc.payload
    if doc.kind == "classical_acm":
        return cokahler_triple(doc.payload)
    raise _Malformed(f"{path}: product needs a gacm or classical_acm document, got {doc.kind}")


def _factor_conditions(t: GenContactMetric, use_H) -> dict:
    return {
        "strong": classify_contact(t.base, use_H).strong,
        "e_bracket_zero": e_bracket(t.base, use_H).is_zero(),
        "gphi_strong": classify_contact(t.gphi, use_H).strong,
    }


def cmd_product(args) -> int:
    docs = [_load(p) for p in (args.first, args.second)]
    ts = [_as_metric(d, p) for d, p in zip(docs, (args.first, args.second))]
    for t, p in zip(ts, (args.first, args.second)):
        try:
            t.require()
        except AxiomError as e:
            print(f"{p}: {e}", file=sys.stderr)
            return EXIT_AXIOM
    pc = product_context(ts[0].frame, ts[1].frame)
    _check_twist(pc.frame, args.twisted)
    J1 = product_J1(ts[0].base, ts[1].base, pc)
    J2, _ = product_J2(ts[0], ts[1], pc)
    names = [d.id or Path(p).stem for d, p in zip(docs, (args.first, args.second))]
    report = analyze("gcx_pair", (J1, J2), args.twisted, " x ".join(names))
    # each factor is judged with its own H unless twisting is switched off
    factor_H = False if args.twisted is False else None
    report["factors"] = {n: _factor_conditions(t, factor_H) for n, t in zip(names, ts)}
    if args.out:
        Path(args.out).write_text(dumps(Document("gcx_pair", (J1, J2), report["input"])), encoding="utf-8")
    _emit(report, args.format)
    return EXIT_OK if report["valid"] else EXIT_AXIOM


def cmd_btransform(args) -> int:
    doc = _load(args.path)
    try:
        raw = json.loads(Path(args.bform).read_text(encoding="utf-8"))
        B = parse_two_form(raw, doc.frame.dim)
    except (OSError, json.JSONDecodeError, DocumentError, ValueError) as e:
        raise _Malformed(f"{args.bform}: {e}") from None
    dB = exterior_derivative(doc.frame, B)
    if not dB.is_zero():
        print(f"B is not closed: dB = {dB!r}", file=sys.stderr)
        return EXIT_AXIOM
    payload, kind = doc.payload, doc.kind
    if isinstance(payload, ClassicalACM):
        # a B-transform leaves the classical world; carry the generalized triple
        payload, kind = cokahler_triple(payload), "gacm"
    out = Document(kind, bfield(B, payload), doc.id)
    text = dumps(out)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.action == "list":
        entries = catalog_list()
        if args.format == "json":
            print(json.dumps([{"id": i, "description": d} for i, d in entries], indent=2, ensure_ascii=False))
        else:
            width = max(len(i) for i, _ in entries)
            for i, d in entries:
                print(f"{i:<{width}}  {d}")
        return EXIT_OK
    if not args.id:
        raise _Malformed("catalog emit needs an entry id")
    try:
        text = dumps(entry_document(args.id))
    except UnknownEntryError:
        raise _Malformed(f"unknown catalog entry {args.id!r}") from None
    if args.path:
        Path(args.path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument(
        "--twisted",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="force (or with --no-twisted forbid) the H-twisted bracket; default follows the frame",
    )
    ap = argparse.ArgumentParser(prog="gencok", description="Exact checks for generalized contact and coKähler structures.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check axioms and classify a structure document")
    p.add_argument("path")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("product", parents=[common], help="build (J1, J2) on the product of two metric structures")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--out", help="write the product as a gcx_pair document")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("btransform", parents=[common], help="apply a closed B-field to a structure document")
    p.add_argument("path")
    p.add_argument("bform", help='JSON list of 2-form terms [{"i": 1, "j": 2, "c": "1"}]')
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_btransform)

    p = sub.add_parser("catalog", parents=[common], help="list or emit built-in structures")
    p.add_argument("action", choices=("list", "emit"))
    p.add_argument("id", nargs="?")
    p.add_argument("path", nargs="?", help="output path for emit (default: stdout)")
    p.set_defaults(func=cmd_catalog)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_MALFORMED if e.code else EXIT_OK
    try:
        return args.func(args)
    except _Malformed as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MALFORMED
