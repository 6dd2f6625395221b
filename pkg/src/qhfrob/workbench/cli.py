"""Command-line driver: ``qhfrob <command> FILE... [--json out.json]``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..exactlin import FieldSpec
from .fileformat import PresentationFileError, load_presentation
from .report import SECTIONS, build_report

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

COMMANDS = {
    "check": ("check",),
    "integrals": ("integrals",),
    "frobenius": ("frobenius",),
    "radford": ("radford",),
    "separability": ("separability",),
    "extension": ("extension",),
    "report": SECTIONS,
}


def _field(tag: str) -> FieldSpec:
    try:
        return FieldSpec.from_tag(tag)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qhfrob", description="Exact checks for quasi-Hopf algebra presentations.")
    p.add_argument("command", choices=list(COMMANDS))
    p.add_argument("files", nargs="+", type=Path, help="presentation files (JSON)")
    p.add_argument("--json", dest="json_out", type=Path, help="write the machine-readable report here")
    p.add_argument("--field", type=_field, default=None, help="override the field: Q or Fp:<p>")
    p.add_argument("--sub", type=Path, default=None, help="file holding a subalgebra block for 'extension'")
    p.add_argument("-v", "--verbose", action="store_true", help="list passing checks too")
    return p


def _load_sub(path: Path, doc):
    """Attach the subalgebra block of ``path`` (a full presentation file or a
    bare {"subalgebra": ...} document) to ``doc``."""
    from dataclasses import replace

    from .fileformat import _Parser

    text = path.read_text(encoding="utf-8") if path.exists() else None
    if text is None:
        raise PresentationFileError("cannot read file", str(path))
    parser = _Parser(text, str(path), doc.presentation.field)
    block = parser.doc.get("subalgebra", parser.doc if "basis" in parser.doc else None)
    if block is None:
        raise PresentationFileError("no subalgebra block", str(path), 1)
    spec = parser.subalgebra(block, doc.presentation.dim)
    return replace(doc, subalgebra=spec)


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    sections = COMMANDS[args.command]
    docs = []
    try:
        for f in args.files:
            doc = load_presentation(f, args.field)
            if args.sub is not None:
                doc = _load_sub(args.sub, doc)
            if args.command == "extension" and doc.subalgebra is None:
                raise PresentationFileError("no subalgebra block; pass --sub FILE", str(f))
            docs.append(doc)
    except PresentationFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    reports = [build_report(d, sections) for d in docs]
    for r in reports:
        print(r.render(args.verbose))
    ok = all(r.passed for r in reports)
    print(f"overall: {'PASS' if ok else 'FAIL'}")
    if args.json_out is not None:
        payload = {"command": args.command, "passed": ok, "reports": [r.to_json() for r in reports]}
        args.json_out.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return EXIT_PASS if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
