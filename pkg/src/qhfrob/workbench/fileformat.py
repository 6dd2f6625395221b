"""JSON presentation files.

Tensors are stored sparsely as ``[i, j, k, "num/den"]`` entries (residues
as ``"p<r>"``), one entry per line in canonical output so that
``serialize(parse(text)) == text`` for canonical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from ..core import AlgebraPresentation, QuasiBialgebraPresentation, QuasiHopfPresentation
from ..exactlin import FieldSpec

__all__ = [
    "FORMAT_TAG",
    "PresentationFileError",
    "SubalgebraSpec",
    "PresentationFile",
    "parse_presentation",
    "load_presentation",
    "serialize_presentation",
    "dump_presentation",
    "presentation_file",
]

FORMAT_TAG = "qhfrob-presentation/1"

_TENSOR_KEYS = ("mult", "delta", "phi", "phi_inv")
_KEY_ORDER = (
    "format", "name", "provenance", "field", "dimension", "basis",
    "mult", "unit", "delta", "epsilon", "phi", "phi_inv", "antipode", "alpha", "beta",
    "subalgebra",
)
_SUB_ORDER = ("name", "basis", "phi", "phi_inv", "alpha", "beta")


class PresentationFileError(ValueError):
    def __init__(self, message: str, source: str = "<string>", line: int | None = None):
        self.source = source
        self.line = line
        self.message = message
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True, eq=False)
class SubalgebraSpec:
    """K inside H: basis rows in H coordinates; optional K-coordinate data."""

    basis: np.ndarray
    phi: np.ndarray | None = None
    phi_inv: np.ndarray | None = None
    alpha: np.ndarray | None = None
    beta: np.ndarray | None = None
    name: str = ""


@dataclass(frozen=True, eq=False)
class PresentationFile:
    presentation: QuasiHopfPresentation
    name: str = ""
    provenance: str = ""
    labels: tuple[str, ...] | None = None
    subalgebra: SubalgebraSpec | None = None
    source: str = "<string>"


def presentation_file(h: QuasiHopfPresentation, provenance: str = "", subalgebra: SubalgebraSpec | None = None):
    return PresentationFile(h, h.name, provenance, h.alg.labels, subalgebra)


# ---------------------------------------------------------------- parsing


class _Locator:
    """Maps (key path, entry index) to a line number in the source text."""

    def __init__(self, text: str):
        self.text = text
        self.dec = json.JSONDecoder()

    def _line(self, pos: int) -> int:
        return self.text.count("\n", 0, pos) + 1

    def _key_pos(self, key: str, start: int = 0) -> int | None:
        pos = self.text.find(json.dumps(key) + ":", start)
        return None if pos < 0 else pos

    def line_of(self, path: tuple[str, ...], index: int | None = None) -> int | None:
        pos = 0
        for key in path:
            p = self._key_pos(key, pos)
            if p is None:
                return None
            pos = p
        if index is None:
            return self._line(pos)
        lb = self.text.find("[", pos)
        if lb < 0:
            return self._line(pos)
        i = lb + 1
        for k in range(index + 1):
            while i < len(self.text) and self.text[i] in " \t\r\n,":
                i += 1
            if k == index:
                return self._line(i)
            try:
                _, i = self.dec.raw_decode(self.text, i)
            except json.JSONDecodeError:
                return self._line(i)
        return self._line(pos)


class _Parser:
    def __init__(self, text: str, source: str, field: FieldSpec | None):
        self.source = source
        self.loc = _Locator(text)
        try:
            self.doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PresentationFileError(f"invalid JSON: {exc.msg}", source, exc.lineno) from None
        if not isinstance(self.doc, dict):
            raise PresentationFileError("top level must be an object", source, 1)
        tag = self.doc.get("field", "Q")
        try:
            self.file_field = FieldSpec.from_tag(str(tag))
        except ValueError as exc:
            raise self.error(str(exc), ("field",)) from None
        if field is not None and field != self.file_field:
            if self.file_field.p is not None:
                raise self.error(
                    f"field-tag mismatch: file is over {self.file_field.tag}, requested {field.tag}", ("field",)
                )
        self.field = field or self.file_field

    def error(self, message: str, path: tuple[str, ...] = (), index: int | None = None):
        line = self.loc.line_of(path, index) if path else None
        return PresentationFileError(message, self.source, line)

    def scalar(self, s, path, index):
        if not isinstance(s, str):
            raise self.error(f"coefficient must be a string, got {s!r}", path, index)
        try:
            if s.strip().startswith("p"):
                if self.file_field.p is None:
                    raise ValueError(f"residue {s!r} in a rational presentation")
                return self.field(self.file_field.parse(s))
            return self.field(Fraction(s.strip()))
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise self.error(f"bad coefficient {s!r}: {exc}", path, index) from None

    def sparse(self, entries, rank: int, n: int | tuple, path: tuple[str, ...]) -> np.ndarray:
        shape = (n,) * rank if isinstance(n, int) else n
        out = self.field.zeros(shape)
        if not isinstance(entries, list):
            raise self.error(f"{'/'.join(path)} must be a list", path)
        for idx, e in enumerate(entries):
            if not isinstance(e, list) or len(e) != rank + 1:
                raise self.error(f"entry must have {rank} indices and a coefficient", path, idx)
            ijk = e[:rank]
            for d, i in enumerate(ijk):
                if not isinstance(i, int) or isinstance(i, bool) or not 0 <= i < shape[d]:
                    raise self.error(f"index {i!r} out of range 0..{shape[d] - 1}", path, idx)
            out[tuple(ijk)] = out[tuple(ijk)] + self.scalar(e[rank], path, idx)
        return out

    def need(self, obj: dict, key: str, path: tuple[str, ...]):
        if key not in obj:
            raise self.error(f"missing key {key!r}", path[:-1] or ("format",))
        return obj[key]

    def parse(self) -> PresentationFile:
        d = self.doc
        fmt = d.get("format", FORMAT_TAG)
        if fmt != FORMAT_TAG:
            raise self.error(f"unknown format {fmt!r}", ("format",))
        n = self.need(d, "dimension", ("dimension",))
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise self.error("dimension must be a positive integer", ("dimension",))
        labels = d.get("basis")
        if labels is not None:
            if not isinstance(labels, list) or len(labels) != n or not all(isinstance(x, str) for x in labels):
                raise self.error("basis must list one string label per basis vector", ("basis",))
            labels = tuple(labels)
        mult = self.sparse(self.need(d, "mult", ("mult",)), 3, n, ("mult",))
        unit = self.sparse(self.need(d, "unit", ("unit",)), 1, n, ("unit",))
        delta = self.sparse(self.need(d, "delta", ("delta",)), 3, n, ("delta",))
        eps = self.sparse(self.need(d, "epsilon", ("epsilon",)), 1, n, ("epsilon",))
        one3 = np.multiply.outer(np.multiply.outer(unit, unit), unit)
        phi = self.sparse(d["phi"], 3, n, ("phi",)) if "phi" in d else one3
        phi_inv = self.sparse(d["phi_inv"], 3, n, ("phi_inv",)) if "phi_inv" in d else one3.copy()
        anti = self.sparse(self.need(d, "antipode", ("antipode",)), 2, n, ("antipode",))
        S = anti.T.copy()  # entries are [src, dst, c]
        alpha = self.sparse(d["alpha"], 1, n, ("alpha",)) if "alpha" in d else unit.copy()
        beta = self.sparse(d["beta"], 1, n, ("beta",)) if "beta" in d else unit.copy()
        name = d.get("name", "")
        provenance = d.get("provenance", "")
        for key in d:
            if key not in _KEY_ORDER:
                raise self.error(f"unknown key {key!r}", (key,))
        alg = AlgebraPresentation(self.field, mult, unit, labels)
        qb = QuasiBialgebraPresentation(alg, delta, eps, phi, phi_inv)
        h = QuasiHopfPresentation(qb, S, alpha, beta, name=name or Path(self.source).stem)
        sub = self.subalgebra(d["subalgebra"], n) if "subalgebra" in d else None
        return PresentationFile(h, name, provenance, labels, sub, self.source)

    def subalgebra(self, s, n: int) -> SubalgebraSpec:
        path = ("subalgebra",)
        if not isinstance(s, dict):
            raise self.error("subalgebra must be an object", path)
        basis = self.need(s, "basis", path + ("basis",))
        if not isinstance(basis, list) or not basis:
            raise self.error("subalgebra basis must be a nonempty list", path + ("basis",))
        rows = []
        for idx, vec in enumerate(basis):
            if not isinstance(vec, list):
                raise self.error("basis vector must be a list of [i, c] entries", path + ("basis",), idx)
            out = self.field.zeros(n)
            for e in vec:
                if not (isinstance(e, list) and len(e) == 2 and isinstance(e[0], int) and 0 <= e[0] < n):
                    raise self.error(f"bad basis entry {e!r}", path + ("basis",), idx)
                out[e[0]] = out[e[0]] + self.scalar(e[1], path + ("basis",), idx)
            rows.append(out)
        m = len(rows)
        for key in s:
            if key not in _SUB_ORDER:
                raise self.error(f"unknown subalgebra key {key!r}", path + (key,))

        def opt(key, rank):
            return self.sparse(s[key], rank, m, path + (key,)) if key in s else None

        return SubalgebraSpec(
            np.stack(rows), opt("phi", 3), opt("phi_inv", 3), opt("alpha", 1), opt("beta", 1), s.get("name", "")
        )


def parse_presentation(text: str, source: str = "<string>", field: FieldSpec | None = None) -> PresentationFile:
    """Parse a presentation document; ``field`` overrides the file's field tag
    (rational files may be read over F_p)."""
    return _Parser(text, source, field).parse()


def load_presentation(path, field: FieldSpec | None = None) -> PresentationFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise PresentationFileError(f"cannot read file: {exc.strerror}", str(path)) from None
    return parse_presentation(text, str(path), field)


# ---------------------------------------------------------------- serialization


def _entries(arr: np.ndarray, fmt) -> list[str]:
    out = []
    for idx in np.ndindex(arr.shape):
        v = arr[idx]
        if v != 0:
            out.append(json.dumps([int(i) for i in idx] + [fmt(v)]))
    return out


def _block(lines: list[str], indent: str) -> str:
    if not lines:
        return "[]"
    inner = f",\n{indent}  ".join(lines)
    return f"[\n{indent}  {inner}\n{indent}]"


def serialize_presentation(doc: PresentationFile) -> str:
    h = doc.presentation
    F = h.field
    fmt = F.format
    qb = h.qb
    fields: list[tuple[str, str]] = [
        ("format", json.dumps(FORMAT_TAG)),
        ("name", json.dumps(doc.name, ensure_ascii=False)),
        ("provenance", json.dumps(doc.provenance, ensure_ascii=False)),
        ("field", json.dumps(F.tag)),
        ("dimension", str(h.dim)),
    ]
    if doc.labels is not None:
        fields.append(("basis", json.dumps(list(doc.labels), ensure_ascii=False)))
    fields += [
        ("mult", _block(_entries(h.alg.mult, fmt), "  ")),
        ("unit", _block(_entries(h.alg.unit, fmt), "  ")),
        ("delta", _block(_entries(qb.delta, fmt), "  ")),
        ("epsilon", _block(_entries(qb.counit, fmt), "  ")),
        ("phi", _block(_entries(qb.phi, fmt), "  ")),
        ("phi_inv", _block(_entries(qb.phi_inv, fmt), "  ")),
        ("antipode", _block(_entries(h.S.T, fmt), "  ")),
        ("alpha", _block(_entries(h.alpha, fmt), "  ")),
        ("beta", _block(_entries(h.beta, fmt), "  ")),
    ]
    if doc.subalgebra is not None:
        fields.append(("subalgebra", _serialize_sub(doc.subalgebra, fmt)))
    body = ",\n".join(f"  {json.dumps(k)}: {v}" for k, v in fields)
    return "{\n" + body + "\n}\n"


def _serialize_sub(s: SubalgebraSpec, fmt) -> str:
    vecs = [json.dumps([[int(i), fmt(v)] for i, v in enumerate(row) if v != 0]) for row in s.basis]
    parts = [("name", json.dumps(s.name, ensure_ascii=False)), ("basis", _block(vecs, "    "))]
    for key in ("phi", "phi_inv", "alpha", "beta"):
        arr = getattr(s, key)
        if arr is not None:
            parts.append((key, _block(_entries(arr, fmt), "    ")))
    body = ",\n".join(f"    {json.dumps(k)}: {v}" for k, v in parts)
    return "{\n" + body + "\n  }"


def dump_presentation(doc: PresentationFile, path) -> None:
    Path(path).write_text(serialize_presentation(doc), encoding="utf-8")
