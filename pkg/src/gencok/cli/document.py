"""JSON structure documents: exact scalars as strings, 1-based frame indices."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..constructions import ClassicalACM
from ..exactalg import Matrix, Scalar, parse_scalar
from ..frame import FrameContext, GenSection, InvariantForm
from ..structures import BigOperator, GenAlmostContact, GenContactMetric

__all__ = ["DocumentError", "Document", "load", "loads", "dump", "dumps", "to_dict", "from_dict", "parse_two_form"]


class DocumentError(ValueError):
    """Malformed input; ``location`` is a dotted path into the document."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


@dataclass(frozen=True)
class Document:
    kind: str
    payload: object  # GenAlmostContact | GenContactMetric | BigOperator | (BigOperator, BigOperator) | ClassicalACM
    id: str | None = None

    @property
    def frame(self) -> FrameContext:
        p = self.payload
        return p[0].frame if isinstance(p, tuple) else p.frame


# --------------------------------------------------------------------------
# serialization


def _s(x: Scalar) -> str:
    return str(x)


def _grid(m: Matrix) -> list[list[str]]:
    return [[_s(x) for x in row] for row in m.tolist()]


def _section(u: GenSection) -> dict:
    return {"vec": [_s(x) for x in u.vec], "form": [_s(x) for x in u.form]}


def _terms(w: InvariantForm, keys: str) -> list[dict]:
    out = []
    for idx, c in sorted(w.coeffs.items()):
        d = {k: i + 1 for k, i in zip(keys, idx)}
        d["c"] = _s(c)
        out.append(d)
    return out


def _frame(f: FrameContext) -> dict:
    brackets = [
        {"i": i + 1, "j": j + 1, "k": k + 1, "c": _s(c)} for (i, j, k), c in sorted(f.constants.items()) if c
    ]
    return {"dim": f.dim, "name": f.name, "brackets": brackets}


def to_dict(doc: Document) -> dict:
    f = doc.frame
    p = doc.payload
    if doc.kind == "gac":
        st = {"phi": _grid(p.phi.matrix), "e_plus": _section(p.e_plus), "e_minus": _section(p.e_minus)}
    elif doc.kind == "gacm":
        st = {
            "phi": _grid(p.phi.matrix),
            "e_plus": _section(p.e_plus),
            "e_minus": _section(p.e_minus),
            "G": _grid(p.G.matrix),
        }
    elif doc.kind == "gcx":
        st = {"J": _grid(p.matrix)}
    elif doc.kind == "gcx_pair":
        st = {"J1": _grid(p[0].matrix), "J2": _grid(p[1].matrix)}
    elif doc.kind == "classical_acm":
        st = {
            "phi": _grid(p.phi),
            "xi": [_s(x) for x in p.xi],
            "eta": [_s(x) for x in p.eta],
            "g": _grid(p.g),
        }
    else:
        raise ValueError(f"unknown kind {doc.kind!r}")
    out = {}
    if doc.id:
        out["id"] = doc.id
    out["frame"] = _frame(f)
    out["h"] = _terms(f.H, "ijk") if f.H is not None else None
    out["structure"] = {"kind": doc.kind, **st}
    return out


def dumps(doc: Document) -> str:
    return json.dumps(to_dict(doc), indent=2, ensure_ascii=False) + "\n"


def dump(doc: Document, path: str | Path):
    Path(path).write_text(dumps(doc), encoding="utf-8")


# --------------------------------------------------------------------------
# parsing


def _get(d, key: str, loc: str, typ=None):
    if not isinstance(d, dict):
        raise DocumentError(loc, "expected an object")
    if key not in d:
        raise DocumentError(f"{loc}.{key}" if loc else key, "missing field")
    v = d[key]
    if typ is not None and not isinstance(v, typ):
        raise DocumentError(f"{loc}.{key}" if loc else key, f"expected {typ.__name__}")
    return v


def _scalar(v, loc: str) -> Scalar:
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise DocumentError(loc, "scalars must be strings (or integers)")
    try:
        return parse_scalar(str(v))
    except (ValueError, ZeroDivisionError) as e:
        raise DocumentError(loc, str(e)) from None


def _vector(v, n: int, loc: str) -> tuple:
    if not isinstance(v, list) or len(v) != n:
        raise DocumentError(loc, f"expected a list of {n} scalars")
    return tuple(_scalar(x, f"{loc}[{k}]") for k, x in enumerate(v))


def _matrix(v, n: int, loc: str) -> Matrix:
    if not isinstance(v, list) or len(v) != n:
        raise DocumentError(loc, f"expected {n} rows")
    return Matrix([_vector(row, n, f"{loc}[{r}]") for r, row in enumerate(v)])


def _index(d, key: str, n: int, loc: str) -> int:
    v = _get(d, key, loc, int)
    if isinstance(v, bool) or not 1 <= v <= n:
        raise DocumentError(f"{loc}.{key}", f"index must lie in 1..{n}")
    return v - 1


def _parse_terms(v, n: int, keys: str, loc: str) -> dict:
    if not isinstance(v, list):
        raise DocumentError(loc, "expected a list of terms")
    coeffs = {}
    for t, term in enumerate(v):
        tl = f"{loc}[{t}]"
        idx = tuple(_index(term, k, n, tl) for k in keys)
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise DocumentError(tl, "indices must be strictly increasing")
        if idx in coeffs:
            raise DocumentError(tl, "duplicate term")
        coeffs[idx] = _scalar(_get(term, "c", tl), f"{tl}.c")
    return coeffs


def parse_two_form(v, dim: int, loc: str = "terms") -> InvariantForm:
    """A 2-form given as ``[{"i": 1, "j": 2, "c": "1"}, ...]`` or ``{"terms": [...]}``."""
    if isinstance(v, dict):
        v = _get(v, "terms", "", list)
    return InvariantForm(dim, 2, _parse_terms(v, dim, "ij", loc))


def _parse_frame(d) -> FrameContext:
    fd = _get(d, "frame", "", dict)
    n = _get(fd, "dim", "frame", int)
    if isinstance(n, bool) or n < 1:
        raise DocumentError("frame.dim", "must be a positive integer")
    name = fd.get("name", "")
    if not isinstance(name, str):
        raise DocumentError("frame.name", "expected a string")
    brackets = fd.get("brackets", [])
    if not isinstance(brackets, list):
        raise DocumentError("frame.brackets", "expected a list")
    consts = {}
    for t, term in enumerate(brackets):
        tl = f"frame.brackets[{t}]"
        i, j, k = (_index(term, key, n, tl) for key in "ijk")
        if i >= j:
            raise DocumentError(tl, "bracket terms need i < j")
        if (i, j, k) in consts:
            raise DocumentError(tl, "duplicate term")
        consts[(i, j, k)] = _scalar(_get(term, "c", tl), f"{tl}.c")
    H = None
    if d.get("h") is not None:
        H = InvariantForm(n, 3, _parse_terms(d["h"], n, "ijk", "h"))
    return FrameContext(n, consts, name, H)


def _op(frame: FrameContext, v, loc: str) -> BigOperator:
    return BigOperator(frame, _matrix(v, 2 * frame.dim, loc))


def _sec(frame: FrameContext, v, loc: str) -> GenSection:
    n = frame.dim
    return GenSection(frame, _vector(_get(v, "vec", loc), n, f"{loc}.vec"), _vector(_get(v, "form", loc), n, f"{loc}.form"))


def from_dict(d) -> Document:
    try:
        return _from_dict(d)
    except DocumentError:
        raise
    except (ValueError, TypeError) as e:
        # dimension and consistency errors raised by the library constructors
        raise DocumentError("structure", str(e)) from None


def _from_dict(d) -> Document:
    if not isinstance(d, dict):
        raise DocumentError("", "top level must be an object")
    frame = _parse_frame(d)
    n = frame.dim
    st = _get(d, "structure", "", dict)
    kind = _get(st, "kind", "structure", str)
    L = "structure"
    if kind in ("gac", "gacm"):
        base = GenAlmostContact(
            _op(frame, _get(st, "phi", L), f"{L}.phi"),
            _sec(frame, _get(st, "e_plus", L), f"{L}.e_plus"),
            _sec(frame, _get(st, "e_minus", L), f"{L}.e_minus"),
        )
        payload = base if kind == "gac" else GenContactMetric(base, _op(frame, _get(st, "G", L), f"{L}.G"))
    elif kind == "gcx":
        payload = _op(frame, _get(st, "J", L), f"{L}.J")
    elif kind == "gcx_pair":
        payload = (_op(frame, _get(st, "J1", L), f"{L}.J1"), _op(frame, _get(st, "J2", L), f"{L}.J2"))
    elif kind == "classical_acm":
        payload = ClassicalACM(
            frame,
            _matrix(_get(st, "phi", L), n, f"{L}.phi"),
            _vector(_get(st, "xi", L), n, f"{L}.xi"),
            _vector(_get(st, "eta", L), n, f"{L}.eta"),
            _matrix(_get(st, "g", L), n, f"{L}.g"),
        )
    else:
        raise DocumentError("structure.kind", f"unknown kind {kind!r}")
    ident = d.get("id")
    return Document(kind, payload, ident if isinstance(ident, str) else None)


def loads(text: str) -> Document:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"line {e.lineno} column {e.colno}", e.msg) from None
    return from_dict(d)


def load(path: str | Path) -> Document:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentError(str(path), e.strerror or str(e)) from None
    return loads(text)
