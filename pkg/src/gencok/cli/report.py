"""Verification reports shared by the text and JSON outputs."""

from __future__ import annotations

from ..constructions import ClassicalACM, cokahler_triple, is_classical_cokahler, nijenhuis_normal
from ..exactalg import Matrix, Scalar, Subspace
from ..frame import FrameContext, GenSection, check_frame, format_section
from ..structures import (
    BigOperator,
    GenAlmostContact,
    GenContactMetric,
    Involutivity,
    check_gcx,
    check_metric,
    classify_contact,
    e_bracket,
    is_generalized_kahler,
)

__all__ = ["analyze", "render_text", "witness_value", "bracket_text"]

def bracket_text(w: tuple[GenSection, GenSection, GenSection]) -> str:
    a, b, c = (format_section(x) for x in w)
    return f"[[{a}, {b}]] = {c}"


def witness_value(w):
    """A JSON-friendly rendering of whatever a check produced as evidence."""
    if w is None or isinstance(w, (bool, str, int)):
        return w
    if isinstance(w, GenSection):
        return format_section(w)
    if isinstance(w, Scalar):
        return str(w)
    if isinstance(w, Matrix):
        return [[str(x) for x in row] for row in w.tolist()]
    if isinstance(w, Subspace):
        return [[str(x) for x in b] for b in w.basis]
    if isinstance(w, (list, tuple)):
        return [witness_value(x) for x in w]
    return str(w)


def _checks(report, prefix: str = "") -> list[dict]:
    out = []
    for c in report:
        item = {"name": prefix + c.name, "pass": c.passed}
        if not c.passed:
            item["witness"] = witness_value(c.witness) if c.witness is not None else c.detail or "failed"
        out.append(item)
    return out


def _inv_witness(name: str, inv: Involutivity) -> dict:
    a, b, c = inv.witness
    return {
        "name": name,
        "a": format_section(a),
        "b": format_section(b),
        "bracket": format_section(c),
        "text": bracket_text(inv.witness),
    }


def _frame_info(f: FrameContext) -> tuple[dict, list[dict]]:
    fr = check_frame(f)
    info = {"name": f.name, "dim": f.dim, "valid": fr.valid, "twist": f.H is not None}
    jacobi = {"name": "Jacobi", "pass": not fr.jacobi_violations}
    if fr.jacobi_violations:
        jacobi["witness"] = [f"(X{i + 1}, X{j + 1}, X{k + 1}) component {l + 1}: {v}" for i, j, k, l, v in fr.jacobi_violations]
    axioms = [jacobi]
    if f.H is not None:
        axioms.append({"name": "H real", "pass": fr.h_real})
        item = {"name": "dH = 0", "pass": fr.h_closed}
        if not fr.h_closed:
            item["witness"] = repr(fr.dH)
        axioms.append(item)
    return info, axioms


def _contact(s: GenAlmostContact, use_H, label: str, flags: dict, witnesses: list):
    cls = classify_contact(s, use_H)
    flags["contact_plus"] = cls.plus.ok
    flags["contact_minus"] = cls.minus.ok
    flags["strong"] = cls.strong
    for sign, inv in (("+", cls.plus), ("-", cls.minus)):
        if not inv.ok:
            witnesses.append(_inv_witness(f"L{sign} of {label}", inv))
    eb = e_bracket(s, use_H)
    if not eb.is_zero():
        witnesses.append({"name": f"[[E+, E-]] of {label}", "bracket": format_section(eb), "text": f"[[E+, E-]] = {eb}"})
    return cls.strong, eb.is_zero()


def _gac(s: GenAlmostContact, use_H, axioms: list, flags: dict, witnesses: list) -> bool:
    axioms.extend(_checks(s.axioms))
    if not s.axioms.ok:
        return False
    strong, e_zero = _contact(s, use_H, "Phi", flags, witnesses)
    flags["normal"] = strong and e_zero
    return True


def _gacm(t: GenContactMetric, use_H, axioms: list, flags: dict, witnesses: list):
    if not _gac(t.base, use_H, axioms, flags, witnesses):
        return
    metric = check_metric(t.G)
    axioms.extend(_checks(metric, "metric "))
    flags["metric_ok"] = metric.ok
    if not metric.ok:
        return
    flags["compatible"] = t.compatible
    if not t.compatible:
        flags["gphi_strong"] = None
        flags["cokahler"] = False
        return
    sub: dict = {}
    _contact(t.gphi, use_H, "G Phi", sub, witnesses)
    flags["gphi_strong"] = sub["strong"]
    flags["cokahler"] = flags["normal"] and sub["strong"]


def _gcx(J: BigOperator, use_H, tag: str, axioms: list, witnesses: list, r=None):
    r = r or check_gcx(J, use_H)
    axioms.extend(_checks(r.checks, f"{tag} "))
    if r.witness is not None:
        witnesses.append(_inv_witness(f"+i eigenbundle of {tag}", Involutivity(False, r.witness)))
    return r


def analyze(kind: str, payload, use_H: bool | None = None, ident: str | None = None) -> dict:
    """Run every applicable check and classifier; never raises on bad math, only reports it."""
    frame = payload[0].frame if isinstance(payload, tuple) else payload.frame
    finfo, axioms = _frame_info(frame)
    flags: dict = {}
    witnesses: list = []
    if finfo["valid"]:
        if kind == "gac":
            flags["gac"] = payload.axioms.ok
            _gac(payload, use_H, axioms, flags, witnesses)
        elif kind == "gacm":
            _gacm(payload, use_H, axioms, flags, witnesses)
            flags = {"gac": payload.base.axioms.ok, **flags}
        elif kind == "classical_acm":
            _classical(payload, use_H, axioms, flags, witnesses)
        elif kind == "gcx":
            r = _gcx(payload, use_H, "J", axioms, witnesses)
            flags["almost"] = r.status != "invalid"
            flags["integrable"] = r.integrable
        elif kind == "gcx_pair":
            _pair(payload, use_H, axioms, flags, witnesses)
        else:
            raise ValueError(f"unknown kind {kind!r}")
    valid = all(a["pass"] for a in axioms)
    return {
        "input": ident,
        "kind": kind,
        "twisted": (frame.H is not None) if use_H is None else bool(use_H),
        "frame": finfo,
        "valid": valid,
        "axioms": axioms,
        "flags": flags,
        "witnesses": witnesses,
    }


def _classical(a: ClassicalACM, use_H, axioms: list, flags: dict, witnesses: list):
    axioms.extend(_checks(a.axioms, "classical "))
    if not a.axioms.ok:
        return
    t = cokahler_triple(a)
    flags["gac"] = t.base.axioms.ok
    _gacm(t, use_H, axioms, flags, witnesses)
    flags["classical_normal"] = nijenhuis_normal(a)
    flags["classical_cokahler"] = is_classical_cokahler(a)


def _pair(pair, use_H, axioms: list, flags: dict, witnesses: list):
    J1, J2 = pair
    if J1.frame != J2.frame:
        axioms.append({"name": "same frame", "pass": False, "witness": "J1 and J2 live on different frames"})
        return
    gk = is_generalized_kahler(J1, J2, use_H)
    r1 = _gcx(J1, use_H, "J1", axioms, witnesses, gk.first)
    r2 = _gcx(J2, use_H, "J2", axioms, witnesses, gk.second)
    flags["almost"] = r1.status != "invalid" and r2.status != "invalid"
    flags["integrable"] = r1.integrable and r2.integrable
    flags["commuting"] = gk.commuting
    if gk.commutator_witness is not None:
        witnesses.append({"name": "J1 J2 - J2 J1", "text": f"first basis element not commuting: {gk.commutator_witness}"})
    flags["metric_positive"] = gk.metric.ok
    flags["generalized_kahler"] = gk.generalized_kahler


def render_text(report: dict) -> str:
    lines = []
    f = report["frame"]
    lines.append(f"input: {report['input'] or '-'}")
    lines.append(f"kind: {report['kind']}")
    twist = "twisted" if report["twisted"] else "untwisted"
    lines.append(f"frame: {f['name'] or '-'} (dim {f['dim']}, {'valid' if f['valid'] else 'INVALID'}, {twist})")
    lines.append(f"valid: {str(report['valid']).lower()}")
    lines.append("axioms:")
    for a in report["axioms"]:
        mark = "pass" if a["pass"] else "FAIL"
        line = f"  [{mark}] {a['name']}"
        if "witness" in a:
            line += f"  witness: {a['witness']}"
        lines.append(line)
    lines.append("flags:")
    for k, v in report["flags"].items():
        lines.append(f"  {k}: {'n/a' if v is None else str(v).lower()}")
    for name, conds in report.get("factors", {}).items():
        lines.append(f"factor {name}: " + ", ".join(f"{k}={str(v).lower()}" for k, v in conds.items()))
    if report["witnesses"]:
        lines.append("witnesses:")
        for w in report["witnesses"]:
            lines.append(f"  {w['name']}: {w['text']}")
    return "\n".join(lines)
