"""Named built-in structures with their expected classification records.

Each entry stores the flags a correct engine must reproduce; the test suite
recomputes them, which makes the catalog the master regression table.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .constructions import (
    ClassicalACM,
    ClassicalComplex,
    ClassicalSymplectic,
    cokahler_triple,
    gac_from_contact,
    gcx_from_complex,
    gcx_from_symplectic,
    metric_operator,
    product_gk_gcok,
    product_J1,
    product_J2,
)
from .exactalg import Matrix
from .frame import FrameContext, product_context
from .structures import GenContactMetric, bfield

__all__ = ["CatalogEntry", "UnknownEntryError", "catalog_list", "catalog_get", "su2_frame", "heisenberg_frame"]

KINDS = ("gac", "gacm", "gcx_pair", "classical_acm")


class UnknownEntryError(KeyError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    description: str
    kind: str
    payload: object
    expected: dict
    # printed form of the bracket that witnesses the first failed involutivity check
    witness: str | None = None

    @property
    def frame(self) -> FrameContext:
        p = self.payload
        if isinstance(p, tuple):
            return p[0].frame
        return p.frame


def su2_frame(H: bool = False) -> FrameContext:
    f = FrameContext(3, {(0, 1, 2): -1, (1, 2, 0): -1, (0, 2, 1): 1}, "su2")
    return f.with_H(f.form(1, 2, 3)) if H else f


def heisenberg_frame() -> FrameContext:
    return FrameContext(3, {(0, 1, 2): 1}, "heisenberg")


_ROT = Matrix([[0, -1, 0], [1, 0, 0], [0, 0, 0]])
_E3 = (0, 0, 1)


def _acm3(frame: FrameContext) -> ClassicalACM:
    return ClassicalACM(frame, _ROT, _E3, _E3, Matrix.identity(3))


def _s1_acm() -> ClassicalACM:
    return ClassicalACM(FrameContext.abelian(1, "S1"), Matrix([[0]]), (1,), (1,), Matrix.identity(1))


def _t2_pair():
    t2 = FrameContext.abelian(2, "T2")
    J = gcx_from_complex(ClassicalComplex(t2, Matrix([[0, -1], [1, 0]])))
    w = gcx_from_symplectic(ClassicalSymplectic(t2, t2.form(1, 2, coeff=-1)))
    return J, w


def _product_pair(a: GenContactMetric, b: GenContactMetric):
    pc = product_context(a.frame, b.frame)
    J1 = product_J1(a.base, b.base, pc)
    J2, _ = product_J2(a, b, pc)
    return J1, J2


_COK = dict(
    gac=True,
    contact_plus=True,
    contact_minus=True,
    strong=True,
    normal=True,
    metric_ok=True,
    compatible=True,
    gphi_strong=True,
    cokahler=True,
)
_GK = dict(almost=True, integrable=True, commuting=True, metric_positive=True, generalized_kahler=True)

_SU2 = dict(_COK, gphi_strong=False, cokahler=False)
_SU2_WITNESS = "[[X1 - i s2, X2 + i s1]] = -X3"

_BUILDERS: dict[str, tuple[str, Callable[[], CatalogEntry]]] = {}


def _entry(id: str, description: str):
    def register(fn):
        _BUILDERS[id] = (description, fn)
        return fn

    return register


@_entry("s1_trivial", "trivial coKähler structure on the circle: Phi = 0, E+ = dt/dtheta, E- = dt")
def _s1_trivial():
    return "gacm", cokahler_triple(_s1_acm()), dict(_COK), None


@_entry("t2_kahler", "flat Kähler torus T^2 as the pair (J_J, J_omega)")
def _t2_kahler():
    return "gcx_pair", _t2_pair(), dict(_GK), None


@_entry("t3_cokahler_classical", "flat coKähler T^3: phi rotates X1, X2 and xi = X3")
def _t3():
    return "classical_acm", _acm3(FrameContext.abelian(3, "T3")), dict(_COK, classical_normal=True, classical_cokahler=True), None


@_entry("su2_normal_contact_metric", "normal almost contact metric structure on su(2); Phi strong, G Phi not")
def _su2():
    return "gacm", cokahler_triple(_acm3(su2_frame())), dict(_SU2), _SU2_WITNESS


@_entry("su2_twisted", "the su(2) structure under the bracket twisted by H = s1^s2^s3")
def _su2_twisted():
    # the twist adds i_Y i_X H = s3 to the untwisted witness
    return "gacm", cokahler_triple(_acm3(su2_frame(H=True))), dict(_SU2), "[[X1 - i s2, X2 + i s1]] = -X3 + s3"


@_entry("su2_contact_nonstrong", "generalized almost contact structure of the contact form s3 on su(2), with the generalized metric of g = I")
def _su2_contact():
    f = su2_frame()
    s = gac_from_contact(f, _E3, _E3)
    t = GenContactMetric(s, metric_operator(f, Matrix.identity(3)))
    expected = dict(_COK, contact_plus=False, strong=False, normal=False, cokahler=False)
    return "gacm", t, expected, "[[X1 - i s2, X2 + i s1]] = -X3"


@_entry("heisenberg_nonnormal", "non-normal almost contact metric structure on the Heisenberg algebra with xi = X1")
def _heisenberg():
    a = ClassicalACM(heisenberg_frame(), Matrix([[0, 0, 0], [0, 0, -1], [0, 1, 0]]), (1, 0, 0), (1, 0, 0), Matrix.identity(3))
    expected = dict(
        _COK,
        contact_plus=False,
        strong=False,
        normal=False,
        cokahler=False,
        classical_normal=False,
        classical_cokahler=False,
    )
    return "classical_acm", a, expected, "[[X1, X2 - i X3]] = X3"


@_entry("product_t1xt1", "product of two trivial circles, as the pair (J1, J2) on T^2")
def _t1xt1():
    s = cokahler_triple(_s1_acm())
    return "gcx_pair", _product_pair(s, s), dict(_GK), None


@_entry("product_su2xs1", "su(2) x S^1 from the su(2) metric structure and the trivial circle; J1 integrable, J2 not")
def _su2xs1():
    pair = _product_pair(cokahler_triple(_acm3(su2_frame())), cokahler_triple(_s1_acm()))
    expected = dict(_GK, integrable=False, generalized_kahler=False)
    return "gcx_pair", pair, expected, "[[X1 - i s2, X2 + i s1]] = -X3"


@_entry("product_gk_gcok_t2xs1", "generalized coKähler T^3 from the Kähler T^2 pair times the trivial circle")
def _gk_gcok():
    J, w = _t2_pair()
    return "gacm", product_gk_gcok(J, w, cokahler_triple(_s1_acm())), dict(_COK), None


@_entry("su2_btransformed", "the su(2) metric structure transformed by the closed B = s1^s2")
def _su2_b():
    f = su2_frame()
    return "gacm", bfield(f.form(1, 2), cokahler_triple(_acm3(f))), dict(_SU2), None


def catalog_list() -> list[tuple[str, str]]:
    return [(k, d) for k, (d, _) in _BUILDERS.items()]


@lru_cache(maxsize=None)
def catalog_get(id: str) -> CatalogEntry:
    try:
        description, fn = _BUILDERS[id]
    except KeyError:
        raise UnknownEntryError(id) from None
    kind, payload, expected, witness = fn()
    return CatalogEntry(id, description, kind, payload, expected, witness)
