"""Generalized almost complex / contact / metric structures and their classifiers.

Operators act on big-tangent coordinates ``(X_1..X_n, s^1..s^n)``.  The
rank-one operator ``A (x) B`` always means ``u -> 2<B, u> A``; with this
reading ``Phi^2 = -Id + E+ (x) E- + E- (x) E+`` kills E+ and E-.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .exactalg import (
    I,
    ONE,
    ZERO,
    Matrix,
    Subspace,
    eigenspace,
    leading_minors,
)
from .frame import (
    FrameContext,
    FrameMismatchError,
    GenSection,
    InvariantForm,
    _resolve_H,
    courant_bracket,
    exterior_derivative,
    pairing,
)

__all__ = [
    "Check",
    "Report",
    "AxiomError",
    "NotIsotropicError",
    "NotClosedError",
    "BigOperator",
    "outer",
    "adjoint",
    "GenAlmostContact",
    "GenContactMetric",
    "check_gac",
    "eigenbundle_E10",
    "eigenbundle_E01",
    "build_L",
    "is_isotropic",
    "Involutivity",
    "is_involutive",
    "Contact",
    "ContactClassification",
    "classify_contact",
    "e_bracket",
    "is_normal",
    "check_metric",
    "metric_form",
    "compat_residual",
    "check_compat",
    "metric_identities",
    "compose_GPhi",
    "is_cokahler",
    "GcxResult",
    "check_gcx",
    "GKReport",
    "is_generalized_kahler",
    "bfield_operator",
    "bfield",
    "strong_by_generators",
]


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: object = None
    detail: str = ""


@dataclass(frozen=True)
class Report:
    checks: tuple[Check, ...] = ()

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __iter__(self) -> Iterator[Check]:
        return iter(self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


class AxiomError(ValueError):
    def __init__(self, message: str, report: Report | None = None):
        super().__init__(message)
        self.report = report


class NotIsotropicError(ValueError):
    pass


class NotClosedError(ValueError):
    def __init__(self, message: str, dB: InvariantForm):
        super().__init__(message)
        self.dB = dB


@dataclass(frozen=True, eq=False)
class BigOperator:
    """Endomorphism of the big tangent space, as a 2n x 2n matrix.

    Blocks: upper-left T->T, upper-right T*->T, lower-left T->T*,
    lower-right T*->T*.
    """

    frame: FrameContext
    matrix: Matrix

    def __post_init__(self):
        n2 = 2 * self.frame.dim
        if self.matrix.shape != (n2, n2):
            raise ValueError(f"operator on a {self.frame.dim}-frame must be {n2}x{n2}")

    @classmethod
    def identity(cls, frame: FrameContext) -> "BigOperator":
        return cls(frame, Matrix.identity(2 * frame.dim))

    @classmethod
    def zero(cls, frame: FrameContext) -> "BigOperator":
        return cls(frame, Matrix.zeros(2 * frame.dim))

    @classmethod
    def from_blocks(cls, frame, tt=None, tstar_t=None, t_tstar=None, tstar_tstar=None) -> "BigOperator":
        n = frame.dim
        z = Matrix.zeros(n)
        return cls(
            frame,
            Matrix.from_blocks(
                [[_or(tt, z), _or(tstar_t, z)], [_or(t_tstar, z), _or(tstar_tstar, z)]]
            ),
        )

    @property
    def blocks(self) -> tuple[Matrix, Matrix, Matrix, Matrix]:
        n = self.frame.dim
        m = self.matrix
        return (m.block(0, n, 0, n), m.block(0, n, n, 2 * n), m.block(n, 2 * n, 0, n), m.block(n, 2 * n, n, 2 * n))

    def _check(self, other: "BigOperator"):
        if self.frame != other.frame:
            raise FrameMismatchError("operators live on different frames")

    def __call__(self, u: GenSection) -> GenSection:
        if u.frame != self.frame:
            raise FrameMismatchError("section lives on a different frame")
        return self.frame.section(self.matrix.apply(u.coords))

    def __matmul__(self, other: "BigOperator") -> "BigOperator":
        self._check(other)
        return BigOperator(self.frame, self.matrix @ other.matrix)

    def __add__(self, other: "BigOperator") -> "BigOperator":
        self._check(other)
        return BigOperator(self.frame, self.matrix + other.matrix)

    def __sub__(self, other: "BigOperator") -> "BigOperator":
        self._check(other)
        return BigOperator(self.frame, self.matrix - other.matrix)

    def __neg__(self) -> "BigOperator":
        return BigOperator(self.frame, -self.matrix)

    def __mul__(self, c) -> "BigOperator":
        return BigOperator(self.frame, self.matrix.scale(c))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BigOperator):
            return NotImplemented
        return self.frame == other.frame and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def is_real(self) -> bool:
        return self.matrix.is_real()

    def first_discrepancy(self, other: "BigOperator") -> GenSection | None:
        """A basis section on which the two operators differ, if any."""
        self._check(other)
        n2 = 2 * self.frame.dim
        for j in range(n2):
            if self.matrix.column(j) != other.matrix.column(j):
                e = [ZERO] * n2
                e[j] = ONE
                return self.frame.section(e)
        return None


def outer(A: GenSection, B: GenSection) -> BigOperator:
    """``A (x) B : u -> 2<B, u> A``."""
    A._check(B)
    covec = B.form + B.vec  # 2<B, e_j> for e_j = X_j then s^j
    return BigOperator(A.frame, Matrix.outer(A.coords, covec))


def _swap(n: int) -> Matrix:
    z, one = Matrix.zeros(n), Matrix.identity(n)
    return Matrix.from_blocks([[z, one], [one, z]])


def adjoint(A: BigOperator) -> BigOperator:
    """Adjoint for the neutral pairing: ``P^-1 A^T P`` (P is half the swap)."""
    S = _swap(A.frame.dim)
    return BigOperator(A.frame, S @ A.matrix.T @ S)


# --------------------------------------------------------------------------
# generalized almost contact structures


@dataclass(frozen=True, eq=False)
class GenAlmostContact:
    phi: BigOperator
    e_plus: GenSection
    e_minus: GenSection

    @property
    def frame(self) -> FrameContext:
        return self.phi.frame

    @cached_property
    def axioms(self) -> Report:
        return check_gac(self.phi, self.e_plus, self.e_minus)

    def require_axioms(self):
        if not self.axioms.ok:
            names = ", ".join(c.name for c in self.axioms.failures())
            raise AxiomError(f"generalized almost contact axioms fail: {names}", self.axioms)

    @cached_property
    def e10(self) -> Subspace:
        self.require_axioms()
        return eigenspace(self.phi.matrix, I)

    def __eq__(self, other):
        if not isinstance(other, GenAlmostContact):
            return NotImplemented
        return (self.phi, self.e_plus, self.e_minus) == (other.phi, other.e_plus, other.e_minus)

    def __hash__(self):
        return hash(self.phi)


def check_gac(phi: BigOperator, e_plus: GenSection, e_minus: GenSection) -> Report:
    frame = phi.frame
    if e_plus.frame != frame or e_minus.frame != frame:
        raise FrameMismatchError("structure data live on different frames")
    checks = []
    skew = phi + adjoint(phi)
    w = skew.first_discrepancy(BigOperator.zero(frame))
    checks.append(Check("skew", w is None, w, "Phi + Phi* = 0"))
    square = phi @ phi
    expected = -BigOperator.identity(frame) + outer(e_plus, e_minus) + outer(e_minus, e_plus)
    w = square.first_discrepancy(expected)
    checks.append(Check("square", w is None, w, "Phi^2 = -Id + E+ (x) E- + E- (x) E+"))
    pp = pairing(e_plus, e_plus)
    checks.append(Check("null E+", not pp, None if not pp else pp, "<E+, E+> = 0"))
    mm = pairing(e_minus, e_minus)
    checks.append(Check("null E-", not mm, None if not mm else mm, "<E-, E-> = 0"))
    pm = 2 * pairing(e_plus, e_minus)
    checks.append(Check("pairing normalization", pm == ONE, None if pm == ONE else pm, "2<E+, E-> = 1"))
    kills = [e for e in (e_plus, e_minus) if not phi(e).is_zero()]
    checks.append(Check("annihilates E", not kills, kills[0] if kills else None, "Phi(E+-) = 0"))
    return Report(tuple(checks))


def eigenbundle_E10(s: GenAlmostContact) -> Subspace:
    """The +i eigenspace of Phi."""
    return s.e10


def eigenbundle_E01(s: GenAlmostContact) -> Subspace:
    s.require_axioms()
    return eigenspace(s.phi.matrix, -I)


def is_isotropic(L: Subspace, frame: FrameContext) -> bool:
    basis = [frame.section(b) for b in L.basis]
    return all(not pairing(u, v) for k, u in enumerate(basis) for v in basis[k:])


def build_L(s: GenAlmostContact, sign: str | int = "+") -> Subspace:
    """``L+ = span(E+) + E^(1,0)`` or ``L- = span(E-) + E^(1,0)``."""
    if sign in ("+", 1, "plus"):
        e = s.e_plus
    elif sign in ("-", -1, "minus"):
        e = s.e_minus
    else:
        raise ValueError(f"sign must be + or -, got {sign!r}")
    E10 = s.e10
    L = Subspace(E10.ambient_dim, E10.basis + (e.coords,))
    if L.dim != s.frame.dim or not is_isotropic(L, s.frame):
        raise AxiomError("L is not maximal isotropic")
    return L


@dataclass(frozen=True)
class Involutivity:
    ok: bool
    witness: tuple[GenSection, GenSection, GenSection] | None = None

    def __bool__(self):
        return self.ok


def is_involutive(L: Subspace, frame: FrameContext, use_H: bool | None = None) -> Involutivity:
    """Courant closure of an isotropic span, checked on its basis pairs.

    On failure the witness is ``(a, b, [[a, b]])`` for the first offending pair.
    """
    if L.ambient_dim != 2 * frame.dim:
        raise FrameMismatchError("subspace does not live on this frame's big tangent space")
    if not is_isotropic(L, frame):
        raise NotIsotropicError("involutivity is only decided for isotropic spans")
    _resolve_H(frame, use_H)
    basis = [frame.section(b) for b in L.basis]
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            br = courant_bracket(basis[a], basis[b], use_H)
            if not L.contains(br.coords):
                return Involutivity(False, (basis[a], basis[b], br))
    return Involutivity(True)


class Contact(str, enum.Enum):
    NONE = "none"
    CONTACT_PLUS = "contact_plus"
    CONTACT_MINUS = "contact_minus"
    STRONG = "strong"


@dataclass(frozen=True)
class ContactClassification:
    plus: Involutivity
    minus: Involutivity

    @property
    def kind(self) -> Contact:
        if self.plus and self.minus:
            return Contact.STRONG
        if self.plus:
            return Contact.CONTACT_PLUS
        if self.minus:
            return Contact.CONTACT_MINUS
        return Contact.NONE

    @property
    def strong(self) -> bool:
        return self.kind is Contact.STRONG

    @property
    def contact(self) -> bool:
        return self.kind is not Contact.NONE


def classify_contact(s: GenAlmostContact, use_H: bool | None = None) -> ContactClassification:
    plus = is_involutive(build_L(s, "+"), s.frame, use_H)
    minus = is_involutive(build_L(s, "-"), s.frame, use_H)
    return ContactClassification(plus, minus)


def e_bracket(s: GenAlmostContact, use_H: bool | None = None) -> GenSection:
    return courant_bracket(s.e_plus, s.e_minus, use_H)


def is_normal(s: GenAlmostContact, use_H: bool | None = None) -> bool:
    return classify_contact(s, use_H).strong and e_bracket(s, use_H).is_zero()


def strong_by_generators(s: GenAlmostContact, use_H: bool | None = None) -> bool:
    """``[[L+, E10]] in E10`` and ``[[L-, E10]] in E10``, on generators."""
    E10 = s.e10
    frame = s.frame
    targets = [frame.section(b) for b in E10.basis]
    for sign in ("+", "-"):
        for a in build_L(s, sign).basis:
            u = frame.section(a)
            for v in targets:
                if not E10.contains(courant_bracket(u, v, use_H).coords):
                    return False
    return True


# --------------------------------------------------------------------------
# generalized metrics


def metric_form(G: BigOperator) -> Matrix:
    """Gram matrix of ``2<G u, v>`` in the standard basis."""
    return G.matrix.T @ _swap(G.frame.dim)


def check_metric(G: BigOperator) -> Report:
    frame = G.frame
    w = G.first_discrepancy(adjoint(G))
    checks = [Check("self-adjoint", w is None, w, "G* = G")]
    w = (G @ G).first_discrepancy(BigOperator.identity(frame))
    checks.append(Check("involution", w is None, w, "G^2 = Id"))
    form = metric_form(G)
    if not form.is_real():
        checks.append(Check("positive definite", False, "non-real", "<G., .> positive definite"))
    elif not form.is_symmetric():
        checks.append(Check("positive definite", False, "non-symmetric form", "<G., .> positive definite"))
    else:
        minors = leading_minors(form)
        ok = all(d.re > 0 for d in minors)
        checks.append(
            Check("positive definite", ok, None if ok else [str(d) for d in minors], "<G., .> positive definite")
        )
    return Report(tuple(checks))


@dataclass(frozen=True, eq=False)
class GenContactMetric:
    base: GenAlmostContact
    G: BigOperator

    def __post_init__(self):
        if self.G.frame != self.base.frame:
            raise FrameMismatchError("metric and structure live on different frames")

    @property
    def frame(self) -> FrameContext:
        return self.base.frame

    @property
    def phi(self) -> BigOperator:
        return self.base.phi

    @property
    def e_plus(self) -> GenSection:
        return self.base.e_plus

    @property
    def e_minus(self) -> GenSection:
        return self.base.e_minus

    @cached_property
    def metric(self) -> Report:
        return check_metric(self.G)

    @cached_property
    def compatible(self) -> bool:
        return check_compat(self)

    def require(self):
        self.base.require_axioms()
        if not self.metric.ok:
            raise AxiomError("G is not a generalized metric", self.metric)
        if not self.compatible:
            raise AxiomError("G is not compatible with (Phi, E+-)")

    @cached_property
    def gphi(self) -> GenAlmostContact:
        return compose_GPhi(self)


def compat_residual(s: GenContactMetric) -> BigOperator:
    """``-Phi G Phi - (G - E+ (x) E+ - E- (x) E-)``; zero iff compatible."""
    lhs = -(s.phi @ s.G @ s.phi)
    rhs = s.G - outer(s.e_plus, s.e_plus) - outer(s.e_minus, s.e_minus)
    return lhs - rhs


def check_compat(s: GenContactMetric) -> bool:
    return compat_residual(s).matrix.is_zero()


def metric_identities(s: GenContactMetric) -> Report:
    G, phi = s.G, s.phi
    checks = []
    gp, gm = G(s.e_plus), G(s.e_minus)
    checks.append(Check("G(E+) = E-", gp == s.e_minus, None if gp == s.e_minus else gp))
    checks.append(Check("G(E-) = E+", gm == s.e_plus, None if gm == s.e_plus else gm))
    w = (G @ phi).first_discrepancy(phi @ G)
    checks.append(Check("G Phi = Phi G", w is None, w))
    E10 = s.base.e10
    image = Subspace(E10.ambient_dim, [G.matrix.apply(b) for b in E10.basis])
    checks.append(Check("G(E10) = E10", image == E10, None if image == E10 else image))
    return Report(tuple(checks))


def compose_GPhi(s: GenContactMetric) -> GenAlmostContact:
    """``(G Phi, G E+, G E-)``, i.e. ``(G Phi, E-, E+)`` for compatible input."""
    s.require()
    return GenAlmostContact(s.G @ s.phi, s.G(s.e_plus), s.G(s.e_minus))


def is_cokahler(s: GenContactMetric, use_H: bool | None = None) -> bool:
    s.require()
    if not is_normal(s.base, use_H):
        return False
    other = s.gphi
    if not classify_contact(other, use_H).strong:
        return False
    # implied by the normality of Phi since G swaps E+ and E-
    assert e_bracket(other, use_H).is_zero()
    return True


# --------------------------------------------------------------------------
# generalized complex and Kähler


@dataclass(frozen=True)
class GcxResult:
    status: str  # "invalid" | "almost" | "integrable"
    checks: Report
    witness: tuple[GenSection, GenSection, GenSection] | None = None
    eigenbundle: Subspace | None = None

    @property
    def integrable(self) -> bool:
        return self.status == "integrable"


def check_gcx(J: BigOperator, use_H: bool | None = None) -> GcxResult:
    frame = J.frame
    w1 = (J + adjoint(J)).first_discrepancy(BigOperator.zero(frame))
    w2 = (J @ J).first_discrepancy(-BigOperator.identity(frame))
    checks = Report((Check("skew", w1 is None, w1, "J + J* = 0"), Check("square", w2 is None, w2, "J^2 = -Id")))
    if not checks.ok:
        return GcxResult("invalid", checks)
    L = eigenspace(J.matrix, I)
    inv = is_involutive(L, frame, use_H)
    return GcxResult("integrable" if inv else "almost", checks, inv.witness, L)


@dataclass(frozen=True)
class GKReport:
    first: GcxResult
    second: GcxResult
    commuting: bool
    metric: Report
    commutator_witness: GenSection | None = None

    @property
    def generalized_kahler(self) -> bool:
        return self.first.integrable and self.second.integrable and self.commuting and self.metric.ok


def is_generalized_kahler(J1: BigOperator, J2: BigOperator, use_H: bool | None = None) -> GKReport:
    J1._check(J2)
    first = check_gcx(J1, use_H)
    second = check_gcx(J2, use_H)
    w = (J1 @ J2).first_discrepancy(J2 @ J1)
    metric = check_metric(-(J1 @ J2))
    return GKReport(first, second, w is None, metric, w)


# --------------------------------------------------------------------------
# B-field transforms


def bfield_operator(frame: FrameContext, B: InvariantForm) -> BigOperator:
    """``e^B : X + a -> X + a + i_X B``; refuses a non-closed B."""
    if B.degree != 2 or B.dim != frame.dim:
        raise ValueError("B must be a 2-form on this frame")
    dB = exterior_derivative(frame, B)
    if not dB.is_zero():
        raise NotClosedError("B is not closed", dB)
    return BigOperator.from_blocks(
        frame, Matrix.identity(frame.dim), None, B.flat(), Matrix.identity(frame.dim)
    )


def bfield(B: InvariantForm, target):
    """Transform a section, operator, or structure by ``e^B``."""
    if isinstance(target, GenSection):
        return bfield_operator(target.frame, B)(target)
    if isinstance(target, BigOperator):
        eB = bfield_operator(target.frame, B)
        emB = bfield_operator(target.frame, -B)
        return eB @ target @ emB
    if isinstance(target, GenAlmostContact):
        return GenAlmostContact(bfield(B, target.phi), bfield(B, target.e_plus), bfield(B, target.e_minus))
    if isinstance(target, GenContactMetric):
        return GenContactMetric(bfield(B, target.base), bfield(B, target.G))
    if isinstance(target, tuple):
        return tuple(bfield(B, t) for t in target)
    raise TypeError(f"cannot B-transform {type(target).__name__}")


def _or(m: Matrix | None, default: Matrix) -> Matrix:
    return default if m is None else m
