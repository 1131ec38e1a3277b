"""Classical tensors, their generalized images, and product constructions.

Classical data live on the same invariant frames as generalized data.  A
vector is a tuple of frame coordinates, a 1-form a tuple of coframe
coordinates, and an endomorphism of T an n x n Matrix acting on columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .exactalg import I, ONE, ZERO, Matrix, SingularMatrixError, as_scalar, inverse, is_positive_definite
from .frame import (
    FrameContext,
    GenSection,
    InvariantForm,
    ProductContext,
    exterior_derivative,
    interior_product,
    lie_bracket,
    product_context,
)
from .structures import (
    AxiomError,
    BigOperator,
    Check,
    GenAlmostContact,
    GenContactMetric,
    Report,
    is_cokahler,
    is_generalized_kahler,
)

__all__ = [
    "ContactFormError",
    "PreconditionError",
    "ClassicalACM",
    "ClassicalComplex",
    "ClassicalSymplectic",
    "check_acm",
    "fundamental_form",
    "nijenhuis",
    "nijenhuis_normal",
    "is_classical_cokahler",
    "gac_from_acm",
    "gac_from_contact",
    "swap_labels",
    "gcx_from_complex",
    "gcx_from_symplectic",
    "metric_operator",
    "compatibility_identity_holds",
    "phi_omega",
    "cokahler_triple",
    "morimoto_J",
    "morimoto_embedding",
    "product_J1",
    "product_metric",
    "product_J2",
    "product_gk_gcok",
]


class ContactFormError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


def _vec(v) -> tuple:
    return tuple(as_scalar(x) for x in v)


def _dot(a, b):
    acc = ZERO
    for x, y in zip(a, b):
        if x and y:
            acc = acc + x * y
    return acc


@dataclass(frozen=True, eq=False)
class ClassicalACM:
    """Almost contact metric data ``(phi, xi, eta, g)`` on an invariant frame."""

    frame: FrameContext
    phi: Matrix
    xi: tuple
    eta: tuple
    g: Matrix

    def __post_init__(self):
        n = self.frame.dim
        object.__setattr__(self, "xi", _vec(self.xi))
        object.__setattr__(self, "eta", _vec(self.eta))
        if self.phi.shape != (n, n) or self.g.shape != (n, n) or len(self.xi) != n or len(self.eta) != n:
            raise ValueError("classical data do not match the frame dimension")

    @cached_property
    def axioms(self) -> Report:
        return check_acm(self)

    def require(self):
        if not self.axioms.ok:
            names = ", ".join(c.name for c in self.axioms.failures())
            raise AxiomError(f"almost contact metric axioms fail: {names}", self.axioms)

    @property
    def d_eta(self) -> InvariantForm:
        return exterior_derivative(self.frame, InvariantForm.from_vector(self.eta))


@dataclass(frozen=True, eq=False)
class ClassicalComplex:
    frame: FrameContext
    J: Matrix


@dataclass(frozen=True, eq=False)
class ClassicalSymplectic:
    frame: FrameContext
    omega: InvariantForm


def check_acm(a: ClassicalACM) -> Report:
    n = a.frame.dim
    checks = []
    xi_eta = Matrix.outer(a.xi, a.eta)  # X -> eta(X) xi
    sq = a.phi @ a.phi
    ok = sq == -Matrix.identity(n) + xi_eta
    checks.append(Check("phi^2 = -I + xi (x) eta", ok, None if ok else sq))
    e = _dot(a.eta, a.xi)
    checks.append(Check("eta(xi) = 1", e == ONE, None if e == ONE else e))
    g = a.g
    if g.is_real() and g.is_symmetric():
        pd = is_positive_definite(g)
        checks.append(Check("g positive definite", pd))
    else:
        checks.append(Check("g positive definite", False, "g must be real symmetric"))
    lhs = a.phi.T @ g @ a.phi
    rhs = g - Matrix.outer(a.eta, a.eta)
    checks.append(Check("g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)", lhs == rhs))
    return Report(tuple(checks))


def fundamental_form(a: ClassicalACM) -> InvariantForm:
    """``Omega(X, Y) = g(X, phi Y)``."""
    a.require()
    m = a.g @ a.phi
    return InvariantForm.from_matrix(m)


def nijenhuis(frame: FrameContext, phi: Matrix, X, Y) -> tuple:
    """``N(X, Y) = [pX, pY] + p^2[X, Y] - p[X, pY] - p[pX, Y]``."""
    px, py = phi.apply(X), phi.apply(Y)
    br = lie_bracket(frame, X, Y)
    terms = [
        lie_bracket(frame, px, py),
        phi.apply(phi.apply(br)),
        tuple(-c for c in phi.apply(lie_bracket(frame, X, py))),
        tuple(-c for c in phi.apply(lie_bracket(frame, px, Y))),
    ]
    return tuple(sum(cs, ZERO) for cs in zip(*terms))


def nijenhuis_normal(a: ClassicalACM) -> bool:
    """Normality ``N_phi + d eta (x) xi = 0`` on all frame pairs.

    ``d`` here is the package's exterior derivative (no 1/2 in
    ``d eta(X, Y) = X eta(Y) - Y eta(X) - eta([X, Y])``); in the convention
    carrying that 1/2 the same condition reads ``N_phi = -2 xi (x) d eta``.
    """
    n = a.frame.dim
    deta = a.d_eta
    for i in range(n):
        for j in range(i + 1, n):
            ei = tuple(ONE if k == i else ZERO for k in range(n))
            ej = tuple(ONE if k == j else ZERO for k in range(n))
            N = nijenhuis(a.frame, a.phi, ei, ej)
            c = deta.coeffs.get((i, j), ZERO)
            if any(N[k] + c * a.xi[k] for k in range(n)):
                return False
    return True


def is_classical_cokahler(a: ClassicalACM) -> bool:
    a.require()
    return (
        nijenhuis_normal(a)
        and a.d_eta.is_zero()
        and exterior_derivative(a.frame, fundamental_form(a)).is_zero()
    )


def gac_from_acm(a: ClassicalACM) -> GenAlmostContact:
    """``Phi = diag(phi, -phi*)``, ``E+ = xi``, ``E- = eta``."""
    n = a.frame.dim
    if not a.axioms["phi^2 = -I + xi (x) eta"].passed or not a.axioms["eta(xi) = 1"].passed:
        raise AxiomError("almost contact axioms fail", a.axioms)
    phi_op = BigOperator.from_blocks(a.frame, a.phi, None, None, -a.phi.T)
    zero = (ZERO,) * n
    return GenAlmostContact(phi_op, GenSection(a.frame, a.xi, zero), GenSection(a.frame, zero, a.eta))


def swap_labels(s: GenAlmostContact) -> GenAlmostContact:
    """``(Phi, E-, E+)``: the same structure with the roles of E+ and E- exchanged."""
    return GenAlmostContact(s.phi, s.e_minus, s.e_plus)


def gac_from_contact(frame: FrameContext, eta, xi) -> GenAlmostContact:
    """Generalized almost contact structure of a contact form with Reeb field xi.

    ``rho(X) = i_X d eta - eta(X) eta``, ``pi(a, b) = d eta(rho^-1 a, rho^-1 b)``,
    ``Phi = [[0, pi#], [d eta_flat, 0]]``, ``E+ = eta``, ``E- = xi``, where
    ``pi#(a) = pi(a, .)`` and ``d eta_flat(X) = i_X d eta``.
    """
    n = frame.dim
    eta, xi = _vec(eta), _vec(xi)
    if _dot(eta, xi) != ONE:
        raise ContactFormError("eta(xi) != 1")
    deta = exterior_derivative(frame, InvariantForm.from_vector(eta))
    if not interior_product(xi, deta).is_zero():
        raise ContactFormError("i_xi d eta != 0")
    flat = deta.flat()
    rho = flat - Matrix.outer(eta, eta)
    try:
        rho_inv = inverse(rho)
    except SingularMatrixError:
        raise ContactFormError("rho is singular: eta is not a contact form") from None
    W = deta.to_matrix()
    pi = rho_inv.T @ W @ rho_inv  # pi[a, b] = pi(s^a, s^b)
    phi = BigOperator.from_blocks(frame, None, pi.T, flat, None)
    zero = (ZERO,) * n
    return GenAlmostContact(phi, GenSection(frame, zero, eta), GenSection(frame, xi, zero))


def gcx_from_complex(c: ClassicalComplex) -> BigOperator:
    """``J_J = diag(-J, J*)``."""
    n = c.frame.dim
    if c.J @ c.J != -Matrix.identity(n):
        raise AxiomError("J^2 != -Id")
    return BigOperator.from_blocks(c.frame, -c.J, None, None, c.J.T)


def gcx_from_symplectic(s: ClassicalSymplectic) -> BigOperator:
    """``J_w = [[0, -w^-1], [w, 0]]`` with ``w : X -> i_X w``."""
    if s.omega.degree != 2:
        raise ValueError("omega must be a 2-form")
    if not exterior_derivative(s.frame, s.omega).is_zero():
        raise AxiomError("omega is not closed")
    w = s.omega.flat()
    try:
        w_inv = inverse(w)
    except SingularMatrixError:
        raise AxiomError("omega is degenerate") from None
    return BigOperator.from_blocks(s.frame, None, -w_inv, w, None)


def metric_operator(frame: FrameContext, g: Matrix) -> BigOperator:
    """``G = [[0, g^-1], [g, 0]]``."""
    return BigOperator.from_blocks(frame, None, inverse(g), g, None)


def compatibility_identity_holds(a: ClassicalACM) -> bool:
    """Block form of compatibility for ``(diag(phi, -phi*), xi, eta, [[0, g^-1], [g, 0]])``.

    ``phi g^-1 phi* a + phi* g phi X = g^-1 a + g X - a(xi) xi - eta(X) eta``,
    i.e. ``phi g^-1 phi^T = g^-1 - xi xi^T`` and ``phi^T g phi = g - eta eta^T``.
    """
    ginv = inverse(a.g)
    upper = a.phi @ ginv @ a.phi.T == ginv - Matrix.outer(a.xi, a.xi)
    lower = a.phi.T @ a.g @ a.phi == a.g - Matrix.outer(a.eta, a.eta)
    return upper and lower


def phi_omega(a: ClassicalACM) -> BigOperator:
    """``[[0, pi#], [Omega_flat, 0]]`` built from the fundamental form.

    ``Omega_flat(X) = Omega(., X)`` (matrix ``Omega(X_i, X_j)``) and
    ``pi# = g^-1 Omega_flat g^-1``.
    """
    om = fundamental_form(a).to_matrix()
    ginv = inverse(a.g)
    return BigOperator.from_blocks(a.frame, None, ginv @ om @ ginv, om, None)


def cokahler_triple(a: ClassicalACM) -> GenContactMetric:
    a.require()
    if not compatibility_identity_holds(a):
        raise AxiomError("compatibility identity fails")
    t = GenContactMetric(gac_from_acm(a), metric_operator(a.frame, a.g))
    assert t.G @ t.phi == phi_omega(a)
    return t


# --------------------------------------------------------------------------
# products


def morimoto_J(a1: ClassicalACM, a2: ClassicalACM) -> Matrix:
    """``J(X, Y) = (phi1 X - eta2(Y) xi1, phi2 Y + eta1(X) xi2)`` on T(M1 x M2)."""
    a1.require()
    a2.require()
    J = Matrix.from_blocks(
        [
            [a1.phi, -Matrix.outer(a1.xi, a2.eta)],
            [Matrix.outer(a2.xi, a1.eta), a2.phi],
        ]
    )
    if J @ J != -Matrix.identity(J.rows):
        raise AxiomError("Morimoto J does not square to -Id")
    return J


def morimoto_embedding(pc: ProductContext, J: Matrix) -> BigOperator:
    """``diag(J, -J*)``: the lift of a tangent endomorphism to the big tangent space."""
    return BigOperator.from_blocks(pc.frame, J, None, None, -J.T)


def _cross(A, B) -> Matrix:
    """Matrix of ``u -> 2<B, u> A`` from B's factor into A's."""
    return Matrix.outer(A.coords, B.form + B.vec)


def product_J1(s1: GenAlmostContact, s2: GenAlmostContact, pc: ProductContext | None = None) -> BigOperator:
    """The generalized almost complex structure induced on M1 x M2.

    ``J(u1, u2) = (Phi1 u1 - 2<E+2, u2> E+1 - 2<E-2, u2> E-1,
    Phi2 u2 + 2<E+1, u1> E+2 + 2<E-1, u1> E-2)``.
    """
    s1.require_axioms()
    s2.require_axioms()
    pc = pc or product_context(s1.frame, s2.frame)
    upper = -(_cross(s1.e_plus, s2.e_plus) + _cross(s1.e_minus, s2.e_minus))
    lower = _cross(s2.e_plus, s1.e_plus) + _cross(s2.e_minus, s1.e_minus)
    return BigOperator(pc.frame, pc.assemble([[s1.phi.matrix, upper], [lower, s2.phi.matrix]]))


def product_metric(G1: BigOperator, G2: BigOperator, pc: ProductContext | None = None) -> BigOperator:
    pc = pc or product_context(G1.frame, G2.frame)
    return BigOperator(pc.frame, pc.assemble([[G1.matrix, None], [None, G2.matrix]]))


def product_J2(t1: GenContactMetric, t2: GenContactMetric, pc: ProductContext | None = None):
    """``J2 = G J1`` and the four generator families of its +i eigenspace.

    Generators: ``(E10(G1 Phi1), 0)``, ``(0, E10(G2 Phi2))``,
    ``(E+1, -i E+2)`` and ``(E-1, -i E-2)``.
    """
    t1.require()
    t2.require()
    pc = pc or product_context(t1.frame, t2.frame)
    J1 = product_J1(t1.base, t2.base, pc)
    J2 = product_metric(t1.G, t2.G, pc) @ J1
    gens = []
    for b in t1.gphi.e10.basis:
        gens.append(pc.embed(t1.frame.section(b), 0))
    for b in t2.gphi.e10.basis:
        gens.append(pc.embed(t2.frame.section(b), 1))
    gens.append(pc.pair(t1.e_plus, t2.e_plus * (-I)))
    gens.append(pc.pair(t1.e_minus, t2.e_minus * (-I)))
    return J2, gens


def product_gk_gcok(
    J1: BigOperator, J2: BigOperator, t: GenContactMetric, use_H: bool | None = None
) -> GenContactMetric:
    """Generalized coKähler structure on M x N from a GK pair on M and a coKähler N.

    ``Phi = (J1, Phi_N)``, ``E+- = (0, E_N+-)``, ``G = G_M x G_N`` with
    ``G_M = -J1 J2``.
    """
    if not is_generalized_kahler(J1, J2, use_H).generalized_kahler:
        raise PreconditionError("(J1, J2) is not generalized Kähler")
    if not is_cokahler(t, use_H):
        raise PreconditionError("the odd factor is not generalized coKähler")
    pc = product_context(J1.frame, t.frame)
    GM = -(J1 @ J2)
    phi = BigOperator(pc.frame, pc.assemble([[J1.matrix, None], [None, t.phi.matrix]]))
    zero_M = J1.frame.zero_section()
    return GenContactMetric(
        GenAlmostContact(phi, pc.pair(zero_M, t.e_plus), pc.pair(zero_M, t.e_minus)),
        product_metric(GM, t.G, pc),
    )
