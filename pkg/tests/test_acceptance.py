"""Acceptance gate: exact regressions and exhaustive property checks.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion.
"""

import random
import time
from contextlib import contextmanager
from fractions import Fraction
from itertools import combinations

import pytest

from gencok.catalog import catalog_get, catalog_list, heisenberg_frame, su2_frame
from gencok.constructions import (
    ClassicalACM,
    ClassicalComplex,
    cokahler_triple,
    compatibility_identity_holds,
    gac_from_acm,
    gcx_from_complex,
    morimoto_J,
    phi_omega,
    product_J1,
    product_J2,
    swap_labels,
)
from gencok.exactalg import I, Matrix, Scalar, Subspace, leading_minors
from gencok.frame import (
    FrameContext,
    GenSection,
    InvariantForm,
    check_frame,
    closed_forms,
    courant_bracket,
    exterior_derivative,
    product_context,
)
from gencok.structures import (
    BigOperator,
    GenAlmostContact,
    bfield,
    build_L,
    check_compat,
    check_gac,
    check_gcx,
    classify_contact,
    e_bracket,
    is_cokahler,
    is_generalized_kahler,
    is_normal,
    metric_identities,
    strong_by_generators,
    metric_form,
)

criterion = pytest.mark.criterion


@contextmanager
def within(seconds: float):
    t0 = time.perf_counter()
    yield
    elapsed = time.perf_counter() - t0
    assert elapsed < seconds, f"took {elapsed:.3f}s, budget {seconds}s"


def acm3(frame):
    rot = Matrix([[0, -1, 0], [1, 0, 0], [0, 0, 0]])
    return ClassicalACM(frame, rot, (0, 0, 1), (0, 0, 1), Matrix.identity(3))


def s1_acm():
    return ClassicalACM(FrameContext.abelian(1, "S1"), Matrix([[0]]), (1,), (1,), Matrix.identity(1))


def span(frame, *secs):
    return Subspace(2 * frame.dim, [s.coords for s in secs])


def metric_triples():
    """Every catalog entry that is (or yields) a generalized contact metric structure."""
    out = []
    for i, _ in catalog_list():
        e = catalog_get(i)
        if e.kind == "gacm":
            out.append((i, e.payload))
        elif e.kind == "classical_acm":
            out.append((i, cokahler_triple(e.payload)))
    return out


# ---------------------------------------------------------------------------
# 1


@criterion(1, "su(2) normal structure: eigenbundles, brackets, strong/normal, G Phi witness -X3")
def test_su2_regression():
    with within(1.0):
        f = su2_frame()
        t = cokahler_triple(acm3(f))
        s = t.base
        X1, X2, X3 = f.X(1), f.X(2), f.X(3)
        s1, s2, s3 = f.sigma(1), f.sigma(2), f.sigma(3)
        assert s.e10 == span(f, X1 - X2 * I, s1 - s2 * I)
        assert build_L(s, "+") == span(f, X3, X1 - X2 * I, s1 - s2 * I)
        assert build_L(s, "-") == span(f, s3, X1 - X2 * I, s1 - s2 * I)
        assert courant_bracket(X1 - X2 * I, s1 - s2 * I).is_zero()
        assert e_bracket(s).is_zero()
        assert classify_contact(s).strong and is_normal(s)

        g = t.gphi
        Lg = build_L(g, "+")
        assert Lg == span(f, s3, X1 - s2 * I, X2 + s1 * I)
        br = courant_bracket(X1 - s2 * I, X2 + s1 * I)
        assert br == -X3
        assert not Lg.contains(br.coords)
        assert classify_contact(g).plus.witness == (X1 - s2 * I, X2 + s1 * I, -X3)
        assert not is_cokahler(t)


# ---------------------------------------------------------------------------
# 2


@criterion(2, "su(2) with H = s1^s2^s3: Phi strong, G Phi not, not twisted coKähler")
def test_su2_twisted():
    with within(1.0):
        f = su2_frame(H=True)
        t = cokahler_triple(acm3(f))
        assert classify_contact(t.base, use_H=True).strong
        assert not classify_contact(t.gphi, use_H=True).strong
        assert not is_cokahler(t, use_H=True)


# ---------------------------------------------------------------------------
# 3


@criterion(3, "coKähler x coKähler gives generalized Kähler with G = -J1 J2 positive definite")
@pytest.mark.parametrize("left", ["t3_cokahler_classical", "s1_trivial"])
def test_product_forward(left):
    a = catalog_get(left).payload
    with within(1.0):
        t1 = cokahler_triple(a) if isinstance(a, ClassicalACM) else a
        t2 = cokahler_triple(s1_acm())
        pc = product_context(t1.frame, t2.frame)
        J1 = product_J1(t1.base, t2.base, pc)
        J2, _ = product_J2(t1, t2, pc)
        rep = is_generalized_kahler(J1, J2)
        assert rep.generalized_kahler
        minors = leading_minors(metric_form(-(J1 @ J2)))
        assert all(m.is_real and m.re > 0 for m in minors)


# ---------------------------------------------------------------------------
# 4


@criterion(4, "su(2) x S^1: J1 integrable, J2 not, witness (-X3, 0), verdict false")
def test_product_reverse():
    f = su2_frame()
    t1, t2 = cokahler_triple(acm3(f)), cokahler_triple(s1_acm())
    pc = product_context(t1.frame, t2.frame)
    J1 = product_J1(t1.base, t2.base, pc)
    J2, _ = product_J2(t1, t2, pc)
    rep = is_generalized_kahler(J1, J2)
    assert rep.first.integrable
    assert not rep.second.integrable
    zero = t2.frame.zero_section()
    assert pc.split(rep.second.witness[2]) == (-f.X(3), zero)
    assert not rep.generalized_kahler


# ---------------------------------------------------------------------------
# 5


@criterion(5, "J1 integrable iff both factors strong with vanishing [[E+, E-]], over all catalog pairs")
def test_product_biconditional():
    triples = metric_triples()
    seen = {True: 0, False: 0}
    with within(5.0):
        for (_, a) in triples:
            for (_, b) in triples:
                pc = product_context(a.frame, b.frame)
                J1 = product_J1(a.base, b.base, pc)
                lhs = check_gcx(J1).integrable
                rhs = all(classify_contact(t.base).strong and e_bracket(t.base).is_zero() for t in (a, b))
                assert lhs == rhs
                seen[lhs] += 1
    assert sum(seen.values()) >= 6 and seen[True] and seen[False]


# ---------------------------------------------------------------------------
# 6


def random_closed_b(frame: FrameContext, rng: random.Random) -> InvariantForm:
    B = InvariantForm.zero(frame.dim, 2)
    for w in closed_forms(frame, 2):
        B = B + w * Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return B


@criterion(6, "metric identities (G E+- = E-+, G Phi = Phi G, G E10 = E10) on catalog triples and B-transforms")
def test_metric_lemma_and_bfields():
    rng = random.Random(20240611)
    variants = 0
    for name, t in metric_triples():
        assert t.compatible, name
        assert metric_identities(t).ok, name
        flags = (classify_contact(t.base).strong, classify_contact(t.gphi).strong)
        for _ in range(3):
            B = random_closed_b(t.frame, rng)
            assert exterior_derivative(t.frame, B).is_zero()
            u = bfield(B, t)
            assert check_gac(u.phi, u.e_plus, u.e_minus).ok
            assert check_compat(u)
            assert metric_identities(u).ok
            assert (classify_contact(u.base).strong, classify_contact(u.gphi).strong) == flags
            variants += 1
    assert variants >= 20


# ---------------------------------------------------------------------------
# 7


def retwist(s: GenAlmostContact, frame: FrameContext) -> GenAlmostContact:
    return GenAlmostContact(
        BigOperator(frame, s.phi.matrix),
        GenSection(frame, s.e_plus.vec, s.e_plus.form),
        GenSection(frame, s.e_minus.vec, s.e_minus.form),
    )


@criterion(7, "bracket-generator test for strong agrees with the classifier, twisted and untwisted")
def test_generator_criterion_for_strong():
    cases = 0
    for name, t in metric_triples():
        for s in (t.base, t.gphi):
            variants = [(s, False)]
            if s.frame.H is not None:
                variants.append((s, True))
            elif s.frame.dim == 3:
                variants.append((retwist(s, s.frame.with_H(s.frame.form(1, 2, 3))), True))
            for v, use_H in variants:
                assert strong_by_generators(v, use_H) == classify_contact(v, use_H).strong, name
                cases += 1
    assert cases >= 20


# ---------------------------------------------------------------------------
# 8


@criterion(8, "flat coKähler T^3: compatibility identity, G Phi_phi = Phi_Omega, generalized coKähler")
def test_t3_cokahler():
    a = catalog_get("t3_cokahler_classical").payload
    assert compatibility_identity_holds(a)
    t = cokahler_triple(a)
    assert check_compat(t)
    assert t.G @ t.phi == phi_omega(a)
    assert is_cokahler(t)


# ---------------------------------------------------------------------------
# 9


@criterion(9, "Morimoto J lifted to the big tangent space equals the product J1, entry for entry")
@pytest.mark.parametrize("left", ["trivial", "su2"])
def test_morimoto_consistency(left):
    a = s1_acm() if left == "trivial" else acm3(su2_frame())
    b = s1_acm()
    pc = product_context(a.frame, b.frame)
    J = morimoto_J(a, b)
    lifted = gcx_from_complex(ClassicalComplex(pc.frame, -J))
    J1 = product_J1(gac_from_acm(a), swap_labels(gac_from_acm(b)), pc)
    assert lifted.matrix.tolist() == J1.matrix.tolist()


# ---------------------------------------------------------------------------
# 10


def random_frame(rng: random.Random, dim: int) -> FrameContext:
    consts = {}
    for i, j in combinations(range(dim), 2):
        for k in range(dim):
            if rng.random() < 0.3:
                consts[(i, j, k)] = rng.choice((-1, 1, 2))
    return FrameContext(dim, consts, "random")


def random_section(frame: FrameContext, rng: random.Random) -> GenSection:
    def sc():
        return Scalar(Fraction(rng.randint(-5, 5), rng.randint(1, 4)), Fraction(rng.randint(-5, 5), rng.randint(1, 4)))

    return GenSection(frame, [sc() for _ in range(frame.dim)], [sc() for _ in range(frame.dim)])


@criterion(10, "d^2 = 0 iff Jacobi; Courant antisymmetry and product block identity on random sections")
def test_calculus_oracles():
    rng = random.Random(7)
    with within(5.0):
        frames = [
            su2_frame(),
            heisenberg_frame(),
            FrameContext.abelian(3),
            FrameContext(3, {(0, 1, 2): 1, (1, 2, 1): 1}, "broken"),
        ] + [random_frame(rng, rng.choice((3, 4))) for _ in range(12)]
        outcomes = set()
        for f in frames:
            d2_zero = all(
                exterior_derivative(f, exterior_derivative(f, f.form(k))).is_zero() for k in range(1, f.dim + 1)
            )
            jacobi = not check_frame(f).jacobi_violations
            assert d2_zero == jacobi
            outcomes.add(jacobi)
        assert outcomes == {True, False}

        for f in (su2_frame(), su2_frame(H=True), heisenberg_frame()):
            for _ in range(100):
                u, v = random_section(f, rng), random_section(f, rng)
                assert courant_bracket(u, v) == -courant_bracket(v, u)

        pairs = [
            (su2_frame(H=True), FrameContext.abelian(1)),
            (heisenberg_frame(), su2_frame(H=True)),
        ]
        for f1, f2 in pairs:
            pc = product_context(f1, f2)
            for _ in range(100):
                a, c = random_section(f1, rng), random_section(f1, rng)
                b, d = random_section(f2, rng), random_section(f2, rng)
                lhs = courant_bracket(pc.pair(a, b), pc.pair(c, d))
                assert pc.split(lhs) == (courant_bracket(a, c), courant_bracket(b, d))
