from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gencok.exactalg import (
    I,
    ONE,
    ZERO,
    Matrix,
    Scalar,
    SingularMatrixError,
    Subspace,
    eigenspace,
    inverse,
    is_positive_definite,
    kernel,
    leading_minors,
    parse_scalar,
    rref,
)

from strategies import matrices, scalars


@pytest.mark.parametrize(
    "text, re, im",
    [
        ("3", 3, 0),
        ("-2/6", Fraction(-1, 3), 0),
        ("1/2+3/4 i", Fraction(1, 2), Fraction(3, 4)),
        ("0+1 i", 0, 1),
        ("i", 0, 1),
        ("-i", 0, -1),
        ("5i", 0, 5),
        ("-2/3 i", 0, Fraction(-2, 3)),
        ("1-1 i", 1, -1),
        ("7/2-i", Fraction(7, 2), -1),
    ],
)
def test_parse_scalar(text, re, im):
    assert parse_scalar(text) == Scalar(re, im)


@pytest.mark.parametrize("bad", ["", "1.5", "abc", "1+", "i i", "1/0x"])
def test_parse_scalar_rejects(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_scalar(bad)


def test_floats_refused():
    with pytest.raises(TypeError):
        Scalar(0.5)


def test_i_squared():
    assert I * I == -ONE
    assert (ONE + I) * (ONE - I) == Scalar(2)
    assert (ONE + I).inverse() == Scalar(Fraction(1, 2), Fraction(-1, 2))


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


@given(scalars())
def test_text_round_trip(x):
    assert parse_scalar(str(x)) == x
    assert hash(parse_scalar(str(x))) == hash(x)


@given(scalars(), scalars(), scalars())
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    if b:
        assert (a / b) * b == a


def test_scalar_equals_python_numbers():
    assert Scalar(3) == 3
    assert Scalar(Fraction(1, 2)) == Fraction(1, 2)
    assert Scalar(0, 1) != 1


def test_rref_known():
    m = Matrix([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    rank, r = rref(m)
    assert rank == 2
    assert r.row(0) == (1, 0, 1) and r.row(1) == (0, 1, 1)
    assert all(x == 0 for x in r.row(2))


def test_inverse_and_singular():
    m = Matrix([[0, -1], [1, 0]])
    assert inverse(m) == Matrix([[0, 1], [-1, 0]])
    with pytest.raises(SingularMatrixError):
        inverse(Matrix([[1, 2], [2, 4]]))


@settings(max_examples=40)
@given(matrices(3))
def test_inverse_property(m):
    try:
        inv = inverse(m)
    except SingularMatrixError:
        assert rref(m)[0] < 3
    else:
        assert m @ inv == Matrix.identity(3)


@settings(max_examples=40)
@given(matrices(4))
def test_kernel_is_annihilated(m):
    K = kernel(m)
    assert K.dim + rref(m)[0] == 4
    for v in K.basis:
        assert all(x == 0 for x in m.apply(v))


def test_eigenspace_of_rotation():
    J = Matrix([[0, -1], [1, 0]])
    E = eigenspace(J, I)
    assert E.dim == 1
    assert E.contains((1, -I))
    assert not E.contains((1, I))


def test_subspace_canonical_equality():
    a = Subspace(3, [(1, 1, 0), (0, 1, 1)])
    b = Subspace(3, [(1, 2, 1), (1, 0, -1)])
    assert a == b and hash(a) == hash(b)
    assert a.issubset(a + Subspace(3, [(0, 0, 1)]))
    assert (0, 0, 1) not in a


def test_positive_definite():
    assert is_positive_definite(Matrix([[2, 1], [1, 2]]))
    assert not is_positive_definite(Matrix([[1, 2], [2, 1]]))
    assert leading_minors(Matrix([[2, 1], [1, 2]])) == [2, 3]
    with pytest.raises(ValueError):
        is_positive_definite(Matrix([[1, 2], [0, 1]]))
    with pytest.raises(ValueError):
        is_positive_definite(Matrix([[1, I], [-I, 1]]))


@given(st.integers(1, 4), st.integers(-3, 3))
def test_identity_scaled_pd(n, c):
    assert is_positive_definite(Matrix.identity(n) * c) == (c > 0)


def test_matrix_blocks():
    a = Matrix([[1]])
    z = Matrix.zeros(1)
    m = Matrix.from_blocks([[a, z], [z, a * 2]])
    assert m == Matrix.diagonal([1, 2])
    assert m.block(1, 2, 1, 2) == Matrix([[2]])
    assert Matrix.outer((1, 2), (3, 4)) == Matrix([[3, 4], [6, 8]])
