"""Exact arithmetic over the Gaussian rationals Q(i) and dense linear algebra.

Everything downstream reduces to a handful of operations here: reduced
row-echelon form, kernels, eigenspaces for the eigenvalues 0 and +-i, subspace
membership, and Sylvester's criterion.  No floating point is involved anywhere.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from ._backend import Rational

__all__ = [
    "Scalar",
    "ZERO",
    "ONE",
    "I",
    "as_scalar",
    "parse_scalar",
    "Matrix",
    "Subspace",
    "SingularMatrixError",
    "rref",
    "kernel",
    "eigenspace",
    "inverse",
    "subspace_contains",
    "leading_minors",
    "is_positive_definite",
]


def _q(x) -> Rational:
    if isinstance(x, Rational):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, a fraction or a string")
    if isinstance(x, str):
        return Rational(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, int):
        return Rational(int(x.numerator), int(x.denominator))
    return Rational(x)


class Scalar:
    """A Gaussian rational ``re + im*i``.  Immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, Scalar):
            if im:
                raise TypeError("cannot combine a Scalar real part with an imaginary part")
            re, im = re.re, re.im
        object.__setattr__(self, "re", _q(re))
        object.__setattr__(self, "im", _q(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def _mk(cls, re, im) -> "Scalar":
        s = object.__new__(cls)
        object.__setattr__(s, "re", re)
        object.__setattr__(s, "im", im)
        return s

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = as_scalar(other)
        return Scalar._mk(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = as_scalar(other)
        return Scalar._mk(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return as_scalar(other) - self

    def __neg__(self):
        return Scalar._mk(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            try:
                o = as_scalar(other)
            except TypeError:
                return NotImplemented
        else:
            o = other
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return Scalar._mk(a * c, b)
        return Scalar._mk(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        a, b = self.re, self.im
        if not b:
            if not a:
                raise ZeroDivisionError("inverse of zero")
            return Scalar._mk(1 / a, b)
        n = a * a + b * b
        return Scalar._mk(a / n, -b / n)

    def __truediv__(self, other):
        return self * as_scalar(other).inverse()

    def __rtruediv__(self, other):
        return as_scalar(other) * self.inverse()

    def conjugate(self) -> "Scalar":
        return Scalar._mk(self.re, -self.im)

    # comparisons ----------------------------------------------------------
    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        try:
            o = as_scalar(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    @property
    def is_real(self) -> bool:
        return not self.im

    # text form ------------------------------------------------------------
    def __str__(self):
        if not self.im:
            return str(self.re)
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)} i"

    def __repr__(self):
        return f"Scalar('{self}')"


ZERO = Scalar._mk(Rational(0), Rational(0))
ONE = Scalar._mk(Rational(1), Rational(0))
I = Scalar._mk(Rational(0), Rational(1))


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, complex):
        raise TypeError("complex floats are not accepted")
    return Scalar._mk(_q(x), Rational(0))


_RAT = r"\d+(?:/\d+)?"
_REAL_RE = re.compile(rf"^[+-]?{_RAT}$")
_COMPLEX_RE = re.compile(rf"^(?P<re>[+-]?{_RAT})(?P<sign>[+-])(?P<im>{_RAT})?\*?i$")
_IMAG_RE = re.compile(rf"^(?P<sign>[+-]?)(?P<im>{_RAT})?\*?i$")


def parse_scalar(text: str) -> Scalar:
    """Parse ``"p/q"``, ``"p/q+r/s i"``, ``"p/q-r/s i"`` or an integer ``"p"``.

    Pure imaginary shorthands (``"i"``, ``"-1/2 i"``) are accepted too.
    """
    s = text.strip().replace(" ", "")
    if _REAL_RE.match(s):
        return Scalar._mk(Rational(s), Rational(0))
    m = _COMPLEX_RE.match(s) or _IMAG_RE.match(s)
    if m is None:
        raise ValueError(f"not a Gaussian rational: {text!r}")
    re_part = Rational(m.group("re")) if "re" in m.groupdict() else Rational(0)
    im_part = Rational(m.group("im")) if m.group("im") else Rational(1)
    if m.group("sign") == "-":
        im_part = -im_part
    return Scalar._mk(re_part, im_part)


class SingularMatrixError(ArithmeticError):
    pass


class Matrix:
    """Dense immutable matrix of Scalars, row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, entries: Iterable[Iterable]):
        data = tuple(tuple(as_scalar(x) for x in row) for row in entries)
        cols = len(data[0]) if data else 0
        if any(len(r) != cols for r in data):
            raise ValueError("ragged matrix")
        self._set(data, len(data), cols)

    def _set(self, data, rows, cols):
        object.__setattr__(self, "_data", data)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def _raw(cls, data, rows, cols) -> "Matrix":
        m = object.__new__(cls)
        m._set(data, rows, cols)
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls._raw(tuple((ZERO,) * cols for _ in range(rows)), rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw(
            tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n, n
        )

    @classmethod
    def diagonal(cls, values: Sequence) -> "Matrix":
        n = len(values)
        vals = [as_scalar(v) for v in values]
        return cls._raw(
            tuple(tuple(vals[i] if i == j else ZERO for j in range(n)) for i in range(n)), n, n
        )

    @classmethod
    def outer(cls, u: Sequence, v: Sequence) -> "Matrix":
        u = [as_scalar(x) for x in u]
        v = [as_scalar(x) for x in v]
        return cls._raw(tuple(tuple(a * b for b in v) for a in u), len(u), len(v))

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence["Matrix"]]) -> "Matrix":
        rows = []
        for brow in blocks:
            h = brow[0].rows
            if any(b.rows != h for b in brow):
                raise ValueError("block row heights disagree")
            for i in range(h):
                rows.append(tuple(x for b in brow for x in b._data[i]))
        cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("block column widths disagree")
        return cls._raw(tuple(rows), len(rows), cols)

    # access ------------------------------------------------------------------
    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list[Scalar]]:
        return [list(r) for r in self._data]

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix._raw(tuple(r[c0:c1] for r in self._data[r0:r1]), r1 - r0, c1 - c0)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(tuple(zip(*self._data)) if self.rows else (), self.cols, self.rows)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_real(self) -> bool:
        return all(not x.im for r in self._data for x in r)

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self._data[i][j] == self._data[j][i] for i in range(self.rows) for j in range(i)
        )

    def is_zero(self) -> bool:
        return not any(x for r in self._data for x in r)

    # arithmetic ----------------------------------------------------------------
    def _check_same(self, other: "Matrix"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)),
            self.rows,
            self.cols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)),
            self.rows,
            self.cols,
        )

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self._data), self.rows, self.cols)

    def scale(self, c) -> "Matrix":
        c = as_scalar(c)
        return Matrix._raw(
            tuple(tuple(c * a if a else ZERO for a in r) for r in self._data), self.rows, self.cols
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.T._data
        out = []
        for r in self._data:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append(
                tuple(_dot_sparse(nz, c) for c in ocols)
            )
        return Matrix._raw(tuple(out), self.rows, other.cols)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self @ other
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match matrix columns")
        nz = [(k, as_scalar(a)) for k, a in enumerate(vec) if a]
        return tuple(_dot_sparse(nz, r) for r in self._data)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash(self._data)

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self._data)
        return f"Matrix([{body}])"


def _dot_sparse(nz, row) -> Scalar:
    acc = ZERO
    for k, a in nz:
        b = row[k]
        if b:
            acc = acc + a * b
    return acc


def _rref_rows(rows: list[list[Scalar]], ncols: int) -> tuple[int, list[int]]:
    """In-place reduced row-echelon form; returns (rank, pivot columns)."""
    r = 0
    pivots = []
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c].inverse()
        pr = [x * inv if x else ZERO for x in rows[r]]
        rows[r] = pr
        nzcols = [k for k in range(c, ncols) if pr[k]]
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            if f:
                row = rows[i]
                for k in nzcols:
                    row[k] = row[k] - f * pr[k]
        pivots.append(c)
        r += 1
    return r, pivots


def rref(m: Matrix) -> tuple[int, Matrix]:
    """Return ``(rank, R)`` with R the unique reduced row-echelon form of ``m``."""
    rows = [list(r) for r in m._data]
    rank, _ = _rref_rows(rows, m.cols)
    return rank, Matrix._raw(tuple(tuple(r) for r in rows), m.rows, m.cols)


def inverse(m: Matrix) -> Matrix:
    if not m.is_square():
        raise ValueError("only square matrices are invertible")
    n = m.rows
    rows = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(m._data)]
    rank, pivots = _rref_rows(rows, 2 * n)
    if rank < n or pivots[n - 1] != n - 1:
        raise SingularMatrixError("matrix is singular")
    return Matrix._raw(tuple(tuple(r[n:]) for r in rows), n, n)


class Subspace:
    """A linear subspace of Q(i)^n stored in canonical (RREF) form.

    The basis rows are the nonzero rows of the reduced row-echelon form of any
    spanning set, so two Subspaces are equal exactly when their bases are.
    """

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        rows = []
        for v in vectors:
            if len(v) != ambient_dim:
                raise ValueError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
            rows.append([as_scalar(x) for x in v])
        rank, pivots = _rref_rows(rows, ambient_dim)
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", tuple(tuple(r) for r in rows[:rank]))
        object.__setattr__(self, "pivots", tuple(pivots))

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Sequence) -> list[Scalar]:
        """Remainder of ``v`` after elimination against the basis."""
        if len(v) != self.ambient_dim:
            raise ValueError(
                f"vector of length {len(v)} in ambient dimension {self.ambient_dim}"
            )
        w = [as_scalar(x) for x in v]
        for row, c in zip(self.basis, self.pivots):
            f = w[c]
            if f:
                for k in range(c, self.ambient_dim):
                    if row[k]:
                        w[k] = w[k] - f * row[k]
        return w

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    __contains__ = contains

    def issubset(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimensions differ")
        return Subspace(self.ambient_dim, self.basis + other.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        rows = "; ".join("(" + ", ".join(str(x) for x in b) + ")" for b in self.basis)
        return f"Subspace(dim={self.dim}/{self.ambient_dim}: {rows})"


def kernel(m: Matrix) -> Subspace:
    rows = [list(r) for r in m._data]
    rank, pivots = _rref_rows(rows, m.cols)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    vectors = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for r, c in enumerate(pivots):
            if rows[r][f]:
                v[c] = -rows[r][f]
        vectors.append(v)
    return Subspace(m.cols, vectors)


def eigenspace(m: Matrix, lam) -> Subspace:
    lam = as_scalar(lam)
    if not m.is_square():
        raise ValueError("eigenspace of a non-square matrix")
    if not lam:
        return kernel(m)
    return kernel(m - Matrix.identity(m.rows).scale(lam))


def subspace_contains(s: Subspace, v: Sequence) -> bool:
    return s.contains(v)


def leading_minors(m: Matrix) -> list[Scalar]:
    """Leading principal minors D_1..D_n, by fraction-exact elimination."""
    if not m.is_square():
        raise ValueError("minors of a non-square matrix")
    n = m.rows
    minors = []
    for k in range(1, n + 1):
        rows = [list(r[:k]) for r in m._data[:k]]
        det = ONE
        for c in range(k):
            p = next((i for i in range(c, k) if rows[i][c]), None)
            if p is None:
                det = ZERO
                break
            if p != c:
                rows[c], rows[p] = rows[p], rows[c]
                det = -det
            piv = rows[c][c]
            det = det * piv
            inv = piv.inverse()
            for i in range(c + 1, k):
                f = rows[i][c]
                if f:
                    f = f * inv
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
        minors.append(det)
    return minors


def is_positive_definite(m: Matrix) -> bool:
    """Sylvester's criterion on a real symmetric matrix."""
    if not m.is_square():
        raise ValueError("positive definiteness needs a square matrix")
    if not m.is_real():
        raise ValueError("positive definiteness needs a real matrix")
    if not m.is_symmetric():
        raise ValueError("positive definiteness needs a symmetric matrix")
    return all(d.re > 0 for d in leading_minors(m))
