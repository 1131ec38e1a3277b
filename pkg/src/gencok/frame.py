"""Invariant frames, invariant forms, and the Courant calculus on them.

A manifold is modelled by a global frame X_1..X_n with constant structure
coefficients ``[X_i, X_j] = sum_k c_ij^k X_k`` and dual coframe s^1..s^n.
All sections have constant coefficients in this frame.

Conventions (fixed so that the SU(2) example reproduces ``d s^3 = s^1 ^ s^2``
from ``[X_1, X_2] = -X_3``):

* wedge without a 1/k! factor: ``(a ^ b)(X, Y) = a(X) b(Y) - a(Y) b(X)``;
* interior product contracts the first slot;
* ``(d a)(X_i, X_j) = -a([X_i, X_j])`` on invariant 1-forms, extended as an
  antiderivation.

Why generator-level involutivity checks suffice: for sections A, B of an
isotropic subbundle and a function f,
``[[A, fB]] = f[[A, B]] + (anchor(A) f) B - <A, B> df``, and ``<A, B> = 0``.
So closure of an isotropic span on its constant generators implies closure
over all smooth combinations of them.  Every involutivity test in the
package relies on this and therefore refuses non-isotropic input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Mapping, Sequence

from .exactalg import ONE, ZERO, Matrix, Scalar, as_scalar, kernel

__all__ = [
    "FrameMismatchError",
    "InvariantForm",
    "FrameContext",
    "FrameReport",
    "GenSection",
    "ProductContext",
    "check_frame",
    "lie_bracket",
    "wedge",
    "interior_product",
    "exterior_derivative",
    "d_matrix",
    "closed_forms",
    "courant_bracket",
    "pairing",
    "product_context",
    "format_section",
]


class FrameMismatchError(ValueError):
    pass


def _perm_sign(seq: Sequence[int]) -> int:
    inv = 0
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                inv += 1
    return -1 if inv % 2 else 1


class InvariantForm:
    """Constant-coefficient k-form on an n-dimensional frame.

    Coefficients live on strictly increasing multi-indices (0-based); zero
    coefficients are never stored.
    """

    __slots__ = ("dim", "degree", "coeffs")

    def __init__(self, dim: int, degree: int, coeffs: Mapping[tuple, object] | None = None):
        if degree < 0:
            raise ValueError("negative form degree")
        clean: dict[tuple, Scalar] = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"multi-index {idx} has the wrong length for degree {degree}")
            if any(i < 0 or i >= dim for i in idx):
                raise ValueError(f"multi-index {idx} out of range")
            if len(set(idx)) != degree:
                continue
            order = tuple(sorted(idx))
            c = as_scalar(c) if _perm_sign(idx) > 0 else -as_scalar(c)
            clean[order] = clean.get(order, ZERO) + c
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", {k: v for k, v in clean.items() if v})

    def __setattr__(self, name, value):
        raise AttributeError("InvariantForm is immutable")

    @classmethod
    def _raw(cls, dim, degree, coeffs):
        f = object.__new__(cls)
        object.__setattr__(f, "dim", dim)
        object.__setattr__(f, "degree", degree)
        object.__setattr__(f, "coeffs", {k: v for k, v in coeffs.items() if v})
        return f

    @classmethod
    def zero(cls, dim: int, degree: int) -> "InvariantForm":
        return cls._raw(dim, degree, {})

    @classmethod
    def from_vector(cls, coords: Sequence) -> "InvariantForm":
        """1-form with the given coframe coordinates."""
        return cls._raw(len(coords), 1, {(i,): as_scalar(c) for i, c in enumerate(coords)})

    @classmethod
    def from_matrix(cls, m: Matrix) -> "InvariantForm":
        """2-form with ``w(X_i, X_j) = m[i, j]``; m must be antisymmetric."""
        n = m.rows
        if not m.is_square() or any(m[i, j] != -m[j, i] for i in range(n) for j in range(n)):
            raise ValueError("a 2-form needs an antisymmetric matrix")
        return cls._raw(n, 2, {(i, j): m[i, j] for i in range(n) for j in range(i + 1, n)})

    def to_vector(self) -> tuple:
        if self.degree != 1:
            raise ValueError("only 1-forms have a coordinate vector")
        return tuple(self.coeffs.get((i,), ZERO) for i in range(self.dim))

    def to_matrix(self) -> Matrix:
        """Antisymmetric matrix of values ``w(X_i, X_j)`` for a 2-form."""
        if self.degree != 2:
            raise ValueError("only 2-forms have a value matrix")
        n = self.dim
        rows = [[ZERO] * n for _ in range(n)]
        for (i, j), c in self.coeffs.items():
            rows[i][j] = c
            rows[j][i] = -c
        return Matrix(rows)

    def flat(self) -> Matrix:
        """Matrix of ``X -> i_X w`` for a 2-form, coframe coordinates out."""
        return self.to_matrix().T

    def coefficient_vector(self) -> tuple:
        return tuple(self.coeffs.get(idx, ZERO) for idx in combinations(range(self.dim), self.degree))

    @classmethod
    def from_coefficient_vector(cls, dim: int, degree: int, vec: Sequence) -> "InvariantForm":
        basis = list(combinations(range(dim), degree))
        if len(vec) != len(basis):
            raise ValueError("coefficient vector has the wrong length")
        return cls._raw(dim, degree, {idx: as_scalar(c) for idx, c in zip(basis, vec)})

    def evaluate(self, *vectors: Sequence) -> Scalar:
        """``w(v_1, .., v_k)`` for frame-coordinate vectors."""
        if len(vectors) != self.degree:
            raise ValueError("wrong number of arguments")
        acc = ZERO
        for idx, c in self.coeffs.items():
            det = Matrix([[vectors[a][idx[b]] for b in range(self.degree)] for a in range(self.degree)])
            acc = acc + c * _det(det)
        return acc if self.degree else self.coeffs.get((), ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_real(self) -> bool:
        return all(c.is_real for c in self.coeffs.values())

    def _check(self, other: "InvariantForm"):
        if self.dim != other.dim:
            raise FrameMismatchError("forms live on frames of different dimension")

    def __add__(self, other: "InvariantForm") -> "InvariantForm":
        self._check(other)
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, ZERO) + v
        return InvariantForm._raw(self.dim, self.degree, out)

    def __neg__(self):
        return InvariantForm._raw(self.dim, self.degree, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, InvariantForm):
            return NotImplemented
        c = as_scalar(c)
        return InvariantForm._raw(self.dim, self.degree, {k: c * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __xor__(self, other: "InvariantForm") -> "InvariantForm":
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, InvariantForm):
            return NotImplemented
        return (self.dim, self.degree, self.coeffs) == (other.dim, other.degree, other.coeffs)

    def __hash__(self):
        return hash((self.dim, self.degree, frozenset(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return f"InvariantForm(0, degree={self.degree})"
        terms = []
        for idx in sorted(self.coeffs):
            name = "^".join(f"s{i + 1}" for i in idx) or "1"
            terms.append(_term(self.coeffs[idx], name))
        return "InvariantForm(" + _join_terms(terms) + ")"


def _det(m: Matrix) -> Scalar:
    n = m.rows
    if n == 0:
        return ONE
    rows = [list(r) for r in m.tolist()]
    det = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        det = det * rows[c][c]
        inv = rows[c][c].inverse()
        for i in range(c + 1, n):
            f = rows[i][c]
            if f:
                f = f * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return det


def wedge(a: InvariantForm, b: InvariantForm) -> InvariantForm:
    a._check(b)
    deg = a.degree + b.degree
    out: dict[tuple, Scalar] = {}
    for I, x in a.coeffs.items():
        sI = set(I)
        for J, y in b.coeffs.items():
            if sI.intersection(J):
                continue
            merged = I + J
            key = tuple(sorted(merged))
            term = x * y
            if _perm_sign(merged) < 0:
                term = -term
            out[key] = out.get(key, ZERO) + term
    return InvariantForm._raw(a.dim, deg, out)


def interior_product(X: Sequence, w: InvariantForm) -> InvariantForm:
    """``i_X w``, contracting the first slot; X in frame coordinates."""
    if w.degree == 0:
        raise ValueError("interior product of a 0-form")
    if len(X) != w.dim:
        raise FrameMismatchError("vector and form live on frames of different dimension")
    out: dict[tuple, Scalar] = {}
    for idx, c in w.coeffs.items():
        for p, i in enumerate(idx):
            x = X[i]
            if not x:
                continue
            key = idx[:p] + idx[p + 1 :]
            term = c * x
            if p % 2:
                term = -term
            out[key] = out.get(key, ZERO) + term
    return InvariantForm._raw(w.dim, w.degree - 1, out)


def _as_vector(frame: "FrameContext", X) -> tuple:
    if isinstance(X, GenSection):
        if X.frame != frame:
            raise FrameMismatchError("section belongs to a different frame")
        return X.vec
    if len(X) != frame.dim:
        raise FrameMismatchError("vector length does not match the frame")
    return tuple(as_scalar(x) for x in X)


@dataclass(frozen=True, eq=False)
class FrameContext:
    """A frame with constant structure coefficients and an optional closed 3-form H.

    ``constants`` maps 0-based ``(i, j, k)`` with ``i < j`` to ``c_ij^k``.
    """

    dim: int
    constants: Mapping[tuple[int, int, int], object] = field(default_factory=dict)
    name: str = ""
    H: InvariantForm | None = None

    def __post_init__(self):
        if self.dim <= 0:
            raise ValueError("a frame needs at least one vector")
        n = self.dim
        clean = {}
        for key, c in dict(self.constants).items():
            i, j, k = key
            if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
                raise ValueError(f"structure constant index {key} out of range")
            if i >= j:
                raise ValueError(f"structure constants are stored for i < j only, got {key}")
            c = as_scalar(c)
            if c:
                clean[(i, j, k)] = c
        object.__setattr__(self, "constants", clean)
        if self.H is not None:
            if not isinstance(self.H, InvariantForm) or self.H.degree != 3 or self.H.dim != n:
                raise ValueError("H must be an invariant 3-form on this frame")
        dense = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        for (i, j, k), c in clean.items():
            dense[i][j][k] = c
            dense[j][i][k] = -c
        object.__setattr__(self, "_c", tuple(tuple(tuple(r) for r in row) for row in dense))
        object.__setattr__(self, "_key", (n, frozenset(clean.items()), self.H))

    @classmethod
    def abelian(cls, dim: int, name: str = "") -> "FrameContext":
        return cls(dim, {}, name or f"R^{dim}")

    def c(self, i: int, j: int, k: int) -> Scalar:
        return self._c[i][j][k]

    def with_H(self, H: InvariantForm | None) -> "FrameContext":
        return FrameContext(self.dim, self.constants, self.name, H)

    def X(self, i: int) -> "GenSection":
        """Frame vector X_i as a section (1-based, as in the notation X_1)."""
        v = [ZERO] * self.dim
        v[i - 1] = ONE
        return GenSection(self, tuple(v), (ZERO,) * self.dim)

    def sigma(self, i: int) -> "GenSection":
        """Coframe 1-form s^i as a section (1-based)."""
        v = [ZERO] * self.dim
        v[i - 1] = ONE
        return GenSection(self, (ZERO,) * self.dim, tuple(v))

    def form(self, *indices: int, coeff=1) -> InvariantForm:
        """``coeff * s^{i1} ^ .. ^ s^{ik}`` from 1-based indices."""
        return InvariantForm(self.dim, len(indices), {tuple(i - 1 for i in indices): coeff})

    def zero_section(self) -> "GenSection":
        return GenSection(self, (ZERO,) * self.dim, (ZERO,) * self.dim)

    def section(self, coords: Sequence) -> "GenSection":
        n = self.dim
        if len(coords) != 2 * n:
            raise FrameMismatchError("coordinate vector has the wrong length")
        coords = tuple(as_scalar(c) for c in coords)
        return GenSection(self, coords[:n], coords[n:])

    @cached_property
    def d_coframe(self) -> tuple[InvariantForm, ...]:
        """``d s^k = -sum_{i<j} c_ij^k s^i ^ s^j``."""
        n = self.dim
        out = []
        for k in range(n):
            out.append(
                InvariantForm._raw(
                    n,
                    2,
                    {(i, j): -self._c[i][j][k] for i in range(n) for j in range(i + 1, n)},
                )
            )
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, FrameContext):
            return NotImplemented
        return self is other or self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"FrameContext({self.name or 'unnamed'}, dim={self.dim}, H={'yes' if self.H else 'no'})"


@dataclass(frozen=True)
class FrameReport:
    jacobi_violations: list = field(default_factory=list)  # (i, j, k, l, value), 0-based
    h_closed: bool = True
    h_real: bool = True
    dH: InvariantForm | None = None

    @property
    def valid(self) -> bool:
        return not self.jacobi_violations and self.h_closed and self.h_real


def check_frame(f: FrameContext) -> FrameReport:
    n = f.dim
    c = f._c
    violations = []
    for i, j, k in combinations(range(n), 3):
        for l in range(n):
            s = ZERO
            for m in range(n):
                s = s + c[i][j][m] * c[m][k][l] + c[j][k][m] * c[m][i][l] + c[k][i][m] * c[m][j][l]
            if s:
                violations.append((i, j, k, l, s))
    h_closed, h_real, dH = True, True, None
    if f.H is not None:
        h_real = f.H.is_real()
        dH = exterior_derivative(f, f.H)
        h_closed = dH.is_zero()
    return FrameReport(violations, h_closed, h_real, dH)


def lie_bracket(frame: FrameContext, X, Y) -> tuple:
    x = _as_vector(frame, X)
    y = _as_vector(frame, Y)
    n = frame.dim
    out = [ZERO] * n
    c = frame._c
    for i in range(n):
        if not x[i]:
            continue
        for j in range(n):
            if not y[j] or i == j:
                continue
            f = x[i] * y[j]
            cij = c[i][j]
            for k in range(n):
                if cij[k]:
                    out[k] = out[k] + f * cij[k]
    return tuple(out)


def exterior_derivative(frame: FrameContext, w: InvariantForm) -> InvariantForm:
    if w.dim != frame.dim:
        raise FrameMismatchError("form and frame dimensions differ")
    n = frame.dim
    if w.degree >= n:
        return InvariantForm._raw(n, w.degree + 1, {})
    dsig = frame.d_coframe
    out = InvariantForm._raw(n, w.degree + 1, {})
    for idx, c in w.coeffs.items():
        for p, i in enumerate(idx):
            left = InvariantForm._raw(n, p, {idx[:p]: ONE})
            right = InvariantForm._raw(n, len(idx) - p - 1, {idx[p + 1 :]: ONE})
            term = wedge(wedge(left, dsig[i]), right)
            sign = c if p % 2 == 0 else -c
            out = out + term * sign
    return out


def d_matrix(frame: FrameContext, k: int) -> Matrix:
    """Matrix of d from k-forms to (k+1)-forms in the increasing multi-index bases."""
    n = frame.dim
    src = list(combinations(range(n), k))
    dst = list(combinations(range(n), k + 1))
    cols = []
    for idx in src:
        dw = exterior_derivative(frame, InvariantForm._raw(n, k, {idx: ONE}))
        cols.append([dw.coeffs.get(t, ZERO) for t in dst])
    if not dst:
        return Matrix.zeros(0, len(src))
    return Matrix(cols).T


def closed_forms(frame: FrameContext, k: int) -> list[InvariantForm]:
    """A basis of the closed invariant k-forms (the kernel of d)."""
    n = frame.dim
    src = list(combinations(range(n), k))
    if k >= n:
        return [InvariantForm._raw(n, k, {idx: ONE}) for idx in src]
    ker = kernel(d_matrix(frame, k))
    return [InvariantForm.from_coefficient_vector(n, k, b) for b in ker.basis]


@dataclass(frozen=True)
class GenSection:
    """Constant section ``X + a`` of the (complexified) big tangent bundle."""

    frame: FrameContext
    vec: tuple
    form: tuple

    def __post_init__(self):
        n = self.frame.dim
        if len(self.vec) != n or len(self.form) != n:
            raise FrameMismatchError("section coordinates do not match the frame dimension")

    @property
    def coords(self) -> tuple:
        return self.vec + self.form

    def one_form(self) -> InvariantForm:
        return InvariantForm.from_vector(self.form)

    def _check(self, other: "GenSection"):
        if self.frame != other.frame:
            raise FrameMismatchError("sections live on different frames")

    def __add__(self, other: "GenSection") -> "GenSection":
        self._check(other)
        return GenSection(
            self.frame,
            tuple(a + b for a, b in zip(self.vec, other.vec)),
            tuple(a + b for a, b in zip(self.form, other.form)),
        )

    def __sub__(self, other: "GenSection") -> "GenSection":
        return self + (-other)

    def __neg__(self) -> "GenSection":
        return GenSection(self.frame, tuple(-a for a in self.vec), tuple(-a for a in self.form))

    def __mul__(self, c) -> "GenSection":
        if isinstance(c, GenSection):
            return NotImplemented
        c = as_scalar(c)
        return GenSection(self.frame, tuple(c * a for a in self.vec), tuple(c * a for a in self.form))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.vec) and not any(self.form)

    def __str__(self):
        return format_section(self)


def _term(c: Scalar, name: str) -> str:
    if c == ONE:
        return name
    if c == -ONE:
        return "-" + name
    if not c.re and c.im == 1:
        return "i " + name
    if not c.re and c.im == -1:
        return "-i " + name
    if c.is_real:
        return f"{c} {name}"
    return f"({c}) {name}"


def _join_terms(terms: list[str]) -> str:
    out = ""
    for t in terms:
        if not out:
            out = t
        elif t.startswith("-"):
            out += " - " + t[1:]
        else:
            out += " + " + t
    return out or "0"


def format_section(u: GenSection) -> str:
    """Human-readable form such as ``X1 - i X2`` or ``-X3``; coframe as ``s1``."""
    terms = [_term(c, f"X{i + 1}") for i, c in enumerate(u.vec) if c]
    terms += [_term(c, f"s{i + 1}") for i, c in enumerate(u.form) if c]
    return _join_terms(terms)


def _resolve_H(frame: FrameContext, use_H: bool | None) -> InvariantForm | None:
    if use_H is None:
        return frame.H
    if use_H:
        if frame.H is None:
            raise ValueError("twisted bracket requested but the frame carries no H")
        return frame.H
    return None


def courant_bracket(u: GenSection, v: GenSection, use_H: bool | None = None) -> GenSection:
    """(H-twisted) Courant bracket of constant sections.

    For constant coefficients the symmetric d-term drops out and Cartan's
    formula gives ``[X, Y] + i_X d b - i_Y d a + i_Y i_X H``.  ``use_H=None``
    twists exactly when the frame carries H.
    """
    u._check(v)
    frame = u.frame
    H = _resolve_H(frame, use_H)
    vec = lie_bracket(frame, u.vec, v.vec)
    form = [ZERO] * frame.dim
    terms = []
    if any(v.form) and any(u.vec):
        terms.append(interior_product(u.vec, exterior_derivative(frame, v.one_form())))
    if any(u.form) and any(v.vec):
        terms.append(-interior_product(v.vec, exterior_derivative(frame, u.one_form())))
    if H is not None and any(u.vec) and any(v.vec):
        terms.append(interior_product(v.vec, interior_product(u.vec, H)))
    for t in terms:
        for (k,), c in t.coeffs.items():
            form[k] = form[k] + c
    return GenSection(frame, vec, tuple(form))


def pairing(u: GenSection, v: GenSection) -> Scalar:
    """``<X + a, Y + b> = (b(X) + a(Y)) / 2``."""
    u._check(v)
    acc = ZERO
    for x, b in zip(u.vec, v.form):
        if x and b:
            acc = acc + x * b
    for a, y in zip(u.form, v.vec):
        if a and y:
            acc = acc + a * y
    return acc / 2


@dataclass(frozen=True)
class ProductContext:
    """Product of two frames, with maps between factor and product coordinates.

    Product big-tangent coordinates are ordered
    ``(X of left, X of right, s of left, s of right)``.
    """

    frame: FrameContext
    left: FrameContext
    right: FrameContext

    def _positions(self, side: int) -> list[int]:
        n1, n2 = self.left.dim, self.right.dim
        N = n1 + n2
        if side == 0:
            return list(range(n1)) + [N + i for i in range(n1)]
        return [n1 + i for i in range(n2)] + [N + n1 + i for i in range(n2)]

    def factor(self, side: int) -> FrameContext:
        return self.left if side == 0 else self.right

    def embed(self, u: GenSection, side: int) -> GenSection:
        if u.frame != self.factor(side):
            raise FrameMismatchError("section does not live on that factor")
        coords = [ZERO] * (2 * self.frame.dim)
        for p, c in zip(self._positions(side), u.coords):
            coords[p] = c
        return self.frame.section(coords)

    def pair(self, u1: GenSection, u2: GenSection) -> GenSection:
        """The product section ``(u1, u2)``."""
        return self.embed(u1, 0) + self.embed(u2, 1)

    def split(self, u: GenSection) -> tuple[GenSection, GenSection]:
        if u.frame != self.frame:
            raise FrameMismatchError("section does not live on the product")
        c = u.coords
        return (
            self.left.section([c[p] for p in self._positions(0)]),
            self.right.section([c[p] for p in self._positions(1)]),
        )

    def assemble(self, blocks: Sequence[Sequence[Matrix | None]]) -> Matrix:
        """Product-coordinate matrix from factor blocks.

        ``blocks[a][b]`` maps factor-b big-tangent coordinates to factor-a
        ones (``None`` is a zero block).
        """
        N2 = 2 * self.frame.dim
        rows = [[ZERO] * N2 for _ in range(N2)]
        for a in (0, 1):
            pa = self._positions(a)
            for b in (0, 1):
                blk = blocks[a][b]
                if blk is None:
                    continue
                pb = self._positions(b)
                if blk.shape != (len(pa), len(pb)):
                    raise ValueError(f"block ({a}, {b}) has shape {blk.shape}")
                for r, pr in enumerate(pa):
                    for s, ps in enumerate(pb):
                        rows[pr][ps] = blk[r, s]
        return Matrix(rows)

    def factor_block(self, m: Matrix, a: int, b: int) -> Matrix:
        pa, pb = self._positions(a), self._positions(b)
        return Matrix([[m[r, s] for s in pb] for r in pa])


def _shift_form(w: InvariantForm, dim: int, offset: int) -> InvariantForm:
    return InvariantForm._raw(dim, w.degree, {tuple(i + offset for i in k): c for k, c in w.coeffs.items()})


def product_context(f1: FrameContext, f2: FrameContext, name: str | None = None) -> ProductContext:
    n1, n2 = f1.dim, f2.dim
    N = n1 + n2
    consts = dict(f1.constants)
    for (i, j, k), c in f2.constants.items():
        consts[(i + n1, j + n1, k + n1)] = c
    H = None
    if f1.H is not None:
        H = _shift_form(f1.H, N, 0)
    if f2.H is not None:
        H2 = _shift_form(f2.H, N, n1)
        H = H2 if H is None else H + H2
    frame = FrameContext(N, consts, name or f"{f1.name or 'M1'} x {f2.name or 'M2'}", H)
    return ProductContext(frame, f1, f2)
