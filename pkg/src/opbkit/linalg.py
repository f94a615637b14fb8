"""Exact linear algebra over the Gaussian rationals Q(i).

Everything here is tolerance-free.  Vectors are plain tuples of ``Scalar``;
matrices are tuples of row tuples.  The elimination routines are written
against the field operations only, so they also work on ``Fraction`` rows.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import sympy

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Scalar:
    """A complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls(x, 0)

    def __add__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return Scalar(a * c, _ZERO)
        return Scalar(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        c, d = other.re, other.im
        if not d:
            if not c:
                raise ZeroDivisionError("division by zero Scalar")
            return Scalar(self.re / c, self.im / c)
        den = c * c + d * d
        a, b = self.re, self.im
        return Scalar((a * c + b * d) / den, (b * c - a * d) / den)

    def __rtruediv__(self, other):
        return Scalar.coerce(other) / self

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        if not self.im:
            return f"Scalar({self.re})"
        return f"Scalar({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = Scalar(0)
ONE = Scalar(1)

Vector = tuple
Matrix = tuple


def vec(values: Iterable) -> Vector:
    return tuple(Scalar.coerce(v) for v in values)


def zeros(n: int) -> Vector:
    return (ZERO,) * n


def basis_vector(n: int, k: int) -> Vector:
    return tuple(ONE if i == k else ZERO for i in range(n))


def inner(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    """<u|v>, conjugate-linear in ``u``."""
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    re = _ZERO
    im = _ZERO
    for a, b in zip(u, v):
        ar, ai, br, bi = a.re, a.im, b.re, b.im
        if not ar and not ai:
            continue
        re += ar * br + ai * bi
        im += ar * bi - ai * br
    return Scalar(re, im)


def is_zero_vector(v: Sequence[Scalar]) -> bool:
    return not any(v)


def scale(c: Scalar, v: Sequence[Scalar]) -> Vector:
    return tuple(c * x for x in v)


def add(u: Sequence[Scalar], v: Sequence[Scalar]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[Scalar], v: Sequence[Scalar]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def kron(u: Sequence[Scalar], v: Sequence[Scalar]) -> Vector:
    return tuple(a * b for a in u for b in v)


def proportional(u: Sequence[Scalar], v: Sequence[Scalar]) -> bool:
    """Cross-ratio test u_i v_j == u_j v_i for all i, j (exact, no division)."""
    if len(u) != len(v):
        return False
    # Pick a pivot where u is nonzero; every pair then reduces to the pivot row.
    p = next((i for i, x in enumerate(u) if x), None)
    if p is None:
        return is_zero_vector(v)
    up, vp = u[p], v[p]
    if not vp:
        return False
    return all(u[i] * vp == v[i] * up for i in range(len(u)))


def canonical_direction(v: Sequence[Scalar]) -> Vector:
    """Rescale so that the first nonzero coordinate equals 1."""
    p = next((x for x in v if x), None)
    if p is None:
        return tuple(v)
    if p == ONE:
        return tuple(v)
    return tuple(x / p for x in v)


def conj_vec(v: Sequence[Scalar]) -> Vector:
    return tuple(x.conjugate() for x in v)


# -- elimination ---------------------------------------------------------


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form.

    Returns ``(reduced_rows, pivot_columns)``; zero rows are dropped.  Works
    for any exact field element type supporting ``+ - * /`` and truthiness.
    """
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r >= nrows:
            break
        pr = next((i for i in range(r, nrows) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        row = m[r]
        if piv != 1:
            row = [x / piv for x in row]
            m[r] = row
        for i in range(nrows):
            if i == r:
                continue
            f = m[i][c]
            if not f:
                continue
            other = m[i]
            m[i] = [a - f * b if b else a for a, b in zip(other, row)]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in m[:r]], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int, one=None, zero=None) -> list[tuple]:
    """Basis of {x : rows @ x = 0}, one vector per free column, in column order."""
    if one is None:
        sample = next((x for r in rows for x in r), None)
        if isinstance(sample, Scalar):
            one, zero = ONE, ZERO
        else:
            one, zero = _ONE, _ZERO
    red, pivots = rref(rows, ncols) if rows else ([], [])
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        x = [zero] * ncols
        x[free] = one
        for row, pc in zip(red, pivots):
            x[pc] = -row[free]
        basis.append(tuple(x))
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence):
    """One solution of ``rows @ x = rhs`` or ``None`` when inconsistent."""
    ncols = len(rows[0]) if rows else 0
    aug = [tuple(r) + (b,) for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    zero = ZERO if isinstance(rhs[0], Scalar) else _ZERO
    x = [zero] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return tuple(x)


def row_space_basis(vectors: Sequence[Sequence[Scalar]]) -> list[Vector]:
    """RREF basis of the span; canonical for the subspace."""
    if not vectors:
        return []
    return rref(vectors)[0]


def orthogonal_complement(vectors: Sequence[Sequence[Scalar]], dim: int) -> list[Vector]:
    """Basis of {w : <v|w> = 0 for every v}."""
    rows = [conj_vec(v) for v in vectors if any(v)]
    if not rows:
        return [basis_vector(dim, k) for k in range(dim)]
    return nullspace(rows, dim, ONE, ZERO)


def gram_schmidt(vectors: Sequence[Sequence[Scalar]]) -> list[Vector]:
    """Unnormalized orthogonal basis of the span, dependent inputs dropped."""
    out: list[Vector] = []
    norms: list[Scalar] = []
    for v in vectors:
        w = tuple(v)
        for u, n in zip(out, norms):
            c = inner(u, w)
            if c:
                f = c / n
                w = tuple(a - f * b for a, b in zip(w, u))
        if any(w):
            out.append(w)
            norms.append(inner(w, w))
    return out


# -- matrices ------------------------------------------------------------


def identity(n: int) -> Matrix:
    return tuple(basis_vector(n, k) for k in range(n))


def zero_matrix(n: int) -> Matrix:
    return tuple(zeros(n) for _ in range(n))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    out = []
    for row in a:
        out.append(tuple(_dot(row, col) for col in cols))
    return tuple(out)


def _dot(u, v) -> Scalar:
    re = _ZERO
    im = _ZERO
    for a, b in zip(u, v):
        ar, ai = a.re, a.im
        if not ar and not ai:
            continue
        br, bi = b.re, b.im
        re += ar * br - ai * bi
        im += ar * bi + ai * br
    return Scalar(re, im)


def matvec(a: Matrix, v: Sequence[Scalar]) -> Vector:
    return tuple(_dot(row, v) for row in a)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_scale(c, a: Matrix) -> Matrix:
    c = Scalar.coerce(c)
    return tuple(tuple(c * x for x in r) for r in a)


def adjoint(a: Matrix) -> Matrix:
    return tuple(tuple(x.conjugate() for x in col) for col in zip(*a))


def outer(u: Sequence[Scalar], v: Sequence[Scalar]) -> Matrix:
    """|u><v|"""
    vc = conj_vec(v)
    return tuple(tuple(a * b for b in vc) for a in u)


def sandwich(u: Sequence[Scalar], h: Matrix, v: Sequence[Scalar]) -> Scalar:
    """<u|H|v>"""
    return inner(u, matvec(h, v))


def is_hermitian(a: Matrix) -> bool:
    n = len(a)
    return all(a[i][j] == a[j][i].conjugate() for i in range(n) for j in range(i, n))


def trace(a: Matrix) -> Scalar:
    t = ZERO
    for i in range(len(a)):
        t = t + a[i][i]
    return t


def column_space(a: Matrix) -> list[Vector]:
    """RREF basis of the span of the columns."""
    return row_space_basis([tuple(c) for c in zip(*a)])


def projector_onto(vectors: Sequence[Sequence[Scalar]], dim: int) -> Matrix:
    """Orthogonal projector onto span(vectors) as an exact matrix."""
    p = zero_matrix(dim)
    for u in gram_schmidt(vectors):
        n = inner(u, u)
        p = mat_add(p, mat_scale(ONE / n, outer(u, u)))
    return p


def matrix_key(a: Matrix) -> tuple:
    return tuple((x.re, x.im) for row in a for x in row)


# -- spectra -------------------------------------------------------------


def charpoly(a: Matrix) -> list[Scalar]:
    """Characteristic polynomial coefficients, highest degree first (Faddeev-LeVerrier)."""
    n = len(a)
    coeffs = [ONE]
    m = zero_matrix(n)
    ident = identity(n)
    c = ONE
    for k in range(1, n + 1):
        m = mat_add(matmul(a, m), mat_scale(c, ident))
        am = matmul(a, m)
        c = -trace(am) / k
        coeffs.append(c)
    return coeffs


def _poly_at_matrix(coeffs: Sequence[Fraction], a: Matrix) -> Matrix:
    n = len(a)
    ident = identity(n)
    out = zero_matrix(n)
    for c in coeffs:
        out = mat_add(matmul(out, a), mat_scale(Scalar(c), ident))
    return out


def spectral_blocks(a: Matrix) -> list[tuple[list[Fraction], list[Vector]]]:
    """Split the space into kernels of the rational irreducible factors of the
    characteristic polynomial of a diagonalizable matrix with real spectrum.

    Returns ``[(monic_factor_coeffs, kernel_basis), ...]`` ordered by factor
    (linear factors by increasing eigenvalue first).  Each kernel is exact;
    a linear factor ``x - lam`` yields the eigenspace of ``lam``.
    """
    n = len(a)
    if n == 0:
        return []
    cp = charpoly(a)
    if any(c.im for c in cp):
        raise ValueError("characteristic polynomial is not real; matrix is not Hermitian-like")
    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.re.numerator, c.re.denominator) for c in cp], x, domain="QQ")
    _, factors = poly.factor_list()
    blocks = []
    for f, _mult in factors:
        f = f.monic()
        coeffs = [Fraction(int(c.p), int(c.q)) for c in f.all_coeffs()]
        kern = nullspace(_poly_at_matrix(coeffs, a), n, ONE, ZERO)
        blocks.append((coeffs, kern))

    def order(item):
        coeffs, _ = item
        if len(coeffs) == 2:
            return (0, -coeffs[1], ())
        return (1, Fraction(0), tuple(coeffs))

    blocks.sort(key=order)
    return blocks
