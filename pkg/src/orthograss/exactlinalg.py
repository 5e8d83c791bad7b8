"""Exact arithmetic over the Gaussian rationals Q(i) and a small dense matrix kernel.

Everything here is immutable.  Rationals are ``gmpy2.mpq`` values, which are
always reduced with a positive denominator, so equality is structural.

The Hermitian form used throughout the package is

    <x, y> = sum_j x_j * conj(y_j)

(conjugate-linear in the second argument).
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from gmpy2 import mpq

__all__ = [
    "GaussianRational",
    "ExactMatrix",
    "ShapeError",
    "gr",
    "parse_gaussian",
    "rref",
    "kernel_basis",
    "inner",
]

_ZERO = mpq(0)
_ONE = mpq(1)


class ShapeError(ValueError):
    """Matrix dimensions are incompatible for the requested operation."""


def _q(x) -> mpq:
    if isinstance(x, mpq):
        return x
    if isinstance(x, str):
        return mpq(x.strip())
    return mpq(x)


class GaussianRational:
    """An element ``re + im*i`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            if im != 0:
                raise TypeError("cannot add an imaginary part to a GaussianRational")
            re, im = re.re, re.im
        elif isinstance(re, complex):
            raise TypeError("floating point complex values are not exact")
        object.__setattr__(self, "re", _q(re))
        object.__setattr__(self, "im", _q(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def _raw(cls, re: mpq, im: mpq) -> "GaussianRational":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def inverse(self) -> "GaussianRational":
        norm = self.re * self.re + self.im * self.im
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational._raw(self.re / norm, -self.im / norm)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def norm(self) -> mpq:
        """|z|^2, always a non-negative rational."""
        return self.re * self.re + self.im * self.im

    # -- comparison / hashing -----------------------------------------------

    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def is_real(self) -> bool:
        return self.im == 0

    # -- text ----------------------------------------------------------------

    def __str__(self):
        return format_gaussian(self)

    def __repr__(self):
        return f"GaussianRational('{self}')"


def _coerce(x) -> GaussianRational | None:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, mpq)) or type(x).__name__ in ("Fraction", "mpz"):
        return GaussianRational._raw(_q(x), _ZERO)
    return None


def gr(re=0, im=0) -> GaussianRational:
    """Shorthand constructor; strings are parsed with :func:`parse_gaussian`."""
    if isinstance(re, str) and im == 0:
        return parse_gaussian(re)
    return GaussianRational(re, im)


_RAT = r"\d+(?:/\d+)?"
_GAUSS_RE = re.compile(
    rf"^(?P<re>[+-]?{_RAT})?(?:(?P<isign>[+-])?(?P<im>{_RAT})?i)?$"
)


def parse_gaussian(text: str) -> GaussianRational:
    """Parse ``3``, ``-1/2``, ``i``, ``2-3/4i``, ``-i`` ... (whitespace tolerated)."""
    s = "".join(str(text).split())
    m = _GAUSS_RE.match(s)
    if not s or m is None or (m.group("re") is None and not s.endswith("i")):
        raise ValueError(f"not a Gaussian rational: {text!r}")
    re_part = mpq(m.group("re")) if m.group("re") else _ZERO
    if s.endswith("i"):
        if m.group("re") is not None and m.group("isign") is None:
            if m.group("im") is not None:
                raise ValueError(f"missing sign before imaginary part: {text!r}")
            # pure imaginary such as "3i" or "-1/2i"
            return GaussianRational._raw(_ZERO, re_part)
        mag = mpq(m.group("im")) if m.group("im") else _ONE
        im_part = -mag if m.group("isign") == "-" else mag
    else:
        im_part = _ZERO
    return GaussianRational._raw(re_part, im_part)


def _fmt_q(q: mpq) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_gaussian(z: GaussianRational) -> str:
    if z.im == 0:
        return _fmt_q(z.re)
    mag = abs(z.im)
    im_txt = "" if mag == 1 else _fmt_q(mag)
    if z.re == 0:
        return ("-" if z.im < 0 else "") + im_txt + "i"
    return _fmt_q(z.re) + ("-" if z.im < 0 else "+") + im_txt + "i"


ZERO = GaussianRational._raw(_ZERO, _ZERO)
ONE = GaussianRational._raw(_ONE, _ZERO)
I = GaussianRational._raw(_ZERO, _ONE)


def as_gaussian(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, str):
        return parse_gaussian(x)
    c = _coerce(x)
    if c is None:
        raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")
    return c


def inner(x: Sequence[GaussianRational], y: Sequence[GaussianRational]) -> GaussianRational:
    """Hermitian form, conjugate-linear in ``y``."""
    re = _ZERO
    im = _ZERO
    for a, b in zip(x, y):
        # a * conj(b)
        re += a.re * b.re + a.im * b.im
        im += a.im * b.re - a.re * b.im
    return GaussianRational._raw(re, im)


class ExactMatrix:
    """Dense immutable matrix over Q(i), row-major."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        ent = tuple(as_gaussian(e) for e in entries)
        if len(ent) != rows * cols:
            raise ShapeError(f"expected {rows * cols} entries, got {len(ent)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", ent)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def _trusted(cls, rows: int, cols: int, entries: tuple) -> "ExactMatrix":
        obj = object.__new__(cls)
        object.__setattr__(obj, "rows", rows)
        object.__setattr__(obj, "cols", cols)
        object.__setattr__(obj, "entries", entries)
        object.__setattr__(obj, "_hash", None)
        return obj

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            if cols is None:
                raise ShapeError("cannot infer column count of an empty matrix")
            return cls._trusted(0, cols, ())
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ShapeError("ragged rows")
        if cols is not None and cols != width:
            raise ShapeError(f"expected {cols} columns, got {width}")
        return cls(len(rows), width, (e for r in rows for e in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls._trusted(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls._trusted(n, n, tuple(ONE if i == j else ZERO for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence) -> "ExactMatrix":
        n = len(values)
        vals = [as_gaussian(v) for v in values]
        return cls._trusted(n, n, tuple(vals[i] if i == j else ZERO for i in range(n) for j in range(n)))

    # -- access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(idx)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[GaussianRational, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def row_list(self) -> list[tuple[GaussianRational, ...]]:
        return [self.row(i) for i in range(self.rows)]

    def column(self, j: int) -> tuple[GaussianRational, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.rows, self.cols, self.entries))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        body = "; ".join(" ".join(str(e) for e in self.row(i)) for i in range(self.rows))
        return f"ExactMatrix({self.rows}x{self.cols}: [{body}])"

    def to_strings(self) -> list[list[str]]:
        return [[str(e) for e in self.row(i)] for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not any(self.entries)

    # -- algebra --------------------------------------------------------------

    def _check_same(self, other: "ExactMatrix"):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        return ExactMatrix._trusted(
            self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries))
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        return ExactMatrix._trusted(
            self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries))
        )

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix._trusted(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c) -> "ExactMatrix":
        c = as_gaussian(c)
        return ExactMatrix._trusted(self.rows, self.cols, tuple(c * a for a in self.entries))

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return matmul(self, other)

    def adjoint(self) -> "ExactMatrix":
        r, c = self.rows, self.cols
        e = self.entries
        return ExactMatrix._trusted(c, r, tuple(e[j * c + i].conjugate() for i in range(c) for j in range(r)))

    def transpose(self) -> "ExactMatrix":
        r, c = self.rows, self.cols
        e = self.entries
        return ExactMatrix._trusted(c, r, tuple(e[j * c + i] for i in range(c) for j in range(r)))

    def conjugate(self) -> "ExactMatrix":
        return ExactMatrix._trusted(self.rows, self.cols, tuple(a.conjugate() for a in self.entries))

    def vstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.cols:
            raise ShapeError(f"column mismatch {self.cols} vs {other.cols}")
        return ExactMatrix._trusted(self.rows + other.rows, self.cols, self.entries + other.entries)

    def rank(self) -> int:
        return rank(self)

    def is_hermitian(self) -> bool:
        return self.rows == self.cols and self == self.adjoint()

    def inverse(self) -> "ExactMatrix":
        if self.rows != self.cols:
            raise ShapeError("only square matrices are invertible")
        n = self.rows
        aug = [list(self.row(i)) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        R, rank, pivots = rref(ExactMatrix.from_rows(aug))
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return ExactMatrix.from_rows([R.row(i)[n:] for i in range(n)])


def matmul(A: ExactMatrix, B: ExactMatrix) -> ExactMatrix:
    if A.cols != B.rows:
        raise ShapeError(f"cannot multiply {A.shape} by {B.shape}")
    n, m, p = A.rows, A.cols, B.cols
    a = [(e.re, e.im) for e in A.entries]
    b = [(e.re, e.im) for e in B.entries]
    out = []
    raw = GaussianRational._raw
    for i in range(n):
        arow = a[i * m:(i + 1) * m]
        nz = [(l, ar, ai) for l, (ar, ai) in enumerate(arow) if ar or ai]
        for j in range(p):
            sr = _ZERO
            si = _ZERO
            for l, ar, ai in nz:
                br, bi = b[l * p + j]
                if br or bi:
                    sr += ar * br - ai * bi
                    si += ar * bi + ai * br
            out.append(raw(sr, si))
    return ExactMatrix._trusted(n, p, tuple(out))


def rref(A: ExactMatrix) -> tuple[ExactMatrix, int, list[int]]:
    """Reduced row echelon form over Q(i).

    Returns ``(R, rank, pivot_cols)``; ``R`` has the same shape as ``A`` with
    zero rows at the bottom.
    """
    rows, cols = A.rows, A.cols
    M = [[[e.re, e.im] for e in A.entries[i * cols:(i + 1) * cols]] for i in range(rows)]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = None
        for i in range(r, rows):
            er, ei = M[i][c]
            if er or ei:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            M[r], M[piv] = M[piv], M[r]
        # normalise pivot row
        pr, pi = M[r][c]
        nrm = pr * pr + pi * pi
        ir, ii = pr / nrm, -pi / nrm
        row = M[r]
        for j in range(c, cols):
            xr, xi = row[j]
            if xr or xi:
                row[j] = [xr * ir - xi * ii, xr * ii + xi * ir]
        row[c] = [_ONE, _ZERO]
        for i in range(rows):
            if i == r:
                continue
            fr, fi = M[i][c]
            if not (fr or fi):
                continue
            target = M[i]
            for j in range(c, cols):
                yr, yi = row[j]
                if yr or yi:
                    t = target[j]
                    target[j] = [t[0] - (fr * yr - fi * yi), t[1] - (fr * yi + fi * yr)]
            target[c] = [_ZERO, _ZERO]
        pivots.append(c)
        r += 1
    raw = GaussianRational._raw
    ent = tuple(raw(x[0], x[1]) for rw in M for x in rw)
    return ExactMatrix._trusted(rows, cols, ent), r, pivots


def rank(A: ExactMatrix) -> int:
    """Rank by forward elimination only; cheaper than a full ``rref``."""
    rows, cols = A.rows, A.cols
    M = [[(e.re, e.im) for e in A.entries[i * cols:(i + 1) * cols]] for i in range(rows)]
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if M[i][c][0] or M[i][c][1]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        pr, pi = M[r][c]
        nrm = pr * pr + pi * pi
        ir, ii = pr / nrm, -pi / nrm
        row = M[r]
        for i in range(r + 1, rows):
            tr, ti = M[i][c]
            if not (tr or ti):
                continue
            fr, fi = tr * ir - ti * ii, tr * ii + ti * ir
            target = M[i]
            for j in range(c + 1, cols):
                yr, yi = row[j]
                if yr or yi:
                    t = target[j]
                    target[j] = (t[0] - (fr * yr - fi * yi), t[1] - (fr * yi + fi * yr))
        r += 1
    return r


def kernel_basis(A: ExactMatrix) -> ExactMatrix:
    """Rows spanning ``{x : A x^T = 0}``, one per free column, in canonical order."""
    R, rank, pivots = rref(A)
    cols = A.cols
    free = [j for j in range(cols) if j not in set(pivots)]
    out = []
    for f in free:
        v = [ZERO] * cols
        v[f] = ONE
        for r, p in enumerate(pivots):
            v[p] = -R[r, f]
        out.append(v)
    if not out:
        return ExactMatrix._trusted(0, cols, ())
    return ExactMatrix._trusted(len(out), cols, tuple(e for v in out for e in v))
