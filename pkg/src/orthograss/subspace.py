"""Subspaces of C^n in canonical form, projections, and the three binary predicates.

A :class:`Subspace` stores the reduced row echelon form of any spanning set,
so two subspaces are equal as sets exactly when their bases coincide
entrywise.  The zero subspace is a legal value (``dim == 0``); graph
predicates require ``0 < k < n``.

Matrices act on column vectors.  For a basis-row matrix ``B`` the projection
onto the row space is ``B^T (conj(B) B^T)^{-1} conj(B)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .exactlinalg import (
    ONE,
    ZERO,
    ExactMatrix,
    GaussianRational,
    as_gaussian,
    inner,
    kernel_basis,
    rref,
)

__all__ = [
    "Subspace",
    "AngleSignature",
    "SubspaceError",
    "ConsistencyError",
    "span",
    "coord",
    "zero",
    "full",
    "sum_",
    "intersect",
    "orthocomplement",
    "ortho_within",
    "projection_matrix",
    "is_adjacent",
    "is_compatible",
    "is_ortho_adjacent",
    "is_orthogonal",
    "angle_signature",
    "orthogonal_basis",
    "common_orthogonal_basis",
]


class SubspaceError(ValueError):
    """Invalid subspace input or violated operation precondition."""


class ConsistencyError(AssertionError):
    """Two independent computations of the same quantity disagree."""


class Subspace:
    __slots__ = ("ambient", "dim", "basis", "_proj", "_perp", "_hash")

    def __init__(self, ambient: int, basis: ExactMatrix):
        """Wrap an already-canonical basis.  Use :func:`span` for arbitrary input."""
        if basis.cols != ambient:
            raise SubspaceError(f"basis has {basis.cols} columns, ambient is {ambient}")
        self.ambient = ambient
        self.dim = basis.rows
        self.basis = basis
        self._proj = None
        self._perp = None
        self._hash = None

    @classmethod
    def from_rows(cls, ambient: int, rows: Sequence[Sequence]) -> "Subspace":
        return span(rows, ambient, allow_zero=True)

    # rows as tuples of GaussianRational
    def vectors(self) -> list[tuple[GaussianRational, ...]]:
        return self.basis.row_list()

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ambient, self.basis))
        return self._hash

    def __repr__(self):
        if self.dim == 0:
            return f"Subspace(n={self.ambient}, 0)"
        rows = ", ".join("(" + ",".join(str(e) for e in r) + ")" for r in self.vectors())
        return f"Subspace(n={self.ambient}, span{{{rows}}})"

    def __contains__(self, vector) -> bool:
        return contains_vector(self, vector)

    def __le__(self, other: "Subspace") -> bool:
        return is_subspace_of(self, other)

    def to_json(self) -> dict:
        return {"ambient": self.ambient, "basis": self.basis.to_strings()}

    @classmethod
    def from_json(cls, data: dict) -> "Subspace":
        try:
            n = int(data["ambient"])
            rows = data["basis"]
        except (KeyError, TypeError) as exc:
            raise SubspaceError(f"malformed subspace object: {exc}") from None
        if any(len(r) != n for r in rows):
            raise SubspaceError("basis row length differs from ambient dimension")
        S = span(rows, n, allow_zero=True)
        if S.dim != len(rows):
            raise SubspaceError(
                f"basis rows are linearly dependent (rank {S.dim} < {len(rows)} rows)"
            )
        return S


@dataclass(frozen=True)
class AngleSignature:
    """Multiplicities of principal angles 0, pi/2 and everything strictly in between."""

    zeros: int
    right: int
    middle: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.zeros, self.right, self.middle)


# -- constructors --------------------------------------------------------------


def span(vectors: Iterable[Sequence], ambient: int | None = None, *, allow_zero: bool = False) -> Subspace:
    rows = [[as_gaussian(e) for e in v] for v in vectors]
    if ambient is None:
        if not rows:
            raise SubspaceError("cannot infer ambient dimension from no vectors")
        ambient = len(rows[0])
    if any(len(r) != ambient for r in rows):
        raise SubspaceError("vector length differs from ambient dimension")
    if not rows:
        if allow_zero:
            return zero(ambient)
        raise SubspaceError("span of no vectors")
    R, rank, _ = rref(ExactMatrix.from_rows(rows, ambient))
    if rank == 0 and not allow_zero:
        raise SubspaceError("span of all-zero vectors")
    return Subspace(ambient, ExactMatrix._trusted(rank, ambient, R.entries[: rank * ambient]))


def _span_rows(rows: list, ambient: int) -> Subspace:
    return span(rows, ambient, allow_zero=True)


def zero(n: int) -> Subspace:
    return Subspace(n, ExactMatrix._trusted(0, n, ()))


def full(n: int) -> Subspace:
    return Subspace(n, ExactMatrix.identity(n))


def unit_vector(n: int, i: int) -> tuple[GaussianRational, ...]:
    return tuple(ONE if j == i else ZERO for j in range(n))


def coord(n: int, *indices: int) -> Subspace:
    """Span of standard basis vectors, 1-based: ``coord(4, 1, 3) == span{e1, e3}``."""
    return _span_rows([unit_vector(n, i - 1) for i in indices], n)


# -- set operations --------------------------------------------------------------


def _same_ambient(X: Subspace, Y: Subspace):
    if X.ambient != Y.ambient:
        raise SubspaceError(f"ambient mismatch: {X.ambient} vs {Y.ambient}")


def contains_vector(X: Subspace, v: Sequence) -> bool:
    v = [as_gaussian(e) for e in v]
    if len(v) != X.ambient:
        raise SubspaceError("vector length differs from ambient dimension")
    if not any(v):
        return True
    return _span_rows(X.vectors() + [tuple(v)], X.ambient).dim == X.dim


def is_subspace_of(X: Subspace, Y: Subspace) -> bool:
    _same_ambient(X, Y)
    if X.dim > Y.dim:
        return False
    return sum_(X, Y).dim == Y.dim


def sum_(X: Subspace, Y: Subspace) -> Subspace:
    _same_ambient(X, Y)
    if X.dim == 0:
        return Y
    if Y.dim == 0:
        return X
    return _span_rows(X.vectors() + Y.vectors(), X.ambient)


def sum_all(*spaces: Subspace) -> Subspace:
    out = spaces[0]
    for S in spaces[1:]:
        out = sum_(out, S)
    return out


def _annihilator(X: Subspace) -> ExactMatrix:
    """Rows w with sum_j w_j x_j = 0 for all x in X (bilinear pairing)."""
    if X.dim == 0:
        return ExactMatrix.identity(X.ambient)
    return kernel_basis(X.basis)


def intersect(X: Subspace, Y: Subspace) -> Subspace:
    """X ∩ Y as the common solution set of both annihilator systems."""
    _same_ambient(X, Y)
    n = X.ambient
    if X.dim == 0 or Y.dim == 0:
        return zero(n)
    if X == Y:
        return X
    eqs = _annihilator(X).vstack(_annihilator(Y))
    if eqs.rows == 0:
        return full(n)
    return _span_rows(kernel_basis(eqs).row_list(), n)


def intersect_all(*spaces: Subspace) -> Subspace:
    out = spaces[0]
    for S in spaces[1:]:
        out = intersect(out, S)
    return out


def orthocomplement(X: Subspace) -> Subspace:
    """X^⊥ with respect to <x, y> = sum x_j conj(y_j)."""
    if X._perp is None:
        n = X.ambient
        if X.dim == 0:
            P = full(n)
        elif X.dim == n:
            P = zero(n)
        else:
            P = _span_rows(kernel_basis(X.basis.conjugate()).row_list(), n)
        X._perp = P
        P._perp = X
    return X._perp


def ortho_within(X: Subspace, V: Subspace) -> Subspace:
    """Orthogonal complement of X inside V, i.e. V ∩ X^⊥."""
    _same_ambient(X, V)
    if not is_subspace_of(X, V):
        raise SubspaceError("ortho_within requires X ⊆ V")
    return intersect(V, orthocomplement(X))


def is_orthogonal(X: Subspace, Y: Subspace) -> bool:
    _same_ambient(X, Y)
    return all(not inner(x, y) for x in X.vectors() for y in Y.vectors())


# -- projections -----------------------------------------------------------------


def projection_matrix(X: Subspace) -> ExactMatrix:
    if X._proj is None:
        n = X.ambient
        if X.dim == 0:
            P = ExactMatrix.zeros(n, n)
        elif X.dim == n:
            P = ExactMatrix.identity(n)
        else:
            B = X.basis
            Bc = B.conjugate()
            gram = Bc @ B.transpose()
            P = B.transpose() @ gram.inverse() @ Bc
        X._proj = P
    return X._proj


# -- predicates ------------------------------------------------------------------


def _check_graph_pair(X: Subspace, Y: Subspace):
    _same_ambient(X, Y)
    if X.dim != Y.dim:
        raise SubspaceError(f"dimension mismatch: {X.dim} vs {Y.dim}")


def intersection_dim(X: Subspace, Y: Subspace) -> int:
    """dim(X ∩ Y) from dim(X) + dim(Y) - dim(X + Y)."""
    _same_ambient(X, Y)
    return X.dim + Y.dim - sum_(X, Y).dim


def is_adjacent(X: Subspace, Y: Subspace) -> bool:
    _check_graph_pair(X, Y)
    by_dim = intersection_dim(X, Y) == X.dim - 1
    by_rank = (projection_matrix(X) - projection_matrix(Y)).rank() == 2
    if by_dim != by_rank:
        raise ConsistencyError(f"adjacency routes disagree for {X} and {Y}")
    return by_dim


def projections_commute(X: Subspace, Y: Subspace) -> bool:
    # P_X P_Y = P_Y P_X iff P_X maps Y into itself; cheaper than two n x n products
    _same_ambient(X, Y)
    if Y.dim == 0 or X.dim == 0:
        return True
    images = (projection_matrix(X) @ Y.basis.transpose()).transpose()
    return Y.basis.vstack(images).rank() == Y.dim


def is_compatible(X: Subspace, Y: Subspace) -> bool:
    _same_ambient(X, Y)
    by_commutator = projections_commute(X, Y)
    split = intersection_dim(X, Y) + intersection_dim(X, orthocomplement(Y))
    by_split = split == X.dim
    if by_commutator != by_split:
        raise ConsistencyError(f"compatibility routes disagree for {X} and {Y}")
    return by_commutator


def is_ortho_adjacent(X: Subspace, Y: Subspace) -> bool:
    return is_adjacent(X, Y) and is_compatible(X, Y)


def angle_signature(X: Subspace, Y: Subspace) -> AngleSignature:
    _check_graph_pair(X, Y)
    z = intersection_dim(X, Y)
    r = intersection_dim(X, orthocomplement(Y))
    return AngleSignature(z, r, X.dim - z - r)


# -- orthogonal bases ------------------------------------------------------------


def gram_schmidt(vectors: Sequence[Sequence[GaussianRational]]) -> list[tuple[GaussianRational, ...]]:
    """Orthogonalise without normalising; zero vectors are dropped."""
    out: list[tuple[GaussianRational, ...]] = []
    norms = []
    for v in vectors:
        w = list(v)
        for u, nu in zip(out, norms):
            c = inner(w, u) / nu
            if c:
                w = [a - c * b for a, b in zip(w, u)]
        if any(w):
            w = primitive(w)
            out.append(tuple(w))
            norms.append(inner(w, w))
    return out


def primitive(v: Sequence[GaussianRational]) -> list[GaussianRational]:
    """Rescale to Gaussian-integer entries with no common rational integer factor."""
    from math import gcd, lcm

    dens = [int(x.denominator) for e in v for x in (e.re, e.im)]
    L = lcm(*dens) if dens else 1
    ints = [int(x * L) for e in v for x in (e.re, e.im)]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return list(v)
    c = GaussianRational(L) / g
    return [c * e for e in v]


def orthogonal_basis(X: Subspace) -> list[tuple[GaussianRational, ...]]:
    return gram_schmidt(X.vectors())


def common_orthogonal_basis(*spaces: Subspace) -> list[tuple[GaussianRational, ...]]:
    """An orthogonal basis of C^n each of whose given subspaces is spanned by a subset.

    The subspaces must be mutually compatible; the basis is assembled from the
    atoms obtained by intersecting with each subspace or its complement.
    """
    n = spaces[0].ambient
    atoms = [full(n)]
    for S in spaces:
        Sp = orthocomplement(S)
        nxt = []
        for A in atoms:
            for part in (intersect(A, S), intersect(A, Sp)):
                if part.dim:
                    nxt.append(part)
        atoms = nxt
    if sum(A.dim for A in atoms) != n:
        raise SubspaceError("subspaces are not mutually compatible")
    basis = []
    for A in atoms:
        basis.extend(orthogonal_basis(A))
    return basis


def subsets_spanned(basis: Sequence[Sequence[GaussianRational]], k: int) -> list[Subspace]:
    """All k-dimensional subspaces spanned by k-subsets of ``basis``."""
    from itertools import combinations

    n = len(basis[0])
    return [_span_rows([basis[i] for i in idx], n) for idx in combinations(range(len(basis)), k)]


def spanned_by_subset(X: Subspace, basis: Sequence[Sequence[GaussianRational]]) -> list[int] | None:
    """Indices of the basis vectors lying in X, if they span X; otherwise None."""
    idx = [i for i, b in enumerate(basis) if contains_vector(X, b)]
    if len(idx) == X.dim:
        return idx
    return None
