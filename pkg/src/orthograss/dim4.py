"""Γ⊥₂(ℂ⁴): the ⊥-swap automorphisms and the orthogonality characterisation.

In ℂ⁴ with k = 2 a subspace X is ortho-adjacent to Y exactly when it is
ortho-adjacent to Y^⊥, so swapping any ⊥-closed family of planes with their
complements preserves Γ⊥-edges.  Such a swap generally breaks ordinary
adjacency, which rules out a unitary or anti-unitary origin.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Callable, Iterable, Sequence

import gmpy2
from gmpy2 import mpq

from .exactlinalg import GaussianRational, ZERO, inner
from .generators import as_rng, random_orthogonal_basis, random_subspace, random_gaussian
from .orthograph import distinct_lines
from .subspace import (
    ConsistencyError,
    Subspace,
    SubspaceError,
    common_orthogonal_basis,
    coord,
    intersect,
    intersection_dim,
    is_adjacent,
    is_ortho_adjacent,
    is_orthogonal,
    orthocomplement,
    orthogonal_basis,
    ortho_within,
    projection_matrix,
    span,
    subsets_spanned,
)


def _check_plane(X: Subspace):
    if X.ambient != 4 or X.dim != 2:
        raise SubspaceError(f"expected a 2-dimensional subspace of C^4, got dim {X.dim} in C^{X.ambient}")


def _sort_key(X: Subspace) -> tuple:
    # pivot columns first so coordinate planes come out in the natural order
    pivots = tuple(next(i for i, c in enumerate(v) if c) for v in X.vectors())
    return pivots, json.dumps(X.to_json(), sort_keys=True)


@dataclass(frozen=True)
class PerpClosedFamily:
    members: frozenset

    def __post_init__(self):
        members = frozenset(self.members)
        object.__setattr__(self, "members", members)
        for X in members:
            _check_plane(X)
            if orthocomplement(X) not in members:
                raise SubspaceError(f"family is not closed under orthocomplement: {X!r}")

    @classmethod
    def from_representatives(cls, reps: Iterable[Subspace]) -> "PerpClosedFamily":
        members = set()
        for X in reps:
            members.add(X)
            members.add(orthocomplement(X))
        return cls(frozenset(members))

    def __contains__(self, X: Subspace) -> bool:
        return X in self.members

    def __len__(self):
        return len(self.members)

    def sorted_members(self) -> list[Subspace]:
        return sorted(self.members, key=_sort_key)

    def to_json(self) -> dict:
        return {"members": [X.to_json() for X in self.sorted_members()]}


class ExceptionalMap:
    """X ↦ X^⊥ on the family, identity elsewhere."""

    def __init__(self, family: PerpClosedFamily):
        self.family = family

    def __call__(self, X: Subspace) -> Subspace:
        _check_plane(X)
        return orthocomplement(X) if X in self.family else X

    @property
    def is_identity(self) -> bool:
        return not self.family.members

    def __repr__(self):
        return f"ExceptionalMap({len(self.family)} members)"


def exceptional_map(family: PerpClosedFamily | Iterable[Subspace]) -> ExceptionalMap:
    if not isinstance(family, PerpClosedFamily):
        family = PerpClosedFamily(frozenset(family))
    f = ExceptionalMap(family)
    for X in family.members:
        if f(f(X)) != X:
            raise ConsistencyError("exceptional map is not an involution")
    return f


def swap_map(A: Subspace, B: Subspace) -> Callable[[Subspace], Subspace]:
    """Exchange two arbitrary planes; not an automorphism unless B = A^⊥."""
    _check_plane(A)
    _check_plane(B)

    def f(X: Subspace) -> Subspace:
        if X == A:
            return B
        if X == B:
            return A
        return X

    return f


@dataclass
class AutomorphismReport:
    checked: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "violations": [[X.to_json(), Y.to_json()] for X, Y in self.violations],
        }


def check_ortho_automorphism(f: Callable[[Subspace], Subspace], pairs: Iterable[tuple[Subspace, Subspace]]) -> AutomorphismReport:
    report = AutomorphismReport(0)
    for X, Y in pairs:
        _check_plane(X)
        _check_plane(Y)
        report.checked += 1
        if is_ortho_adjacent(X, Y) != is_ortho_adjacent(f(X), f(Y)):
            report.violations.append((X, Y))
    return report


def random_plane_neighbor(X: Subspace, seed=None) -> Subspace:
    """A plane ortho-adjacent to X: a line of X plus a line of X^⊥."""
    rng = as_rng(seed)
    _check_plane(X)
    p = _random_line_vector(X, rng)
    q = _random_line_vector(orthocomplement(X), rng)
    return span([p, q], 4)


def _random_line_vector(U: Subspace, rng) -> list[GaussianRational]:
    vs = U.vectors()
    while True:
        coeffs = [random_gaussian(rng, 3) for _ in vs]
        v = [sum((c * b[i] for c, b in zip(coeffs, vs)), ZERO) for i in range(U.ambient)]
        if any(v):
            return v


def mixed_pairs(focus: Sequence[Subspace], count: int, seed=None) -> list[tuple[Subspace, Subspace]]:
    """Plane pairs that stress a map around the ``focus`` planes.

    Cycles through (F, F^⊥), (F, neighbour of F), (F, random), (neighbour,
    neighbour of F^⊥) and (random, random).
    """
    rng = as_rng(seed)
    focus = list(focus) or [coord(4, 1, 2)]
    out = []
    for t in range(count):
        F = focus[t % len(focus)]
        kind = (t // len(focus)) % 5
        if kind == 0:
            pair = (F, orthocomplement(F))
        elif kind == 1:
            pair = (F, random_plane_neighbor(F, rng))
        elif kind == 2:
            pair = (F, random_subspace(4, 2, 3, rng))
        elif kind == 3:
            pair = (random_plane_neighbor(F, rng), random_plane_neighbor(orthocomplement(F), rng))
        else:
            pair = (random_subspace(4, 2, 3, rng), random_subspace(4, 2, 3, rng))
        if rng.random() < 0.5:
            pair = pair[::-1]
        out.append(pair)
    return out


def random_perp_closed_family(seed=None, max_pairs: int = 3) -> PerpClosedFamily:
    rng = as_rng(seed)
    reps = []
    for _ in range(rng.randint(1, max_pairs)):
        if rng.random() < 0.3:
            B = random_orthogonal_basis(4, rng)
            i, j = rng.sample(range(4), 2)
            reps.append(span([B[i], B[j]], 4))
        else:
            reps.append(random_subspace(4, 2, 3, rng))
    return PerpClosedFamily.from_representatives(reps)


def find_adjacency_breaking_pair(f: ExceptionalMap) -> tuple[Subspace, Subspace]:
    """X in the family and Y outside it with X ~ Y but f(X) ≁ Y."""
    if not isinstance(f, ExceptionalMap):
        raise TypeError("find_adjacency_breaking_pair needs an ExceptionalMap")
    if f.is_identity:
        raise SubspaceError("the family is empty, so the map is the identity")
    for X in f.family.sorted_members():
        x1, x2 = X.vectors()
        u1, u2 = orthocomplement(X).vectors()
        shifts = [u1, u2, [a + b for a, b in zip(u1, u2)], [a - b for a, b in zip(u1, u2)]]
        for keep, move in ((x1, x2), (x2, x1)):
            for u in shifts:
                Y = span([keep, [a + b for a, b in zip(move, u)]], 4)
                if Y in f.family:
                    continue
                if is_adjacent(X, Y) and not is_adjacent(f(X), Y):
                    return X, Y
    raise SubspaceError("no adjacency-breaking pair found")  # pragma: no cover


# -- orthogonality through ortho-adjacency ----------------------------------------


def _apply(P, v: Sequence[GaussianRational]) -> list[GaussianRational]:
    n = len(v)
    return [sum((P[i, j] * v[j] for j in range(n)), ZERO) for i in range(n)]


def _rational_sqrt(q: mpq) -> mpq | None:
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    if gmpy2.is_square(num) and gmpy2.is_square(den):
        return mpq(gmpy2.isqrt(num), gmpy2.isqrt(den))
    return None


def principal_planes(X: Subspace, Y: Subspace, budget: int = 4) -> list[Subspace]:
    """Common Γ⊥-neighbours of two disjoint planes of ℂ⁴.

    They are the planes spanned by a principal pair (x, y), x ∈ X, y ∈ Y.  With
    distinct principal angles there are exactly two; with equal angles the
    family is infinite and ``budget`` members per free direction are returned.
    Raises when the principal vectors are not defined over ℚ(i).
    """
    yb = orthogonal_basis(Y)
    PX = projection_matrix(X)
    img = [_apply(PX, y) for y in yb]
    # matrix of P_Y P_X on Y in the orthogonal basis yb
    M = [[inner(img[j], yb[i]) / GaussianRational(inner(yb[i], yb[i]).re) for j in range(2)] for i in range(2)]
    tr = M[0][0] + M[1][1]
    det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    disc = tr * tr - GaussianRational(4) * det
    if disc.im != 0 or tr.im != 0:
        raise ConsistencyError("compression of P_X to Y is not self-adjoint")
    out: dict[Subspace, None] = {}
    if disc.re == 0:
        lam = tr.re / 2
        if lam == 0:
            for p in distinct_lines(X, budget):
                for r in distinct_lines(Y, budget):
                    out.setdefault(span(p.vectors() + r.vectors(), 4), None)
        else:
            for r in distinct_lines(Y, budget):
                rv = r.vectors()[0]
                out.setdefault(span([_apply(PX, rv), rv], 4), None)
        return list(out)
    s = _rational_sqrt(disc.re)
    if s is None:
        raise SubspaceError("principal angles are irrational; common neighbours are not defined over Q(i)")
    for lam in ((tr.re + s) / 2, (tr.re - s) / 2):
        L = GaussianRational(lam)
        c = (M[0][1], L - M[0][0])
        if not any(c):
            c = (L - M[1][1], M[1][0])
        r = [c[0] * a + c[1] * b for a, b in zip(yb[0], yb[1])]
        if lam == 0:
            (x,) = intersect(X, orthocomplement(Y)).vectors()
            out.setdefault(span([x, r], 4), None)
        else:
            out.setdefault(span([_apply(PX, r), r], 4), None)
    return list(out)


def _extension_universe(X: Subspace, Y: Subspace, Z: Subspace, others: Sequence[Subspace]) -> set[Subspace]:
    cands = set(others)
    for A in (X, Y):
        cands.update(subsets_spanned(common_orthogonal_basis(A, Z), 2))
    P, Q = intersect(Z, X), intersect(Z, Y)
    Pp, Qp = ortho_within(P, X), ortho_within(Q, Y)
    cands.add(span(Pp.vectors() + Q.vectors(), 4))
    cands.add(span(P.vectors() + Qp.vectors(), 4))
    return cands


@dataclass
class OrthogonalityEvidence:
    orthogonal: bool
    neighbors: list
    extension_counts: list

    def to_json(self) -> dict:
        return {"orthogonal": self.orthogonal, "extension_counts": self.extension_counts}


def orthogonality_evidence(X: Subspace, Y: Subspace, budget: int = 4) -> OrthogonalityEvidence:
    _check_plane(X)
    _check_plane(Y)
    if intersection_dim(X, Y) != 0:
        raise SubspaceError("X and Y must intersect trivially")
    Zs = principal_planes(X, Y, budget)
    if not Zs:
        raise ConsistencyError("disjoint planes without a common ortho-neighbour")
    counts = []
    for Z in Zs:
        if not (is_ortho_adjacent(Z, X) and is_ortho_adjacent(Z, Y)):
            raise ConsistencyError("principal plane is not a common ortho-neighbour")
        ext = [C for C in _extension_universe(X, Y, Z, Zs) if all(is_ortho_adjacent(C, T) for T in (X, Y, Z))]
        counts.append(len(ext))
    verdict = all(c == 2 for c in counts)
    direct = is_orthogonal(X, Y)
    if verdict != direct:
        raise ConsistencyError(f"extension characterisation gives {verdict}, direct orthogonality {direct}")
    return OrthogonalityEvidence(verdict, Zs, counts)


def orthogonality_by_ortho_adjacency(X: Subspace, Y: Subspace) -> bool:
    """Orthogonality read off Γ⊥ alone: every common neighbour has exactly two extensions."""
    return orthogonality_evidence(X, Y).orthogonal


def disjoint_plane_pair(kind: str, seed=None) -> tuple[Subspace, Subspace]:
    """Disjoint planes of ℂ⁴ with rational principal data.

    ``kind`` is ``"orthogonal"``, ``"one-right-angle"``, ``"isoclinic"`` or
    ``"generic"``.
    """
    rng = as_rng(seed)
    b = random_orthogonal_basis(4, rng)

    def tilt(u, v, t):
        return [x + t * y for x, y in zip(u, v)]

    def nz():
        while True:
            t = random_gaussian(rng, 3)
            if t:
                return t

    X = span([b[0], b[1]], 4)
    if kind == "orthogonal":
        Y = span([b[2], b[3]], 4)
    elif kind == "one-right-angle":
        Y = span([b[2], tilt(b[1], b[3], nz())], 4)
    elif kind == "isoclinic":
        # equal tilts on vectors of equal length give equal angles
        n0 = inner(b[1], b[1]).re * inner(b[2], b[2]).re
        n1 = inner(b[0], b[0]).re * inner(b[3], b[3]).re
        t = nz()
        s = _rational_sqrt(n0 / n1)
        if s is None:
            b = [tuple(coord(4, i + 1).vectors()[0]) for i in range(4)]
            X = span([b[0], b[1]], 4)
            s = mpq(1)
        Y = span([tilt(b[0], b[2], t), tilt(b[1], b[3], t * GaussianRational(s))], 4)
    elif kind == "generic":
        Y = span([tilt(b[0], b[2], nz()), tilt(b[1], b[3], nz())], 4)
    else:
        raise ValueError(f"unknown pair kind {kind!r}")
    return X, Y


# -- conjecture experiment -------------------------------------------------------


@dataclass
class ConjectureExperiment:
    universe_size: int
    automorphisms: int
    conjectured_form: int
    exceptional: int
    outside: list

    def to_json(self) -> dict:
        return {
            "universe_size": self.universe_size,
            "automorphisms": self.automorphisms,
            "conjectured_form": self.conjectured_form,
            "exceptional": self.exceptional,
            "outside": self.outside,
        }


def conjecture_experiment(seed=None) -> ConjectureExperiment:
    """Search the 6-plane universe of one orthogonal basis for Γ⊥-automorphisms.

    An automorphism has the conjectured form when some basis permutation π
    gives f(X) ∈ {π(X), π(X)^⊥} for every plane.  Findings are reported,
    never asserted.
    """
    basis = random_orthogonal_basis(4, seed) if seed is not None else [coord(4, i).vectors()[0] for i in range(1, 5)]
    verts = subsets_spanned(basis, 2)
    idx = {v: i for i, v in enumerate(verts)}
    m = len(verts)
    adj = [[is_ortho_adjacent(verts[i], verts[j]) for j in range(m)] for i in range(m)]
    perp = [idx[orthocomplement(v)] for v in verts]
    induced = []
    for pi in permutations(range(4)):
        induced.append([idx[span([basis[pi[a]] for a in _support(v, basis)], 4)] for v in verts])
    autos = [
        sigma for sigma in permutations(range(m))
        if all(adj[i][j] == adj[sigma[i]][sigma[j]] for i, j in combinations(range(m), 2))
    ]
    conj = 0
    exceptional = 0
    outside = []
    for sigma in autos:
        fits = [g for g in induced if all(sigma[i] in (g[i], perp[g[i]]) for i in range(m))]
        if not fits:
            outside.append(list(sigma))
            continue
        conj += 1
        if not any(all(sigma[i] == g[i] for i in range(m)) or all(sigma[i] == perp[g[i]] for i in range(m)) for g in fits):
            exceptional += 1
    return ConjectureExperiment(m, len(autos), conj, exceptional, outside)


def _support(X: Subspace, basis) -> list[int]:
    from .subspace import spanned_by_subset

    return spanned_by_subset(X, basis)
