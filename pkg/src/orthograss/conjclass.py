"""Conjugacy classes 𝒢(σ, d) of self-adjoint operators on ℂⁿ.

An operator is stored by its spectral data and one eigenspace per
eigenvalue, A = Σ a_i P_{X_i}.  Eigenvalue indices in this module are
1-based, so ``adjacency_type`` returns pairs such as ``(2, 3)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Sequence

from gmpy2 import mpq

from .exactlinalg import ExactMatrix, GaussianRational, ZERO, kernel_basis
from .generators import as_rng, random_gaussian, random_orthogonal_basis
from .grassmann import grassmann_distance
from .orthograph import (
    DEFAULT_WITNESS_BUDGET,
    Distance2Case,
    Distance2Report,
    classify_distance2,
    coordinate_hyperplanes,
    distinct_lines,
    type1_neighbor,
    type2_neighbor,
)
from .subspace import (
    ConsistencyError,
    Subspace,
    SubspaceError,
    contains_vector,
    intersect,
    is_adjacent,
    is_ortho_adjacent,
    is_orthogonal,
    orthogonal_basis,
    ortho_within,
    projection_matrix,
    span,
    sum_,
    sum_all,
)


class OperatorError(ValueError):
    pass


def _rational(x) -> mpq:
    if isinstance(x, str):
        return mpq(Fraction(x.strip()))
    if isinstance(x, GaussianRational):
        if x.im:
            raise OperatorError("eigenvalues must be real")
        return mpq(x.re)
    return mpq(x)


def _fmt(q: mpq) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class SpectralData:
    eigenvalues: tuple
    multiplicities: tuple

    def __post_init__(self):
        ev = tuple(_rational(a) for a in self.eigenvalues)
        mult = tuple(int(m) for m in self.multiplicities)
        object.__setattr__(self, "eigenvalues", ev)
        object.__setattr__(self, "multiplicities", mult)
        if len(ev) != len(mult):
            raise OperatorError("one multiplicity per eigenvalue is required")
        if not ev:
            raise OperatorError("empty spectrum")
        if len(set(ev)) != len(ev):
            raise OperatorError("eigenvalues must be pairwise distinct")
        if any(m < 1 for m in mult):
            raise OperatorError("multiplicities must be positive")

    @property
    def k(self) -> int:
        return len(self.eigenvalues)

    @property
    def n(self) -> int:
        return sum(self.multiplicities)

    def with_eigenvalues(self, new) -> "SpectralData":
        new = tuple(new)
        if len(new) != self.k:
            raise OperatorError(f"expected {self.k} eigenvalues, got {len(new)}")
        return SpectralData(new, self.multiplicities)

    def to_json(self) -> dict:
        return {"eigenvalues": [_fmt(a) for a in self.eigenvalues], "multiplicities": list(self.multiplicities)}


class SelfAdjointOperator:
    """Σ a_i P_{X_i} with mutually orthogonal eigenspaces summing to ℂⁿ."""

    __slots__ = ("spectral", "eigenspaces", "_matrix")

    def __init__(self, spectral: SpectralData, eigenspaces: Sequence[Subspace]):
        eigenspaces = tuple(eigenspaces)
        if len(eigenspaces) != spectral.k:
            raise OperatorError("one eigenspace per eigenvalue is required")
        n = spectral.n
        for X, m in zip(eigenspaces, spectral.multiplicities):
            if X.ambient != n:
                raise OperatorError(f"eigenspace lives in C^{X.ambient}, expected C^{n}")
            if X.dim != m:
                raise OperatorError(f"eigenspace has dimension {X.dim}, multiplicity is {m}")
        for a, b in combinations(eigenspaces, 2):
            if not is_orthogonal(a, b):
                raise OperatorError("eigenspaces are not mutually orthogonal")
        # orthogonal with dimensions adding to n, so the sum is all of C^n
        self.spectral = spectral
        self.eigenspaces = eigenspaces
        self._matrix = None

    @property
    def n(self) -> int:
        return self.spectral.n

    @property
    def k(self) -> int:
        return self.spectral.k

    def eigenspace(self, i: int) -> Subspace:
        """Eigenspace of the i-th eigenvalue, 1-based."""
        return self.eigenspaces[i - 1]

    def __eq__(self, other):
        return (
            isinstance(other, SelfAdjointOperator)
            and self.spectral == other.spectral
            and self.eigenspaces == other.eigenspaces
        )

    def __hash__(self):
        return hash((self.spectral, self.eigenspaces))

    def __repr__(self):
        parts = ", ".join(f"{_fmt(a)}: {X!r}" for a, X in zip(self.spectral.eigenvalues, self.eigenspaces))
        return f"SelfAdjointOperator({parts})"

    def to_json(self) -> dict:
        return {
            "eigenvalues": [_fmt(a) for a in self.spectral.eigenvalues],
            "eigenspaces": [X.to_json() for X in self.eigenspaces],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SelfAdjointOperator":
        if not isinstance(data, dict) or "eigenvalues" not in data or "eigenspaces" not in data:
            raise OperatorError("operator JSON needs 'eigenvalues' and 'eigenspaces'")
        spaces = [Subspace.from_json(s) for s in data["eigenspaces"]]
        spectral = SpectralData(tuple(data["eigenvalues"]), tuple(X.dim for X in spaces))
        return cls(spectral, spaces)


def to_matrix(A: SelfAdjointOperator) -> ExactMatrix:
    if A._matrix is None:
        n = A.n
        M = ExactMatrix.zeros(n, n)
        for a, X in zip(A.spectral.eigenvalues, A.eigenspaces):
            if a:
                M = M + projection_matrix(X).scale(GaussianRational(a))
        if not M.is_hermitian():
            raise ConsistencyError("assembled operator is not self-adjoint")
        A._matrix = M
    return A._matrix


@dataclass(frozen=True)
class DeltaPermutation:
    """δ as the tuple (δ(1), ..., δ(k)) of 1-based images."""

    mapping: tuple

    def __post_init__(self):
        m = tuple(int(x) for x in self.mapping)
        object.__setattr__(self, "mapping", m)
        if sorted(m) != list(range(1, len(m) + 1)):
            raise OperatorError(f"{m} is not a permutation of 1..{len(m)}")

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]

    def inverse(self) -> "DeltaPermutation":
        inv = [0] * len(self.mapping)
        for i, d in enumerate(self.mapping, start=1):
            inv[d - 1] = i
        return DeltaPermutation(tuple(inv))

    def check(self, spectral: SpectralData):
        if len(self.mapping) != spectral.k:
            raise OperatorError("permutation size differs from the number of eigenvalues")
        mult = spectral.multiplicities
        for i in range(1, spectral.k + 1):
            if mult[self(i) - 1] != mult[i - 1]:
                raise OperatorError(f"δ pairs multiplicities {mult[i - 1]} and {mult[self(i) - 1]}")


def permute(A: SelfAdjointOperator, delta: DeltaPermutation) -> SelfAdjointOperator:
    """δ(A) = Σ a_i P_{X_{δ(i)}}."""
    delta.check(A.spectral)
    return SelfAdjointOperator(A.spectral, [A.eigenspace(delta(i)) for i in range(1, A.k + 1)])


def spectrum_swap(A: SelfAdjointOperator, new_eigenvalues: Sequence) -> SelfAdjointOperator:
    return SelfAdjointOperator(A.spectral.with_eigenvalues(new_eigenvalues), A.eigenspaces)


# -- adjacency -------------------------------------------------------------------


def _same_class(A: SelfAdjointOperator, B: SelfAdjointOperator):
    if A.spectral != B.spectral:
        raise OperatorError("operators belong to different conjugacy classes")


def differing_indices(A: SelfAdjointOperator, B: SelfAdjointOperator) -> list[int]:
    _same_class(A, B)
    return [i for i in range(1, A.k + 1) if A.eigenspace(i) != B.eigenspace(i)]


def _apply(M: ExactMatrix, v) -> list[GaussianRational]:
    n = M.cols
    return [sum((M[i, j] * v[j] for j in range(n) if v[j]), ZERO) for i in range(M.rows)]


def _invariant(S: Subspace, *mats: ExactMatrix) -> bool:
    return all(contains_vector(S, _apply(M, v)) for M in mats for v in S.vectors())


def _operator_level_adjacent(A: SelfAdjointOperator, B: SelfAdjointOperator) -> bool:
    MA, MB = to_matrix(A), to_matrix(B)
    D = MA - MB
    if D.rank() != 2:
        return False
    n = A.n
    image = span([D.column(j) for j in range(n)], n)
    kernel = span(kernel_basis(D).row_list(), n)
    return _invariant(image, MA, MB) and _invariant(kernel, MA, MB)


def _eigenspace_level_type(A: SelfAdjointOperator, B: SelfAdjointOperator) -> tuple[int, int] | None:
    diff = differing_indices(A, B)
    if len(diff) != 2:
        return None
    i, j = diff
    adj_i = is_adjacent(A.eigenspace(i), B.eigenspace(i))
    if adj_i != is_adjacent(A.eigenspace(j), B.eigenspace(j)):
        raise ConsistencyError("adjacency at index i and index j disagree")
    return (i, j) if adj_i else None


def adjacency_type(A: SelfAdjointOperator, B: SelfAdjointOperator) -> tuple[int, int] | None:
    """The (i, j) for which A and B are (i, j)-adjacent, else None.

    Both the rank/invariance test on A - B and the eigenspace test are run;
    they must agree.
    """
    t = _eigenspace_level_type(A, B)
    op = _operator_level_adjacent(A, B)
    if op != (t is not None):
        raise ConsistencyError(f"operator-level test says {op}, eigenspace-level test says {t}")
    return t


def is_adjacent_ops(A: SelfAdjointOperator, B: SelfAdjointOperator) -> bool:
    return adjacency_type(A, B) is not None


def operators_commute(A: SelfAdjointOperator, B: SelfAdjointOperator) -> bool:
    MA, MB = to_matrix(A), to_matrix(B)
    return MA @ MB == MB @ MA


def is_commutatively_adjacent(A: SelfAdjointOperator, B: SelfAdjointOperator) -> bool:
    _same_class(A, B)
    MA, MB = to_matrix(A), to_matrix(B)
    op = operators_commute(A, B) and (MA - MB).rank() == 2
    t = _eigenspace_level_type(A, B)
    if t is None:
        eig = False
    else:
        i, j = t
        eig = is_ortho_adjacent(A.eigenspace(i), B.eigenspace(i))
        if eig != is_ortho_adjacent(A.eigenspace(j), B.eigenspace(j)):
            raise ConsistencyError("ortho-adjacency at index i and index j disagree")
    if op != eig:
        raise ConsistencyError(f"commutator test says {op}, eigenspace test says {eig}")
    return op


# -- constructions ---------------------------------------------------------------


def _try_operator(spectral: SpectralData, spaces: Sequence[Subspace]) -> SelfAdjointOperator | None:
    try:
        return SelfAdjointOperator(spectral, spaces)
    except OperatorError:
        return None


def _common_ortho_neighbor_within(X: Subspace, Y: Subspace, V: Subspace) -> Subspace:
    XY = intersect(X, Y)
    if X.dim >= 2:
        W = coordinate_hyperplanes(XY)[0]
        return type2_neighbor(X, Y, W)
    room = ortho_within(sum_(X, Y), V)
    if room.dim == 0:
        raise SubspaceError("no common ortho-neighbour of two lines inside a plane")
    return type1_neighbor(X, Y, distinct_lines(room, 1)[0], within=V)


def midpoint(A: SelfAdjointOperator, B: SelfAdjointOperator) -> SelfAdjointOperator:
    """An operator commutatively adjacent to both of a non-commuting (i, j)-adjacent pair."""
    t = adjacency_type(A, B)
    if t is None:
        raise OperatorError("A and B are not adjacent")
    if operators_commute(A, B):
        raise OperatorError("A and B commute; no midpoint is needed")
    i, j = t
    Xi, Xj = A.eigenspace(i), A.eigenspace(j)
    Yi = B.eigenspace(i)
    V = sum_(Xi, Xj)
    if V != sum_(Yi, B.eigenspace(j)):
        raise ConsistencyError("X_i + X_j differs from Y_i + Y_j")
    Zi = _common_ortho_neighbor_within(Xi, Yi, V)
    Zj = ortho_within(Zi, V)
    spaces = list(A.eigenspaces)
    spaces[i - 1] = Zi
    spaces[j - 1] = Zj
    C = SelfAdjointOperator(A.spectral, spaces)
    if not (is_commutatively_adjacent(C, A) and is_commutatively_adjacent(C, B)):
        raise ConsistencyError("midpoint is not commutatively adjacent to both operators")
    return C


def enumerate_common_comm_neighbors(A: SelfAdjointOperator, B: SelfAdjointOperator) -> list[SelfAdjointOperator]:
    """Every operator commutatively adjacent to both A and B (3 or 4 differing indices).

    Four indices: C agrees with B on a 2-subset {s, t} and with A elsewhere.
    Three indices: C takes Y_a at one index, X_b at another, and the
    orthogonal complement of X_b + Y_a inside X_1+X_2+X_3 at the third; the
    candidate exists only when X_b ⊥ Y_a.  Candidates are then filtered.
    """
    diff = differing_indices(A, B)
    spaces_a = list(A.eigenspaces)
    candidates: dict[SelfAdjointOperator, None] = {}
    if len(diff) == 4:
        for s, t in combinations(diff, 2):
            spaces = list(spaces_a)
            for u in (s, t):
                spaces[u - 1] = B.eigenspace(u)
            C = _try_operator(A.spectral, spaces)
            if C is not None:
                candidates.setdefault(C, None)
    elif len(diff) == 3:
        V = sum_all(*(A.eigenspace(u) for u in diff))
        for a, b in permutations(diff, 2):
            (c,) = [u for u in diff if u not in (a, b)]
            Ya, Xb = B.eigenspace(a), A.eigenspace(b)
            if not is_orthogonal(Ya, Xb):
                continue
            Zc = ortho_within(sum_(Ya, Xb), V)
            spaces = list(spaces_a)
            spaces[a - 1], spaces[b - 1], spaces[c - 1] = Ya, Xb, Zc
            C = _try_operator(A.spectral, spaces)
            if C is not None:
                candidates.setdefault(C, None)
    else:
        raise OperatorError(f"eigenspaces differ in {len(diff)} indices; expected 3 or 4")
    out = [C for C in candidates if is_commutatively_adjacent(C, A) and is_commutatively_adjacent(C, B)]
    if len(out) > 6:
        raise ConsistencyError(f"{len(out)} common commutative neighbours exceed the bound of six")
    return out


@dataclass
class OpsDistance2Report:
    differing: list
    adjacent_noncommuting: bool
    profile: tuple
    reduced: Distance2Report | None = None
    neighbors: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "differing": self.differing,
            "adjacent_noncommuting": self.adjacent_noncommuting,
            "profile": list(self.profile),
        }
        if self.reduced is not None:
            out["reduced"] = self.reduced.to_json()
        return out


def classify_distance2_ops(
    A: SelfAdjointOperator, B: SelfAdjointOperator, witness_budget: int = DEFAULT_WITNESS_BUDGET
) -> OpsDistance2Report:
    """Classify a pair at distance 2 in the commutativity graph.

    Two differing indices reduce to the subspace problem inside X_i + X_j;
    three or four are settled by the finite enumeration.
    """
    diff = differing_indices(A, B)
    if not diff:
        raise OperatorError("A and B coincide")
    if is_commutatively_adjacent(A, B):
        raise OperatorError("A and B are commutatively adjacent")
    direct = is_adjacent_ops(A, B) and not operators_commute(A, B)
    if len(diff) == 2:
        i, j = diff
        Xi, Yi = A.eigenspace(i), B.eigenspace(i)
        V = sum_(Xi, A.eigenspace(j))
        if grassmann_distance(Xi, Yi) > 2:
            raise OperatorError("eigenspaces are too far apart for distance 2")
        try:
            rep = classify_distance2(Xi, Yi, witness_budget=witness_budget, within=V)
        except SubspaceError as exc:
            raise OperatorError(f"not at distance 2: {exc}") from exc
        if (rep.case == Distance2Case.ADJACENT_NONCOMPATIBLE) != direct:
            raise ConsistencyError("reduced classification disagrees with the operator predicate")
        if rep.profile_case is not None and (rep.profile_case == Distance2Case.ADJACENT_NONCOMPATIBLE) != direct:
            raise ConsistencyError("geodesic profile disagrees with the operator predicate")
        return OpsDistance2Report(diff, direct, rep.profile, rep)
    if len(diff) in (3, 4):
        found = enumerate_common_comm_neighbors(A, B)
        if not found:
            raise OperatorError("no common commutative neighbour: not at distance 2")
        if direct:
            raise ConsistencyError("operators differing in more than two eigenspaces are adjacent")
        return OpsDistance2Report(diff, direct, ("finite", str(len(found))), None, found)
    raise OperatorError(f"eigenspaces differ in {len(diff)} indices; not at distance 2")


# -- generators ------------------------------------------------------------------


def basis_operator(spectral: SpectralData, basis: Sequence[Sequence], order: Sequence[int] | None = None) -> SelfAdjointOperator:
    """Operator whose eigenspaces are spanned by consecutive blocks of ``basis`` (after ``order``)."""
    order = list(range(len(basis))) if order is None else list(order)
    spaces = []
    pos = 0
    for m in spectral.multiplicities:
        spaces.append(span([basis[order[p]] for p in range(pos, pos + m)], spectral.n))
        pos += m
    return SelfAdjointOperator(spectral, spaces)


def random_basis_operator(spectral: SpectralData, seed=None) -> SelfAdjointOperator:
    rng = as_rng(seed)
    basis = random_orthogonal_basis(spectral.n, rng)
    order = list(range(spectral.n))
    rng.shuffle(order)
    return basis_operator(spectral, basis, order)


def _random_vector_in(U: Subspace, rng) -> list[GaussianRational]:
    vs = U.vectors()
    while True:
        coeffs = [random_gaussian(rng, 3) for _ in vs]
        v = [sum((c * b[p] for c, b in zip(coeffs, vs) if c), ZERO) for p in range(U.ambient)]
        if any(v):
            return v


def adjacent_move(
    A: SelfAdjointOperator, i: int, j: int, compatible: bool = True, seed=None, codim: int = 1
) -> SelfAdjointOperator:
    """Replace X_i by a subspace meeting it in codimension ``codim`` inside X_i + X_j.

    ``codim=1`` gives an (i, j)-adjacent operator, commuting with A iff
    ``compatible``.  ``codim=2`` gives a non-adjacent control.
    """
    rng = as_rng(seed)
    Xi, Xj = A.eigenspace(i), A.eigenspace(j)
    if Xi.dim < codim or Xj.dim < codim:
        raise OperatorError(f"multiplicities too small for a codimension-{codim} move")
    n = A.n
    while True:
        xs = [_random_vector_in(Xi, rng) for _ in range(codim)]
        vs = [_random_vector_in(Xj, rng) for _ in range(codim)]
        moved = span(xs, n, allow_zero=True)
        if moved.dim == codim and span(vs, n, allow_zero=True).dim == codim:
            break
    xs = orthogonal_basis(moved)
    H = ortho_within(moved, Xi)
    new = list(vs)
    if not compatible:
        new[0] = [a + b for a, b in zip(xs[0], vs[0])]
    Yi = span(H.vectors() + new, n)
    V = sum_(Xi, Xj)
    spaces = list(A.eigenspaces)
    spaces[i - 1] = Yi
    spaces[j - 1] = ortho_within(Yi, V)
    return SelfAdjointOperator(A.spectral, spaces)


PAIR_KINDS = ("adj-comm", "adj-noncomm", "codim2", "three-index", "four-index", "unrelated")


def random_operator_pair(spectral: SpectralData, kind: str, seed=None) -> tuple[SelfAdjointOperator, SelfAdjointOperator]:
    rng = as_rng(seed)
    A = random_basis_operator(spectral, rng)
    k = spectral.k
    mult = spectral.multiplicities
    if kind in ("adj-comm", "adj-noncomm"):
        i, j = sorted(rng.sample(range(1, k + 1), 2))
        return A, adjacent_move(A, i, j, kind == "adj-comm", rng)
    if kind == "codim2":
        pairs = [(i, j) for i, j in combinations(range(1, k + 1), 2) if mult[i - 1] >= 2 and mult[j - 1] >= 2]
        if not pairs:
            raise OperatorError("no index pair supports a codimension-2 move")
        i, j = rng.choice(pairs)
        return A, adjacent_move(A, i, j, rng.random() < 0.5, rng, codim=2)
    if kind == "three-index":
        if k < 3:
            raise OperatorError("three-index pairs need three eigenvalues")
        for _ in range(50):
            a, b, c = rng.sample(range(1, k + 1), 3)
            C = adjacent_move(A, a, b, True, rng)
            B = adjacent_move(C, b, c, rng.random() < 0.7, rng)
            if len(differing_indices(A, B)) == 3:
                return A, B
        raise OperatorError("could not build a three-index pair")  # pragma: no cover
    if kind == "four-index":
        if k < 4:
            raise OperatorError("four-index pairs need four eigenvalues")
        a, b, c, d = rng.sample(range(1, k + 1), 4)
        C = adjacent_move(A, a, b, True, rng)
        return A, adjacent_move(C, c, d, rng.random() < 0.7, rng)
    if kind == "unrelated":
        return A, random_basis_operator(spectral, rng)
    raise ValueError(f"unknown pair kind {kind!r}")


def connectivity_universe(spectral: SpectralData, extra_pairs: int = 2, seed=None) -> list[SelfAdjointOperator]:
    """All operators with eigenspaces spanned by one orthogonal basis, plus
    non-commuting adjacent perturbations and their midpoints."""
    rng = as_rng(seed)
    basis = random_orthogonal_basis(spectral.n, rng)
    ops: dict[SelfAdjointOperator, None] = {}
    for order in _block_orders(list(range(spectral.n)), spectral.multiplicities):
        ops.setdefault(basis_operator(spectral, basis, order), None)
    base = list(ops)
    k = spectral.k
    for _ in range(extra_pairs):
        A = rng.choice(base)
        i, j = sorted(rng.sample(range(1, k + 1), 2))
        try:
            B = adjacent_move(A, i, j, False, rng)
            C = midpoint(A, B)
        except (OperatorError, SubspaceError):
            continue
        ops.setdefault(B, None)
        ops.setdefault(C, None)
    return list(ops)


def _block_orders(items: list[int], sizes: Sequence[int]):
    if not sizes:
        yield []
        return
    for block in combinations(items, sizes[0]):
        rest = [x for x in items if x not in block]
        for tail in _block_orders(rest, sizes[1:]):
            yield list(block) + tail


def commutativity_components(ops: Sequence[SelfAdjointOperator]) -> int:
    """Number of connected components under commutative adjacency."""
    m = len(ops)
    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in combinations(range(m), 2):
        if find(a) != find(b) and is_commutatively_adjacent(ops[a], ops[b]):
            parent[find(a)] = find(b)
    return len({find(x) for x in range(m)})
