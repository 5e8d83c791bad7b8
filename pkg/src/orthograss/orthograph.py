"""The ortho-Grassmann graph Γ⊥_k: common neighbours, extensions and cliques.

"Infinitely many" is never asserted directly.  Where a family of common
neighbours is parameterised by a projective space of positive dimension the
code reports ``AtLeast(N)`` after producing ``N`` pairwise-distinct exact
witnesses from that family, each re-checked with the predicates.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Sequence

from .exactlinalg import GaussianRational, inner
from .grassmann import (
    GeodesicPath,
    GraphKind,
    build_geodesic_through,
    grassmann_distance,
)
from .subspace import (
    ConsistencyError,
    Subspace,
    SubspaceError,
    common_orthogonal_basis,
    intersect,
    intersection_dim,
    is_adjacent,
    is_compatible,
    is_ortho_adjacent,
    is_orthogonal,
    is_subspace_of,
    orthocomplement,
    orthogonal_basis,
    ortho_within,
    span,
    spanned_by_subset,
    subsets_spanned,
    sum_,
    zero,
)

DEFAULT_WITNESS_BUDGET = 5
DEFAULT_SEARCH_BUDGET = 64


class NeighborKind(str, enum.Enum):
    TYPE1 = "Type1"
    TYPE2 = "Type2"


class Distance2Case(str, enum.Enum):
    ADJACENT_NONCOMPATIBLE = "AdjacentNonCompatible"
    COMPATIBLE_CODIM2 = "CompatibleCodim2"
    NONCOMPATIBLE_CODIM2 = "NonCompatibleCodim2"


class SearchExhausted(RuntimeError):
    """A constructive search ran out of budget without finding its witness."""


@dataclass(frozen=True)
class CommonNeighborFamily:
    """One of the two families of common Γ⊥-neighbours of an adjacent pair.

    ``parameter_space_dim`` is the dimension of the parameter variety: lines in
    (X+Y)^⊥ for Type1, (k-2)-subspaces of X∩Y for Type2.  Zero means the family
    is a single subspace.
    """

    kind: NeighborKind
    base_pair: tuple[Subspace, Subspace]
    parameter_space_dim: int

    @property
    def is_singleton(self) -> bool:
        return self.parameter_space_dim == 0


# -- small parameterised families -------------------------------------------------


def distinct_lines(V: Subspace, count: int) -> list[Subspace]:
    """``count`` distinct lines of V (fewer only if V is a line)."""
    vs = V.vectors()
    n = V.ambient
    if V.dim == 0:
        return []
    if V.dim == 1:
        return [V]
    out = [span([vs[1]], n)]
    t = 0
    while len(out) < count:
        out.append(span([[a + t * b for a, b in zip(vs[0], vs[1])]], n))
        t += 1
    return out[:count]


def distinct_hyperplanes(U: Subspace, count: int) -> list[Subspace]:
    """``count`` distinct hyperplanes of U (the unique one if dim U <= 1)."""
    n = U.ambient
    vs = U.vectors()
    if U.dim <= 1:
        return [zero(n)]
    rest = vs[2:]
    out = [span([vs[1]] + rest, n)]
    t = 0
    while len(out) < count:
        out.append(span([[a + t * b for a, b in zip(vs[0], vs[1])]] + rest, n))
        t += 1
    return out[:count]


def coordinate_hyperplanes(U: Subspace) -> list[Subspace]:
    """Hyperplanes of U obtained by dropping one canonical basis row."""
    n = U.ambient
    vs = U.vectors()
    if U.dim <= 1:
        return [zero(n)]
    return [span(vs[:i] + vs[i + 1:], n) for i in range(len(vs))]


# -- common neighbours of an adjacent pair ---------------------------------------


def _perp(S: Subspace, within: Subspace | None) -> Subspace:
    return orthocomplement(S) if within is None else ortho_within(S, within)


def _ambient_dim(X: Subspace, within: Subspace | None) -> int:
    if within is None:
        return X.ambient
    if not is_subspace_of(X, within):
        raise SubspaceError("subspace does not lie in the working space")
    return within.dim


def _require_adjacent(X: Subspace, Y: Subspace):
    if not is_adjacent(X, Y):
        raise SubspaceError("X and Y must be adjacent")


def common_neighbor_families(X: Subspace, Y: Subspace, within: Subspace | None = None) -> list[CommonNeighborFamily]:
    _require_adjacent(X, Y)
    n, k = _ambient_dim(X, within), X.dim
    fams = []
    if k < n - 1:
        fams.append(CommonNeighborFamily(NeighborKind.TYPE1, (X, Y), n - k - 2))
    if k > 1:
        fams.append(CommonNeighborFamily(NeighborKind.TYPE2, (X, Y), k - 2))
    return fams


def _assert_common_neighbor(Z: Subspace, *others: Subspace):
    for O in others:
        if not is_ortho_adjacent(Z, O):
            raise ConsistencyError(f"constructed {Z} is not ortho-adjacent to {O}")


def type1_neighbor(X: Subspace, Y: Subspace, P: Subspace, within: Subspace | None = None) -> Subspace:
    """(X∩Y) + P for a line P orthogonal to X+Y."""
    _require_adjacent(X, Y)
    if not X.dim < _ambient_dim(X, within) - 1:
        raise SubspaceError("Type1 neighbours need k < n-1")
    if P.dim != 1:
        raise SubspaceError("P must be a line")
    if within is not None and not is_subspace_of(P, within):
        raise SubspaceError("P must lie in the working space")
    if not is_orthogonal(P, sum_(X, Y)):
        raise SubspaceError("P is not orthogonal to X+Y")
    Z = sum_(intersect(X, Y), P)
    _assert_common_neighbor(Z, X, Y)
    return Z


def type2_neighbor(X: Subspace, Y: Subspace, W: Subspace) -> Subspace:
    """S + W with S the orthogonal complement of X∩Y in X+Y and W ⊆ X∩Y of dim k-2."""
    _require_adjacent(X, Y)
    k = X.dim
    if k < 2:
        raise SubspaceError("Type2 neighbours need k > 1")
    XY = intersect(X, Y)
    if W.dim != k - 2 or not is_subspace_of(W, XY):
        raise SubspaceError("W must be a (k-2)-dimensional subspace of X∩Y")
    S = ortho_within(XY, sum_(X, Y))
    Z = sum_(S, W)
    _assert_common_neighbor(Z, X, Y)
    return Z


def classify_common_neighbor(X: Subspace, Y: Subspace, Z: Subspace) -> NeighborKind:
    _require_adjacent(X, Y)
    if is_compatible(X, Y):
        raise SubspaceError("X and Y must be non-compatible")
    if not (is_ortho_adjacent(Z, X) and is_ortho_adjacent(Z, Y)):
        raise SubspaceError("Z is not a common ortho-neighbour of X and Y")
    if is_subspace_of(Z, sum_(X, Y)):
        kind = NeighborKind.TYPE2
        XY = intersect(X, Y)
        if type2_neighbor(X, Y, intersect(Z, XY)) != Z:
            raise ConsistencyError("Type2 neighbour does not round-trip")
    else:
        kind = NeighborKind.TYPE1
        P = intersect(Z, orthocomplement(sum_(X, Y)))
        if type1_neighbor(X, Y, P) != Z:
            raise ConsistencyError("Type1 neighbour does not round-trip")
    return kind


@dataclass(frozen=True)
class NeighborCount:
    """Either the exact finite set of common neighbours or ``AtLeast(len)`` witnesses."""

    exact: bool
    neighbors: tuple[Subspace, ...]

    @property
    def count(self) -> int:
        return len(self.neighbors)

    @property
    def label(self) -> str:
        if self.exact:
            return "ExactlyTwo" if self.count == 2 else f"Exactly({self.count})"
        return f"AtLeast({self.count})"


def family_members(fam: CommonNeighborFamily, count: int, within: Subspace | None = None) -> list[Subspace]:
    X, Y = fam.base_pair
    if fam.kind == NeighborKind.TYPE1:
        perp = _perp(sum_(X, Y), within)
        return [type1_neighbor(X, Y, P, within) for P in distinct_lines(perp, count)]
    XY = intersect(X, Y)
    return [type2_neighbor(X, Y, W) for W in distinct_hyperplanes(XY, count)]


def count_common_neighbors(
    X: Subspace, Y: Subspace, witness_budget: int = DEFAULT_WITNESS_BUDGET, within: Subspace | None = None
) -> NeighborCount:
    _require_adjacent(X, Y)
    if is_compatible(X, Y):
        raise SubspaceError("X and Y must be non-compatible")
    fams = common_neighbor_families(X, Y, within)
    if all(f.is_singleton for f in fams):
        found = [family_members(f, 1, within)[0] for f in fams]
        if len(set(found)) != len(found):
            raise ConsistencyError("the two singleton families share a member")
        n, k = _ambient_dim(X, within), X.dim
        if n == 4 and k == 2:
            XY = intersect(X, Y)
            z1 = sum_(XY, _perp(sum_(X, Y), within))
            z2 = ortho_within(XY, sum_(X, Y))
            if set(found) != {z1, z2}:
                raise ConsistencyError("dimension-4 neighbours differ from the closed form")
            if not is_orthogonal(z1, z2):
                raise ConsistencyError("the two dimension-4 neighbours are not orthogonal")
            found = [z1, z2]
        return NeighborCount(True, tuple(found))
    seen: dict[Subspace, None] = {}
    infinite = [f for f in fams if not f.is_singleton]
    for f in infinite:
        for Z in family_members(f, witness_budget, within):
            seen.setdefault(Z, None)
            if len(seen) >= witness_budget:
                break
        if len(seen) >= witness_budget:
            break
    return NeighborCount(False, tuple(list(seen)[:witness_budget]))


# -- the two-extensions lemma ----------------------------------------------------


def _extension_candidates(X: Subspace, Y: Subspace, Z: Subspace) -> tuple[Subspace, Subspace]:
    XY = intersect(X, Y)
    XYp = orthocomplement(XY)
    Xp = intersect(X, XYp)
    Yp = intersect(Y, XYp)
    P = intersect(Z, Xp)
    Q = intersect(Z, Yp)
    if P.dim != 1 or Q.dim != 1:
        raise SubspaceError("Z does not meet X' and Y' in lines")
    Pp = ortho_within(P, Xp)
    Qp = ortho_within(Q, Yp)
    Z1 = sum_(sum_(Pp, XY), Q)
    Z2 = sum_(sum_(P, XY), Qp)
    return Z1, Z2


def two_extensions(X: Subspace, Y: Subspace, Z: Subspace) -> tuple[Subspace, Subspace]:
    """The two subspaces ortho-adjacent to X, Y and Z for a compatible codim-2 pair."""
    if X.dim != Y.dim or intersection_dim(X, Y) != X.dim - 2:
        raise SubspaceError("X∩Y must have dimension k-2")
    if not is_compatible(X, Y):
        raise SubspaceError("X and Y must be compatible")
    if not (is_ortho_adjacent(Z, X) and is_ortho_adjacent(Z, Y)):
        raise SubspaceError("Z must be ortho-adjacent to X and Y")
    if not is_subspace_of(intersect(X, Y), Z):
        raise SubspaceError("Z must contain X∩Y")
    Z1, Z2 = _extension_candidates(X, Y, Z)
    _assert_common_neighbor(Z1, X, Y, Z)
    _assert_common_neighbor(Z2, X, Y, Z)
    if Z1 == Z2:
        raise ConsistencyError("the two extensions coincide")
    return Z1, Z2


def common_ortho_neighbors_in(candidates: Sequence[Subspace], *targets: Subspace) -> list[Subspace]:
    return [C for C in candidates if all(is_ortho_adjacent(C, T) for T in targets)]


def exhaust_extensions(X: Subspace, Y: Subspace, Z: Subspace) -> list[Subspace]:
    """All common Γ⊥-neighbours of X, Y, Z spanned by a shared orthogonal basis of the three."""
    basis = common_orthogonal_basis(X, Y, Z)
    return common_ortho_neighbors_in(subsets_spanned(basis, X.dim), X, Y, Z)


# -- unique partner (k = n - 3) ----------------------------------------------------


def unique_partner(
    X: Subspace, Y: Subspace, Z: Subspace, type2_samples: int = 3, within: Subspace | None = None
) -> Subspace:
    n, k = _ambient_dim(X, within), X.dim
    if n != k + 3:
        raise SubspaceError("unique_partner needs n = k + 3")
    _require_adjacent(X, Y)
    if is_compatible(X, Y):
        raise SubspaceError("X and Y must be non-compatible")
    XY = intersect(X, Y)
    S_sum = sum_(X, Y)
    perp = _perp(S_sum, within)
    if is_subspace_of(Z, S_sum) or not is_subspace_of(XY, Z):
        raise SubspaceError("Z must be a Type1 neighbour (X∩Y) + P")
    P = intersect(Z, perp)
    if P.dim != 1 or sum_(XY, P) != Z:
        raise SubspaceError("Z must be a Type1 neighbour (X∩Y) + P")
    Q = ortho_within(P, perp)
    partner = sum_(Q, XY)
    _assert_common_neighbor(partner, X, Y, Z)
    if k > 1:
        S = ortho_within(XY, S_sum)
        Ws = coordinate_hyperplanes(XY) + distinct_hyperplanes(XY, type2_samples)
        for W in Ws:
            if is_adjacent(sum_(S, W), Z):
                raise ConsistencyError("a Type2 neighbour is adjacent to the Type1 neighbour")
    return partner


# -- compatibility via geodesics -------------------------------------------------


@dataclass(frozen=True)
class CompatibilityDecision:
    compatible: bool
    witness: GeodesicPath | None = None
    attempts: int = 0

    @property
    def label(self) -> str:
        return "Compatible" if self.compatible else "NonCompatibleWitness"


def decide_compatibility_by_geodesics(
    X: Subspace, Y: Subspace, search_budget: int = DEFAULT_SEARCH_BUDGET, seed=0
) -> CompatibilityDecision:
    """Decide compatibility by hunting for a Grassmann geodesic that is not a Γ⊥-geodesic.

    Reduces to X' = X∩V, Y' = Y∩V with V the orthogonal complement of X∩Y in
    X+Y.  If some line P of Y' is not orthogonal to X', a hyperplane N of X'
    with P+N not ortho-adjacent to X' is found and lifted to a geodesic
    X, (X∩Y)+P+N, ..., Y whose first step fails.  Otherwise X' ⊥ Y'.
    """
    if X.ambient != Y.ambient or X.dim != Y.dim:
        raise SubspaceError("endpoints must have equal dimension")
    if X == Y:
        raise SubspaceError("endpoints coincide")
    n = X.ambient
    XY = intersect(X, Y)
    V = ortho_within(XY, sum_(X, Y))
    Xp = intersect(X, V)
    Yp = intersect(Y, V)
    lines = [span([y], n) for y in Yp.vectors()] + [span([y], n) for y in orthogonal_basis(Yp)]
    P = next((L for L in lines if not is_orthogonal(L, Xp)), None)
    if P is None:
        if not is_compatible(X, Y):
            raise ConsistencyError("X' ⊥ Y' but the projections do not commute")
        return CompatibilityDecision(True, None, 0)

    rng = random.Random(seed)
    structured = coordinate_hyperplanes(Xp)
    attempts = 0
    while attempts < search_budget:
        if attempts < len(structured):
            N = structured[attempts]
        else:
            N = _random_hyperplane(Xp, rng)
        attempts += 1
        cand = sum_(P, N)
        if not is_ortho_adjacent(cand, Xp):
            Z = sum_(cand, XY)
            path = build_geodesic_through(X, Z, Y)
            if not path.non_ortho_steps():
                raise ConsistencyError("lifted witness path is a Γ⊥-geodesic")
            if is_compatible(X, Y):
                raise ConsistencyError("witness found for a compatible pair")
            return CompatibilityDecision(False, path, attempts)
    if is_compatible(X, Y):  # pragma: no cover - P exists only for non-compatible pairs
        raise ConsistencyError("search ran although X' and Y' are orthogonal")
    raise SearchExhausted(
        f"no witness hyperplane within {search_budget} attempts for a non-compatible pair"
    )


def _random_hyperplane(U: Subspace, rng: random.Random) -> Subspace:
    from .generators import random_vector

    n = U.ambient
    if U.dim <= 1:
        return zero(n)
    vs = U.vectors()
    while True:
        coeffs = random_vector(rng, U.dim, 3)
        if any(coeffs):
            break
    # kernel of the functional sum c_i a_i on coordinates a of U
    rows = []
    pivot = next(i for i, c in enumerate(coeffs) if c)
    for i in range(U.dim):
        if i == pivot:
            continue
        r = coeffs[i] / coeffs[pivot]
        rows.append([a - r * b for a, b in zip(vs[i], vs[pivot])])
    return span(rows, n)


# -- distance-2 classification ---------------------------------------------------


@dataclass
class Distance2Report:
    case: Distance2Case
    profile: tuple[str, str]
    profile_case: Distance2Case | None
    regime: str
    neighbor: Subspace
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "case": self.case.value,
            "profile": list(self.profile),
            "profile_case": None if self.profile_case is None else self.profile_case.value,
            "regime": self.regime,
        }


def _label(count: int, many_threshold: int, infinite: bool) -> str:
    if infinite and count >= many_threshold:
        return "many"
    return str(count)


def _find_codim2_neighbor(X: Subspace, Y: Subspace) -> Subspace | None:
    XY = intersect(X, Y)
    XYp = orthocomplement(XY)
    Xb = orthogonal_basis(intersect(X, XYp))
    Yb = orthogonal_basis(intersect(Y, XYp))
    n = X.ambient
    for p in Xb:
        for q in Yb:
            Z = span(XY.vectors() + [p, q], n)
            if Z.dim == X.dim and is_ortho_adjacent(Z, X) and is_ortho_adjacent(Z, Y):
                return Z
    return None


def _regime(n: int, k: int) -> str:
    if k <= n - 4:
        return "k<=n-4"
    if k == n - 3:
        return "k=n-3"
    if k == n - 2:
        return "k=n-2"
    return "k=n-1"


def classify_distance2(
    X: Subspace,
    Y: Subspace,
    common_neighbor: Subspace | None = None,
    witness_budget: int = DEFAULT_WITNESS_BUDGET,
    within: Subspace | None = None,
) -> Distance2Report:
    """Classify a Γ⊥-distance-2 pair directly and by its geodesic profile.

    The profile is ``(Z, Z')``: how many common neighbours Z were exhibited and
    how many common neighbours of (X, Y, Z) exist for a sampled Z.  Counts
    from a positive-dimensional family that reach ``witness_budget`` are
    reported as ``"many"``.  Disagreement between the routes raises.

    ``within`` restricts the problem to a subspace V containing X and Y:
    orthocomplements are then taken inside V and n is read as dim V.
    """
    if X.ambient != Y.ambient or X.dim != Y.dim:
        raise SubspaceError("X and Y must have equal dimension")
    if X == Y or is_ortho_adjacent(X, Y):
        raise SubspaceError("X and Y must be distinct and not ortho-adjacent")
    d = grassmann_distance(X, Y)
    if d > 2:
        raise SubspaceError("pairs at Grassmann distance > 2 are not at Γ⊥-distance 2")

    if d == 1:
        direct = Distance2Case.ADJACENT_NONCOMPATIBLE
        compat = False
    else:
        compat = is_compatible(X, Y)
        direct = Distance2Case.COMPATIBLE_CODIM2 if compat else Distance2Case.NONCOMPATIBLE_CODIM2

    if d == 1:
        report = _adjacent_profile(X, Y, witness_budget, within)
    else:
        Z = common_neighbor or _find_codim2_neighbor(X, Y)
        if Z is None:
            raise SubspaceError("no common ortho-neighbour supplied or found")
        if not (is_ortho_adjacent(Z, X) and is_ortho_adjacent(Z, Y)):
            raise SubspaceError("supplied Z is not a common ortho-neighbour")
        report = _codim2_profile(X, Y, Z, witness_budget, within)
    report.case = direct
    if report.profile_case is not None and report.profile_case != direct:
        raise ConsistencyError(
            f"direct classification {direct.value} disagrees with profile {report.profile}"
        )
    return report


def _adjacent_profile(X: Subspace, Y: Subspace, budget: int, within: Subspace | None) -> Distance2Report:
    n, k = _ambient_dim(X, within), X.dim
    # orthocomplementation is a Γ⊥ isomorphism onto k' = n - k; work with 2k <= n
    if 2 * k > n:
        Xw, Yw = _perp(X, within), _perp(Y, within)
    else:
        Xw, Yw = X, Y
    kw = Xw.dim
    regime = _regime(n, kw)
    XY = intersect(Xw, Yw)
    perp = _perp(sum_(Xw, Yw), within)
    counts = count_common_neighbors(Xw, Yw, budget, within)
    if counts.exact:
        Zs = list(counts.neighbors)
        ext = [common_ortho_neighbors_in(Zs, Xw, Yw, Z) for Z in Zs]
        zprime = {len(e) for e in ext}
        if len(zprime) != 1:
            raise ConsistencyError("extension counts vary between the finitely many neighbours")
        profile = (str(len(Zs)), str(zprime.pop()))
        sample = Zs[0]
        return Distance2Report(
            Distance2Case.ADJACENT_NONCOMPATIBLE, profile, None, regime, _back(sample, X, Xw, within),
            {"neighbors": [_back(z, X, Xw, within) for z in Zs]},
        )
    # Type1 neighbours (X∩Y)+P, P a line in (X+Y)^⊥, each with extensions (X∩Y)+Q, Q ⊥ P
    Zs = [type1_neighbor(Xw, Yw, P, within) for P in distinct_lines(perp, budget)]
    z_label = _label(len(Zs), budget, perp.dim >= 2)
    ext_labels = set()
    for Z in Zs:
        P = intersect(Z, perp)
        room = ortho_within(P, perp)
        exts = [sum_(Q, XY) for Q in distinct_lines(room, budget)]
        for E in exts:
            _assert_common_neighbor(E, Xw, Yw, Z)
        if room.dim == 1:
            exts = [unique_partner(Xw, Yw, Z, within=within)] if kw == n - 3 else exts
        ext_labels.add(_label(len(exts), budget, room.dim >= 2))
    if len(ext_labels) != 1:
        raise ConsistencyError(f"extension profile varies over the Z family: {ext_labels}")
    zp = ext_labels.pop()
    profile = (z_label, zp)
    if z_label == "many" and (zp == "many" or zp == "1"):
        profile_case = Distance2Case.ADJACENT_NONCOMPATIBLE
    else:
        profile_case = None
    return Distance2Report(
        Distance2Case.ADJACENT_NONCOMPATIBLE, profile, profile_case, regime, _back(Zs[0], X, Xw, within),
        {"sample_neighbors": [_back(z, X, Xw, within) for z in Zs]},
    )


def _back(Z: Subspace, X: Subspace, Xw: Subspace, within: Subspace | None = None) -> Subspace:
    return Z if X is Xw else _perp(Z, within)


def _codim2_profile(
    X: Subspace, Y: Subspace, Z: Subspace, budget: int, within: Subspace | None = None
) -> Distance2Report:
    n, k = _ambient_dim(X, within), X.dim
    regime = _regime(n, min(k, n - k))
    XY = intersect(X, Y)
    XYp = orthocomplement(XY)
    Xp = intersect(X, XYp)
    Yp = intersect(Y, XYp)
    # more candidate neighbours (X∩Y) + p + q from lines of X' and Y'
    Zs = {Z: None}
    for p in distinct_lines(Xp, budget):
        for q in distinct_lines(Yp, 2):
            C = sum_(sum_(XY, p), q)
            if C.dim == k and is_ortho_adjacent(C, X) and is_ortho_adjacent(C, Y):
                Zs.setdefault(C, None)
    ext_counts = set()
    for C in Zs:
        cands = set(_extension_candidates(X, Y, C))
        ext_counts.add(len(common_ortho_neighbors_in(list(cands), X, Y, C)))
    if len(ext_counts) != 1:
        raise ConsistencyError(f"extension counts vary: {ext_counts}")
    zp = ext_counts.pop()
    z_label = _label(len(Zs), budget, True)
    profile = (z_label, str(zp))
    if zp == 2:
        profile_case = Distance2Case.COMPATIBLE_CODIM2
    elif zp == 0:
        profile_case = Distance2Case.NONCOMPATIBLE_CODIM2
    else:
        raise ConsistencyError(f"a codimension-2 pair produced {zp} extensions")
    return Distance2Report(
        Distance2Case.COMPATIBLE_CODIM2, profile, profile_case, regime, Z,
        {"sample_neighbors": list(Zs)},
    )


# -- ortho-stars and ortho-tops --------------------------------------------------


def _check_orthogonal_basis(B: Sequence[Sequence[GaussianRational]], n: int):
    if len(B) != n or any(len(b) != n for b in B):
        raise SubspaceError("basis must consist of n vectors of length n")
    for i in range(n):
        if not any(B[i]):
            raise SubspaceError("basis contains a zero vector")
        for j in range(i + 1, n):
            if inner(B[i], B[j]):
                raise SubspaceError("basis vectors are not mutually orthogonal")


def _assert_clique(elems: Sequence[Subspace]):
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            if not is_ortho_adjacent(elems[i], elems[j]):
                raise ConsistencyError("ortho-clique members are not ortho-adjacent")


def ortho_star_elements(S: Subspace, B: Sequence[Sequence[GaussianRational]], check: bool = True) -> list[Subspace]:
    """k-subspaces S + b for basis vectors b outside S (k = dim S + 1)."""
    n = S.ambient
    _check_orthogonal_basis(B, n)
    idx = spanned_by_subset(S, B)
    if idx is None:
        raise SubspaceError("S is not spanned by a subset of the basis")
    inside = [B[i] for i in idx]
    elems = [span(inside + [B[j]], n) for j in range(n) if j not in idx]
    if len(elems) != n - (S.dim + 1) + 1:
        raise ConsistencyError("ortho-star has the wrong size")
    if check:
        _assert_clique(elems)
    return elems


def ortho_top_elements(U: Subspace, B: Sequence[Sequence[GaussianRational]], check: bool = True) -> list[Subspace]:
    """k-subspaces of U spanned by all but one of U's basis vectors (k = dim U - 1)."""
    n = U.ambient
    _check_orthogonal_basis(B, n)
    idx = spanned_by_subset(U, B)
    if idx is None:
        raise SubspaceError("U is not spanned by a subset of the basis")
    inside = [B[i] for i in idx]
    elems = [span(inside[:i] + inside[i + 1:], n) for i in range(len(inside))]
    if len(elems) != U.dim:
        raise ConsistencyError("ortho-top has the wrong size")
    if check:
        _assert_clique(elems)
    return elems


def clique_intersection_size(c1: Sequence[Subspace], c2: Sequence[Subspace]) -> int:
    return len(set(c1) & set(c2))
