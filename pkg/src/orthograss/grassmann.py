"""The Grassmann graph: distance, geodesics, triangles, stars/tops and a BFS oracle."""

from __future__ import annotations

import enum
import json
import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .subspace import (
    Subspace,
    SubspaceError,
    coord,
    intersect,
    intersect_all,
    intersection_dim,
    is_adjacent,
    is_compatible,
    is_ortho_adjacent,
    is_subspace_of,
    orthocomplement,
    span,
    sum_,
    sum_all,
)


class GraphKind(str, enum.Enum):
    GRASSMANN = "grassmann"
    ORTHO = "ortho"


class GeodesicError(ValueError):
    pass


def _edge(kind: GraphKind):
    return is_adjacent if kind == GraphKind.GRASSMANN else is_ortho_adjacent


def grassmann_distance(X: Subspace, Y: Subspace) -> int:
    if X.ambient != Y.ambient or X.dim != Y.dim:
        raise SubspaceError("grassmann_distance needs two subspaces of equal dimension")
    return X.dim - intersection_dim(X, Y)


def ortho_distance_if_known(X: Subspace, Y: Subspace) -> int | None:
    """Γ⊥-distance where it follows from exact predicates, else None.

    Compatible pairs sit at their Grassmann distance; adjacent non-compatible
    pairs at distance 2.
    """
    d = grassmann_distance(X, Y)
    if d == 0 or is_compatible(X, Y):
        return d
    if d == 1:
        return 2
    return None


@dataclass(frozen=True)
class GeodesicPath:
    """A validated shortest path; construction raises on anything else."""

    vertices: tuple[Subspace, ...]
    graph_kind: GraphKind = GraphKind.GRASSMANN

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "graph_kind", GraphKind(self.graph_kind))
        validate_path(self.vertices, self.graph_kind)

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> Subspace:
        return self.vertices[0]

    @property
    def end(self) -> Subspace:
        return self.vertices[-1]

    def steps(self):
        return zip(self.vertices, self.vertices[1:])

    def non_ortho_steps(self) -> list[int]:
        return [i for i, (a, b) in enumerate(self.steps()) if not is_ortho_adjacent(a, b)]

    def is_ortho_geodesic(self) -> bool:
        """True when every step is an ortho-adjacency.

        A Γ⊥-path of Grassmann-geodesic length is automatically a Γ⊥-geodesic,
        since Γ⊥-distance never undercuts Grassmann distance.
        """
        return self.length == grassmann_distance(self.start, self.end) and not self.non_ortho_steps()

    def to_json(self) -> dict:
        return {"graph_kind": self.graph_kind.value, "vertices": [v.to_json() for v in self.vertices]}


def validate_path(vertices: Sequence[Subspace], kind: GraphKind = GraphKind.GRASSMANN) -> None:
    if not vertices:
        raise GeodesicError("empty path")
    edge = _edge(GraphKind(kind))
    for i, (a, b) in enumerate(zip(vertices, vertices[1:])):
        if not edge(a, b):
            raise GeodesicError(f"step {i} is not a {GraphKind(kind).value} edge")
    length = len(vertices) - 1
    if GraphKind(kind) == GraphKind.GRASSMANN:
        d = grassmann_distance(vertices[0], vertices[-1])
    else:
        d = ortho_distance_if_known(vertices[0], vertices[-1])
        if d is None:
            raise GeodesicError("cannot certify the Γ⊥-distance of these endpoints")
    if length != d:
        raise GeodesicError(f"path length {length} differs from distance {d}")


def _exchange_frames(X: Subspace, Y: Subspace, rng: random.Random | None):
    W = intersect(X, Y)
    Wp = orthocomplement(W)
    A = intersect(X, Wp).vectors()
    B = intersect(Y, Wp).vectors()
    if rng is not None:
        rng.shuffle(A)
        rng.shuffle(B)
    return W, A, B


def build_geodesic(X: Subspace, Y: Subspace, seed=None) -> GeodesicPath:
    """Grassmann geodesic swapping one direction of X for one of Y per step.

    Directions are the canonical basis rows of X∩(X∩Y)^⊥ and Y∩(X∩Y)^⊥, taken
    in order; a seed shuffles both orders.
    """
    if X.ambient != Y.ambient or X.dim != Y.dim:
        raise SubspaceError("endpoints must have equal dimension")
    if X == Y:
        raise GeodesicError("endpoints coincide")
    rng = None if seed is None else (seed if isinstance(seed, random.Random) else random.Random(seed))
    W, A, B = _exchange_frames(X, Y, rng)
    n = X.ambient
    verts = [X]
    for i in range(1, len(A)):
        verts.append(span(W.vectors() + B[:i] + A[i:], n))
    verts.append(Y)
    path = GeodesicPath(tuple(verts), GraphKind.GRASSMANN)
    S = sum_(X, Y)
    for Z in path.vertices:
        if not (is_subspace_of(W, Z) and is_subspace_of(Z, S)):
            raise GeodesicError("geodesic vertex leaves the interval [X∩Y, X+Y]")
    return path


def build_geodesic_through(X: Subspace, Z: Subspace, Y: Subspace, seed=None) -> GeodesicPath:
    dxz = grassmann_distance(X, Z)
    dzy = grassmann_distance(Z, Y)
    dxy = grassmann_distance(X, Y)
    if dxz + dzy != dxy:
        raise GeodesicError(f"Z is not a geodesic waypoint: {dxz} + {dzy} != {dxy}")
    if dxy == 0:
        raise GeodesicError("endpoints coincide")
    first = [X] if dxz == 0 else list(build_geodesic(X, Z, seed).vertices)
    second = [] if dzy == 0 else list(build_geodesic(Z, Y, seed).vertices[1:])
    return GeodesicPath(tuple(first + second), GraphKind.GRASSMANN)


class TriangleType(str, enum.Enum):
    T1_ONLY = "T1only"
    T2_ONLY = "T2only"
    BOTH = "Both"


def triangle_classify(X: Subspace, Y: Subspace, Z: Subspace) -> TriangleType:
    if not (is_adjacent(X, Y) and is_adjacent(Y, Z) and is_adjacent(X, Z)):
        raise SubspaceError("triangle vertices are not mutually adjacent")
    k = X.dim
    cap = intersect_all(X, Y, Z).dim
    cup = sum_all(X, Y, Z).dim
    t1 = cap == k - 1
    t2 = cup == k + 1
    if not (t1 or t2):
        raise AssertionError("neither T1 nor T2 holds for a triangle")
    if not t1 and cap != k - 2:
        raise AssertionError(f"T1 fails but triple intersection has dim {cap}")
    if not t2 and cup != k + 2:
        raise AssertionError(f"T2 fails but triple sum has dim {cup}")
    if t1 and t2:
        return TriangleType.BOTH
    return TriangleType.T1_ONLY if t1 else TriangleType.T2_ONLY


def star_contains(S: Subspace, X: Subspace) -> bool:
    if S.dim != X.dim - 1:
        raise SubspaceError("star centre must have dimension k-1")
    return is_subspace_of(S, X)


def top_contains(U: Subspace, X: Subspace) -> bool:
    if U.dim != X.dim + 1:
        raise SubspaceError("top must have dimension k+1")
    return is_subspace_of(X, U)


# -- finite universes ------------------------------------------------------------


class UnreachableError(LookupError):
    pass


@dataclass
class FiniteUniverse:
    vertices: list[Subspace]
    edge_kind: GraphKind = GraphKind.GRASSMANN
    _index: dict = field(default=None, init=False, repr=False)
    _adj: list = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.edge_kind = GraphKind(self.edge_kind)
        self.vertices = list(self.vertices)
        index = {}
        for i, v in enumerate(self.vertices):
            if v in index:
                raise ValueError(f"duplicate vertex {v}")
            index[v] = i
        if self.vertices:
            n, k = self.vertices[0].ambient, self.vertices[0].dim
            if any(v.ambient != n or v.dim != k for v in self.vertices):
                raise ValueError("universe vertices must share ambient and dimension")
        self._index = index

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, X: Subspace) -> bool:
        return X in self._index

    def index(self, X: Subspace) -> int:
        try:
            return self._index[X]
        except KeyError:
            raise KeyError(f"{X} is not in the universe") from None

    def adjacency(self) -> list[list[int]]:
        if self._adj is None:
            edge = _edge(self.edge_kind)
            adj = [[] for _ in self.vertices]
            for i, j in combinations(range(len(self.vertices)), 2):
                if edge(self.vertices[i], self.vertices[j]):
                    adj[i].append(j)
                    adj[j].append(i)
            self._adj = adj
        return self._adj

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, nb in enumerate(self.adjacency()) for j in nb if i < j]

    def bfs_from(self, X: Subspace) -> list[int | None]:
        adj = self.adjacency()
        src = self.index(X)
        dist: list[int | None] = [None] * len(self.vertices)
        dist[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if dist[w] is None:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return all(d is not None for d in self.bfs_from(self.vertices[0]))

    def to_json(self) -> dict:
        return {"edges": self.edge_kind.value, "vertices": [v.to_json() for v in self.vertices]}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteUniverse":
        return cls([Subspace.from_json(v) for v in data["vertices"]], GraphKind(data.get("edges", "grassmann")))

    def to_dot(self, name: str = "universe") -> str:
        lines = [f"graph {name} {{"]
        for i, v in enumerate(self.vertices):
            label = json.dumps(repr(v))
            lines.append(f"  v{i} [label={label}];")
        for i, j in self.edges():
            lines.append(f"  v{i} -- v{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def bfs_distance(universe: FiniteUniverse, X: Subspace, Y: Subspace) -> int:
    """Shortest path length under the universe's edge kind.

    Raises :class:`UnreachableError` when Y cannot be reached from X.
    """
    target = universe.index(Y)
    d = universe.bfs_from(X)[target]
    if d is None:
        raise UnreachableError(f"{Y} is unreachable from {X}")
    return d


def johnson_universe(n: int, k: int, edges: GraphKind | str = GraphKind.GRASSMANN) -> FiniteUniverse:
    """All k-subspaces spanned by standard basis vectors of C^n, i.e. J(n, k)."""
    verts = [coord(n, *(i + 1 for i in idx)) for idx in combinations(range(n), k)]
    return FiniteUniverse(verts, GraphKind(edges))


def basis_universe(basis: Sequence[Sequence], k: int, edges: GraphKind | str = GraphKind.ORTHO) -> FiniteUniverse:
    from .subspace import subsets_spanned

    return FiniteUniverse(subsets_spanned(basis, k), GraphKind(edges))


def closed_universe(seeds: Iterable[Subspace], edges: GraphKind | str = GraphKind.GRASSMANN) -> FiniteUniverse:
    """Seed vertices plus the vertices of the canonical geodesics between every pair."""
    verts: dict[Subspace, None] = {}
    seeds = list(seeds)
    for v in seeds:
        verts.setdefault(v, None)
    for a, b in combinations(seeds, 2):
        if a != b:
            for v in build_geodesic(a, b).vertices:
                verts.setdefault(v, None)
    return FiniteUniverse(list(verts), GraphKind(edges))
