"""Seeded instance factories for the verification campaigns.

Every factory takes ``seed`` as either an ``int`` or a ``random.Random``.
Passing a ``Random`` threads the state through consecutive calls; passing
an ``int`` gives a fresh, reproducible stream.  No global RNG is touched.

Configurations are built structurally (intersection first, then extension
inside an orthogonal frame) and re-checked with the exact predicates before
being returned.
"""

from __future__ import annotations

import random
from typing import Sequence

from gmpy2 import mpq

from .exactlinalg import GaussianRational, ZERO
from .subspace import (
    Subspace,
    SubspaceError,
    intersection_dim,
    is_adjacent,
    is_compatible,
    primitive,
    span,
    unit_vector,
)

DEFAULT_HEIGHT = 4
_MAX_REJECTIONS = 200


def as_rng(seed) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    return random.Random(seed)


def derive_seed(campaign_seed: int, index: int) -> int:
    """Independent per-instance seed from (campaign seed, instance index)."""
    return random.Random(f"{campaign_seed}:{index}").getrandbits(63)


def random_rational(rng: random.Random, height: int = DEFAULT_HEIGHT) -> mpq:
    p = rng.randint(-height, height)
    # mostly integers: denominators inflate every downstream computation
    q = rng.randint(1, height) if rng.random() < 0.25 else 1
    return mpq(p, q)


def random_gaussian(rng: random.Random, height: int = DEFAULT_HEIGHT) -> GaussianRational:
    return GaussianRational(random_rational(rng, height), random_rational(rng, height))


def random_vector(rng: random.Random, n: int, height: int = DEFAULT_HEIGHT) -> list[GaussianRational]:
    return [random_gaussian(rng, height) for _ in range(n)]


def random_subspace(n: int, k: int, height: int = DEFAULT_HEIGHT, seed=None) -> Subspace:
    if not 0 < k <= n:
        raise SubspaceError(f"infeasible subspace dimension k={k} in C^{n}")
    rng = as_rng(seed)
    for _ in range(_MAX_REJECTIONS):
        S = span([random_vector(rng, n, height) for _ in range(k)], n, allow_zero=True)
        if S.dim == k:
            return S
    raise SubspaceError("rejection sampling failed")  # pragma: no cover


def _small_unit(rng: random.Random) -> GaussianRational:
    choices = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (2, 1), (1, 2), (2, -1)]
    a, b = rng.choice(choices)
    return GaussianRational(a, b)


def random_orthogonal_basis(n: int, seed=None, rotations: int | None = None) -> list[tuple[GaussianRational, ...]]:
    """Orthogonal (not normalised) basis of C^n with small Gaussian-integer entries.

    Starts from a shuffled standard basis and applies random plane rotations
    ``u -> u + t v``, ``v -> v - conj(t) |v|^2/|u|^2 u`` which keep the pair
    orthogonal.
    """
    rng = as_rng(seed)
    basis = [list(unit_vector(n, i)) for i in range(n)]
    rng.shuffle(basis)
    if n == 1:
        return [tuple(basis[0])]
    count = n if rotations is None else rotations
    for _ in range(count):
        i, j = rng.sample(range(n), 2)
        basis = rotate_pair(basis, i, j, rng)
    return [tuple(b) for b in basis]


def rotate_pair(basis: Sequence[Sequence[GaussianRational]], i: int, j: int, seed=None) -> list:
    """Copy of ``basis`` with vectors i and j replaced by an orthogonal pair in their span.

    Neither new vector is proportional to an old one.
    """
    rng = as_rng(seed)
    u, v = basis[i], basis[j]
    t = _small_unit(rng)
    nu = sum((e.norm() for e in u), mpq(0))
    nv = sum((e.norm() for e in v), mpq(0))
    s = -t.conjugate() * GaussianRational(nv / nu)
    out = list(basis)
    out[i] = tuple(primitive([a + t * b for a, b in zip(u, v)]))
    out[j] = tuple(primitive([b + s * a for a, b in zip(u, v)]))
    return out


def _combo(rng: random.Random, vectors: Sequence[Sequence[GaussianRational]], height: int) -> list[GaussianRational]:
    n = len(vectors[0])
    out = [ZERO] * n
    for v in vectors:
        c = GaussianRational(rng.randint(-height, height), rng.randint(-height, height))
        if c:
            out = [a + c * b for a, b in zip(out, v)]
    return out


def pair_with_intersection(
    n: int, k: int, m: int, compatible: bool, seed=None, height: int = DEFAULT_HEIGHT
) -> tuple[Subspace, Subspace]:
    """Two k-dimensional subspaces with ``dim(X∩Y) == m`` and the requested compatibility."""
    if not (0 <= m <= k and 0 < k and 2 * k - m <= n):
        raise SubspaceError(f"infeasible configuration n={n}, k={k}, m={m}")
    if not compatible and m == k:
        raise SubspaceError("equal subspaces are always compatible")
    rng = as_rng(seed)
    for _ in range(_MAX_REJECTIONS):
        B = random_orthogonal_basis(n, rng)
        common = B[:m]
        x_rest = B[m:k]
        y_rest = B[k:2 * k - m]
        if compatible:
            X = span(common + x_rest, n)
            Y = span(common + y_rest, n)
        else:
            # tilt Y's new directions towards X's complement of the intersection
            tilted = [list(y) for y in y_rest]
            tilted[0] = [a + b for a, b in zip(tilted[0], _nonzero_combo(rng, x_rest, height))]
            for idx in range(1, len(tilted)):
                if rng.random() < 0.5:
                    c = _combo(rng, x_rest, height)
                    tilted[idx] = [a + b for a, b in zip(tilted[idx], c)]
            X = span(common + x_rest, n)
            Y = span(common + [tuple(t) for t in tilted], n)
        if X.dim != k or Y.dim != k or intersection_dim(X, Y) != m:
            continue
        if is_compatible(X, Y) == compatible:
            return X, Y
    raise SubspaceError("could not realise the requested configuration")  # pragma: no cover


def _nonzero_combo(rng, vectors, height):
    while True:
        c = _combo(rng, vectors, height)
        if any(c):
            return c


def adjacent_noncompatible_pair(n: int, k: int, seed=None) -> tuple[Subspace, Subspace]:
    if k < 1 or k + 1 > n:
        raise SubspaceError(f"no adjacent pair of {k}-subspaces in C^{n}")
    X, Y = pair_with_intersection(n, k, k - 1, False, seed)
    if not is_adjacent(X, Y):  # pragma: no cover - guarded by construction
        raise SubspaceError("generator produced a non-adjacent pair")
    return X, Y


def compatible_codim2_pair(n: int, k: int, seed=None) -> tuple[Subspace, Subspace]:
    if k < 2 or k + 2 > n:
        raise SubspaceError(f"no codimension-2 pair of {k}-subspaces in C^{n}")
    return pair_with_intersection(n, k, k - 2, True, seed)


def random_pair(n: int, k: int, seed=None) -> tuple[Subspace, Subspace, int, bool]:
    """A pair with random intersection dimension and random compatibility."""
    rng = as_rng(seed)
    m_min = max(0, 2 * k - n)
    m = rng.randint(m_min, k - 1)
    compatible = rng.random() < 0.5
    X, Y = pair_with_intersection(n, k, m, compatible, rng)
    return X, Y, m, compatible
