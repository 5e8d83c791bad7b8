"""Acceptance suite: eleven exact checks, one verdict line each.

Run under pytest, or directly with ``python3 tests/test_acceptance.py`` for a
plain pass/fail listing.  Every check uses zero tolerance.
"""

from __future__ import annotations

import itertools
import random
import sys
import time

import pytest

from orthograss import conjclass as cc
from orthograss import dim4
from orthograss.exactlinalg import ZERO
from orthograss.generators import (
    adjacent_noncompatible_pair,
    compatible_codim2_pair,
    derive_seed,
    random_gaussian,
    random_orthogonal_basis,
    random_pair,
)
from orthograss.grassmann import GraphKind, bfs_distance, johnson_universe, validate_path
from orthograss.harness.campaigns import clique_configuration
from orthograss.orthograph import (
    SearchExhausted,
    count_common_neighbors,
    decide_compatibility_by_geodesics,
    exhaust_extensions,
    ortho_star_elements,
    ortho_top_elements,
    two_extensions,
    type1_neighbor,
    type2_neighbor,
    unique_partner,
)
from orthograss.subspace import (
    Subspace,
    intersect,
    intersection_dim,
    is_adjacent,
    is_compatible,
    is_orthogonal,
    is_ortho_adjacent,
    orthocomplement,
    span,
    sum_,
)

SEED = 20240601
RESULTS: dict[int, tuple[bool, str]] = {}


def random_line(U: Subspace, rng: random.Random) -> Subspace:
    vs = U.vectors()
    while True:
        cs = [random_gaussian(rng, 3) for _ in vs]
        v = [sum((c * b[i] for c, b in zip(cs, vs)), ZERO) for i in range(U.ambient)]
        if any(v):
            return span([v], U.ambient)


def random_hyperplane(U: Subspace, rng: random.Random) -> Subspace:
    """A hyperplane of U: the orthocomplement inside U of a random line."""
    L = random_line(U, rng)
    return intersect(U, orthocomplement(L))


def is_clique(elems) -> bool:
    return all(is_ortho_adjacent(a, b) for a, b in itertools.combinations(elems, 2))


def matrix_rank_2_and_commute(A, B) -> tuple[bool, bool]:
    MA, MB = cc.to_matrix(A), cc.to_matrix(B)
    return (MA - MB).rank() == 2, MA @ MB == MB @ MA


# -- criteria ------------------------------------------------------------------------


def criterion_1():
    bad = 0
    for i in range(500):
        X, Y = adjacent_noncompatible_pair(4, 2, derive_seed(SEED, i))
        res = count_common_neighbors(X, Y)
        ok = res.exact and res.label == "ExactlyTwo"
        if ok:
            z1, z2 = res.neighbors
            ok = is_orthogonal(z1, z2) and all(is_ortho_adjacent(z, w) for z in (z1, z2) for w in (X, Y))
        bad += not ok
    return bad == 0, f"{500 - bad}/500 pairs give two mutually orthogonal common neighbours"


def criterion_2():
    bad = cases = 0
    for n in range(3, 9):
        for k in range(1, n):
            for t in range(20):
                rng = random.Random(derive_seed(SEED, n * 1000 + k * 100 + t))
                B = random_orthogonal_basis(n, rng)
                idx = rng.sample(range(n), n)
                S = span([B[i] for i in idx[: k - 1]], n, allow_zero=True)
                U = span([B[i] for i in idx[: k + 1]], n)
                star = ortho_star_elements(S, B, check=False)
                top = ortho_top_elements(U, B, check=False)
                cases += 1
                ok = len(star) == n - k + 1 and len(top) == k + 1
                bad += not (ok and is_clique(star) and is_clique(top))
    return bad == 0, f"{cases - bad}/{cases} (n, k, basis) cases have star n-k+1, top k+1, both cliques"


def criterion_3():
    n, k = 6, 3
    seen = {"star-star-same": set(), "star-star-distinct": set(), "star-top": set()}
    bad = 0
    configs = [("star-star-same", m) for m in (0, 1, 2)] + [("star-star-distinct", None)] + [
        ("star-top", m) for m in (0, 1, 2)
    ]
    for t in range(20):
        for j, (config, target) in enumerate(configs):
            rng = random.Random(derive_seed(SEED, 100 * t + j))
            m, _ = clique_configuration(n, k, config, target, rng)
            seen[config].add(m)
            bad += target is not None and m != target
    ok = (
        bad == 0
        and seen["star-star-same"] == {0, 1, 2}
        and seen["star-star-distinct"] <= {0, 1}
        and seen["star-top"] == {0, 1, 2}
    )
    summary = ", ".join(f"{c}={sorted(v)}" for c, v in seen.items())
    return ok, summary


def criterion_4():
    bad = 0
    shapes = [(4, 2), (6, 3), (8, 3)]
    for i in range(300):
        n, k = shapes[i % 3]
        rng = random.Random(derive_seed(SEED, i))
        X, Y = compatible_codim2_pair(n, k, rng)
        XY = intersect(X, Y)
        rest = orthocomplement(XY)
        Z = sum_(sum_(XY, random_line(intersect(X, rest), rng)), random_line(intersect(Y, rest), rng))
        Z1, Z2 = two_extensions(X, Y, Z)
        triple = all(is_ortho_adjacent(W, T) for W in (Z1, Z2) for T in (X, Y, Z))
        found = exhaust_extensions(X, Y, Z)
        bad += not (triple and Z1 != Z2 and set(found) == {Z1, Z2} and len(found) == 2)
    return bad == 0, f"{300 - bad}/300 codim-2 pairs have exactly two extensions"


def criterion_5():
    bad = 0
    for i in range(200):
        k = 2 + i % 2
        n = k + 3
        rng = random.Random(derive_seed(SEED, i))
        X, Y = adjacent_noncompatible_pair(n, k, rng)
        P = random_line(orthocomplement(sum_(X, Y)), rng)
        Z = type1_neighbor(X, Y, P)
        partner = unique_partner(X, Y, Z)
        passes = partner != Z and all(is_ortho_adjacent(partner, T) for T in (X, Y, Z))
        W = random_hyperplane(intersect(X, Y), rng)
        T2 = type2_neighbor(X, Y, W)
        bad += not (passes and not is_adjacent(T2, Z))
    return bad == 0, f"{200 - bad}/200 pairs: partner verified, Type2 candidate not adjacent to Z"


def criterion_6():
    disagree = exhausted = invalid = 0
    for i in range(500):
        rng = random.Random(derive_seed(SEED, i))
        n = rng.randint(3, 8)
        k = rng.randint(1, n - 1)
        X, Y, _, _ = random_pair(n, k, rng)
        try:
            dec = decide_compatibility_by_geodesics(X, Y, seed=rng.getrandbits(32))
        except SearchExhausted:
            exhausted += 1
            continue
        disagree += dec.compatible != is_compatible(X, Y)
        if dec.witness is not None:
            try:
                validate_path(dec.witness.vertices, GraphKind.GRASSMANN)
                if dec.witness.length != k - intersection_dim(X, Y):
                    raise ValueError("not a geodesic")
                if not any(not is_ortho_adjacent(a, b) for a, b in zip(dec.witness.vertices, dec.witness.vertices[1:])):
                    raise ValueError("every step is ortho-adjacent")
            except ValueError:
                invalid += 1
    ok = disagree == exhausted == invalid == 0
    return ok, f"disagreements={disagree} invalid_witnesses={invalid} budget_failures={exhausted}"


def criterion_7():
    checked = bad = 0
    for n, k in ((6, 3), (5, 2)):
        U = johnson_universe(n, k)
        verts = list(U.vertices)
        for X, Y in itertools.combinations(verts, 2):
            # coordinate subspaces: the intersection is read off the supports
            sx = {j for j in range(n) if any(v[j] for v in X.vectors())}
            sy = {j for j in range(n) if any(v[j] for v in Y.vectors())}
            checked += 1
            bad += bfs_distance(U, X, Y) != k - len(sx & sy)
    return bad == 0 and checked == 190 + 45, f"{checked - bad}/{checked} Johnson pairs match k - dim(X∩Y)"


def criterion_8():
    violations = broken = 0
    for t in range(10):
        fam = dim4.random_perp_closed_family(derive_seed(SEED, t))
        f = dim4.exceptional_map(fam)
        rep = dim4.check_ortho_automorphism(f, dim4.mixed_pairs(fam.sorted_members(), 200, derive_seed(SEED, 50 + t)))
        violations += len(rep.violations) + (rep.checked != 200)
        X, Y = dim4.find_adjacency_breaking_pair(f)
        broken += not (is_adjacent(X, Y) and not is_adjacent(f(X), f(Y)))
    return violations == broken == 0, f"violations={violations} families_without_breaking_pair={broken}"


SP3 = cc.SpectralData(("0", "1", "2"), (3, 3, 2))
SP4 = cc.SpectralData(("0", "1", "2", "3"), (2, 2, 2, 2))


def criterion_9():
    kinds = [(SP3, "adj-comm"), (SP3, "adj-noncomm"), (SP3, "codim2"), (SP3, "three-index"),
             (SP4, "four-index"), (SP3, "unrelated")]
    bad = 0
    for i in range(300):
        sp, kind = kinds[i % len(kinds)]
        A, B = cc.random_operator_pair(sp, kind, derive_seed(SEED, i))
        op_level = cc._operator_level_adjacent(A, B)
        eig_level = cc._eigenspace_level_type(A, B) is not None
        rank2, _ = matrix_rank_2_and_commute(A, B)
        expected = kind in ("adj-comm", "adj-noncomm")
        bad += not (op_level == eig_level == expected) or (expected and not rank2)
    return bad == 0, f"{300 - bad}/300 operator pairs: both adjacency tests agree"


def criterion_10():
    bad = largest = 0
    for i in range(200):
        sp, kind = (SP3, "three-index") if i % 2 == 0 else (SP4, "four-index")
        A, B = cc.random_operator_pair(sp, kind, derive_seed(SEED, i))
        found = cc.enumerate_common_comm_neighbors(A, B)
        largest = max(largest, len(found))
        ok = len(found) <= 6
        for C in found:
            for T in (A, B):
                rank2, commute = matrix_rank_2_and_commute(C, T)
                ok = ok and rank2 and commute and cc.is_commutatively_adjacent(C, T)
        bad += not ok
    return bad == 0, f"{200 - bad}/200 pairs within the bound (largest enumeration {largest})"


def criterion_11():
    kinds = ["adj-comm", "adj-noncomm", "codim2", "three-index", "unrelated"]
    bad = midpoints = 0
    for i in range(200):
        A, B = cc.random_operator_pair(SP3, kinds[i % len(kinds)], derive_seed(SEED, i))
        A2, B2 = cc.spectrum_swap(A, ("1", "4", "9")), cc.spectrum_swap(B, ("1", "4", "9"))
        ok = cc.adjacency_type(A, B) == cc.adjacency_type(A2, B2)
        ok = ok and cc.is_commutatively_adjacent(A, B) == cc.is_commutatively_adjacent(A2, B2)
        if cc.adjacency_type(A, B) is not None and not cc.operators_commute(A, B):
            C = cc.midpoint(A, B)
            midpoints += 1
            ok = ok and cc.is_commutatively_adjacent(C, A) and cc.is_commutatively_adjacent(C, B)
        bad += not ok
    return bad == 0 and midpoints > 0, f"{200 - bad}/200 pairs preserved, {midpoints} midpoints verified"


CRITERIA = {
    1: ("dim-4 geodesic count", criterion_1),
    2: ("clique sizes", criterion_2),
    3: ("clique intersections", criterion_3),
    4: ("two extensions", criterion_4),
    5: ("unique partner", criterion_5),
    6: ("compatibility decision", criterion_6),
    7: ("distance formula", criterion_7),
    8: ("dim-4 exceptional map", criterion_8),
    9: ("operator adjacency equivalence", criterion_9),
    10: ("six-bound", criterion_10),
    11: ("spectrum swap and midpoint", criterion_11),
}


def run(number: int) -> tuple[bool, str]:
    name, fn = CRITERIA[number]
    start = time.perf_counter()
    ok, detail = fn()
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {name}: {detail} ({time.perf_counter() - start:.1f}s)"
    RESULTS[number] = (ok, line)
    print(line)
    return ok, line


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    ok, line = run(number)
    assert ok, line


if __name__ == "__main__":
    chosen = [int(a) for a in sys.argv[1:]] or sorted(CRITERIA)
    outcomes = [run(n)[0] for n in chosen]
    sys.exit(0 if all(outcomes) else 1)
