import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orthograss.exactlinalg import gr
from orthograss.generators import (
    adjacent_noncompatible_pair,
    compatible_codim2_pair,
    pair_with_intersection,
    random_orthogonal_basis,
)
from orthograss.grassmann import GraphKind, validate_path
from orthograss.orthograph import (
    Distance2Case,
    NeighborKind,
    SearchExhausted,
    classify_common_neighbor,
    classify_distance2,
    clique_intersection_size,
    common_neighbor_families,
    count_common_neighbors,
    decide_compatibility_by_geodesics,
    distinct_hyperplanes,
    distinct_lines,
    exhaust_extensions,
    ortho_star_elements,
    ortho_top_elements,
    two_extensions,
    type1_neighbor,
    type2_neighbor,
    unique_partner,
)
from orthograss.subspace import (
    SubspaceError,
    coord,
    intersect,
    intersection_dim,
    is_compatible,
    is_orthogonal,
    is_ortho_adjacent,
    orthocomplement,
    span,
    sum_,
)

X4 = coord(4, 1, 2)
Y4 = span([[1, 0, 0, 0], [0, 1, 1, 0]])
X5 = coord(5, 1, 2)
Y5 = span([[1, 0, 0, 0, 0], [0, 1, 1, 0, 0]])


def common(Z, *others):
    return all(is_ortho_adjacent(Z, T) for T in others)


class TestNeighborConstructions:
    def test_type1_c4(self):
        Z = type1_neighbor(X4, Y4, coord(4, 4))
        assert Z == coord(4, 1, 4) and common(Z, X4, Y4)

    def test_type1_c5(self):
        assert type1_neighbor(X5, Y5, coord(5, 5)) == coord(5, 1, 5)

    def test_type1_rejects_non_orthogonal_line(self):
        with pytest.raises(SubspaceError):
            type1_neighbor(X4, Y4, coord(4, 3))

    def test_type2_c4(self):
        Z = type2_neighbor(X4, Y4, span([], 4, allow_zero=True))
        # complement of span{e1} inside span{e1, e2, e3}
        assert Z == coord(4, 2, 3) and common(Z, X4, Y4)

    def test_type2_c6(self):
        X, Y = adjacent_noncompatible_pair(6, 3, 2)
        W = distinct_lines(intersect(X, Y), 1)[0]
        assert common(type2_neighbor(X, Y, W), X, Y)

    def test_type2_wrong_dimension(self):
        with pytest.raises(SubspaceError):
            type2_neighbor(X4, Y4, coord(4, 1))

    def test_classification(self):
        assert classify_common_neighbor(X4, Y4, coord(4, 1, 4)) == NeighborKind.TYPE1
        assert classify_common_neighbor(X4, Y4, coord(4, 2, 3)) == NeighborKind.TYPE2
        with pytest.raises(SubspaceError):
            classify_common_neighbor(X4, Y4, X4)

    @given(st.integers(0, 10**6), st.sampled_from([(4, 2), (5, 2), (6, 3), (6, 2)]))
    def test_families_produce_common_neighbours(self, seed, nk):
        X, Y = adjacent_noncompatible_pair(*nk, seed)
        for fam in common_neighbor_families(X, Y):
            res = count_common_neighbors(X, Y, 3)
            for Z in res.neighbors:
                assert common(Z, X, Y)
                assert classify_common_neighbor(X, Y, Z) in (NeighborKind.TYPE1, NeighborKind.TYPE2)
            assert fam.parameter_space_dim >= 0


class TestCounts:
    def test_c4_exactly_two(self):
        res = count_common_neighbors(X4, Y4)
        assert res.label == "ExactlyTwo"
        assert set(res.neighbors) == {coord(4, 1, 4), coord(4, 2, 3)}
        assert is_orthogonal(*res.neighbors)

    def test_c4_exhaustive_in_basis_universe(self):
        # every common neighbour is compatible with X and Y; within the span of
        # e1, e4 and an orthogonal basis of X+Y there are no others
        basis = [[1, 0, 0, 0], [0, 1, 1, 0], [0, 1, -1, 0], [0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0]]
        cands = {span(list(p), 4) for p in itertools.combinations(basis, 2)}
        cands = {c for c in cands if c.dim == 2}
        found = {c for c in cands if common(c, X4, Y4)}
        assert found == set(count_common_neighbors(X4, Y4).neighbors)

    @pytest.mark.parametrize("n,k", [(5, 2), (6, 3)])
    def test_at_least_budget(self, n, k):
        X, Y = (X5, Y5) if n == 5 else adjacent_noncompatible_pair(6, 3, 1)
        res = count_common_neighbors(X, Y, 5)
        assert res.label == "AtLeast(5)" and len(set(res.neighbors)) == 5
        assert all(common(Z, X, Y) for Z in res.neighbors)

    def test_compatible_pair_rejected(self):
        with pytest.raises(SubspaceError):
            count_common_neighbors(coord(4, 1, 2), coord(4, 1, 3))

    def test_distinct_lines_and_hyperplanes(self):
        V = coord(4, 1, 2, 3)
        assert len(set(distinct_lines(V, 6))) == 6
        assert len(set(distinct_hyperplanes(V, 6))) == 6
        assert all(h.dim == 2 for h in distinct_hyperplanes(V, 3))


class TestTwoExtensions:
    def test_example_z13(self):
        X, Y = coord(4, 1, 2), coord(4, 3, 4)
        assert two_extensions(X, Y, coord(4, 1, 3)) == (coord(4, 2, 3), coord(4, 1, 4))

    def test_example_z24(self):
        X, Y = coord(4, 1, 2), coord(4, 3, 4)
        assert two_extensions(X, Y, coord(4, 2, 4)) == (coord(4, 1, 4), coord(4, 2, 3))

    def test_non_compatible_rejected(self):
        X, Y = pair_with_intersection(4, 2, 0, False, 0)
        with pytest.raises(SubspaceError):
            two_extensions(X, Y, coord(4, 1, 3))

    @given(st.integers(0, 10**6), st.sampled_from([(4, 2), (5, 2), (6, 3)]))
    def test_exactly_two_in_shared_universe(self, seed, nk):
        rng = random.Random(seed)
        X, Y = compatible_codim2_pair(*nk, rng)
        XY = intersect(X, Y)
        rest = orthocomplement(XY)
        p = distinct_lines(intersect(X, rest), 3)[rng.randrange(3) if X.dim - XY.dim > 1 else 0]
        q = distinct_lines(intersect(Y, rest), 3)[rng.randrange(3) if Y.dim - XY.dim > 1 else 0]
        Z = sum_(sum_(XY, p), q)
        Z1, Z2 = two_extensions(X, Y, Z)
        assert Z1 != Z2 and common(Z1, X, Y, Z) and common(Z2, X, Y, Z)
        assert set(exhaust_extensions(X, Y, Z)) == {Z1, Z2}

    @given(st.integers(0, 10**6))
    def test_witness_pair_forces_compatibility(self, seed):
        # two ortho-adjacent common neighbours of a codim-2 pair force compatibility
        rng = random.Random(seed)
        X, Y = pair_with_intersection(5, 2, 0, rng.random() < 0.5, rng)
        B = random_orthogonal_basis(5, rng)
        cands = [span(list(c), 5) for c in itertools.combinations(B, 2)] + [
            span(list(c), 5) for c in itertools.combinations(X.vectors() + Y.vectors(), 2)
        ]
        cands = [c for c in cands if c.dim == 2 and common(c, X, Y)]
        if any(is_ortho_adjacent(a, b) for a, b in itertools.combinations(cands, 2)):
            assert is_compatible(X, Y)


class TestUniquePartner:
    def test_c5_e4(self):
        assert unique_partner(X5, Y5, coord(5, 1, 4)) == coord(5, 1, 5)

    def test_c5_e5(self):
        assert unique_partner(X5, Y5, coord(5, 1, 5)) == coord(5, 1, 4)

    def test_wrong_dimension(self):
        with pytest.raises(SubspaceError):
            unique_partner(X4, Y4, coord(4, 1, 4))

    def test_type2_z_rejected(self):
        with pytest.raises(SubspaceError):
            unique_partner(X5, Y5, coord(5, 2, 3))


class TestCompatibilityDecision:
    def test_orthogonal_disjoint(self):
        dec = decide_compatibility_by_geodesics(coord(4, 1, 2), coord(4, 3, 4))
        assert dec.compatible and dec.witness is None and dec.label == "Compatible"

    def test_codim2_witness(self):
        X, Y = coord(4, 1, 2), span([[1, 0, 1, 0], [0, 0, 0, 1]])
        dec = decide_compatibility_by_geodesics(X, Y)
        assert not dec.compatible and dec.label == "NonCompatibleWitness"
        path = dec.witness
        assert path.length == 2 and path.start == X and path.end == Y
        validate_path(path.vertices, GraphKind.GRASSMANN)
        assert path.non_ortho_steps()

    def test_adjacent_witness_is_the_edge(self):
        dec = decide_compatibility_by_geodesics(X4, Y4)
        assert dec.witness.vertices == (X4, Y4)

    def test_equal_endpoints_rejected(self):
        with pytest.raises(SubspaceError):
            decide_compatibility_by_geodesics(X4, X4)

    def test_budget_exhaustion_is_reported(self, monkeypatch):
        import orthograss.orthograph as og

        monkeypatch.setattr(og, "coordinate_hyperplanes", lambda U: [])
        monkeypatch.setattr(og, "is_ortho_adjacent", lambda a, b: True)
        with pytest.raises(SearchExhausted):
            og.decide_compatibility_by_geodesics(X4, Y4, search_budget=3)

    @given(st.data())
    def test_agrees_with_predicate(self, data):
        n = data.draw(st.integers(2, 6))
        k = data.draw(st.integers(1, n - 1))
        m = data.draw(st.integers(max(0, 2 * k - n), k - 1))
        compatible = data.draw(st.booleans())
        X, Y = pair_with_intersection(n, k, m, compatible, data.draw(st.integers(0, 10**6)))
        dec = decide_compatibility_by_geodesics(X, Y)
        assert dec.compatible == compatible
        if dec.witness is not None:
            assert dec.witness.length == k - intersection_dim(X, Y)


class TestDistance2:
    def test_c6_adjacent(self):
        X, Y = coord(6, 1, 2), span([[1, 0, 0, 0, 0, 0], [0, 1, 1, 0, 0, 0]])
        rep = classify_distance2(X, Y)
        assert rep.case == Distance2Case.ADJACENT_NONCOMPATIBLE and rep.profile == ("many", "many")

    def test_c4_compatible_codim2(self):
        rep = classify_distance2(coord(4, 1, 2), coord(4, 3, 4))
        assert rep.case == Distance2Case.COMPATIBLE_CODIM2 and rep.profile[1] == "2"

    def test_c5_unique_partner_profile(self):
        rep = classify_distance2(X5, Y5)
        assert rep.profile == ("many", "1") and rep.regime == "k=n-3"

    def test_c4_adjacent_is_finite(self):
        rep = classify_distance2(X4, Y4)
        assert rep.profile == ("2", "0") and rep.profile_case is None

    def test_noncompatible_codim2(self):
        # a tilted pair in C^6 with a line in common; Z built from orthogonal frames
        X = coord(6, 1, 2, 3)
        Y = span([[1, 0, 0, 0, 0, 0], [0, 1, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0]])
        assert intersection_dim(X, Y) == 1 and not is_compatible(X, Y)
        Z = coord(6, 1, 2, 4)
        assert common(Z, X, Y)
        rep = classify_distance2(X, Y, common_neighbor=Z)
        assert rep.case == Distance2Case.NONCOMPATIBLE_CODIM2 and rep.profile[1] == "0"

    def test_within_reduction(self):
        V = coord(6, 1, 2, 3, 4, 5)
        X, Y = coord(6, 1, 2), span([[1, 0, 0, 0, 0, 0], [0, 1, 1, 0, 0, 0]])
        rep = classify_distance2(X, Y, within=V)
        assert rep.profile == ("many", "1") and rep.regime == "k=n-3"

    def test_far_pairs_rejected(self):
        with pytest.raises(SubspaceError):
            classify_distance2(coord(6, 1, 2, 3), coord(6, 4, 5, 6))
        with pytest.raises(SubspaceError):
            classify_distance2(coord(4, 1, 2), coord(4, 1, 3))


class TestCliques:
    E = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]

    def test_standard_star(self):
        star = ortho_star_elements(coord(4, 1), [[gr(x) for x in r] for r in self.E])
        assert set(star) == {coord(4, 1, 2), coord(4, 1, 3), coord(4, 1, 4)}

    def test_standard_top(self):
        top = ortho_top_elements(coord(4, 1, 2, 3), [[gr(x) for x in r] for r in self.E])
        assert set(top) == {coord(4, 1, 2), coord(4, 1, 3), coord(4, 2, 3)}

    def test_rotated_basis_star(self):
        B = [[1, 0, 0, 0], [0, 1, 1, 0], [0, 1, -1, 0], [0, 0, 0, 1]]
        B = [[gr(x) for x in r] for r in B]
        star = ortho_star_elements(span([B[1]], 4), B)
        assert len(star) == 3
        assert all(is_ortho_adjacent(a, b) for a, b in itertools.combinations(star, 2))

    def test_rejects_non_orthogonal_basis(self):
        B = [[gr(x) for x in r] for r in [[1, 0, 0], [1, 1, 0], [0, 0, 1]]]
        with pytest.raises(SubspaceError):
            ortho_star_elements(coord(3, 1), B)

    def test_rejects_centre_outside_basis(self):
        B = [[gr(x) for x in r] for r in self.E]
        with pytest.raises(SubspaceError):
            ortho_star_elements(span([[1, 1, 0, 0]]), B)

    @given(st.integers(3, 6), st.integers(0, 10**6), st.data())
    def test_sizes(self, n, seed, data):
        k = data.draw(st.integers(1, n - 1))
        B = random_orthogonal_basis(n, seed)
        S = span(B[: k - 1], n, allow_zero=True)
        U = span(B[: k + 1], n)
        assert len(ortho_star_elements(S, B)) == n - k + 1
        assert len(ortho_top_elements(U, B)) == k + 1
        assert clique_intersection_size(ortho_star_elements(S, B), ortho_top_elements(U, B)) == 2
