import random

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

import oracles
from orthograss import conjclass as cc
from orthograss.exactlinalg import ExactMatrix, gr
from orthograss.subspace import ConsistencyError, coord, is_ortho_adjacent, ortho_within, span

SP6 = cc.SpectralData(("0", "1", "2"), (2, 2, 2))
SP8 = cc.SpectralData(("0", "1", "2"), (3, 3, 2))
SP8_4 = cc.SpectralData(("0", "1", "2", "3"), (2, 2, 2, 2))

A6 = cc.SelfAdjointOperator(SP6, [coord(6, 1, 2), coord(6, 3, 4), coord(6, 5, 6)])
B6 = cc.SelfAdjointOperator(SP6, [coord(6, 1, 2), coord(6, 3, 5), coord(6, 4, 6)])
Y2 = span([[0, 0, 1, 0, 0, 0], [0, 0, 0, 1, 1, 0]])
C6 = cc.SelfAdjointOperator(SP6, [coord(6, 1, 2), Y2, ortho_within(Y2, coord(6, 3, 4, 5, 6))])


def matrix_oracle(A: cc.SelfAdjointOperator) -> ExactMatrix:
    M = ExactMatrix.zeros(A.n, A.n)
    for a, X in zip(A.spectral.eigenvalues, A.eigenspaces):
        M = M + oracles.projection(X).scale(gr(a))
    return M


class TestSpectralData:
    def test_invariants(self):
        with pytest.raises(cc.OperatorError):
            cc.SpectralData(("0", "0"), (1, 1))
        with pytest.raises(cc.OperatorError):
            cc.SpectralData(("0", "1"), (1, 0))
        with pytest.raises(cc.OperatorError):
            cc.SpectralData(("0", "1"), (1,))

    def test_rational_parsing(self):
        sp = cc.SpectralData(("1/2", "-3"), (1, 2))
        assert sp.eigenvalues == (mpq(1, 2), mpq(-3)) and sp.n == 3 and sp.k == 2
        assert sp.to_json() == {"eigenvalues": ["1/2", "-3"], "multiplicities": [1, 2]}

    def test_complex_eigenvalue_rejected(self):
        with pytest.raises(cc.OperatorError):
            cc.SpectralData((gr(0, 1), gr(1)), (1, 1))


class TestOperators:
    def test_projection_like(self):
        A = cc.SelfAdjointOperator(cc.SpectralData(("0", "1"), (1, 1)), [coord(2, 2), coord(2, 1)])
        assert cc.to_matrix(A) == ExactMatrix.from_rows([[1, 0], [0, 0]])

    def test_diagonal(self):
        A = cc.SelfAdjointOperator(cc.SpectralData(("1", "2"), (1, 1)), [coord(2, 1), coord(2, 2)])
        assert cc.to_matrix(A) == ExactMatrix.diagonal([1, 2])

    def test_tilted_projection(self):
        A = cc.SelfAdjointOperator(cc.SpectralData(("0", "1"), (1, 1)), [span([[1, -1]]), span([[1, 1]])])
        h = gr(mpq(1, 2))
        assert cc.to_matrix(A) == ExactMatrix.from_rows([[h, h], [h, h]])

    def test_invariants(self):
        with pytest.raises(cc.OperatorError):
            cc.SelfAdjointOperator(SP6, [coord(6, 1, 2), coord(6, 2, 3), coord(6, 5, 6)])
        with pytest.raises(cc.OperatorError):
            cc.SelfAdjointOperator(SP6, [coord(6, 1), coord(6, 3, 4), coord(6, 5, 6)])
        with pytest.raises(cc.OperatorError):
            cc.SelfAdjointOperator(SP6, [coord(6, 1, 2), coord(6, 3, 4)])

    def test_json_round_trip(self):
        assert cc.SelfAdjointOperator.from_json(C6.to_json()) == C6
        with pytest.raises(cc.OperatorError):
            cc.SelfAdjointOperator.from_json({"eigenvalues": ["0"]})

    @given(st.integers(0, 10**6))
    def test_matrix_annihilates_eigenspaces(self, seed):
        A = cc.random_basis_operator(SP6, seed)
        M = cc.to_matrix(A)
        assert M == matrix_oracle(A) and M.is_hermitian()
        for a, X in zip(A.spectral.eigenvalues, A.eigenspaces):
            shifted = M - ExactMatrix.identity(A.n).scale(gr(a))
            assert (shifted @ X.basis.transpose()).is_zero()
            assert shifted.rank() == A.n - X.dim


class TestPermutations:
    def test_swap_exchanges_complements(self):
        sp = cc.SpectralData(("0", "1"), (2, 2))
        A = cc.SelfAdjointOperator(sp, [coord(4, 3, 4), coord(4, 1, 2)])
        B = cc.permute(A, cc.DeltaPermutation((2, 1)))
        assert B.eigenspace(1) == A.eigenspace(2) and B.eigenspace(2) == A.eigenspace(1)

    def test_identity(self):
        assert cc.permute(A6, cc.DeltaPermutation((1, 2, 3))) == A6

    def test_unequal_multiplicities(self):
        with pytest.raises(cc.OperatorError):
            cc.permute(cc.random_basis_operator(SP8, 0), cc.DeltaPermutation((1, 3, 2)))

    def test_not_a_permutation(self):
        with pytest.raises(cc.OperatorError):
            cc.DeltaPermutation((1, 1, 2))

    def test_inverse(self):
        d = cc.DeltaPermutation((2, 3, 1))
        assert [d.inverse()(d(i)) for i in (1, 2, 3)] == [1, 2, 3]

    @given(st.integers(0, 10**6), st.permutations([1, 2, 3]))
    def test_type_transforms_by_delta(self, seed, perm):
        d = cc.DeltaPermutation(tuple(perm))
        A, B = cc.random_operator_pair(SP6, random.Random(seed).choice(["adj-comm", "adj-noncomm"]), seed)
        t = cc.adjacency_type(A, B)
        pa, pb = cc.permute(A, d), cc.permute(B, d)
        t2 = cc.adjacency_type(pa, pb)
        inv = d.inverse()
        assert t2 == tuple(sorted(inv(i) for i in t))
        assert cc.is_commutatively_adjacent(pa, pb) == cc.is_commutatively_adjacent(A, B)


class TestAdjacency:
    def test_example(self):
        assert cc.adjacency_type(A6, B6) == (2, 3)
        D = cc.to_matrix(A6) - cc.to_matrix(B6)
        assert D.rank() == 2
        # (A - B) e4 = -e4, (A - B) e5 = e5
        assert D.column(3)[3] == gr(-1) and D.column(4)[4] == gr(1)

    def test_self(self):
        assert cc.adjacency_type(A6, A6) is None
        assert not cc.is_commutatively_adjacent(A6, A6)

    def test_three_index(self):
        B = cc.SelfAdjointOperator(SP6, [coord(6, 1, 3), coord(6, 2, 5), coord(6, 4, 6)])
        assert cc.differing_indices(A6, B) == [1, 2, 3] and cc.adjacency_type(A6, B) is None

    def test_commutative(self):
        assert cc.is_commutatively_adjacent(A6, B6)
        MA, MB = matrix_oracle(A6), matrix_oracle(B6)
        assert MA @ MB == MB @ MA

    def test_non_commutative(self):
        assert cc.adjacency_type(A6, C6) == (2, 3)
        assert not cc.is_commutatively_adjacent(A6, C6)
        MA, MC = matrix_oracle(A6), matrix_oracle(C6)
        assert MA @ MC != MC @ MA

    def test_different_classes(self):
        with pytest.raises(cc.OperatorError):
            cc.adjacency_type(A6, cc.random_basis_operator(cc.SpectralData(("0", "1", "3"), (2, 2, 2)), 0))

    @given(st.integers(0, 10**6), st.sampled_from(cc.PAIR_KINDS))
    def test_levels_agree(self, seed, kind):
        sp = SP8_4 if kind == "four-index" else SP8
        A, B = cc.random_operator_pair(sp, kind, seed)
        op = cc._operator_level_adjacent(A, B)
        eig = cc._eigenspace_level_type(A, B) is not None
        assert op == eig == (kind in ("adj-comm", "adj-noncomm"))

    def test_disagreement_raises(self, monkeypatch):
        monkeypatch.setattr(cc, "_operator_level_adjacent", lambda A, B: False)
        with pytest.raises(ConsistencyError):
            cc.adjacency_type(A6, B6)


class TestSpectrumSwap:
    def test_scaling(self):
        sp = cc.SpectralData(("0", "1"), (1, 1))
        A = cc.SelfAdjointOperator(sp, [coord(2, 2), coord(2, 1)])
        assert cc.to_matrix(cc.spectrum_swap(A, ("0", "5"))) == cc.to_matrix(A).scale(5)

    def test_example_preserved(self):
        A2, B2 = cc.spectrum_swap(A6, (1, 4, 9)), cc.spectrum_swap(B6, (1, 4, 9))
        assert cc.adjacency_type(A2, B2) == (2, 3) and cc.is_commutatively_adjacent(A2, B2)

    def test_repeated_values(self):
        with pytest.raises(cc.OperatorError):
            cc.spectrum_swap(A6, (1, 1, 2))
        with pytest.raises(cc.OperatorError):
            cc.spectrum_swap(A6, (1, 2))

    @given(st.integers(0, 10**6), st.sampled_from(["adj-comm", "adj-noncomm", "codim2", "unrelated"]))
    def test_both_directions(self, seed, kind):
        A, B = cc.random_operator_pair(SP8, kind, seed)
        A2, B2 = cc.spectrum_swap(A, ("-1", "1/3", "7")), cc.spectrum_swap(B, ("-1", "1/3", "7"))
        assert cc.adjacency_type(A, B) == cc.adjacency_type(A2, B2)
        assert cc.is_commutatively_adjacent(A, B) == cc.is_commutatively_adjacent(A2, B2)
        back = cc.spectrum_swap(A2, ("0", "1", "2"))
        assert back == A


class TestMidpoint:
    def test_example(self):
        C = cc.midpoint(A6, C6)
        assert cc.is_commutatively_adjacent(C, A6) and cc.is_commutatively_adjacent(C, C6)
        assert C.eigenspace(1) == A6.eigenspace(1)

    def test_commuting_rejected(self):
        with pytest.raises(cc.OperatorError):
            cc.midpoint(A6, B6)

    @given(st.integers(0, 10**6))
    def test_random(self, seed):
        A, B = cc.random_operator_pair(SP8, "adj-noncomm", seed)
        C = cc.midpoint(A, B)
        i, j = cc.adjacency_type(A, B)
        assert all(C.eigenspace(t) == A.eigenspace(t) for t in range(1, 4) if t not in (i, j))
        assert is_ortho_adjacent(C.eigenspace(i), A.eigenspace(i))


class TestSixBound:
    def test_four_index(self):
        A, B = cc.random_operator_pair(SP8_4, "four-index", 0)
        found = cc.enumerate_common_comm_neighbors(A, B)
        assert len(found) <= 6
        for C in found:
            assert cc.is_commutatively_adjacent(C, A) and cc.is_commutatively_adjacent(C, B)

    def test_commuting_four_index_has_candidates(self):
        # two commuting moves on disjoint index pairs: both intermediate orders work
        A = cc.basis_operator(SP8_4, [tuple(coord(8, i).vectors()[0]) for i in range(1, 9)])
        B = cc.SelfAdjointOperator(SP8_4, [coord(8, 1, 3), coord(8, 2, 4), coord(8, 5, 7), coord(8, 6, 8)])
        found = cc.enumerate_common_comm_neighbors(A, B)
        assert 1 <= len(found) <= 6

    def test_three_index_may_be_empty(self):
        A = cc.basis_operator(SP6, [tuple(coord(6, i).vectors()[0]) for i in range(1, 7)])
        B = cc.SelfAdjointOperator(SP6, [coord(6, 3, 5), coord(6, 1, 6), coord(6, 2, 4)])
        found = cc.enumerate_common_comm_neighbors(A, B)
        assert len(found) <= 6
        for C in found:
            assert cc.is_commutatively_adjacent(C, A) and cc.is_commutatively_adjacent(C, B)

    def test_two_index_rejected(self):
        with pytest.raises(cc.OperatorError):
            cc.enumerate_common_comm_neighbors(A6, B6)


class TestDistance2Ops:
    def test_three_index_is_finite(self):
        A = cc.basis_operator(SP6, [tuple(coord(6, i).vectors()[0]) for i in range(1, 7)])
        B = cc.SelfAdjointOperator(SP6, [coord(6, 1, 3), coord(6, 2, 5), coord(6, 4, 6)])
        rep = cc.classify_distance2_ops(A, B)
        assert rep.profile[0] == "finite" and int(rep.profile[1]) <= 6

    def test_adjacent_noncommuting_reduces(self):
        sp = cc.SpectralData(("0", "1"), (2, 3))
        A = cc.SelfAdjointOperator(sp, [coord(5, 4, 5), coord(5, 1, 2, 3)])
        Y = span([[1, 0, 0, 0, 0], [0, 1, 0, 1, 0], [0, 0, 1, 0, 0]])
        B = cc.SelfAdjointOperator(sp, [ortho_within(Y, coord(5, 1, 2, 3, 4, 5)), Y])
        rep = cc.classify_distance2_ops(A, B)
        assert rep.adjacent_noncommuting and rep.profile == ("many", "1")


class TestConnectivity:
    def test_small_class_is_connected(self):
        sp = cc.SpectralData(("0", "1", "2"), (2, 2, 1))
        ops = cc.connectivity_universe(sp, 2, 0)
        assert cc.commutativity_components(ops) == 1

    def test_isolated_pair(self):
        assert cc.commutativity_components([A6, C6]) == 2
