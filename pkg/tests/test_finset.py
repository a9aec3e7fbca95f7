import itertools

import pytest
from hypothesis import given, settings, strategies as st

from spanforge import (
    CodomainMismatch,
    DomainMismatch,
    FinMap,
    FinSet,
    MalformedTables,
    SquareDoesNotCommute,
    all_maps,
    compose,
    identity,
    invert,
    is_bijection,
    mediating,
    product,
    pullback,
)
from spanforge.finset import constant, terminal_map


def sizes(upper):
    return range(upper + 1)


class TestFinSetAndMap:
    def test_labels_must_match_size(self):
        with pytest.raises(MalformedTables):
            FinSet(2, ("a",))
        with pytest.raises(MalformedTables):
            FinSet(2, ("a", "a"))

    def test_table_entries_bounded(self):
        with pytest.raises(MalformedTables):
            FinMap(FinSet(1), FinSet(1), (1,))
        with pytest.raises(MalformedTables):
            FinMap(FinSet(2), FinSet(2), (0,))

    def test_empty_sets_allowed(self):
        empty = FinSet(0)
        f = FinMap(empty, FinSet(3), ())
        assert compose(f, identity(empty)).table == ()


class TestCompose:
    def test_identity_then_swap_is_swap(self):
        two = FinSet(2)
        swap = FinMap(two, two, (1, 0))
        assert compose(identity(two), swap) == swap
        assert compose(swap, identity(two)) == swap

    def test_constant_then_negation(self):
        three, two = FinSet(3), FinSet(2)
        const0 = constant(three, two, 0)
        negation = FinMap(two, two, (1, 0))
        assert compose(negation, const0) == constant(three, two, 1)

    def test_domain_mismatch(self):
        with pytest.raises(DomainMismatch):
            compose(identity(FinSet(2)), identity(FinSet(3)))

    @settings(max_examples=100, deadline=None)
    @given(st.data())
    def test_matches_pointwise_oracle(self, data):
        a = data.draw(st.integers(0, 5))
        b = data.draw(st.integers(1, 5))
        c = data.draw(st.integers(1, 5))
        f_table = data.draw(st.lists(st.integers(0, b - 1), min_size=a, max_size=a))
        g_table = data.draw(st.lists(st.integers(0, c - 1), min_size=b, max_size=b))
        f = FinMap(FinSet(a), FinSet(b), tuple(f_table))
        g = FinMap(FinSet(b), FinSet(c), tuple(g_table))
        composite = compose(g, f)
        for x in range(a):
            assert composite(x) == g_table[f_table[x]]

    def test_associative_and_unital_exhaustively(self):
        # every composable triple between sets of size <= 3
        for a, b, c, d in itertools.product(sizes(3), repeat=4):
            A, B, C, D = FinSet(a), FinSet(b), FinSet(c), FinSet(d)
            for f in all_maps(A, B):
                assert compose(f, identity(A)) == f
                assert compose(identity(B), f) == f
                for g in all_maps(B, C):
                    gf = compose(g, f)
                    for h in all_maps(C, D):
                        assert compose(h, gf) == compose(compose(h, g), f)


class TestPullback:
    def test_pullback_of_identities_is_diagonal(self):
        two = FinSet(2)
        pb = pullback(identity(two), identity(two))
        assert pb.apex.size == 2
        assert pb.elems == ((0, 0), (1, 1))

    def test_pullback_over_terminal_is_product(self):
        pb = pullback(terminal_map(FinSet(2)), terminal_map(FinSet(3)))
        assert pb.apex.size == 6

    def test_parity_pullback(self):
        four, two = FinSet(4), FinSet(2)
        parity = FinMap(four, two, (0, 1, 0, 1))
        pb = pullback(parity, identity(two))
        # oracle: enumerate matching pairs directly
        expected = tuple((a, b) for a in range(4) for b in range(2) if parity(a) == b)
        assert pb.elems == expected
        assert pb.apex.size == 4

    def test_codomain_mismatch(self):
        with pytest.raises(CodomainMismatch):
            pullback(identity(FinSet(2)), identity(FinSet(3)))

    def test_elements_strictly_lexicographic(self):
        for a, b, c in itertools.product(sizes(3), sizes(3), sizes(2)):
            for f in all_maps(FinSet(a), FinSet(c)):
                for g in all_maps(FinSet(b), FinSet(c)):
                    elems = pullback(f, g).elems
                    assert all(elems[i] < elems[i + 1] for i in range(len(elems) - 1))

    def test_square_commutes(self):
        four, two = FinSet(4), FinSet(2)
        parity = FinMap(four, two, (0, 1, 0, 1))
        pb = pullback(parity, identity(two))
        assert compose(parity, pb.proj_left) == compose(identity(two), pb.proj_right)


class TestMediating:
    def test_diagonal_from_identity_cone(self):
        two = FinSet(2)
        pb = pullback(identity(two), identity(two))
        h = mediating(pb, identity(two), identity(two))
        assert h.table == (0, 1)

    def test_unique_factorization_exhaustively(self):
        # every commuting cone over small legs factors exactly once
        for a, b, c, x in itertools.product(sizes(2), sizes(2), sizes(2), sizes(2)):
            A, B, C, X = FinSet(a), FinSet(b), FinSet(c), FinSet(x)
            for f in all_maps(A, C):
                for g in all_maps(B, C):
                    pb = pullback(f, g)
                    for u in all_maps(X, A):
                        for v in all_maps(X, B):
                            if compose(f, u) != compose(g, v):
                                continue
                            h = mediating(pb, u, v)
                            assert compose(pb.proj_left, h) == u
                            assert compose(pb.proj_right, h) == v
                            others = [
                                k
                                for k in all_maps(X, pb.apex)
                                if compose(pb.proj_left, k) == u
                                and compose(pb.proj_right, k) == v
                            ]
                            assert others == [h]

    def test_unique_factorization_spot_size_four(self):
        four, two, X = FinSet(4), FinSet(2), FinSet(3)
        f = FinMap(four, two, (0, 1, 0, 1))
        g = FinMap(four, two, (0, 0, 1, 1))
        pb = pullback(f, g)
        u = FinMap(X, four, (0, 1, 2))
        v = FinMap(X, four, (1, 2, 0))
        assert compose(f, u) == compose(g, v)
        h = mediating(pb, u, v)
        assert compose(pb.proj_left, h) == u
        assert compose(pb.proj_right, h) == v
        candidates = [
            k
            for k in all_maps(X, pb.apex)
            if compose(pb.proj_left, k) == u and compose(pb.proj_right, k) == v
        ]
        assert candidates == [h]

    def test_noncommuting_cone_rejected(self):
        two = FinSet(2)
        pb = pullback(identity(two), identity(two))
        swap = FinMap(two, two, (1, 0))
        with pytest.raises(SquareDoesNotCommute):
            mediating(pb, identity(two), swap)


class TestProduct:
    def test_sizes(self):
        assert product(FinSet(2), FinSet(3)).apex.size == 6
        assert product(FinSet(0), FinSet(5)).apex.size == 0
        assert product(FinSet(5), FinSet(0)).apex.size == 0

    def test_projections_recover_coordinates(self):
        pb = product(FinSet(2), FinSet(3))
        seen = set()
        for i, (a, b) in enumerate(pb.elems):
            assert pb.proj_left(i) == a
            assert pb.proj_right(i) == b
            seen.add((a, b))
        assert seen == {(a, b) for a in range(2) for b in range(3)}


class TestBijections:
    def test_invert_roundtrip(self):
        three = FinSet(3)
        f = FinMap(three, three, (2, 0, 1))
        assert is_bijection(f)
        assert compose(invert(f), f) == identity(three)
        assert compose(f, invert(f)) == identity(three)

    def test_invert_rejects_noninjective(self):
        with pytest.raises(MalformedTables):
            invert(FinMap(FinSet(2), FinSet(2), (0, 0)))
