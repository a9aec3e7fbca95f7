import itertools

import pytest

from spanforge import (
    FinMap,
    FinSet,
    InternalCategory,
    InternalFunctor,
    InternalGroupoid,
    MalformedTables,
    NotInternalFunctor,
    NotLex,
    SizeLimitExceeded,
    UnderlyingCategoryInvalid,
    apply_lex_functor,
    check_internal_category,
    check_internal_groupoid,
    compose,
    external_category,
    hom_functor_data,
    identity,
    identity_functor_data,
    identity_internal_functor,
    pullback,
)
from spanforge.catalog import (
    CATALOG,
    GROUPS,
    MONOIDS,
    MonoidTable,
    action_groupoid_z2,
    discrete_category,
    monoid_from_rows,
    one_object_category,
    one_object_groupoid,
    pair_groupoid,
)
from spanforge.internal import two_sided_inverse

from util import single_entry_mutants


class TestMonoidCatalog:
    def test_expected_members_and_orders(self):
        assert set(MONOIDS) == {
            "trivial",
            "z2",
            "and2",
            "z3",
            "leftzero3",
            "z4",
            "klein4",
        }
        assert all(m.size <= 4 for m in MONOIDS.values())

    def test_groups_are_exactly_the_invertible_ones(self):
        assert set(GROUPS) == {"trivial", "z2", "z3", "z4", "klein4"}

    def test_left_zero_is_noncommutative(self):
        m = MONOIDS["leftzero3"]
        assert any(m.mult(a, b) != m.mult(b, a) for a in range(3) for b in range(3))

    def test_table_without_unit_rejected(self):
        with pytest.raises(MalformedTables):
            monoid_from_rows("broken", [[1, 1], [1, 1]])

    def test_nonassociative_table_rejected(self):
        # 0 is a unit but (1.1).2 != 1.(1.2)
        with pytest.raises(MalformedTables):
            MonoidTable("broken", 3, (0, 1, 2, 1, 2, 1, 2, 1, 1), 0)


class TestChecker:
    def test_accepts_full_instance_family(self):
        instances = [one_object_category(m) for m in MONOIDS.values()]
        instances += [discrete_category(n).cat for n in range(1, 4)]
        instances += [pair_groupoid(n).cat for n in range(1, 4)]
        instances += [action_groupoid_z2().cat]
        for ic in instances:
            assert check_internal_category(ic).passed

    def test_pair_groupoid_composition_convention(self):
        ic = pair_groupoid(2).cat
        n = 2
        for a, b, c in itertools.product(range(n), repeat=3):
            first = a * n + b
            second = b * n + c
            assert ic.then(first, second) == a * n + c

    def test_one_object_z2_passes(self):
        assert check_internal_category(one_object_category(MONOIDS["z2"])).passed

    def test_corrupted_mu_fails_with_witness(self):
        ic = pair_groupoid(2).cat
        mu = list(ic.mu.table)
        mu[3] = (mu[3] + 1) % ic.m.size
        broken = InternalCategory(ic.o, ic.m, ic.d, ic.c, ic.eta, FinMap(ic.mu.dom, ic.m, tuple(mu)))
        report = check_internal_category(broken)
        assert not report.passed
        assert report.first().witness is not None

    def test_every_single_entry_mutation_rejected(self):
        ic = pair_groupoid(2).cat
        total = rejected = 0
        for description, build in single_entry_mutants(ic):
            total += 1
            try:
                mutant = build()
            except MalformedTables:
                rejected += 1
                continue
            if not check_internal_category(mutant).passed:
                rejected += 1
        assert total == 4 + 4 + 6 + 24  # d, c entries over O; eta, mu entries over M
        assert rejected == total


class TestGroupoidChecker:
    def test_pair_groupoid_swap_inverse(self):
        assert check_internal_groupoid(pair_groupoid(2)).passed

    def test_z3_inversion(self):
        g = one_object_groupoid(MONOIDS["z3"])
        assert g.iota.table == (0, 2, 1)
        assert check_internal_groupoid(g).passed

    def test_non_group_monoid_has_no_inversion(self):
        ic = one_object_category(MONOIDS["and2"])
        for table in itertools.product(range(2), repeat=2):
            candidate = InternalGroupoid(ic, FinMap(ic.m, ic.m, table))
            assert not check_internal_groupoid(candidate).passed

    def test_inverse_is_involutive_for_accepted_groupoids(self):
        for entry in CATALOG.values():
            if entry.iota is None:
                continue
            assert check_internal_groupoid(entry.groupoid).passed
            assert compose(entry.iota, entry.iota) == identity(entry.category.m)

    def test_underlying_category_must_pass(self):
        ic = pair_groupoid(2).cat
        mu = list(ic.mu.table)
        mu[0] = (mu[0] + 1) % ic.m.size
        broken = InternalCategory(ic.o, ic.m, ic.d, ic.c, ic.eta, FinMap(ic.mu.dom, ic.m, tuple(mu)))
        with pytest.raises(UnderlyingCategoryInvalid):
            check_internal_groupoid(InternalGroupoid(broken, pair_groupoid(2).iota))


class TestExternalCategory:
    def test_z2_at_a_point(self):
        ic = one_object_category(MONOIDS["z2"])
        fc = external_category(ic, FinSet(1))
        assert len(fc.objects) == 1
        (obj,) = fc.objects
        assert len(fc.hom(obj, obj)) == 2
        z2 = MONOIDS["z2"]
        for a in range(2):
            for b in range(2):
                assert fc.comp[((a,), (b,))] == (z2.mult(a, b),)

    def test_pair_groupoid_at_a_point_is_indiscrete(self):
        ic = pair_groupoid(2).cat
        fc = external_category(ic, FinSet(1))
        assert len(fc.objects) == 2
        for x in fc.objects:
            for y in fc.objects:
                assert len(fc.hom(x, y)) == 1

    def test_identity_arrows_come_from_eta(self):
        ic = pair_groupoid(2).cat
        fc = external_category(ic, FinSet(1))
        for obj in fc.objects:
            assert fc.ident[obj] == tuple(ic.eta.table[v] for v in obj)

    def test_groupoid_input_gives_all_arrows_invertible(self):
        for groupoid in (pair_groupoid(2), one_object_groupoid(MONOIDS["z3"]), action_groupoid_z2()):
            fc = external_category(groupoid.cat, FinSet(1))
            for arrow in fc.arrows:
                assert two_sided_inverse(fc, arrow) is not None

    def test_non_groupoid_has_non_invertible_arrow(self):
        fc = external_category(one_object_category(MONOIDS["and2"]), FinSet(1))
        assert any(two_sided_inverse(fc, arrow) is None for arrow in fc.arrows)

    def test_size_cap(self):
        ic = one_object_category(MONOIDS["klein4"])
        with pytest.raises(SizeLimitExceeded):
            external_category(ic, FinSet(3), cap=10)

    def test_size_cap_env_override(self, monkeypatch):
        ic = one_object_category(MONOIDS["z2"])
        monkeypatch.setenv("SPANFORGE_SIZE_CAP", "1")
        with pytest.raises(SizeLimitExceeded):
            external_category(ic, FinSet(1))


class TestInternalFunctor:
    def test_doubling_embeds_z2_in_z4(self):
        z2 = one_object_category(MONOIDS["z2"])
        z4 = one_object_category(MONOIDS["z4"])
        functor = InternalFunctor(z2, z4, identity(z2.o), FinMap(z2.m, z4.m, (0, 2)))
        assert functor.fm.table == (0, 2)

    def test_non_functor_rejected(self):
        z2 = one_object_category(MONOIDS["z2"])
        z4 = one_object_category(MONOIDS["z4"])
        with pytest.raises(NotInternalFunctor):
            InternalFunctor(z2, z4, identity(z2.o), FinMap(z2.m, z4.m, (0, 1)))

    def test_identity_functor(self):
        for entry in CATALOG.values():
            identity_internal_functor(entry.category)


def lex_fragment_for(ic):
    sets = [ic.o, ic.m]
    maps = [ic.d, ic.c, ic.eta, ic.mu]
    return sets, maps


class TestLexTransport:
    def test_identity_transport_returns_equal_category(self):
        for name in ("z2", "pair2", "and2"):
            ic = CATALOG[name].category
            sets, maps = lex_fragment_for(ic)
            k = identity_functor_data(sets, maps, squares=[(ic.c, ic.d)])
            assert apply_lex_functor(k, ic) == ic

    def test_hom_functor_on_z2_gives_klein_four(self):
        ic = one_object_category(MONOIDS["z2"])
        sets, maps = lex_fragment_for(ic)
        k = hom_functor_data(FinSet(2), sets, maps, squares=[(ic.c, ic.d)])
        out = apply_lex_functor(k, ic)
        assert out.m.size == 4
        assert check_internal_category(out).passed
        # composition is pointwise: matches the Klein table under the
        # lexicographic encoding u = 2 * u(0) + u(1)
        for a in range(4):
            for b in range(4):
                assert out.then(a, b) == a ^ b

    def test_transported_pair_groupoid_passes_checker(self):
        ic = pair_groupoid(2).cat
        sets, maps = lex_fragment_for(ic)
        k = hom_functor_data(FinSet(2), sets, maps, squares=[(ic.c, ic.d)])
        out = apply_lex_functor(k, ic)
        assert out.o.size == 4 and out.m.size == 16
        assert check_internal_category(out).passed

    def test_missing_fragment_raises(self):
        ic = one_object_category(MONOIDS["z2"])
        k = identity_functor_data([ic.o], [])
        with pytest.raises(NotLex):
            apply_lex_functor(k, ic)

    def test_broken_witness_rejected(self):
        ic = one_object_category(MONOIDS["z2"])
        sets, maps = lex_fragment_for(ic)
        k = identity_functor_data(sets, maps, squares=[(ic.c, ic.d)])
        pb = pullback(ic.c, ic.d)
        # corrupt the functor so the pullback square is no longer preserved:
        # send the composable-pair object to a smaller set
        squashed = FinSet(1)
        k.objects[pb.apex] = squashed
        k.arrows[pb.proj_left] = FinMap(squashed, ic.m, (0,))
        k.arrows[pb.proj_right] = FinMap(squashed, ic.m, (0,))
        k.arrows[ic.mu] = FinMap(squashed, ic.m, (0,))
        k.arrows[identity(pb.apex)] = identity(squashed)
        with pytest.raises(NotLex):
            apply_lex_functor(k, ic)
