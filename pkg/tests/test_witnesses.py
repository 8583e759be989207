import pytest

from uta import (Context, SeparationError, SizePair, UtaError, accepts,
                 certify_horizontal_bound, certify_vertical_bound,
                 check_semantic_determinism, first_primes, gen_lemma34,
                 gen_thm41, leaf, lemma34_horizontal_fooling,
                 lemma34_vertical_fooling, nest, node, parse_tree, size,
                 word_node)
from uta import FoolingSetHorizontal, FoolingSetVertical, LangPredicate
from uta import EnumerationBounds, EnumerationCapExceeded, enumerate_trees


def enum(alphabet, depth=4, width=4, count=600):
    try:
        return enumerate_trees(alphabet, EnumerationBounds(depth, width, count))
    except EnumerationCapExceeded as e:
        return e.trees


class TestLemma34Generator:
    def test_size_formula(self):
        assert size(gen_lemma34((2, 3))[0]) == SizePair(2, 12)
        # per level: k + floor(log2 i) + 3
        assert size(gen_lemma34((3, 5, 7))[0]) == SizePair(3, (3 + 0 + 3) + (5 + 1 + 3) + (7 + 1 + 3))

    def test_memberships(self):
        auto, pred = gen_lemma34((2, 3))
        yes = ["a(b,b,1)", "a(1)", "a(a(1,0))", "a(a(b,b,b,1,0))"]
        no = ["a(b,1)", "a(b,b)", "a(a(1))", "b", "a(b,b,1,1)", "a(a(a(1,0)))"]
        for s in yes:
            t = parse_tree(s, auto.alphabet)
            assert pred(t) and accepts(auto, t), s
        for s in no:
            t = parse_tree(s, auto.alphabet)
            assert not pred(t) and not accepts(auto, t), s

    def test_generator_agrees_with_predicate(self):
        auto, pred = gen_lemma34((2, 3))
        for t in enum(auto.alphabet):
            assert accepts(auto, t) == pred(t), t
        # targeted chain grid: deep and narrow trees the enumeration misses
        for i in range(1, 5):
            for c in range(0, 8):
                for y in ("1", "10", "11", ""):
                    t = nest("a", i - 1, word_node("a", "b" * c + y))
                    assert accepts(auto, t) == pred(t), t

    def test_non_coprime_rejected(self):
        with pytest.raises(UtaError) as err:
            gen_lemma34((2, 4))
        assert "2" in str(err.value) and "4" in str(err.value)

    def test_not_increasing_rejected(self):
        with pytest.raises(UtaError):
            gen_lemma34((3, 2))

    def test_bottom_up_deterministic(self):
        assert check_semantic_determinism(gen_lemma34((2, 3, 5))[0]).ok


class TestThm41Generator:
    def test_size_formula(self):
        for n in (1, 2, 4):
            auto, _ = gen_thm41(n)
            assert size(auto) == SizePair(n, sum(first_primes(n)) + 2 * n)

    def test_membership_grid(self):
        auto, pred = gen_thm41(2)
        for i in range(1, 7):
            j = ((i - 1) % 2) + 1
            p = (2, 3)[j - 1]
            for k in range(0, 19):
                t = nest("a", i - 1, word_node("a", "b" * k))
                expect = k % p == 0
                assert pred(t) == expect
                assert accepts(auto, t) == expect, (i, k)

    def test_rejects_non_chain_shapes(self):
        auto, pred = gen_thm41(2)
        for s in ["b", "b(b)", "a(b,a)", "a(a(b),b)", "a(a,a)"]:
            t = parse_tree(s, auto.alphabet)
            assert not pred(t) and not accepts(auto, t), s

    def test_mod_one_degeneracy(self):
        auto, pred = gen_thm41(1)
        assert accepts(auto, parse_tree("a(b,b)", auto.alphabet))
        assert not accepts(auto, parse_tree("a(b)", auto.alphabet))
        # every chain length qualifies once the count is even
        for i in range(1, 6):
            t = nest("a", i - 1, word_node("a", "bb"))
            assert accepts(auto, t) and pred(t)

    def test_bad_n_rejected(self):
        with pytest.raises(UtaError):
            gen_thm41(0)

    def test_agreement_on_enumerated_trees(self):
        auto, pred = gen_thm41(2)
        for t in enum(auto.alphabet):
            assert accepts(auto, t) == pred(t), t


class TestCertifiers:
    def test_lemma34_vertical_bound(self):
        _, pred = gen_lemma34((2, 3))
        assert certify_vertical_bound(pred, lemma34_vertical_fooling((2, 3))) == 2

    def test_lemma34_horizontal_bound(self):
        _, pred = gen_lemma34((2, 3))
        assert certify_horizontal_bound(pred, lemma34_horizontal_fooling((2, 3))) == 5

    def test_singleton_sets_certify_zero(self):
        _, pred = gen_lemma34((2, 3))
        assert certify_vertical_bound(pred, FoolingSetVertical([leaf("b")])) == 0
        assert certify_horizontal_bound(
            pred, FoolingSetHorizontal([(leaf("b"),)], "a")) == 0

    def test_supplied_separator_that_fails_is_refuted(self):
        _, pred = gen_lemma34((2, 3))
        fs = FoolingSetVertical(
            [parse_tree("a(b,b,1)", pred.alphabet), parse_tree("a(1)", pred.alphabet)],
            {(0, 1): Context(leaf("x"))})  # both are in the language
        with pytest.raises(SeparationError) as err:
            certify_vertical_bound(pred, fs)
        assert not err.value.unknown

    def test_inseparable_pair_reports_unknown(self):
        # a predicate that ignores its input cannot distinguish anything
        flat = LangPredicate(frozenset("ab"), lambda t: True, "everything")
        fs = FoolingSetVertical([leaf("a"), leaf("b")])
        with pytest.raises(SeparationError) as err:
            certify_vertical_bound(
                flat, fs, EnumerationBounds(2, 2, 50))
        assert err.value.unknown

    def test_search_discovers_simple_separators(self):
        _, pred = gen_lemma34((2, 3))
        fs = FoolingSetVertical(
            [parse_tree("a(b,b,1)", pred.alphabet), parse_tree("a(b)", pred.alphabet)])
        assert certify_vertical_bound(pred, fs) == 1

    def test_certified_bounds_below_constructed_sizes(self):
        from uta import canonical_sdta, dtadfa_to_sdta
        auto, pred = gen_lemma34((2, 3))
        sdta = canonical_sdta(dtadfa_to_sdta(auto)[0])
        v = certify_vertical_bound(pred, lemma34_vertical_fooling((2, 3)))
        h = certify_horizontal_bound(pred, lemma34_horizontal_fooling((2, 3)))
        assert v <= len(sdta.states)
        assert h <= sdta.moore["a"].size
