import pytest

from uta import (DFA, DTA_DFA, NTA_NFA, NFA, KindError, SizePair, node,
                 TreeAutomaton, accepts, check_semantic_determinism, classify,
                 gen_lemma34, gen_thm41, leaf, nest, parse_tree,
                 prune_reachable, run, size, word_node)
from uta import EnumerationBounds, EnumerationCapExceeded, enumerate_trees

from randgen import rand_tree
import random


def enum(alphabet, depth, width, count):
    try:
        return enumerate_trees(alphabet, EnumerationBounds(depth, width, count))
    except EnumerationCapExceeded as e:
        return e.trees


@pytest.fixture(scope="module")
def lemma34_pair():
    return gen_lemma34((2, 3))


class TestRun:
    def test_level_one_witness(self, lemma34_pair):
        auto, _ = lemma34_pair
        assignment = run(auto, parse_tree("a(b,b,1)", auto.alphabet))
        assert assignment[()] == frozenset({"q1"})
        assert assignment[(0,)] == frozenset({"b"})

    def test_wrong_residue_gets_no_state(self, lemma34_pair):
        auto, _ = lemma34_pair
        assert run(auto, parse_tree("a(b,1)", auto.alphabet))[()] == frozenset()

    def test_chain_resolves_through_successor_state(self, lemma34_pair):
        auto, pred = lemma34_pair
        t = parse_tree("a(a(b,b,b,1,0))", auto.alphabet)
        inner = run(auto, t)
        assert inner[(0,)] == frozenset({"q2"})
        assert inner[()] == frozenset({"q1"})
        assert accepts(auto, t) and pred(t)

    def test_designated_leaf_state(self, lemma34_pair):
        auto, _ = lemma34_pair
        for sym in "ab01":
            assert run(auto, leaf(sym))[()] == frozenset({sym})

    def test_unknown_symbol_rejected(self, lemma34_pair):
        auto, _ = lemma34_pair
        with pytest.raises(Exception):
            run(auto, leaf("z"))

    def test_empty_finals_reject_everything(self, lemma34_pair):
        auto, _ = lemma34_pair
        hollow = TreeAutomaton(auto.kind, auto.alphabet, auto.states, (),
                               horizontal=auto.horizontal,
                               leaf_symbols=auto.leaf_symbols)
        for t in enum(auto.alphabet, 3, 3, 200):
            assert not accepts(hollow, t)

    def test_deterministic_kinds_assign_singletons(self, lemma34_pair):
        auto, _ = lemma34_pair
        rng = random.Random(7)
        for _ in range(300):
            t = rand_tree(rng, auto.alphabet, max_depth=4, max_width=4)
            for states in run(auto, t).values():
                assert len(states) <= 1

    def test_nondeterministic_sets_can_grow(self):
        auto, _ = gen_thm41(2)
        root = run(auto, leaf("a"))[()]
        assert root == frozenset({"q1", "q2"})


class TestSemanticDeterminism:
    def test_lemma34_is_deterministic(self, lemma34_pair):
        assert check_semantic_determinism(lemma34_pair[0]).ok

    def test_shared_empty_string_is_reported(self):
        ha = frozenset({"q1", "q2"})
        machines = {
            (q, "a"): DFA(["h"], ha, "h", ["h"], [])
            for q in ("q1", "q2")
        }
        auto = TreeAutomaton(NTA_NFA, ["a"], ["q1", "q2"], ["q1"], horizontal=machines)
        report = check_semantic_determinism(auto)
        assert not report.ok
        assert report.symbol == "a" and report.witness == ()
        assert set(report.pair) == {"q1", "q2"}

    def test_single_state_vacuously_deterministic(self):
        ha = frozenset({"q"})
        auto = TreeAutomaton(NTA_NFA, ["a"], ["q"], ["q"],
                             horizontal={("q", "a"): NFA(["h"], ha, ["h"], ["h"], [])})
        assert check_semantic_determinism(auto).ok

    def test_thm41_shares_epsilon_for_n2(self):
        report = check_semantic_determinism(gen_thm41(2)[0])
        assert not report.ok and report.witness == ()


class TestSize:
    def test_lemma34_formula(self, lemma34_pair):
        assert size(lemma34_pair[0]) == SizePair(2, 12)

    def test_thm41_formula(self):
        assert size(gen_thm41(2)[0]) == SizePair(2, 9)
        assert size(gen_thm41(3)[0]) == SizePair(3, 2 + 3 + 5 + 6)

    def test_no_machines_means_zero_horizontal(self):
        auto = TreeAutomaton(NTA_NFA, ["a"], ["q1", "q2"], ["q1"])
        assert size(auto) == SizePair(2, 0)

    def test_componentwise_order(self):
        assert SizePair(2, 9) <= SizePair(2, 9)
        assert SizePair(2, 9) <= SizePair(3, 9)
        assert not SizePair(2, 9) <= SizePair(3, 8)
        assert not SizePair(4, 1) <= SizePair(3, 8)


class TestPrune:
    def test_tight_automaton_unchanged(self):
        auto, _ = gen_thm41(2)
        assert size(prune_reachable(auto)) == size(auto)

    def test_state_with_empty_languages_removed(self):
        ha = frozenset({"q1", "q2"})
        machines = {
            ("q1", "a"): DFA(["h"], ha, "h", ["h"], []),
            ("q2", "a"): DFA(["g"], ha, "g", [], []),  # empty language
        }
        auto = TreeAutomaton(NTA_NFA, ["a"], ["q1", "q2"], ["q1"], horizontal=machines)
        pruned = prune_reachable(auto)
        assert pruned.states == frozenset({"q1"})

    def test_language_preserved(self, lemma34_pair):
        auto, _ = lemma34_pair
        pruned = prune_reachable(auto)
        assert size(pruned) <= size(auto)
        for t in enum(auto.alphabet, 4, 4, 600):
            assert accepts(auto, t) == accepts(pruned, t)

    def test_lemma34_inert_padding_state_dropped(self, lemma34_pair):
        # the last level's successor arm exists only to keep the declared
        # state count uniform; no run ever enters it
        auto, _ = lemma34_pair
        assert size(prune_reachable(auto)) == SizePair(2, 11)


class TestClassify:
    def test_lemma34_strongest_kind(self, lemma34_pair):
        assert classify(lemma34_pair[0]) == DTA_DFA

    def test_thm41_stays_nondeterministic(self):
        assert classify(gen_thm41(2)[0]) == "nta-dfa"

    def test_kind_validated_not_inferred(self):
        ha = frozenset({"q1", "q2"})
        machines = {
            (q, "a"): NFA(["h"], ha, ["h"], ["h"], [])
            for q in ("q1", "q2")
        }
        with pytest.raises(KindError):
            TreeAutomaton(DTA_DFA, ["a"], ["q1", "q2"], ["q1"], horizontal=machines)


class TestLeafConvention:
    def test_epsilon_in_machine_clashes_with_convention(self):
        ha = frozenset({"q", "a"})
        mach = DFA(["h"], ha, "h", ["h"], [])  # accepts the empty string
        with pytest.raises(KindError):
            TreeAutomaton(NTA_NFA, ["a"], ["q"], ["q"],
                          horizontal={("q", "a"): mach}, leaf_symbols=["a"])

    def test_leaf_state_name_collision_rejected(self):
        with pytest.raises(KindError):
            TreeAutomaton(NTA_NFA, ["a"], ["a"], ["a"], leaf_symbols=["a"])

    def test_leaf_state_may_be_final(self):
        # the language of the single leaf b
        auto = TreeAutomaton(NTA_NFA, ["a", "b"], [], ["b"], leaf_symbols=["b"])
        assert accepts(auto, leaf("b"))
        assert not accepts(auto, leaf("a"))
        assert not accepts(auto, node("b", leaf("b")))
        assert size(auto) == SizePair(0, 0)
        from uta.docs import parse_automaton, render_automaton
        assert parse_automaton(render_automaton(auto)) == auto
