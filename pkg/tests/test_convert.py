"""Conversion constructions: language preservation against the enumeration
oracle, bound conformance, and the deterministic refinements."""

import random

import pytest

from uta import (DFA, DTA_DFA, SDTA, DeterminismError, KindError, MooreDFA,
                 SizePair, TreeAutomaton, accepts, check_semantic_determinism,
                 dtadfa_to_sdta, gen_lemma34, gen_thm41, nta_to_dtadfa,
                 nta_to_sdta, prune_reachable, sdta_to_dtadfa, size)
from uta import EnumerationBounds, EnumerationCapExceeded, enumerate_trees

from randgen import rand_dta_nfa, rand_dtadfa, rand_nta, rand_sdta, rand_trees


def enum(alphabet, depth=3, width=3, count=400):
    try:
        return enumerate_trees(alphabet, EnumerationBounds(depth, width, count))
    except EnumerationCapExceeded as e:
        return e.trees


def assert_equivalent(a, b, trees):
    for t in trees:
        assert accepts(a, t) == accepts(b, t), f"disagree on {t}"


class TestSdtaToDtadfa:
    def test_scale_bound(self):
        rng = random.Random(11)
        a = rand_sdta(rng)
        out, report = sdta_to_dtadfa(a)
        n, m = size(a).vertical, size(a).horizontal
        assert report.bound == SizePair(n, n * m)
        assert size(out) <= report.bound and report.bound_satisfied

    def test_constant_output_leaves_one_machine_per_symbol(self):
        ha = frozenset({"q1", "q2"})
        mach = MooreDFA(["h0", "h1"], ha, "h0", ["h1"],
                        [("h0", "q1", "h1"), ("h1", "q1", "h1")], {"h1": "q1"})
        a = TreeAutomaton(SDTA, ["a"], ["q1", "q2"], ["q1"], moore={"a": mach})
        out, _ = sdta_to_dtadfa(a)
        assert set(out.horizontal) == {("q1", "a")}

    def test_round_trip_preserves_language(self):
        base, _ = gen_lemma34((2, 3))
        sdta, _ = dtadfa_to_sdta(base)
        back, _ = sdta_to_dtadfa(sdta)
        assert_equivalent(base, back, enum(base.alphabet, 4, 4, 800))

    def test_kind_mismatch(self):
        with pytest.raises(KindError):
            sdta_to_dtadfa(gen_lemma34((2, 3))[0])


class TestDtadfaToSdta:
    def test_lemma34_product_and_lower_bound(self):
        from uta import canonical_sdta
        base, _ = gen_lemma34((2, 3))
        out, report = dtadfa_to_sdta(base)
        assert report.bound == SizePair(2, 5 * 7)
        assert report.bound_satisfied
        assert canonical_sdta(out).moore["a"].size >= 6

    def test_lemma34_m3_lower_bound(self):
        from uta import canonical_sdta
        base, _ = gen_lemma34((2, 3, 5))
        out, _ = dtadfa_to_sdta(base)
        assert canonical_sdta(out).moore["a"].size >= 30

    def test_single_state_input_gets_constant_output(self):
        ha = frozenset({"q"})
        mach = DFA(["h0", "h1"], ha, "h0", ["h1"], [("h0", "q", "h1")])
        a = TreeAutomaton(DTA_DFA, ["a"], ["q"], ["q"], horizontal={("q", "a"): mach})
        out, _ = dtadfa_to_sdta(a)
        assert set(out.moore["a"].outputs.values()) == {"q"}
        assert out.moore["a"].size == mach.size

    def test_vertical_states_untouched(self):
        rng = random.Random(3)
        a = rand_dtadfa(rng)
        out, _ = dtadfa_to_sdta(a)
        assert out.states == a.states and out.finals == a.finals

    def test_nondeterministic_input_rejected_with_witness(self):
        ha = frozenset({"q1", "q2"})
        machines = {(q, "a"): DFA(["h"], ha, "h", ["h"], []) for q in ("q1", "q2")}
        bad = TreeAutomaton("nta-dfa", ["a"], ["q1", "q2"], ["q1"], horizontal=machines)
        with pytest.raises(DeterminismError) as err:
            dtadfa_to_sdta(bad)
        assert err.value.witness == ()


class TestNtaToSdta:
    def test_single_state_scale(self):
        ha = frozenset({"q"})
        mach = DFA(["h0", "h1"], ha, "h0", ["h1"], [("h0", "q", "h1")])
        a = TreeAutomaton("nta-dfa", ["a"], ["q"], ["q"], horizontal={("q", "a"): mach})
        out, report = nta_to_sdta(a, force_general=True)
        assert size(out).vertical <= 1
        assert report.bound.horizontal == 2**2

    def test_thm41_reachable_subsets(self):
        a, pred = gen_thm41(2)
        out, report = nta_to_sdta(a)
        # reachability oracle: collect the root sets runs actually produce
        from uta import run, nest, word_node
        seen = set()
        for i in range(1, 5):
            for k in range(0, 13):
                seen.add(run(a, nest("a", i - 1, word_node("a", "b" * k)))[()])
        seen.discard(frozenset())
        assert len(seen) == 3
        assert size(out).vertical == len(seen) == 3
        assert report.bound_satisfied

    def test_nta_dfa_input_keeps_general_bound(self):
        a, _ = gen_thm41(2)
        _, report = nta_to_sdta(a)
        assert report.bound == SizePair(2**2, 2**9 + 2**0)

    def test_general_flag_on_deterministic_input(self):
        base, _ = gen_lemma34((2, 3))
        forced, _ = nta_to_sdta(base, force_general=True)
        auto, _ = nta_to_sdta(base)
        assert auto.states == base.states  # refinement keeps the states
        assert all(name.startswith("{") for name in forced.states)
        assert_equivalent(forced, auto, enum(base.alphabet, 4, 4, 600))


class TestNtaToDtadfa:
    def test_thm41_sizes_and_bound(self):
        a, _ = gen_thm41(2)
        out, report = nta_to_dtadfa(a)
        pruned = prune_reachable(out)
        assert size(pruned).vertical >= 3
        assert size(pruned).horizontal >= 18
        assert size(out) <= report.bound
        assert check_semantic_determinism(out).ok

    def test_dta_nfa_per_language_determinization(self):
        rng = random.Random(5)
        a = rand_dta_nfa(rng)
        out, report = nta_to_dtadfa(a)
        assert out.states == a.states
        for (q, sym), mach in out.horizontal.items():
            assert mach.size <= 2 ** a.horizontal[(q, sym)].size
        assert report.bound_satisfied

    def test_equivalence_on_enumerated_trees(self):
        a, _ = gen_thm41(2)
        out, _ = nta_to_dtadfa(a)
        assert_equivalent(a, out, enum(a.alphabet, 4, 5, 600))


class TestRandomizedInvariants:
    def test_language_preservation_random_ntas(self):
        # enumerated trees plus 1000 random trees from larger bounds
        rng = random.Random(42)
        for _ in range(8):
            a = rand_nta(rng)
            trees = enum(a.alphabet) + rand_trees(rng, a.alphabet, 125, 5, 3)
            s, rs = nta_to_sdta(a, force_general=True)
            d, rd = nta_to_dtadfa(a, force_general=True)
            assert rs.bound_satisfied and rd.bound_satisfied
            assert_equivalent(a, s, trees)
            assert_equivalent(a, d, trees)

    def test_outputs_pass_their_kind_checks(self):
        rng = random.Random(43)
        for _ in range(5):
            a = rand_nta(rng)
            d, _ = nta_to_dtadfa(a, force_general=True)
            assert check_semantic_determinism(d).ok
            s, _ = nta_to_sdta(a, force_general=True)
            assert s.kind == SDTA
