"""Lower-bound witness families and fooling-set certifiers.

Each generator returns an automaton together with an independent membership
predicate that decides the target language directly from tree shape, so the
construction can be checked against ground truth rather than trusted.

The certifiers implement two lower-bound arguments:

* vertical: a set R of trees pairwise separated by contexts certifies that
  any strongly deterministic automaton, and any semantically deterministic
  automaton with NFA transitions, needs at least |R| - 1 vertical states;
* horizontal: a set S of child tuples for a fixed symbol, pairwise separated
  by a context plus trailing padding, certifies that the per-symbol machine
  of any strongly deterministic automaton needs at least |S| - 1 states.

Separators may be supplied explicitly or discovered by bounded search; a
failed search is reported as unknown, never as a refutation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

from .automata import DTA_DFA, NTA_DFA, TreeAutomaton
from .errors import SeparationError, TreeSyntaxError, UtaError
from .strings import DFA
from .trees import (Context, EnumerationBounds, Tree, iter_trees, leaf,
                    substitute, word_node)


@dataclass(frozen=True)
class LangPredicate:
    """Decidable membership oracle, independent of any automaton."""

    alphabet: frozenset
    decide: Callable[[Tree], bool]
    description: str

    def __call__(self, t: Tree) -> bool:
        return self.decide(t)


@dataclass
class FoolingSetVertical:
    """Trees pairwise separated by contexts; keys are (i, j) with i < j."""

    trees: list
    separators: dict = field(default_factory=dict)


@dataclass
class FoolingSetHorizontal:
    """Child tuples for one symbol, pairwise separated by (context, padding)."""

    tuples: list
    symbol: str
    separators: dict = field(default_factory=dict)


LEMMA34_ALPHABET = frozenset({"a", "b", "0", "1"})


def _binary(i: int) -> str:
    return format(i, "b")


def _chain_split(t: Tree):
    """Decompose a chain a^i(w): returns (i, child labels of the bottom
    a-node) or None if the tree is not of that shape."""
    if t.label != "a":
        return None
    depth = 1
    node = t
    while len(node.children) == 1 and node.children[0].label == "a":
        node = node.children[0]
        depth += 1
    labels = []
    for c in node.children:
        if c.children or c.label == "a":
            return None
        labels.append(c.label)
    return depth, labels


def gen_lemma34(k) -> tuple[TreeAutomaton, LangPredicate]:
    """Weakly deterministic automaton for the union over i of chains of i
    a-nodes whose bottom children spell (b^{k_i})* followed by the binary
    numeral of i, plus the matching membership predicate.

    Requires strictly increasing, pairwise coprime moduli k_i >= 2.  State
    q_i accepts the bottom word for level i or the single successor state
    q_{i+1}; chains then resolve level by level up to the root.
    """
    k = tuple(int(v) for v in k)
    m = len(k)
    if m < 1:
        raise UtaError("need at least one modulus")
    if any(v < 2 for v in k) or any(k[i] >= k[i + 1] for i in range(m - 1)):
        raise UtaError(f"moduli must be >= 2 and strictly increasing: {k}")
    for i, j in combinations(range(m), 2):
        if math.gcd(k[i], k[j]) != 1:
            raise UtaError(f"moduli {k[i]} and {k[j]} are not coprime")

    states = [f"q{i}" for i in range(1, m + 1)]
    ha = frozenset(states) | LEMMA34_ALPHABET
    horizontal = {}
    for idx, ki in enumerate(k, start=1):
        y = _binary(idx)
        sts = ["s0"] + [f"c{j}" for j in range(1, ki + 1)]
        trans = [("s0", "b", "c1")]
        trans += [(f"c{j}", "b", f"c{j + 1}") for j in range(1, ki)]
        trans.append((f"c{ki}", "b", "c1"))
        # numeral path, shared by the two states where the b-count is 0 mod k_i
        prev = None
        for pos, bit in enumerate(y, start=1):
            cur = f"y{pos}"
            sts.append(cur)
            if pos == 1:
                trans.append(("s0", bit, cur))
                trans.append((f"c{ki}", bit, cur))
            else:
                trans.append((prev, bit, cur))
            prev = cur
        finals = {prev}
        # successor arm; kept (inert) for the last level so every level's
        # machine has exactly k_i + floor(log2 i) + 3 states
        sts.append("arm")
        if idx < m:
            trans.append(("s0", f"q{idx + 1}", "arm"))
            finals.add("arm")
        horizontal[(f"q{idx}", "a")] = DFA(sts, ha, "s0", finals, trans)

    auto = TreeAutomaton(DTA_DFA, LEMMA34_ALPHABET, states, {"q1"},
                         horizontal=horizontal, leaf_symbols=LEMMA34_ALPHABET)

    def decide(t: Tree) -> bool:
        split = _chain_split(t)
        if split is None:
            return False
        i, labels = split
        if not 1 <= i <= m:
            return False
        word = "".join(labels)
        y = _binary(i)
        if not word.endswith(y):
            return False
        head = word[: len(word) - len(y)]
        return set(head) <= {"b"} and len(head) % k[i - 1] == 0

    pred = LangPredicate(
        LEMMA34_ALPHABET, decide,
        f"chains of i a-nodes over (b^{{k_i}})* then the binary numeral of i, k={k}")
    return auto, pred


def first_primes(n: int) -> list[int]:
    primes: list[int] = []
    c = 2
    while len(primes) < n:
        if all(c % p for p in primes):
            primes.append(c)
        c += 1
    return primes


THM41_ALPHABET = frozenset({"a", "b"})


def gen_thm41(n: int) -> tuple[TreeAutomaton, LangPredicate]:
    """Nondeterministic automaton (DFA transitions) for the chain language
    a^i(b^k) where, for some j, k is divisible by the j-th prime and the
    chain length i is congruent to j modulo n; plus the predicate.

    At the bottom a-node the automaton guesses j by accepting (b^{p_j})*
    in the machine of state q_{1-j mod n}; every further level reads the
    single child state q_{s-1} into q_s, so the root reaches q_1 exactly
    when i is congruent to j.  Each per-level machine spends p_j states on
    the divisibility cycle plus an entry state and a chain-reading state.
    """
    n = int(n)
    if n < 1:
        raise UtaError("need n >= 1")
    primes = first_primes(n)
    states = [f"q{s}" for s in range(1, n + 1)]
    ha = frozenset(states) | {"b"}
    horizontal = {}
    for s in range(1, n + 1):
        j = ((1 - s) % n) + 1
        p = primes[j - 1]
        prev = f"q{((s - 2) % n) + 1}"
        sts = ["s0"] + [f"c{i}" for i in range(1, p + 1)] + ["arm"]
        trans = [("s0", "b", "c1")]
        trans += [(f"c{i}", "b", f"c{i + 1}") for i in range(1, p)]
        trans.append((f"c{p}", "b", "c1"))
        trans.append(("s0", prev, "arm"))
        horizontal[(f"q{s}", "a")] = DFA(sts, ha, "s0", {"s0", f"c{p}", "arm"}, trans)

    auto = TreeAutomaton(NTA_DFA, THM41_ALPHABET, states, {"q1"},
                         horizontal=horizontal, leaf_symbols={"b"})

    def decide(t: Tree) -> bool:
        split = _chain_split(t)
        if split is None:
            return False
        i, labels = split
        if any(c != "b" for c in labels):
            return False
        j = ((i - 1) % n) + 1
        return len(labels) % primes[j - 1] == 0

    pred = LangPredicate(
        THM41_ALPHABET, decide,
        f"chains a^i(b^k) with k divisible by prime j and i = j mod n, n={n}")
    return auto, pred


def lemma34_vertical_fooling(k) -> FoolingSetVertical:
    """R = the m level-1 witnesses plus a(b); any two members are told apart
    by wrapping in the chain context that completes the shorter level."""
    k = tuple(int(v) for v in k)
    m = len(k)
    trees = [word_node("a", "b" * k[i - 1] + _binary(i)) for i in range(1, m + 1)]
    trees.append(Tree("a", (leaf("b"),)))
    seps = {}
    for i in range(len(trees)):
        for j in range(i + 1, len(trees)):
            level = min(i, j) + 1  # the a(b) extra sits last, so min picks a real level
            seps[(i, j)] = Context(_nest_var("a", level - 1))
    return FoolingSetVertical(trees, seps)


def lemma34_horizontal_fooling(k) -> FoolingSetHorizontal:
    """S = tuples of r b-leaves for r below the product of the moduli; the
    pair (r, s) is separated by padding up to the next multiple of a modulus
    that does not divide s - r, then the matching numeral and chain."""
    k = tuple(int(v) for v in k)
    total = math.prod(k)
    tuples = [tuple(leaf("b") for _ in range(r)) for r in range(total)]
    seps = {}
    for r in range(total):
        for s in range(r + 1, total):
            i = next(i for i, ki in enumerate(k, start=1) if (s - r) % ki)
            ki = k[i - 1]
            z = r + ((-r) % ki)
            padding = tuple(leaf("b") for _ in range(z - r)) + tuple(
                leaf(bit) for bit in _binary(i))
            seps[(r, s)] = (Context(_nest_var("a", i - 1)), padding)
    return FoolingSetHorizontal(tuples, "a", seps)


def _nest_var(label: str, depth: int) -> Tree:
    t = Tree("x")
    for _ in range(depth):
        t = Tree(label, (t,))
    return t


_SEARCH_BOUNDS = EnumerationBounds(max_depth=3, max_width=3, max_count=2000)


def _candidate_contexts(alphabet, bounds):
    for t in iter_trees(set(alphabet) | {"x"}, bounds):
        try:
            yield Context(t)
        except TreeSyntaxError:
            continue


def certify_vertical_bound(pred: LangPredicate, fs: FoolingSetVertical,
                           search_bounds: EnumerationBounds = _SEARCH_BOUNDS) -> int:
    """Verify every pair of fooling trees is separated by some context and
    return |R| - 1, a lower bound on the vertical states of any strongly
    deterministic automaton (or any semantically deterministic automaton
    with NFA transitions) for the language."""
    trees = fs.trees
    for i, j in combinations(range(len(trees)), 2):
        ctx = fs.separators.get((i, j))
        if ctx is not None:
            if pred(substitute(ctx, trees[i])) == pred(substitute(ctx, trees[j])):
                raise SeparationError(
                    f"context {ctx} does not separate trees {i} and {j}",
                    (i, j))
            continue
        if not _search_vertical(pred, trees[i], trees[j], search_bounds):
            raise SeparationError(
                f"no separating context found for trees {i} and {j} within "
                f"search bounds; separation unknown", (i, j), unknown=True)
    return len(trees) - 1


def _search_vertical(pred, t1, t2, bounds) -> bool:
    for ctx in _candidate_contexts(pred.alphabet, bounds):
        if pred(substitute(ctx, t1)) != pred(substitute(ctx, t2)):
            return True
    return False


def certify_horizontal_bound(pred: LangPredicate, fs: FoolingSetHorizontal,
                             search_bounds: EnumerationBounds = _SEARCH_BOUNDS) -> int:
    """Verify every pair of child tuples is separated under the fooling
    symbol and return |S| - 1, a lower bound on the size of the per-symbol
    machine of any strongly deterministic automaton for the language."""
    tuples = fs.tuples
    for i, j in combinations(range(len(tuples)), 2):
        sep = fs.separators.get((i, j))
        if sep is not None:
            ctx, padding = sep
            if not _separates_horizontal(pred, fs.symbol, tuples[i], tuples[j], ctx, padding):
                raise SeparationError(
                    f"context {ctx} with padding {[str(p) for p in padding]} does "
                    f"not separate tuples {i} and {j}", (i, j))
            continue
        if not _search_horizontal(pred, fs.symbol, tuples[i], tuples[j], search_bounds):
            raise SeparationError(
                f"no separator found for tuples {i} and {j} within search "
                f"bounds; separation unknown", (i, j), unknown=True)
    return len(tuples) - 1


def _separates_horizontal(pred, sym, tup1, tup2, ctx, padding) -> bool:
    w1 = Tree(sym, tuple(tup1) + tuple(padding))
    w2 = Tree(sym, tuple(tup2) + tuple(padding))
    return pred(substitute(ctx, w1)) != pred(substitute(ctx, w2))


def _search_horizontal(pred, sym, tup1, tup2, bounds) -> bool:
    paddings = [()]
    leaves = [leaf(s) for s in sorted(pred.alphabet)]
    paddings += [(l,) for l in leaves]
    paddings += [(l1, l2) for l1 in leaves for l2 in leaves]
    for ctx in _candidate_contexts(pred.alphabet, bounds):
        for padding in paddings:
            if _separates_horizontal(pred, sym, tup1, tup2, ctx, padding):
                return True
    return False
