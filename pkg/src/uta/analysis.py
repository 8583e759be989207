"""Equivalence checking and canonicalization of strongly deterministic
automata; the oracle layer for everything else.

Bounded equivalence is a semi-decision: "equal" means no counterexample
among the enumerated trees.  Canonical equivalence reduces both automata to
a canonical form and tests exact isomorphism; the canonicalizer is a fixed
point of vertical-state merging and per-symbol Moore minimization, validated
empirically against bounded enumeration rather than trusted as minimal.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .automata import SDTA, TreeAutomaton, accepts, prune_reachable
from .errors import AlphabetMismatchError, KindError
from .strings import MooreDFA, canonical_form, minimize_moore, subset_name
from .trees import DEFAULT_BOUNDS, EnumerationBounds, Tree, iter_trees


@dataclass(frozen=True)
class EquivalenceVerdict:
    equal: bool
    counterexample: Tree | None
    method: str


def equiv_bounded(a: TreeAutomaton, b: TreeAutomaton,
                  bounds: EnumerationBounds = DEFAULT_BOUNDS) -> EquivalenceVerdict:
    """Compare acceptance over every enumerated tree within bounds."""
    if a.alphabet != b.alphabet:
        raise AlphabetMismatchError(
            f"alphabets differ: {sorted(a.alphabet)} vs {sorted(b.alphabet)}")
    for t in iter_trees(a.alphabet, bounds):
        if accepts(a, t) != accepts(b, t):
            return EquivalenceVerdict(False, t, "bounded-enumeration")
    return EquivalenceVerdict(True, None, "bounded-enumeration")


def canonical_sdta(a: TreeAutomaton) -> TreeAutomaton:
    """Fixed-point reduction of an SDTA.

    Starting from the vertical partition {finals, non-finals}, alternately
    (a) minimize each per-symbol machine as a Moore machine whose outputs
    are the current vertical blocks, and (b) split blocks whose members act
    differently as input symbols of some minimized machine.  Splits are
    permanent, so the iteration terminates; the quotient by the final
    partition is language-equivalent, since block mates have equal finality
    and are interchangeable inside every horizontal machine.

    Designated leaf states are pinned: they never merge with counted states.
    """
    if a.kind != SDTA:
        raise KindError(f"expected an SDTA, got {a.kind}")
    a = prune_reachable(a)
    states = sorted(a.states)
    block = {q: (q in a.finals) for q in states}

    while True:
        reduced = _block_minimized(a, block)
        sig = {}
        for q in states:
            parts = [block[q]]
            for sym, mach in sorted(reduced.items()):
                for s in sorted(mach.states):
                    parts.append((sym, s, mach.delta.get((s, q))))
            sig[q] = tuple(parts)
        ids: dict = {}
        nblock = {q: ids.setdefault(sig[q], len(ids)) for q in states}
        if len(set(nblock.values())) == len(set(block.values())):
            break
        block = nblock

    return _quotient(a, block, reduced)


def _block_minimized(a: TreeAutomaton, block) -> dict:
    """Each per-symbol machine minimized with outputs coarsened to blocks."""
    out = {}
    for sym, mach in sorted(a.moore.items()):
        coarse = MooreDFA(mach.states, mach.alphabet, mach.initial, mach.finals,
                          list(mach.transitions()),
                          {s: block[v] for s, v in mach.outputs.items()})
        out[sym] = minimize_moore(coarse)
    return out


def _quotient(a: TreeAutomaton, block, reduced) -> TreeAutomaton:
    members: dict = {}
    for q in sorted(a.states):
        members.setdefault(block[q], []).append(q)
    name = {}
    for b, qs in members.items():
        name[b] = qs[0] if len(qs) == 1 else subset_name(qs)
    new_states = frozenset(name.values())
    ha = new_states | a.leaf_symbols

    def sym_name(c):
        return name[block[c]] if c in block else c

    moore = {}
    for sym, mach in sorted(reduced.items()):
        trans = {}
        for (s, c), d in mach.delta.items():
            key = (s, sym_name(c))
            if key in trans and trans[key] != d:
                raise AssertionError("block mates disagreed inside a machine")
            trans[key] = d
        moore[sym] = MooreDFA(mach.states, ha, mach.initial, mach.finals,
                              [(s, c, d) for (s, c), d in sorted(trans.items())],
                              {s: name[b] for s, b in mach.outputs.items()})
    finals = {name[b] for b, qs in members.items() if qs[0] in a.finals}
    finals |= a.finals & a.leaf_symbols
    return TreeAutomaton(SDTA, a.alphabet, new_states, finals,
                         moore=moore, leaf_symbols=a.leaf_symbols)


def sdta_isomorphic(a: TreeAutomaton, b: TreeAutomaton) -> bool:
    """Exact isomorphism: a bijection on vertical states plus, per symbol, a
    bijection on horizontal states preserving transitions, finals and
    outputs.  Horizontal bijections are settled by canonical BFS forms once
    the vertical bijection fixes the symbol names."""
    if a.kind != SDTA or b.kind != SDTA:
        raise KindError("isomorphism is defined for SDTAs")
    if (a.alphabet != b.alphabet or a.leaf_symbols != b.leaf_symbols
            or len(a.states) != len(b.states)
            or len(a.finals) != len(b.finals)
            or set(a.moore) != set(b.moore)):
        return False
    if a.finals & a.leaf_symbols != b.finals & b.leaf_symbols:
        return False

    a_states = sorted(a.states)
    a_final = [q in a.finals for q in a_states]
    b_final_states = sorted(q for q in b.states if q in b.finals)
    b_other = sorted(q for q in b.states if q not in b.finals)
    forms_a = {sym: canonical_form(m) for sym, m in a.moore.items()}

    finals_a = [q for q, f in zip(a_states, a_final) if f]
    others_a = [q for q, f in zip(a_states, a_final) if not f]
    if len(finals_a) != len(b_final_states):
        return False

    for perm_f in permutations(b_final_states):
        for perm_o in permutations(b_other):
            mapping = dict(zip(finals_a, perm_f))
            mapping.update(zip(others_a, perm_o))
            inverse = {v: k for k, v in mapping.items()}
            if all(forms_a[sym] == canonical_form(_rename(m, inverse))
                   for sym, m in b.moore.items()):
                return True
    return False


def _rename(mach: MooreDFA, inverse) -> MooreDFA:
    trans = [(s, inverse.get(c, c), d) for s, c, d in mach.transitions()]
    alphabet = {inverse.get(c, c) for c in mach.alphabet}
    outputs = {s: inverse.get(v, v) for s, v in mach.outputs.items()}
    return MooreDFA(mach.states, alphabet, mach.initial, mach.finals, trans, outputs)


def equiv_canonical(a: TreeAutomaton, b: TreeAutomaton,
                    bounds: EnumerationBounds = DEFAULT_BOUNDS) -> EquivalenceVerdict:
    """Equality of canonical forms up to isomorphism; on mismatch, bounded
    enumeration supplies a counterexample when one exists within bounds."""
    ca = canonical_sdta(a)
    cb = canonical_sdta(b)
    if sdta_isomorphic(ca, cb):
        return EquivalenceVerdict(True, None, "canonical-sdta")
    fallback = equiv_bounded(a, b, bounds)
    return EquivalenceVerdict(False, fallback.counterexample, "canonical-sdta")
