"""Conversions between the automaton kinds, with size-bound reports.

Every constructed automaton contains only parts reachable in some bottom-up
run: vertical subset states are produced by a fixed point over assignable
child sets, and horizontal machines are explored from their initial states.
Subset states are named canonically (sorted member list in braces) so
conversion outputs are byte-for-byte reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .automata import (DTA_DFA, SDTA, SizePair, TreeAutomaton,
                       check_semantic_determinism, size)
from .errors import DeterminismError, KindError
from .strings import DFA, MooreDFA, NFA, determinize, subset_name


@dataclass(frozen=True)
class ConversionReport:
    """Measured sizes plus the upper-bound formula evaluated on the input."""

    rule: str
    input_size: SizePair
    output_size: SizePair
    bound: SizePair

    @property
    def bound_satisfied(self) -> bool:
        return self.output_size <= self.bound

    def render(self) -> str:
        return (
            f"conversion: {self.rule}\n"
            f"input-size: {self.input_size}\n"
            f"output-size: {self.output_size}\n"
            f"bound: {self.bound}\n"
            f"bound-satisfied: {'true' if self.bound_satisfied else 'false'}\n"
        )


def sdta_to_dtadfa(a: TreeAutomaton):
    """Split each per-symbol machine into one DFA per output value: the copy
    for state q keeps exactly the finals that output q.  Vertical states are
    untouched; the result is weakly deterministic by construction."""
    if a.kind != SDTA:
        raise KindError(f"expected an SDTA, got {a.kind}")
    horizontal = {}
    for sym, mach in sorted(a.moore.items()):
        for q in sorted(a.states):
            finals = {s for s, out in mach.outputs.items() if out == q}
            if not finals:
                continue
            horizontal[(q, sym)] = DFA(mach.states, mach.alphabet, mach.initial,
                                       finals, list(mach.transitions()))
    out = TreeAutomaton(DTA_DFA, a.alphabet, a.states, a.finals,
                        horizontal=horizontal, leaf_symbols=a.leaf_symbols)
    insize = size(a)
    bound = SizePair(insize.vertical, insize.vertical * insize.horizontal)
    return out, ConversionReport("sdta-to-dtadfa", insize, size(out), bound)


def dtadfa_to_sdta(a: TreeAutomaton):
    """Merge the per-(state, symbol) DFAs of a weakly deterministic automaton
    into one machine per symbol: the reachable product of the DFAs, with the
    output function reading off which component accepted.

    Semantic determinism guarantees no reachable product state has two
    accepting components; that invariant is asserted during construction.
    Vertical states are untouched.
    """
    if a.kind == SDTA:
        raise KindError("input is already an SDTA")
    if any(not isinstance(m, DFA) for m in a.horizontal.values()):
        raise KindError("expected DFA horizontal acceptors")
    det = check_semantic_determinism(a)
    if not det.ok:
        raise DeterminismError(det.symbol, det.pair, det.witness)

    ha = a.horizontal_alphabet
    syms = sorted(ha)
    moore = {}
    bound_horizontal = 0
    for sym in sorted(a.alphabet):
        machines = a.machines_for(sym)
        if not machines:
            continue
        prod = 1
        for _, m in machines:
            prod *= m.size
        bound_horizontal += prod

        def name(tup):
            return "(" + "|".join("-" if s is None else s for s in tup) + ")"

        start = tuple(m.initial for _, m in machines)
        names = {start: name(start)}
        queue = deque([start])
        trans = []
        finals = set()
        outputs = {}
        while queue:
            cur = queue.popleft()
            accepting = [q for (q, m), s in zip(machines, cur)
                         if s is not None and s in m.finals]
            assert len(accepting) <= 1, \
                "two horizontal languages share a string despite the determinism check"
            if accepting:
                finals.add(names[cur])
                outputs[names[cur]] = accepting[0]
            for c in syms:
                nxt = tuple(None if s is None else m.delta.get((s, c))
                            for (_, m), s in zip(machines, cur))
                if all(s is None for s in nxt):
                    continue
                if nxt not in names:
                    names[nxt] = name(nxt)
                    queue.append(nxt)
                trans.append((names[cur], c, names[nxt]))
        moore[sym] = MooreDFA(names.values(), ha, names[start], finals, trans, outputs)

    out = TreeAutomaton(SDTA, a.alphabet, a.states, a.finals,
                        moore=moore, leaf_symbols=a.leaf_symbols)
    insize = size(a)
    bound = SizePair(insize.vertical, bound_horizontal)
    return out, ConversionReport("dtadfa-to-sdta", insize, size(out), bound)


def _initials(mach):
    return frozenset([mach.initial]) if isinstance(mach, DFA) else mach.initials


def _step_members(mach, subset, members):
    out = set()
    if isinstance(mach, DFA):
        for s in subset:
            for c in members:
                t = mach.delta.get((s, c))
                if t is not None:
                    out.add(t)
    else:
        for s in subset:
            for c in members:
                out |= mach.delta.get((s, c), frozenset())
    return frozenset(out)


class _SubsetMachine:
    """Joint simulation of all horizontal acceptors for one symbol over
    strings of state sets: a state is one reachable-set per acceptor, and the
    output is the set of vertical states whose acceptor currently accepts."""

    def __init__(self, machines):
        self.machines = machines  # sorted (q, machine) pairs

    def start(self):
        return tuple(_initials(m) for _, m in self.machines)

    def step(self, state, members):
        return tuple(_step_members(m, sub, members)
                     for (_, m), sub in zip(self.machines, state))

    def output(self, state) -> frozenset:
        return frozenset(q for (q, m), sub in zip(self.machines, state)
                         if sub & m.finals)

    def explore(self, items):
        """BFS over the given symbol items (each a set of member states).
        Returns (ordered states, transitions as index pairs per item)."""
        start = self.start()
        index = {start: 0}
        order = [start]
        edges = []
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for item in items:
                nxt = self.step(cur, item)
                if not any(nxt):
                    continue
                if nxt not in index:
                    index[nxt] = len(index)
                    order.append(nxt)
                    queue.append(nxt)
                edges.append((index[cur], item, index[nxt]))
        return order, edges


def _vname(item, leaf_symbols) -> str:
    members = sorted(item)
    if len(members) == 1 and members[0] in leaf_symbols:
        return members[0]
    return subset_name(members)


def _assignable_subsets(a: TreeAutomaton):
    """Fixed point of child-set reachability: every state set some run can
    assign to a node, as frozensets of original vertical states."""
    leaf_items = [frozenset([s]) for s in sorted(a.leaf_symbols)]
    real: set = set()
    machines = {sym: _SubsetMachine(a.machines_for(sym)) for sym in sorted(a.alphabet)
                if a.machines_for(sym)}
    while True:
        items = leaf_items + sorted(real, key=sorted)
        grew = False
        for sym, sm in sorted(machines.items()):
            order, _ = sm.explore(items)
            for st in order:
                out = sm.output(st)
                if out and out not in real:
                    real.add(out)
                    grew = True
        if not grew:
            return sorted(real, key=sorted), machines


def _eq4_horizontal(a: TreeAutomaton) -> int:
    total = 0
    for sym in sorted(a.alphabet):
        exponent = sum(m.size for _, m in a.machines_for(sym))
        total += 2**exponent
    return total


def nta_to_sdta(a: TreeAutomaton, force_general: bool = False):
    """Determinize the bottom-up computation into a strongly deterministic
    automaton.

    General case: vertical states become the assignable state sets, and each
    symbol gets the joint subset-simulation of its horizontal acceptors as a
    Moore machine whose output is the set of accepting components.

    When the input is already semantically deterministic (detected, or
    forced off with ``force_general``), assignable sets are singletons, so
    the original vertical states are kept; only the horizontal layer is
    rebuilt, and every output is asserted to be a single state.
    """
    if a.kind == SDTA:
        raise KindError("input is already an SDTA")
    insize = size(a)
    refine = not force_general and check_semantic_determinism(a).ok
    if refine:
        out = _nta_to_sdta_refined(a)
        bound = SizePair(insize.vertical, _eq4_horizontal(a))
    else:
        out = _nta_to_sdta_general(a)
        bound = SizePair(2**insize.vertical, _eq4_horizontal(a))
    return out, ConversionReport("nta-to-sdta", insize, size(out), bound)


def _nta_to_sdta_general(a: TreeAutomaton) -> TreeAutomaton:
    real, machines = _assignable_subsets(a)
    leaf_items = [frozenset([s]) for s in sorted(a.leaf_symbols)]
    items = leaf_items + real
    new_states = {_vname(p, a.leaf_symbols) for p in real}
    ha = frozenset(new_states) | a.leaf_symbols
    moore = {}
    for sym, sm in sorted(machines.items()):
        order, edges = sm.explore(items)
        hname = {i: f"h{i}" for i in range(len(order))}
        trans = [(hname[i], _vname(item, a.leaf_symbols), hname[j])
                 for i, item, j in edges]
        finals = set()
        outputs = {}
        for i, st in enumerate(order):
            out = sm.output(st)
            if out:
                finals.add(hname[i])
                outputs[hname[i]] = _vname(out, a.leaf_symbols)
        moore[sym] = MooreDFA(hname.values(), ha, hname[0], finals, trans, outputs)
    finals = {_vname(p, a.leaf_symbols) for p in real if p & a.finals}
    finals |= {s for s in a.leaf_symbols if s in a.finals}
    return TreeAutomaton(SDTA, a.alphabet, new_states, finals,
                         moore=moore, leaf_symbols=a.leaf_symbols)


def _nta_to_sdta_refined(a: TreeAutomaton) -> TreeAutomaton:
    items = [frozenset([s]) for s in sorted(a.horizontal_alphabet)]
    ha = a.horizontal_alphabet
    moore = {}
    for sym in sorted(a.alphabet):
        qm = a.machines_for(sym)
        if not qm:
            continue
        sm = _SubsetMachine(qm)
        order, edges = sm.explore(items)
        hname = {i: f"h{i}" for i in range(len(order))}
        trans = [(hname[i], next(iter(item)), hname[j]) for i, item, j in edges]
        finals = set()
        outputs = {}
        for i, st in enumerate(order):
            out = sm.output(st)
            if out:
                assert len(out) == 1, "deterministic input produced a proper state set"
                finals.add(hname[i])
                (outputs[hname[i]],) = out
        moore[sym] = MooreDFA(hname.values(), ha, hname[0], finals, trans, outputs)
    return TreeAutomaton(SDTA, a.alphabet, a.states, a.finals,
                         moore=moore, leaf_symbols=a.leaf_symbols)


def nta_to_dtadfa(a: TreeAutomaton, force_general: bool = False):
    """Determinize into a weakly deterministic automaton.

    General case: same vertical subset states as the SDTA construction; the
    horizontal DFA for (P, sym) is the subset-simulation machine with finals
    restricted to the states whose output is exactly P.

    For a semantically deterministic input (unless forced off), the vertical
    states are preserved and each horizontal NFA is determinized separately.
    """
    if a.kind == SDTA:
        raise KindError("input is already an SDTA")
    insize = size(a)
    refine = not force_general and check_semantic_determinism(a).ok
    if refine:
        horizontal = {}
        bound_h = 0
        for (q, sym), mach in sorted(a.horizontal.items()):
            bound_h += 2**mach.size
            nfa = mach.to_nfa() if isinstance(mach, DFA) else mach
            horizontal[(q, sym)] = determinize(nfa)
        out = TreeAutomaton(DTA_DFA, a.alphabet, a.states, a.finals,
                            horizontal=horizontal, leaf_symbols=a.leaf_symbols)
        bound = SizePair(insize.vertical, bound_h)
        return out, ConversionReport("nta-to-dtadfa", insize, size(out), bound)

    real, machines = _assignable_subsets(a)
    leaf_items = [frozenset([s]) for s in sorted(a.leaf_symbols)]
    items = leaf_items + real
    new_states = {_vname(p, a.leaf_symbols) for p in real}
    ha = frozenset(new_states) | a.leaf_symbols
    horizontal = {}
    for sym, sm in sorted(machines.items()):
        order, edges = sm.explore(items)
        hname = {i: f"h{i}" for i in range(len(order))}
        trans = [(hname[i], _vname(item, a.leaf_symbols), hname[j])
                 for i, item, j in edges]
        out_of = {i: sm.output(st) for i, st in enumerate(order)}
        for p in real:
            finals = {hname[i] for i, o in out_of.items() if o == p}
            if not finals:
                continue
            horizontal[(_vname(p, a.leaf_symbols), sym)] = DFA(
                hname.values(), ha, hname[0], finals, trans)
    finals = {_vname(p, a.leaf_symbols) for p in real if p & a.finals}
    finals |= {s for s in a.leaf_symbols if s in a.finals}
    out = TreeAutomaton(DTA_DFA, a.alphabet, new_states, finals,
                        horizontal=horizontal, leaf_symbols=a.leaf_symbols)
    bound = SizePair(2**insize.vertical, 2**insize.vertical * _eq4_horizontal(a))
    return out, ConversionReport("nta-to-dtadfa", insize, size(out), bound)
