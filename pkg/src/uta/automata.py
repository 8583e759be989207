"""Unranked bottom-up tree automata: the four models and their run semantics.

An automaton assigns sets of vertical states to tree nodes bottom-up.  For a
node labeled ``sym`` whose children were assigned S_1..S_m, a state ``q`` is
assigned iff some choice (q_1..q_m) from S_1 x..x S_m is accepted by the
horizontal acceptor for (q, sym).  This is computed exactly in polynomial
time by running each horizontal acceptor with subset-labeled steps instead
of enumerating the product of the children's state sets.

Leaf-state convention: an automaton may designate, per symbol, a dedicated
state (named by the symbol itself) that leaves with that label receive.
Designated leaf states appear in horizontal languages as ordinary symbols
but are excluded from the vertical state count.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import KindError, UnknownSymbolError
from .strings import DFA, MooreDFA, NFA, intersection_witness
from .trees import Tree

NTA_NFA = "nta-nfa"
NTA_DFA = "nta-dfa"
DTA_NFA = "dta-nfa"
DTA_DFA = "dta-dfa"
SDTA = "sdta"

KINDS = (NTA_NFA, NTA_DFA, DTA_NFA, DTA_DFA, SDTA)
DETERMINISTIC_KINDS = (DTA_NFA, DTA_DFA, SDTA)
DFA_KINDS = (NTA_DFA, DTA_DFA)


@dataclass(frozen=True)
class SizePair:
    """Vertical and horizontal state counts, compared componentwise."""

    vertical: int
    horizontal: int

    def __le__(self, other: "SizePair") -> bool:
        return self.vertical <= other.vertical and self.horizontal <= other.horizontal

    def __ge__(self, other: "SizePair") -> bool:
        return other.__le__(self)

    def __str__(self) -> str:
        return f"[{self.vertical}; {self.horizontal}]"


@dataclass(frozen=True)
class DeterminismReport:
    ok: bool
    symbol: str | None = None
    pair: tuple | None = None
    witness: tuple | None = None


class TreeAutomaton:
    """One of the five automaton kinds over a fixed alphabet.

    ``states`` are the counted vertical states.  ``leaf_symbols`` lists the
    symbols using the designated-leaf-state convention; each such leaf state
    is named by its symbol and lives outside ``states``.  Non-SDTA kinds
    carry ``horizontal``: a sparse map (state, symbol) -> NFA/DFA over the
    horizontal alphabet (missing entry = empty language).  SDTAs carry
    ``moore``: a sparse map symbol -> MooreDFA whose outputs are vertical
    states.
    """

    def __init__(self, kind, alphabet, states, finals, horizontal=None,
                 moore=None, leaf_symbols=()):
        if kind not in KINDS:
            raise KindError(f"unknown kind {kind!r}")
        self.kind = kind
        self.alphabet = frozenset(alphabet)
        self.states = frozenset(states)
        self.leaf_symbols = frozenset(leaf_symbols)
        self.finals = frozenset(finals)
        self.horizontal = dict(horizontal or {})
        self.moore = dict(moore or {})
        self._validate()

    @property
    def horizontal_alphabet(self) -> frozenset:
        """Symbols readable by horizontal acceptors: vertical plus leaf states."""
        return self.states | self.leaf_symbols

    def _validate(self):
        if not self.leaf_symbols <= self.alphabet:
            raise KindError("leaf convention declared for symbols outside the alphabet")
        if self.states & self.leaf_symbols:
            raise KindError("designated leaf states must not collide with state names")
        if not self.finals <= (self.states | self.leaf_symbols):
            raise KindError("finals must be declared states")
        ha = self.horizontal_alphabet

        if self.kind == SDTA:
            if self.horizontal:
                raise KindError("an SDTA defines one machine per symbol, not per (state, symbol)")
            for sym, mach in self.moore.items():
                if sym not in self.alphabet:
                    raise KindError(f"machine for undeclared symbol {sym!r}")
                if not isinstance(mach, MooreDFA):
                    raise KindError(f"machine for {sym!r} must be a MooreDFA")
                if mach.alphabet != ha:
                    raise KindError(f"machine for {sym!r} must read the horizontal alphabet")
                if not set(mach.outputs.values()) <= self.states:
                    raise KindError(f"outputs of machine for {sym!r} must be vertical states")
                if sym in self.leaf_symbols and mach.initial in mach.finals:
                    raise KindError(
                        f"machine for {sym!r} accepts the empty string, clashing "
                        f"with the designated leaf state")
            return

        if self.moore:
            raise KindError(f"kind {self.kind} does not take per-symbol Moore machines")
        for (q, sym), mach in self.horizontal.items():
            if q not in self.states:
                raise KindError(f"machine keyed by undeclared state {q!r}")
            if sym not in self.alphabet:
                raise KindError(f"machine keyed by undeclared symbol {sym!r}")
            if self.kind in DFA_KINDS and not isinstance(mach, DFA):
                raise KindError(f"kind {self.kind} requires DFA horizontal acceptors")
            if not isinstance(mach, (NFA, DFA)):
                raise KindError(f"machine for ({q!r},{sym!r}) must be an NFA or DFA")
            if mach.alphabet != ha:
                raise KindError(f"machine for ({q!r},{sym!r}) must read the horizontal alphabet")
            if sym in self.leaf_symbols and _accepts_empty(mach):
                raise KindError(
                    f"machine for ({q!r},{sym!r}) accepts the empty string, clashing "
                    f"with the designated leaf state")

    def machines_for(self, sym):
        """Sorted (state, machine) pairs for one symbol; non-SDTA kinds."""
        return sorted(((q, m) for (q, s), m in self.horizontal.items() if s == sym),
                      key=lambda qm: qm[0])

    def __eq__(self, other):
        return (isinstance(other, TreeAutomaton) and self.kind == other.kind
                and self.alphabet == other.alphabet and self.states == other.states
                and self.finals == other.finals
                and self.leaf_symbols == other.leaf_symbols
                and self.horizontal == other.horizontal and self.moore == other.moore)

    def __hash__(self):
        return hash((self.kind, self.alphabet, self.states, self.finals))

    def __repr__(self):
        return f"<TreeAutomaton {self.kind} {size(self)}>"


def _accepts_empty(mach) -> bool:
    if isinstance(mach, DFA):
        return mach.initial in mach.finals
    return bool(mach.initials & mach.finals)


def _step_set(mach, subset, members):
    if isinstance(mach, DFA):
        out = set()
        for s in subset:
            for c in members:
                t = mach.delta.get((s, c))
                if t is not None:
                    out.add(t)
        return frozenset(out)
    return mach.step_any(subset, members)


def _initial_set(mach) -> frozenset:
    if isinstance(mach, DFA):
        return frozenset([mach.initial])
    return mach.initials


def _finals_of(mach) -> frozenset:
    return mach.finals


def run(a: TreeAutomaton, t: Tree) -> dict:
    """Bottom-up state-set assignment: node address (tuple of child indexes)
    -> set of assignable vertical states.

    For deterministic kinds every assigned set has at most one element; a
    violation means the declared kind is wrong and raises KindError.
    """
    assignment: dict[tuple, frozenset] = {}

    def go(node: Tree, addr: tuple) -> frozenset:
        child_sets = [go(c, addr + (i,)) for i, c in enumerate(node.children)]
        if node.label not in a.alphabet:
            raise UnknownSymbolError(node.label)
        states = _states_at(a, node.label, child_sets)
        if a.kind in DETERMINISTIC_KINDS and len(states) > 1:
            raise KindError(
                f"deterministic kind {a.kind} assigned {sorted(states)} at {addr}")
        assignment[addr] = states
        return states

    go(t, ())
    return assignment


def _states_at(a: TreeAutomaton, sym: str, child_sets: list) -> frozenset:
    if not child_sets and sym in a.leaf_symbols:
        return frozenset([sym])

    if a.kind == SDTA:
        mach = a.moore.get(sym)
        if mach is None:
            return frozenset()
        cur = mach.initial
        for s in child_sets:
            if not s:
                return frozenset()
            (member,) = s
            cur = mach.delta.get((cur, member))
            if cur is None:
                return frozenset()
        if cur in mach.finals:
            return frozenset([mach.outputs[cur]])
        return frozenset()

    out = set()
    for q, mach in a.machines_for(sym):
        subset = _initial_set(mach)
        for s in child_sets:
            subset = _step_set(mach, subset, s)
            if not subset:
                break
        if subset & _finals_of(mach):
            out.add(q)
    return frozenset(out)


def accepts(a: TreeAutomaton, t: Tree) -> bool:
    return bool(run(a, t)[()] & a.finals)


def check_semantic_determinism(a: TreeAutomaton) -> DeterminismReport:
    """Horizontal languages for distinct states under the same symbol must be
    pairwise disjoint.  Returns the violating (symbol, state pair) and a
    shortest witness string when they are not."""
    if a.kind == SDTA:
        # output-function form makes the preimages disjoint by definition
        return DeterminismReport(True)
    for sym in sorted(a.alphabet):
        machines = a.machines_for(sym)
        for i in range(len(machines)):
            for j in range(i + 1, len(machines)):
                q1, m1 = machines[i]
                q2, m2 = machines[j]
                w = intersection_witness(m1, m2)
                if w is not None:
                    return DeterminismReport(False, sym, (q1, q2), w)
    return DeterminismReport(True)


def size(a: TreeAutomaton) -> SizePair:
    """Two-component size: counted vertical states (designated leaf states
    excluded) and the sum of the horizontal acceptor sizes."""
    if a.kind == SDTA:
        horiz = sum(m.size for m in a.moore.values())
    else:
        horiz = sum(m.size for m in a.horizontal.values())
    return SizePair(len(a.states), horiz)


def _nonempty_over(mach, allowed) -> bool:
    """Does the machine accept any string whose symbols all lie in allowed?"""
    subset = set(_initial_set(mach))
    if subset & _finals_of(mach):
        return True
    frontier = set(subset)
    while frontier:
        nxt = _step_set(mach, frontier, allowed) - subset
        if nxt & _finals_of(mach):
            return True
        subset |= nxt
        frontier = nxt
    return False


def prune_reachable(a: TreeAutomaton) -> TreeAutomaton:
    """Drop vertical states no run can assign, then drop horizontal states
    that became unreachable.  The language is unchanged."""
    live = set(a.leaf_symbols)
    changed = True
    while changed:
        changed = False
        if a.kind == SDTA:
            for sym, mach in a.moore.items():
                for s in _reachable_states(mach, live):
                    if s in mach.finals and mach.outputs[s] not in live:
                        live.add(mach.outputs[s])
                        changed = True
        else:
            for (q, sym), mach in a.horizontal.items():
                if q not in live and _nonempty_over(mach, live):
                    live.add(q)
                    changed = True

    keep = frozenset(live & a.states)
    allowed = keep | a.leaf_symbols
    if a.kind == SDTA:
        moore = {}
        for sym, mach in sorted(a.moore.items()):
            cut = _restrict(mach, allowed)
            if cut is not None:
                moore[sym] = cut
        return TreeAutomaton(SDTA, a.alphabet, keep, a.finals & (keep | a.leaf_symbols),
                             moore=moore, leaf_symbols=a.leaf_symbols)
    horizontal = {}
    for (q, sym), mach in sorted(a.horizontal.items()):
        if q not in keep:
            continue
        cut = _restrict(mach, allowed)
        if cut is not None:
            horizontal[(q, sym)] = cut
    return TreeAutomaton(a.kind, a.alphabet, keep, a.finals & (keep | a.leaf_symbols),
                         horizontal=horizontal, leaf_symbols=a.leaf_symbols)


def _reachable_states(mach, allowed):
    seen = set(_initial_set(mach))
    frontier = set(seen)
    while frontier:
        nxt = _step_set(mach, frontier, allowed) - seen
        seen |= nxt
        frontier = nxt
    return seen


def _restrict(mach, allowed):
    """The machine with symbols outside ``allowed`` removed and unreachable
    states dropped; None when its restricted language is empty."""
    reach = _reachable_states(mach, allowed)
    if not reach & _finals_of(mach):
        return None
    trans = [(s, c, d) for (s, c, d) in mach.transitions()
             if s in reach and d in reach and c in allowed]
    alphabet = allowed
    if isinstance(mach, MooreDFA):
        return MooreDFA(reach, alphabet, mach.initial, mach.finals & reach, trans,
                        {s: v for s, v in mach.outputs.items() if s in reach})
    if isinstance(mach, DFA):
        return DFA(reach, alphabet, mach.initial, mach.finals & reach, trans)
    initials = mach.initials & reach
    return NFA(reach, alphabet, initials, mach.finals & reach, trans)


def classify(a: TreeAutomaton) -> str:
    """The strongest kind the automaton's structure supports."""
    if a.kind == SDTA:
        return SDTA
    all_dfa = all(isinstance(m, DFA) for m in a.horizontal.values())
    det = check_semantic_determinism(a).ok
    if det and all_dfa:
        return DTA_DFA
    if det:
        return DTA_NFA
    if all_dfa:
        return NTA_DFA
    return NTA_NFA
