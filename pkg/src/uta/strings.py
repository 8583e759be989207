"""Finite automata over arbitrary finite symbol domains.

The same machinery serves plain alphabets, vertical states, and sets of
vertical states: symbols and states are opaque string tokens.  DFAs may be
partial; a missing transition rejects.  Reported sizes count the declared
states only, so the implicit reject sink is never included.
"""

from __future__ import annotations

from collections import deque

from .errors import AlphabetMismatchError, OverlapError, UnknownSymbolError


def subset_name(members) -> str:
    """Canonical name for a set of states: sorted members in braces."""
    return "{" + ",".join(sorted(members)) + "}"


class NFA:
    """Nondeterministic finite automaton; transitions form a relation."""

    def __init__(self, states, alphabet, initials, finals, transitions):
        self.states = frozenset(states)
        self.alphabet = frozenset(alphabet)
        self.initials = frozenset(initials)
        self.finals = frozenset(finals)
        delta: dict = {}
        for src, sym, dst in transitions:
            if src not in self.states or dst not in self.states:
                raise ValueError(f"transition ({src},{sym},{dst}) uses undeclared state")
            if sym not in self.alphabet:
                raise ValueError(f"transition ({src},{sym},{dst}) uses undeclared symbol")
            delta.setdefault((src, sym), set()).add(dst)
        self.delta = {k: frozenset(v) for k, v in delta.items()}
        if not self.initials:
            raise ValueError("initial state set must be non-empty")
        if not self.initials <= self.states or not self.finals <= self.states:
            raise ValueError("initials/finals must be declared states")

    @property
    def size(self) -> int:
        return len(self.states)

    def transitions(self):
        for (src, sym), dsts in sorted(self.delta.items()):
            for dst in sorted(dsts):
                yield src, sym, dst

    def step(self, subset, sym) -> frozenset:
        out = set()
        for s in subset:
            out |= self.delta.get((s, sym), frozenset())
        return frozenset(out)

    def step_any(self, subset, syms) -> frozenset:
        """One step where the input symbol may be any member of ``syms``."""
        out = set()
        for s in subset:
            for c in syms:
                out |= self.delta.get((s, c), frozenset())
        return frozenset(out)

    def accepts(self, word) -> bool:
        cur = self.initials
        for sym in word:
            if sym not in self.alphabet:
                raise UnknownSymbolError(sym)
            cur = self.step(cur, sym)
            if not cur:
                return False
        return bool(cur & self.finals)

    def is_deterministic(self) -> bool:
        return len(self.initials) == 1 and all(len(v) <= 1 for v in self.delta.values())

    def __eq__(self, other):
        return (type(other) is NFA and self.states == other.states
                and self.alphabet == other.alphabet and self.initials == other.initials
                and self.finals == other.finals and self.delta == other.delta)

    def __hash__(self):
        return hash((self.states, self.alphabet, self.initials, self.finals))

    def __repr__(self):
        return f"<NFA {len(self.states)} states, {len(self.delta)} edges>"


class DFA:
    """Deterministic, possibly partial, finite automaton."""

    def __init__(self, states, alphabet, initial, finals, transitions):
        self.states = frozenset(states)
        self.alphabet = frozenset(alphabet)
        self.initial = initial
        self.finals = frozenset(finals)
        delta: dict = {}
        for src, sym, dst in transitions:
            if src not in self.states or dst not in self.states:
                raise ValueError(f"transition ({src},{sym},{dst}) uses undeclared state")
            if sym not in self.alphabet:
                raise ValueError(f"transition ({src},{sym},{dst}) uses undeclared symbol")
            if (src, sym) in delta and delta[(src, sym)] != dst:
                raise ValueError(f"conflicting transitions from ({src},{sym})")
            delta[(src, sym)] = dst
        self.delta = delta
        if self.initial not in self.states:
            raise ValueError(f"initial state {initial!r} not declared")
        if not self.finals <= self.states:
            raise ValueError("finals must be declared states")

    @property
    def size(self) -> int:
        return len(self.states)

    def transitions(self):
        for (src, sym), dst in sorted(self.delta.items()):
            yield src, sym, dst

    def run_word(self, word):
        """Ending state, or None once a missing transition is hit."""
        cur = self.initial
        for sym in word:
            if sym not in self.alphabet:
                raise UnknownSymbolError(sym)
            cur = self.delta.get((cur, sym))
            if cur is None:
                return None
        return cur

    def accepts(self, word) -> bool:
        return self.run_word(word) in self.finals

    def is_complete(self) -> bool:
        return all((s, c) in self.delta for s in self.states for c in self.alphabet)

    def to_nfa(self) -> NFA:
        return NFA(self.states, self.alphabet, {self.initial}, self.finals,
                   list(self.transitions()))

    def __eq__(self, other):
        return (type(other) is type(self) and self.states == other.states
                and self.alphabet == other.alphabet and self.initial == other.initial
                and self.finals == other.finals and self.delta == other.delta
                and getattr(self, "outputs", None) == getattr(other, "outputs", None))

    def __hash__(self):
        return hash((self.states, self.alphabet, self.initial, self.finals))

    def __repr__(self):
        return f"<DFA {len(self.states)} states, {len(self.delta)} edges>"


class MooreDFA(DFA):
    """A DFA with an output attached to every final state (and only those)."""

    def __init__(self, states, alphabet, initial, finals, transitions, outputs):
        super().__init__(states, alphabet, initial, finals, transitions)
        self.outputs = dict(outputs)
        if set(self.outputs) != set(self.finals):
            raise ValueError("outputs must be defined exactly on final states")

    def output_of(self, word):
        """Output for the word, or None if the word is not accepted."""
        end = self.run_word(word)
        return self.outputs.get(end) if end is not None else None

    def __repr__(self):
        return f"<MooreDFA {len(self.states)} states, {len(self.delta)} edges>"


def nfa_accepts(m, word) -> bool:
    """Standard acceptance for an NFA or a (partial) DFA."""
    return m.accepts(word)


def determinize(m: NFA) -> DFA:
    """Subset construction over reachable subsets only.

    Subset states are named canonically by their sorted member list, so the
    result is reproducible.
    """
    start = frozenset(m.initials)
    seen = {start: subset_name(start)}
    order = [start]
    trans = []
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for sym in sorted(m.alphabet):
            nxt = m.step(cur, sym)
            if not nxt:
                continue
            if nxt not in seen:
                seen[nxt] = subset_name(nxt)
                order.append(nxt)
                queue.append(nxt)
            trans.append((seen[cur], sym, seen[nxt]))
    finals = {seen[s] for s in order if s & m.finals}
    return DFA([seen[s] for s in order], m.alphabet, seen[start], finals, trans)


_SINK = object()


def _refine(machine, block_key):
    """Partition refinement over reachable states plus a virtual sink.

    ``block_key(state)`` seeds the partition; the sink seeds as
    ``block_key(None)``.  Missing transitions go to the sink, which loops on
    every symbol, so states that can never reach a final end up merged with
    the sink.  Returns (reachable order, state -> block id, sink block id).
    """
    syms = sorted(machine.alphabet)
    reach = [machine.initial]
    seen = {machine.initial}
    for s in reach:
        for c in syms:
            t = machine.delta.get((s, c))
            if t is not None and t not in seen:
                seen.add(t)
                reach.append(t)

    keys = {s: block_key(s) for s in reach}
    keys[_SINK] = block_key(None)
    universe = reach + [_SINK]
    ids = {}
    block = {}
    for s in universe:
        block[s] = ids.setdefault(keys[s], len(ids))

    def succ(s, c):
        if s is _SINK:
            return _SINK
        t = machine.delta.get((s, c))
        return _SINK if t is None else t

    while True:
        sigs = {s: (block[s],) + tuple(block[succ(s, c)] for c in syms) for s in universe}
        ids = {}
        nblock = {}
        for s in universe:
            nblock[s] = ids.setdefault(sigs[s], len(ids))
        if all(nblock[s] == block[s] for s in universe):
            return reach, block, block[_SINK]
        block = nblock


def _rebuild(machine, reach, block, sink_block, make):
    """Quotient the machine by the partition; the sink block disappears."""
    syms = sorted(machine.alphabet)
    if block[machine.initial] == sink_block:
        # empty language: a lone initial state is the smallest valid machine
        return make(["m0"], machine.alphabet, "m0", [], [], {})

    rep = {}
    for s in reach:
        rep.setdefault(block[s], s)

    # BFS over blocks for stable, deterministic naming
    names = {}
    order = deque([block[machine.initial]])
    names[block[machine.initial]] = "m0"
    trans = []
    finals = set()
    outputs = {}
    done = set()
    while order:
        b = order.popleft()
        if b in done:
            continue
        done.add(b)
        s = rep[b]
        if s in machine.finals:
            finals.add(names[b])
            if isinstance(machine, MooreDFA):
                outputs[names[b]] = machine.outputs[s]
        for c in syms:
            t = machine.delta.get((s, c))
            if t is None or block[t] == sink_block:
                continue
            tb = block[t]
            if tb not in names:
                names[tb] = f"m{len(names)}"
                order.append(tb)
            trans.append((names[b], c, names[tb]))
    return make(sorted(names.values()), machine.alphabet, "m0", finals, trans, outputs)


def minimize_dfa(m: DFA) -> DFA:
    """Unique minimal partial DFA: unreachable and dead states drop out,
    indistinguishable states merge.  Minimality is the Myhill-Nerode
    partition over live residuals."""
    reach, block, sink = _refine(m, lambda s: s is not None and s in m.finals)
    return _rebuild(m, reach, block, sink,
                    lambda st, al, i, f, tr, _o: DFA(st, al, i, f, tr))


def minimize_moore(m: MooreDFA) -> MooreDFA:
    """Minimal Moore machine for the same partial word-to-output function.

    The initial partition separates states by (final?, output); refinement
    then proceeds exactly as for DFA minimization.
    """
    def key(s):
        if s is None or s not in m.finals:
            return None
        return ("out", m.outputs[s])

    reach, block, sink = _refine(m, key)
    return _rebuild(m, reach, block, sink, MooreDFA)


def _as_nfa(m) -> NFA:
    return m if isinstance(m, NFA) else m.to_nfa()


def intersection_witness(a, b):
    """Shortest word in L(a) & L(b), or None if the languages are disjoint.

    Works for any mix of NFAs and DFAs via the pair product; BFS order makes
    the witness deterministic.
    """
    if frozenset(a.alphabet) != frozenset(b.alphabet):
        raise AlphabetMismatchError(
            f"alphabets differ: {sorted(a.alphabet)} vs {sorted(b.alphabet)}")
    na, nb = _as_nfa(a), _as_nfa(b)
    syms = sorted(na.alphabet)
    start = [(p, q) for p in sorted(na.initials) for q in sorted(nb.initials)]
    parent = {pq: None for pq in start}
    queue = deque(start)
    while queue:
        p, q = queue.popleft()
        if p in na.finals and q in nb.finals:
            word = []
            cur = (p, q)
            while parent[cur] is not None:
                cur, sym = parent[cur]
                word.append(sym)
            return tuple(reversed(word))
        for c in syms:
            for p2 in sorted(na.delta.get((p, c), ())):
                for q2 in sorted(nb.delta.get((q, c), ())):
                    if (p2, q2) not in parent:
                        parent[(p2, q2)] = ((p, q), c)
                        queue.append((p2, q2))
    return None


def product_disjoint(a, b) -> bool:
    """True iff L(a) and L(b) are disjoint."""
    return intersection_witness(a, b) is None


def marked_union(parts) -> MooreDFA:
    """One deterministic machine that recognizes the union of pairwise
    disjoint DFA languages and outputs the 1-based index of the part each
    accepted word belongs to.

    Built as the full product of the parts, pruned to reachable states; a
    reachable product state accepting in two components would contradict
    disjointness and is asserted against.
    """
    parts = list(parts)
    if not parts:
        raise ValueError("marked_union needs at least one part")
    alphabet = parts[0].alphabet
    for i, p in enumerate(parts[1:], start=2):
        if p.alphabet != alphabet:
            raise AlphabetMismatchError(f"part {i} has a different alphabet")
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            w = intersection_witness(parts[i], parts[j])
            if w is not None:
                raise OverlapError(i + 1, j + 1, w)

    def name(tup):
        return "(" + "|".join("-" if s is None else s for s in tup) + ")"

    syms = sorted(alphabet)
    start = tuple(p.initial for p in parts)
    names = {start: name(start)}
    queue = deque([start])
    trans = []
    finals = set()
    outputs = {}
    while queue:
        cur = queue.popleft()
        accepting = [i for i, s in enumerate(cur) if s is not None and s in parts[i].finals]
        assert len(accepting) <= 1, "disjoint parts accepted the same word"
        if accepting:
            finals.add(names[cur])
            outputs[names[cur]] = accepting[0] + 1
        for c in syms:
            nxt = tuple(None if s is None else parts[i].delta.get((s, c))
                        for i, s in enumerate(cur))
            if all(s is None for s in nxt):
                continue
            if nxt not in names:
                names[nxt] = name(nxt)
                queue.append(nxt)
            trans.append((names[cur], c, names[nxt]))
    return MooreDFA(names.values(), alphabet, names[start], finals, trans, outputs)


def canonical_form(m):
    """Structure of a DFA/Moore machine under BFS renaming; two machines are
    isomorphic iff their forms are equal."""
    syms = sorted(m.alphabet)
    number = {m.initial: 0}
    order = [m.initial]
    edges = []
    for s in order:
        for c in syms:
            t = m.delta.get((s, c))
            if t is None:
                continue
            if t not in number:
                number[t] = len(number)
                order.append(t)
            edges.append((number[s], c, number[t]))
    finals = tuple(sorted(number[s] for s in m.finals if s in number))
    outs = ()
    if isinstance(m, MooreDFA):
        outs = tuple(sorted((number[s], m.outputs[s]) for s in m.finals if s in number))
    stray = len(m.states) - len(number)  # unreachable states still distinguish
    return (len(number), stray, tuple(edges), finals, outs)


def isomorphic(a, b) -> bool:
    return canonical_form(a) == canonical_form(b)
