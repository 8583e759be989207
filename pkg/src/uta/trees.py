"""Labeled ordered unranked trees, contexts, term syntax and enumeration.

Trees are immutable values; sibling order is significant and equality is
structural.  Symbols are identifiers matching ``[A-Za-z0-9_]+``; the symbol
``x`` is reserved for the variable leaf of a context and is rejected inside
plain trees.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .errors import EnumerationCapExceeded, TreeSyntaxError, UnknownSymbolError

VARIABLE = "x"

_SYMBOL_RE = re.compile(r"[A-Za-z0-9_]+")


@dataclass(frozen=True)
class Tree:
    label: str
    children: tuple["Tree", ...] = ()

    def is_leaf(self) -> bool:
        return not self.children

    def node_count(self) -> int:
        return 1 + sum(c.node_count() for c in self.children)

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)

    def __str__(self) -> str:
        return render_tree(self)


def leaf(label: str) -> Tree:
    return Tree(label)


def node(label: str, *children: Tree) -> Tree:
    return Tree(label, tuple(children))


def nest(label: str, count: int, bottom: Tree) -> Tree:
    """Chain of ``count`` unary label-nodes ending in ``bottom``."""
    t = bottom
    for _ in range(count):
        t = Tree(label, (t,))
    return t


def word_node(label: str, word) -> Tree:
    """A label-node whose children are leaves spelling ``word``."""
    return Tree(label, tuple(Tree(c) for c in word))


class Context:
    """A tree over the alphabet plus one variable leaf ``x``.

    Exactly one leaf carries the variable; the variable never labels an
    internal node.  Both conditions are enforced at construction.
    """

    __slots__ = ("skeleton",)

    def __init__(self, skeleton: Tree):
        holes = _count_variable(skeleton)
        if holes != 1:
            raise TreeSyntaxError(
                f"context must contain exactly one {VARIABLE!r} leaf, found {holes}", 0
            )
        self.skeleton = skeleton

    def __eq__(self, other):
        return isinstance(other, Context) and self.skeleton == other.skeleton

    def __hash__(self):
        return hash(("context", self.skeleton))

    def __str__(self):
        return render_tree(self.skeleton)

    def __repr__(self):
        return f"Context({render_tree(self.skeleton)!r})"


def _count_variable(t: Tree) -> int:
    if t.label == VARIABLE:
        if t.children:
            raise TreeSyntaxError(f"{VARIABLE!r} must label a leaf", 0)
        return 1
    return sum(_count_variable(c) for c in t.children)


def substitute(c: Context, t: Tree) -> Tree:
    """Replace the unique variable leaf of ``c`` with ``t``."""

    def go(s: Tree) -> Tree:
        if s.label == VARIABLE:
            return t
        return Tree(s.label, tuple(go(ch) for ch in s.children))

    return go(c.skeleton)


def parse_tree(text: str, alphabet) -> Tree:
    """Parse term syntax ``sym`` or ``sym(t1,...,tn)``; whitespace ignored."""
    return _parse(text, frozenset(alphabet), allow_variable=False)


def parse_context(text: str, alphabet) -> Context:
    """Parse a context; the variable ``x`` must appear as exactly one leaf."""
    return Context(_parse(text, frozenset(alphabet), allow_variable=True))


def _parse(text: str, alphabet: frozenset, allow_variable: bool) -> Tree:
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def parse_node() -> Tree:
        nonlocal pos
        skip_ws()
        m = _SYMBOL_RE.match(text, pos)
        if not m:
            raise TreeSyntaxError("expected a symbol", pos)
        sym = m.group(0)
        at = pos
        pos = m.end()
        if sym != VARIABLE and sym not in alphabet:
            raise UnknownSymbolError(sym, at)
        if sym == VARIABLE and not allow_variable:
            raise UnknownSymbolError(sym, at)
        skip_ws()
        if pos < len(text) and text[pos] == "(":
            pos += 1
            children = [parse_node()]
            skip_ws()
            while pos < len(text) and text[pos] == ",":
                pos += 1
                children.append(parse_node())
                skip_ws()
            if pos >= len(text) or text[pos] != ")":
                raise TreeSyntaxError("expected ',' or ')'", pos)
            pos += 1
            return Tree(sym, tuple(children))
        return Tree(sym)

    t = parse_node()
    skip_ws()
    if pos != len(text):
        raise TreeSyntaxError("trailing input after tree", pos)
    return t


def render_tree(t: Tree) -> str:
    if not t.children:
        return t.label
    return t.label + "(" + ",".join(render_tree(c) for c in t.children) + ")"


@dataclass(frozen=True)
class EnumerationBounds:
    max_depth: int = 4
    max_width: int = 5
    max_count: int = 200_000

    def __post_init__(self):
        if self.max_depth < 1 or self.max_width < 0 or self.max_count < 1:
            raise ValueError(f"invalid enumeration bounds {self}")


DEFAULT_BOUNDS = EnumerationBounds()


@lru_cache(maxsize=None)
def _count_trees(nsyms: int, n: int, depth: int, width: int) -> int:
    """Number of trees with exactly n nodes, depth <= depth, arity <= width."""
    if n < 1 or depth < 1:
        return 0
    if n == 1:
        return nsyms
    return nsyms * _count_seqs(nsyms, n - 1, depth - 1, width, width)


@lru_cache(maxsize=None)
def _count_seqs(nsyms: int, m: int, depth: int, width: int, slots: int) -> int:
    """Number of sequences of <= slots trees, each nonempty, totaling m nodes."""
    if m == 0:
        return 1
    if slots == 0 or depth < 1:
        return 0
    return sum(
        _count_trees(nsyms, p, depth, width) * _count_seqs(nsyms, m - p, depth, width, slots - 1)
        for p in range(1, m + 1)
    )


def _max_nodes(depth: int, width: int) -> int:
    if width == 0:
        return 1
    if width == 1:
        return depth
    return (width**depth - 1) // (width - 1)


def iter_trees(alphabet, bounds: EnumerationBounds = DEFAULT_BOUNDS) -> Iterator[Tree]:
    """The first max_count trees within the depth/width bounds, by node count
    then by rendered string; deterministic and duplicate-free.

    Levels are counted before they are generated, so a level the cap cuts
    into is never materialized beyond the trees actually emitted.
    """
    symbols = tuple(sorted(alphabet))
    emitted = 0
    for n in range(1, _max_nodes(bounds.max_depth, bounds.max_width) + 1):
        total = _count_trees(len(symbols), n, bounds.max_depth, bounds.max_width)
        if total == 0:
            continue
        remaining = bounds.max_count - emitted
        gen = _gen_trees(symbols, n, bounds.max_depth, bounds.max_width)
        if total <= remaining:
            level = sorted(gen, key=render_tree)
        else:
            level = heapq.nsmallest(remaining, gen, key=render_tree)
        yield from level
        emitted += len(level)
        if emitted >= bounds.max_count:
            return


def _gen_trees(symbols: tuple, n: int, depth: int, width: int):
    if n < 1 or depth < 1:
        return
    if n == 1:
        for s in symbols:
            yield Tree(s)
        return
    for s in symbols:
        for seq in _gen_seqs(symbols, n - 1, depth - 1, width, width):
            yield Tree(s, seq)


def _gen_seqs(symbols: tuple, m: int, depth: int, width: int, slots: int):
    if m == 0:
        yield ()
        return
    if slots == 0 or depth < 1:
        return
    for p in range(1, m + 1):
        for first in _gen_trees(symbols, p, depth, width):
            for rest in _gen_seqs(symbols, m - p, depth, width, slots - 1):
                yield (first,) + rest


def enumerate_trees(alphabet, bounds: EnumerationBounds = DEFAULT_BOUNDS) -> list:
    """Materialized enumeration, truncated at max_count.

    Raises EnumerationCapExceeded (carrying the partial list) when more trees
    exist beyond the cap; the caller decides whether that is fatal.
    """
    out = list(iter_trees(alphabet, bounds))
    total = sum(
        _count_trees(len(frozenset(alphabet)), n, bounds.max_depth, bounds.max_width)
        for n in range(1, _max_nodes(bounds.max_depth, bounds.max_width) + 1))
    if total > len(out):
        raise EnumerationCapExceeded(out, bounds.max_count)
    return out
