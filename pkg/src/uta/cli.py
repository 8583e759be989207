"""Command-line interface.

Exit status 0 on success, 1 when a checked property fails (inequivalence,
nondeterminism, a violated bound, a failed certification), 2 on usage or
document errors.  All output is deterministic: the same inputs produce
byte-identical documents.

The environment variable UTA_ENUM_BOUNDS ("depth,width,count") overrides
the default enumeration bounds used by tree-level equivalence checks.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import analysis, convert, docs, witnesses
from .automata import SDTA, TreeAutomaton, accepts, check_semantic_determinism
from .automata import prune_reachable, run, size
from .errors import SeparationError, UtaError
from .strings import DFA, MooreDFA, marked_union
from .trees import DEFAULT_BOUNDS, EnumerationBounds, parse_tree
from .witnesses import gen_lemma34, gen_thm41


def _env_bounds() -> EnumerationBounds:
    raw = os.environ.get("UTA_ENUM_BOUNDS")
    if not raw:
        return DEFAULT_BOUNDS
    try:
        depth, width, count = (int(v) for v in raw.split(","))
        return EnumerationBounds(depth, width, count)
    except (ValueError, TypeError):
        raise UtaError(f"UTA_ENUM_BOUNDS must be 'depth,width,count', got {raw!r}") from None


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return docs.parse_automaton(fh.read())
    except OSError as e:
        raise UtaError(f"cannot read {path}: {e.strerror}") from None


def _load_tree_automaton(path: str) -> TreeAutomaton:
    a = _load(path)
    if not isinstance(a, TreeAutomaton):
        raise UtaError(f"{path} holds a string machine, not a tree automaton")
    return a


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_run(args) -> int:
    a = _load_tree_automaton(args.file)
    t = parse_tree(args.tree, a.alphabet)
    root = run(a, t)[()]
    verdict = "accept" if root & a.finals else "reject"
    print(f"{verdict} {{{','.join(sorted(root))}}}")
    return 0


def _cmd_convert(args) -> int:
    a = _load_tree_automaton(args.file)
    if args.to == "sdta":
        if a.kind == SDTA:
            raise UtaError("input is already strongly deterministic")
        if a.kind == "dta-dfa" and not args.force_general:
            out, report = convert.dtadfa_to_sdta(a)
        else:
            out, report = convert.nta_to_sdta(a, force_general=args.force_general)
    else:
        if a.kind == SDTA:
            out, report = convert.sdta_to_dtadfa(a)
        else:
            out, report = convert.nta_to_dtadfa(a, force_general=args.force_general)
    _emit(docs.render_automaton(out), args.out)
    sys.stderr.write(report.render())
    return 0 if report.bound_satisfied else 1


def _cmd_size(args) -> int:
    print(size(_load_tree_automaton(args.file)))
    return 0


def _cmd_equiv(args) -> int:
    a = _load_tree_automaton(args.file1)
    b = _load_tree_automaton(args.file2)
    bounds = _env_bounds()
    bounds = EnumerationBounds(args.depth or bounds.max_depth,
                               args.width or bounds.max_width,
                               args.count or bounds.max_count)
    if a.kind == SDTA and b.kind == SDTA:
        verdict = analysis.equiv_canonical(a, b, bounds)
    else:
        verdict = analysis.equiv_bounded(a, b, bounds)
    if verdict.equal:
        print(f"equal ({verdict.method})")
        return 0
    if verdict.counterexample is not None:
        print(f"not equal: counterexample {verdict.counterexample}")
    else:
        print("not equal (canonical forms differ; no counterexample within bounds)")
    return 1


def _cmd_check_det(args) -> int:
    report = check_semantic_determinism(_load_tree_automaton(args.file))
    if report.ok:
        print("deterministic")
        return 0
    q1, q2 = report.pair
    word = " ".join(report.witness) if report.witness else "<empty string>"
    print(f"nondeterministic: symbol {report.symbol} states {q1},{q2} share {word!r}")
    return 1


def _cmd_prune(args) -> int:
    _emit(docs.render_automaton(prune_reachable(_load_tree_automaton(args.file))), args.out)
    return 0


def _cmd_witness(args) -> int:
    if args.family == "lemma34":
        k = _parse_ints(args.k, "--k")
        auto, pred = gen_lemma34(k)
        manifest = [f"witness: lemma34 k={','.join(map(str, k))}",
                    f"expected-size: {size(auto)}",
                    f"language: {pred.description}"]
        _emit(docs.render_automaton(auto, manifest), args.out)
        if args.fooling_vertical:
            _emit(docs.render_fooling_vertical(
                witnesses.lemma34_vertical_fooling(k)), args.fooling_vertical)
        if args.fooling_horizontal:
            _emit(docs.render_fooling_horizontal(
                witnesses.lemma34_horizontal_fooling(k)), args.fooling_horizontal)
        return 0
    if args.family == "thm41":
        auto, pred = gen_thm41(args.n)
        manifest = [f"witness: thm41 n={args.n}",
                    f"expected-size: {size(auto)}",
                    f"language: {pred.description}"]
        _emit(docs.render_automaton(auto, manifest), args.out)
        return 0
    # marked-union: the m unary residue languages j = i (mod m)
    m = args.m
    if m < 1:
        raise UtaError("--m must be at least 1")
    parts = []
    for i in range(1, m + 1):
        states = [f"r{j}" for j in range(m)]
        trans = [(f"r{j}", "a", f"r{(j + 1) % m}") for j in range(m)]
        parts.append(DFA(states, ["a"], "r0", {f"r{i % m}"}, trans))
    machine = _stringify_outputs(marked_union(parts))
    manifest = [f"witness: marked-union m={m}", f"expected-size: {machine.size}"]
    _emit(docs.render_automaton(machine, manifest), args.out)
    return 0


def _stringify_outputs(machine: MooreDFA) -> MooreDFA:
    return MooreDFA(machine.states, machine.alphabet, machine.initial, machine.finals,
                    list(machine.transitions()),
                    {s: str(v) for s, v in machine.outputs.items()})


def _parse_ints(raw: str, flag: str) -> tuple:
    try:
        return tuple(int(v) for v in raw.split(","))
    except ValueError:
        raise UtaError(f"{flag} takes comma-separated integers, got {raw!r}") from None


def _named_predicate(spec: str):
    name, _, rest = spec.partition(":")
    if name == "lemma34":
        _, pred = gen_lemma34(_parse_ints(rest, "lemma34:"))
        return pred
    if name == "thm41":
        _, pred = gen_thm41(int(rest))
        return pred
    return None


def _cmd_certify(args) -> int:
    pred = _named_predicate(args.source)
    if pred is None:
        auto = _load_tree_automaton(args.source)
        pred = witnesses.LangPredicate(auto.alphabet, lambda t: accepts(auto, t),
                                       f"language of {args.source}")
    with open(args.fooling_set, encoding="utf-8") as fh:
        fs = docs.parse_fooling_set(fh.read(), pred.alphabet)
    if args.direction == "vertical":
        if not isinstance(fs, witnesses.FoolingSetVertical):
            raise UtaError("vertical certification needs a fooling-vertical document")
        bound = witnesses.certify_vertical_bound(pred, fs)
    else:
        if not isinstance(fs, witnesses.FoolingSetHorizontal):
            raise UtaError("horizontal certification needs a fooling-horizontal document")
        bound = witnesses.certify_horizontal_bound(pred, fs)
    print(f"certified lower bound: {bound}")
    return 0


def _cmd_canon(args) -> int:
    a = _load_tree_automaton(args.file)
    if a.kind != SDTA:
        raise UtaError("canon applies to strongly deterministic automata only")
    _emit(docs.render_automaton(analysis.canonical_sdta(a)), args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="uta", description="unranked tree automata toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("run", help="evaluate an automaton on a tree")
    s.add_argument("file")
    s.add_argument("--tree", required=True, help="tree in term syntax, e.g. a(b,b)")
    s.set_defaults(fn=_cmd_run)

    s = sub.add_parser("convert", help="convert between automaton kinds")
    s.add_argument("file")
    s.add_argument("--to", choices=("sdta", "dtadfa"), required=True)
    s.add_argument("--force-general", action="store_true",
                   help="use the subset construction even for deterministic input")
    s.add_argument("--out", help="write the document here instead of stdout")
    s.set_defaults(fn=_cmd_convert)

    s = sub.add_parser("size", help="print the [vertical; horizontal] size pair")
    s.add_argument("file")
    s.set_defaults(fn=_cmd_size)

    s = sub.add_parser("equiv", help="compare two automata on enumerated trees")
    s.add_argument("file1")
    s.add_argument("file2")
    s.add_argument("--depth", type=int)
    s.add_argument("--width", type=int)
    s.add_argument("--count", type=int)
    s.set_defaults(fn=_cmd_equiv)

    s = sub.add_parser("check-det", help="check semantic determinism")
    s.add_argument("file")
    s.set_defaults(fn=_cmd_check_det)

    s = sub.add_parser("prune", help="drop states no run can assign")
    s.add_argument("file")
    s.add_argument("--out")
    s.set_defaults(fn=_cmd_prune)

    s = sub.add_parser("witness", help="generate a lower-bound witness family")
    fam = s.add_subparsers(dest="family", required=True)
    f = fam.add_parser("lemma34", help="coprime-moduli chain family (weakly deterministic)")
    f.add_argument("--k", required=True, help="comma-separated coprime moduli, e.g. 2,3")
    f.add_argument("--out")
    f.add_argument("--fooling-vertical", help="also write the packaged vertical fooling set")
    f.add_argument("--fooling-horizontal", help="also write the packaged horizontal fooling set")
    f = fam.add_parser("thm41", help="prime-divisibility chain family (nondeterministic)")
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--out")
    f = fam.add_parser("marked-union", help="unary residue marked union (string machine)")
    f.add_argument("--m", type=int, required=True)
    f.add_argument("--out")
    s.set_defaults(fn=_cmd_witness)

    s = sub.add_parser("certify", help="verify a fooling set and print its bound")
    s.add_argument("direction", choices=("vertical", "horizontal"))
    s.add_argument("source", help="automaton document, or lemma34:K1,K2 / thm41:N")
    s.add_argument("--fooling-set", required=True)
    s.set_defaults(fn=_cmd_certify)

    s = sub.add_parser("canon", help="canonicalize a strongly deterministic automaton")
    s.add_argument("file")
    s.add_argument("--out")
    s.set_defaults(fn=_cmd_canon)
    return p


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except SeparationError as e:
        print(f"certification failed: {e}", file=sys.stderr)
        return 1
    except UtaError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
