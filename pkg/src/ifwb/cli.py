"""Command-line front end: ifwb parse | eval | truth | classify | rewrite | encode | verify."""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import encodings as enc
from . import harness
from .patterns import NAMED_TREES, PatternError, classify, detect_patterns, named_tree
from .rewrite import RewriteError, Rule, apply_rule, prenex, render_steps, strong_regularize
from .skolem import BudgetExceeded, SkolemError, truth_by_skolem
from .syntax import (
    And, Atom, Const, Eq, Gap, Neg, Or, ParseError, PrefixTree, Quant, TreeError,
    free_vars, parse_any, parse_formula, parse_tree, pretty, regularity, render_formula,
    prefix_tree,
)
from .teams import SemanticsError, Structure, Team, Truth, neg_satisfies, satisfies, truth_value

EXIT_OK, EXIT_PRECONDITION, EXIT_IO = 0, 1, 2


class InputError(Exception):
    """Unreadable or unparsable input (exit code 2)."""


# --- input helpers -----------------------------------------------------------

def _read_text(arg: str) -> str | None:
    if os.path.isfile(arg):
        try:
            with open(arg) as fh:
                return fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {arg}: {exc}") from None
    return None


def load_formula(arg: str, constants=()):
    """A builtin sentence name, a file holding a formula, or the formula text itself."""
    if arg in enc.SOURCES:
        return enc.builtin_sentence(arg)
    text = _read_text(arg)
    try:
        return parse_formula(text if text is not None else arg, constants)
    except ParseError as exc:
        raise InputError(f"cannot parse formula: {exc}") from None


def load_tree(arg: str) -> PrefixTree:
    if arg in NAMED_TREES:
        return named_tree(arg)
    if arg in enc.SOURCES:
        return prefix_tree(enc.builtin_sentence(arg))
    text = _read_text(arg)
    try:
        return parse_tree(text if text is not None else arg)
    except ParseError as exc:
        raise InputError(f"cannot parse tree: {exc}") from None


def load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def load_structure(path: str) -> Structure:
    return Structure.from_json(load_json(path))


# --- output ------------------------------------------------------------------

def formula_json(f):
    if isinstance(f, Atom):
        return {"atom": f.rel, "args": [_term_json(t) for t in f.args]}
    if isinstance(f, Eq):
        return {"eq": [_term_json(f.left), _term_json(f.right)]}
    if isinstance(f, Neg):
        return {"not": formula_json(f.sub)}
    if isinstance(f, (And, Or)):
        return {"and" if isinstance(f, And) else "or": [formula_json(f.left), formula_json(f.right)]}
    if isinstance(f, Quant):
        return {"quantifier": "forall" if f.kind == "A" else "exists", "var": f.var,
                "slash": sorted(f.slash), "body": formula_json(f.body)}
    if isinstance(f, Gap):
        return {"gap": f.id}
    raise TypeError(f)


def _term_json(t):
    return {"const": t.name} if isinstance(t, Const) else t


def _emit(data, pretty_mode: bool, human: str | None = None):
    if pretty_mode:
        print(human if human is not None else json.dumps(data, indent=2, ensure_ascii=False))
    else:
        print(json.dumps(data, ensure_ascii=False))


# --- commands ----------------------------------------------------------------

def cmd_parse(args) -> int:
    if args.tree:
        t = load_tree(args.tree)
        f = t.root
    else:
        f, _ = _parse_any(args.formula, args.constants)
    reg, strong = regularity(f)
    data = {
        "text": render_formula(f),
        "ast": formula_json(f),
        "free_vars": sorted(free_vars(f)),
        "regular": reg,
        "strongly_regular": strong,
    }
    _emit(data, args.pretty, f"{pretty(f)}\nregular: {reg}\nstrongly regular: {strong}")
    return EXIT_OK


def _parse_any(arg, constants):
    if arg in enc.SOURCES:
        return enc.builtin_sentence(arg), 0
    text = _read_text(arg)
    try:
        return parse_any(text if text is not None else arg, _split(constants))
    except ParseError as exc:
        raise InputError(f"cannot parse: {exc}") from None


def _split(csv):
    return tuple(c for c in (csv or "").split(",") if c)


def cmd_eval(args) -> int:
    m = load_structure(args.structure)
    f = load_formula(args.formula, tuple(m.constants))
    x = Team.from_json(load_json(args.team))
    data = {"satisfies": satisfies(m, x, f, args.mode), "neg_satisfies": neg_satisfies(m, x, f, args.mode)}
    _emit(data, args.pretty, f"satisfies: {data['satisfies']}\nneg_satisfies: {data['neg_satisfies']}")
    return EXIT_OK


def cmd_truth(args) -> int:
    m = load_structure(args.structure)
    f = load_formula(args.formula, tuple(m.constants))
    verdicts = {}
    if args.engine in ("teams", "both"):
        verdicts["teams"] = truth_value(m, f, args.mode).value
    if args.engine in ("skolem", "both"):
        # the Skolem search decides truth only; falsity comes from team semantics
        if truth_by_skolem(m, f, args.budget):
            verdicts["skolem"] = Truth.TRUE.value
        else:
            verdicts["skolem"] = Truth.FALSE.value if truth_value(m, f, args.mode) == Truth.FALSE \
                else Truth.UNDETERMINED.value
    values = set(verdicts.values())
    data = {"truth": verdicts[next(iter(verdicts))], "engines": verdicts, "agree": len(values) == 1}
    if not data["agree"]:
        _emit(data, args.pretty, f"engines disagree: {verdicts}")
        return EXIT_PRECONDITION
    _emit(data, args.pretty, data["truth"])
    return EXIT_OK


def cmd_classify(args) -> int:
    t = load_tree(args.tree) if args.tree else prefix_tree(load_formula(args.formula, _split(args.constants)))
    v = classify(t)
    data = {"tree": t.render(), **v.as_dict()}
    if args.patterns:
        data["patterns"] = detect_patterns(t).as_dict()
    human = f"{t.render()}\n{v.kind}" + (f" ({v.problem})" if v.problem else "") + f": {v.reason}"
    _emit(data, args.pretty, human)
    return EXIT_OK


def cmd_rewrite(args) -> int:
    t = load_tree(args.tree)
    if args.pipeline:
        fn = prenex if args.pipeline == "prenex" else strong_regularize
        out, steps = fn(t)
        data = {"tree": out.render(), "steps": render_steps(steps)}
        _emit(data, args.pretty, out.render() + "".join(f"\n  {s['rule']} at {s['at'] or 'root'}: {s['after']}"
                                                      for s in data["steps"]))
        return EXIT_OK
    if not args.rule:
        raise RewriteError("give --rule (with --at) or --pipeline")
    params = {}
    if args.var:
        params["var"] = args.var
    if args.side:
        params["side"] = args.side
    res = apply_rule(t, args.rule, args.at or "", **params)
    data = {"tree": res.tree.render(), "iota": {str(k): v for k, v in sorted(res.iota.items())},
            "complexity_note": res.step.complexity_note}
    if args.trace:
        data["steps"] = [res.step.to_json()]
    _emit(data, args.pretty, f"{res.tree.render()}\n{res.step.complexity_note}")
    return EXIT_OK


def cmd_encode(args) -> int:
    text = _read_text(args.input)
    if text is None:
        raise InputError(f"cannot read {args.input}")
    try:
        inst = enc.load_instance(args.problem, text)
    except enc.EncodingError as exc:
        raise InputError(str(exc)) from None
    m = enc.encode_instance(args.problem, inst)
    data = {"structure": m.to_json()}
    if args.emit_sentence:
        data["sentence"] = render_formula(enc.sentence_for(args.problem))
    if args.pretty:
        print(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        print(json.dumps(data, ensure_ascii=False))
    return EXIT_OK


def _suite_kwargs(fn, args) -> dict:
    import inspect
    names = inspect.signature(fn).parameters
    kw = {}
    if args.seed is not None and "seed" in names:
        kw["seed"] = args.seed
    if args.max_size is not None:
        if "max_n" in names:
            kw["max_n"] = args.max_size
    return kw


def cmd_verify(args) -> int:
    results = [fn(**_suite_kwargs(fn, args)) for fn in harness.SUITES[args.suite]]
    ok = all(r.passed for r in results)
    data = {"suite": args.suite, "passed": ok, "results": [r.to_json() for r in results]}
    _emit(data, args.pretty, "\n".join(r.line() for r in results))
    return EXIT_OK if ok else EXIT_PRECONDITION


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ifwb", description="Independence-friendly logic workbench.")
    p.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS,
                        help="human-readable output instead of JSON")

    sp = sub.add_parser("parse", help="parse a formula or tree and report regularity")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--formula", help="builtin name, file or inline text")
    g.add_argument("--tree", help="named tree, file or inline tree text")
    sp.add_argument("--constants", help="comma-separated constant names")
    common(sp)
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("eval", help="team satisfaction of a formula")
    sp.add_argument("--structure", required=True)
    sp.add_argument("--formula", required=True)
    sp.add_argument("--team", required=True)
    sp.add_argument("--mode", choices=("pruned", "partition", "cover"), default="pruned")
    common(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("truth", help="truth value of a sentence")
    sp.add_argument("--structure", required=True)
    sp.add_argument("--formula", required=True)
    sp.add_argument("--engine", choices=("teams", "skolem", "both"), default="teams")
    sp.add_argument("--mode", choices=("pruned", "partition", "cover"), default="pruned")
    sp.add_argument("--budget", type=int, help="Skolem search node budget (default: IFWB_BUDGET or 1e8)")
    common(sp)
    sp.set_defaults(func=cmd_truth)

    sp = sub.add_parser("classify", help="complexity verdict for a tree prefix")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--formula")
    g.add_argument("--tree")
    sp.add_argument("--constants", help="comma-separated constant names")
    sp.add_argument("--patterns", action="store_true", help="include the pattern report")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("rewrite", help="apply a rewrite rule or pipeline")
    sp.add_argument("--tree", required=True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--rule", choices=[r.value for r in Rule])
    g.add_argument("--pipeline", choices=("prenex", "strong-regularize"))
    sp.add_argument("--at", help="dotted child indices, empty for the root")
    sp.add_argument("--var", help="new variable for Rename")
    sp.add_argument("--side", choices=("left", "right"), help="extracted child for the extraction rules")
    sp.add_argument("--trace", action="store_true", help="include the step log")
    common(sp)
    sp.set_defaults(func=cmd_rewrite)

    sp = sub.add_parser("encode", help="encode a problem instance as a structure")
    sp.add_argument("--problem", required=True, choices=list(enc.PROBLEMS))
    sp.add_argument("--input", required=True)
    sp.add_argument("--emit-sentence", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", required=True, choices=list(harness.SUITES))
    sp.add_argument("--max-size", type=int, help="largest structure size swept")
    sp.add_argument("--seed", type=int)
    common(sp)
    sp.set_defaults(func=cmd_verify)
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (SemanticsError, SkolemError, PatternError, RewriteError, TreeError, enc.EncodingError,
            BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
