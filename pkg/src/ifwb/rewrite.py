"""Locator-addressed rewrite rules on prefix trees, strong regularization and prenex form."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .syntax import (
    And, Gap, Or, PrefixTree, Quant,
    all_names, children, drop_vacuous_slashes, gaps, node_at, regularity, render_formula,
    renumber_gaps, replace_at, slash_all, slash_nonempty, subst, walk,
)


class RewriteError(ValueError):
    pass


class Rule(str, Enum):
    RENAME = "Rename"
    EXTRACT_WEAK = "ExtractWeak"
    EXTRACT_STRONG = "ExtractStrong"
    DISTRIBUTE = "Distribute"
    SWAP = "Swap"
    DROP_EX_SLASH = "DropExSlash"

    def __str__(self) -> str:
        return self.value


PRESERVES_C = "preserves_C"
WEAK_ONLY = "weak_reduction_only"

COMPLEXITY_NOTE = {
    Rule.RENAME: PRESERVES_C,
    Rule.EXTRACT_WEAK: WEAK_ONLY,
    Rule.EXTRACT_STRONG: WEAK_ONLY,
    Rule.DISTRIBUTE: PRESERVES_C,
    Rule.SWAP: PRESERVES_C,
    Rule.DROP_EX_SLASH: PRESERVES_C,
}


@dataclass(frozen=True)
class RewriteStep:
    rule: Rule
    locator: tuple
    params: dict
    before: str
    after: str
    complexity_note: str
    iota: dict
    # completion adjustments: gap id (old numbering) -> ("subst", u, v) | ("slash_all", u) | ("slash_nonempty", u)
    adjust: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "rule": self.rule.value,
            "at": ".".join(map(str, self.locator)),
            "params": self.params,
            "before": self.before,
            "after": self.after,
            "complexity_note": self.complexity_note,
            "iota": {str(k): v for k, v in sorted(self.iota.items())},
        }


@dataclass(frozen=True)
class RewriteResult:
    tree: PrefixTree
    step: RewriteStep

    @property
    def iota(self) -> dict:
        return self.step.iota


def parse_locator(text: str) -> tuple:
    text = text.strip()
    if text in ("", ".", "root", "()"):
        return ()
    try:
        return tuple(int(p) for p in text.replace(",", ".").strip(".").split("."))
    except ValueError:
        raise RewriteError(f"bad locator {text!r}; use dotted child indices such as 0.1") from None


def _prepare(t: PrefixTree) -> PrefixTree:
    t = PrefixTree(drop_vacuous_slashes(t.root))
    if not regularity(t.root)[0]:
        raise RewriteError("tree is not regular")
    return t


def _gap_ids(f) -> set:
    return {g.id for g in gaps(f)}


def _bound_above(root, loc) -> dict:
    """Variables quantified strictly above loc, with their quantifier kinds."""
    out, node = {}, root
    for i in loc:
        if isinstance(node, Quant):
            out[node.var] = node.kind
        node = children(node)[i]
    return out


def _rename(root, loc, params):
    q = node_at(root, loc)
    if not isinstance(q, Quant):
        raise RewriteError("Rename applies to a quantifier node")
    v = params.get("var")
    if not v:
        raise RewriteError("Rename needs a new variable (var=...)")
    if v in all_names(q):
        raise RewriteError(f"side condition violated: {v} occurs in the renamed subtree")
    new = Quant(q.kind, v, q.slash, subst(q.body, q.var, v))
    adjust = {g: ("subst", q.var, v) for g in _gap_ids(q)}
    return replace_at(root, loc, new), adjust


def _pick_side(c, side):
    if side is None:
        if isinstance(c.left, Quant):
            return 0
        if isinstance(c.right, Quant):
            return 1
        raise RewriteError("extraction needs a quantifier as a direct child of the connective")
    side = {"left": 0, "right": 1, "0": 0, "1": 1}.get(str(side))
    if side is None:
        raise RewriteError("side must be left or right")
    return side


def _extract(root, loc, params, strong: bool):
    c = node_at(root, loc)
    if not isinstance(c, (And, Or)):
        raise RewriteError("extraction applies to a connective node")
    side = _pick_side(c, params.get("side"))
    q = c.left if side == 0 else c.right
    other = c.right if side == 0 else c.left
    if not isinstance(q, Quant):
        raise RewriteError("the chosen child of the connective is not a quantifier")
    u = q.var
    if u in q.slash:
        raise RewriteError(f"side condition violated: {u} occurs in its own slash set")
    if u in all_names(other):
        raise RewriteError(f"side condition violated: {u} occurs in the sibling subtree")
    adjusted = slash_nonempty(other, u) if strong else slash_all(other, u)
    kids = (q.body, adjusted) if side == 0 else (adjusted, q.body)
    new = Quant(q.kind, u, q.slash, type(c)(*kids))
    op = "slash_nonempty" if strong else "slash_all"
    adjust = {g: (op, u) for g in _gap_ids(other)}
    return replace_at(root, loc, new), adjust


def _distribute(root, loc, params):
    q = node_at(root, loc)
    if not isinstance(q, Quant) or not isinstance(q.body, (And, Or)):
        raise RewriteError("Distribute applies to a quantifier directly above a connective")
    if q.slash:
        raise RewriteError("side condition violated: the distributed quantifier must have an empty slash set")
    if (q.kind, type(q.body)) not in (("A", And), ("E", Or)):
        raise RewriteError("Distribute applies to ∀ over ∧ or ∃ over ∨")
    c = q.body
    new = type(c)(Quant(q.kind, q.var, q.slash, c.left), Quant(q.kind, q.var, q.slash, c.right))
    return replace_at(root, loc, new), {}


def _swap(root, loc, params):
    q = node_at(root, loc)
    if not isinstance(q, Quant) or not isinstance(q.body, Quant):
        raise RewriteError("Swap applies to a quantifier directly above another quantifier")
    r = q.body
    if q.var not in r.slash:
        raise RewriteError(f"side condition violated: {q.var} is not in the slash set of {r.var}")
    new = Quant(r.kind, r.var, r.slash - {q.var}, Quant(q.kind, q.var, q.slash | {r.var}, r.body))
    return replace_at(root, loc, new), {}


def _drop_ex_slash(root, loc, params):
    q = node_at(root, loc)
    if not isinstance(q, Quant) or q.kind != "E":
        raise RewriteError("DropExSlash applies to an existential quantifier")
    if not q.slash:
        raise RewriteError("DropExSlash needs a nonempty slash set")
    above = _bound_above(root, loc)
    bad = sorted(w for w in q.slash if above.get(w) != "E")
    if bad:
        raise RewriteError(f"side condition violated: slash variables {bad} are not existentially quantified above")
    return replace_at(root, loc, Quant("E", q.var, frozenset(), q.body)), {}


_RULES = {
    Rule.RENAME: _rename,
    Rule.EXTRACT_WEAK: lambda r, l, p: _extract(r, l, p, strong=False),
    Rule.EXTRACT_STRONG: lambda r, l, p: _extract(r, l, p, strong=True),
    Rule.DISTRIBUTE: _distribute,
    Rule.SWAP: _swap,
    Rule.DROP_EX_SLASH: _drop_ex_slash,
}


def apply_rule(t: PrefixTree, rule, at=(), **params) -> RewriteResult:
    rule = Rule(rule)
    loc = parse_locator(at) if isinstance(at, str) else tuple(at)
    t = _prepare(t)
    try:
        node_at(t.root, loc)
    except IndexError as exc:
        raise RewriteError(str(exc)) from None
    root, adjust = _RULES[rule](t.root, loc, params)
    if not regularity(root)[0]:
        raise RewriteError("side condition violated: the result would not be regular")
    root, iota = renumber_gaps(root)
    new = PrefixTree(root)
    step = RewriteStep(rule, loc, dict(params), t.render(), new.render(), COMPLEXITY_NOTE[rule], iota, adjust)
    return RewriteResult(new, step)


def applicable(t: PrefixTree, rule, at, **params) -> bool:
    try:
        apply_rule(t, rule, at, **params)
        return True
    except RewriteError:
        return False


def transport_completion(step: RewriteStep, e: dict) -> dict:
    """The completion of the rewritten tree that corresponds to e."""
    out = {}
    for g, f in e.items():
        adj = step.adjust.get(g)
        if adj:
            if adj[0] == "subst":
                f = subst(f, adj[1], adj[2])
            elif adj[0] == "slash_all":
                f = slash_all(f, adj[1])
            else:
                f = slash_nonempty(f, adj[1])
        out[step.iota[g]] = f
    return out


def fresh_variable(base: str, taken: set) -> str:
    stem = base.rstrip("0123456789") or base
    k = 1
    while f"{stem}{k}" in taken:
        k += 1
    return f"{stem}{k}"


def _quant_locs(root) -> list:
    return [(loc, n) for loc, n in walk(root) if isinstance(n, Quant)]


def strong_regularize(t: PrefixTree) -> tuple:
    t = _prepare(t)
    steps = []
    while True:
        qs = _quant_locs(t.root)
        counts: dict = {}
        for _, q in qs:
            counts[q.var] = counts.get(q.var, 0) + 1
        dup = [(loc, q) for loc, q in qs if counts[q.var] > 1]
        if not dup:
            return t, steps
        depth = max(len(loc) for loc, _ in dup)
        loc, q = next((l, q) for l, q in dup if len(l) == depth)
        v = fresh_variable(q.var, all_names(t.root))
        res = apply_rule(t, Rule.RENAME, loc, var=v)
        steps.append(res.step)
        t = res.tree


def is_prenex(t: PrefixTree) -> bool:
    """No connective lies above a quantifier."""
    return not any(isinstance(n, (And, Or)) and any(isinstance(m, Quant) for _, m in walk(n))
                   for _, n in walk(t.root))


def prenex(t: PrefixTree) -> tuple:
    t, steps = strong_regularize(t)
    while True:
        spots = [(loc, n) for loc, n in walk(t.root)
                 if isinstance(n, (And, Or)) and (isinstance(n.left, Quant) or isinstance(n.right, Quant))]
        if not spots:
            return t, steps
        depth = min(len(loc) for loc, _ in spots)
        loc, c = next((l, c) for l, c in spots if len(l) == depth)
        side = "left" if isinstance(c.left, Quant) else "right"
        res = apply_rule(t, Rule.EXTRACT_WEAK, loc, side=side)
        steps.append(res.step)
        t = res.tree


def rule_sites(t: PrefixTree) -> list:
    """All (rule, locator, params) applications available on t."""
    t = _prepare(t)
    out = []
    names = all_names(t.root)
    for loc, n in walk(t.root):
        if isinstance(n, Gap):
            continue
        cands = []
        if isinstance(n, Quant):
            cands.append((Rule.RENAME, {"var": fresh_variable(n.var, names)}))
            cands += [(Rule.DISTRIBUTE, {}), (Rule.SWAP, {}), (Rule.DROP_EX_SLASH, {})]
        else:
            for side in ("left", "right"):
                cands += [(Rule.EXTRACT_WEAK, {"side": side}), (Rule.EXTRACT_STRONG, {"side": side})]
        for rule, params in cands:
            if applicable(t, rule, loc, **params):
                out.append((rule, loc, params))
    return out


def render_steps(steps) -> list:
    return [s.to_json() for s in steps]


__all__ = [
    "Rule", "RewriteError", "RewriteResult", "RewriteStep", "PRESERVES_C", "WEAK_ONLY",
    "apply_rule", "applicable", "fresh_variable", "is_prenex", "parse_locator", "prenex",
    "render_steps", "rule_sites", "strong_regularize", "transport_completion", "render_formula",
]
