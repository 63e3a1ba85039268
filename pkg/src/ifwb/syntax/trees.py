"""Positive initial trees with explicit gaps, their paths, and completions."""
from __future__ import annotations

from dataclasses import dataclass, field

from .formulas import (
    And, Atom, Eq, Gap, Neg, Or, Quant,
    bound_vars, children, free_vars, is_regular, node_at, pretty, quantifier_free,
    regularity, render_formula, walk, with_children,
)


class TreeError(ValueError):
    pass


def renumber_gaps(root):
    """Renumber gaps left to right; returns (root, {old id: new id})."""
    mapping: dict = {}
    count = [0]

    def go(f):
        if isinstance(f, Gap):
            new = count[0]
            count[0] += 1
            mapping[f.id] = new
            return Gap(new)
        kids = children(f)
        if not kids:
            return f
        return with_children(f, [go(c) for c in kids])

    return go(root), mapping


@dataclass(frozen=True)
class PrefixTree:
    root: object

    def __post_init__(self):
        ids = []
        for loc, n in walk(self.root):
            if isinstance(n, (Atom, Eq, Neg)):
                raise TreeError(f"tree node at {loc} is not positive initial: {render_formula(n)}")
            if isinstance(n, Gap):
                ids.append(n.id)
        if ids != list(range(len(ids))):
            raise TreeError(f"gap ids must run 0..k-1 left to right, got {ids}")

    @property
    def gap_count(self) -> int:
        return sum(1 for _, n in walk(self.root) if isinstance(n, Gap))

    def node(self, loc):
        return node_at(self.root, tuple(loc))

    def render(self) -> str:
        return render_formula(self.root)

    def __str__(self) -> str:
        return pretty(self.root)


@dataclass(frozen=True)
class PathStep:
    locator: tuple
    description: str


@dataclass(frozen=True)
class Path:
    gap: int
    steps: tuple
    bound: frozenset = field(default_factory=frozenset)

    @property
    def locator(self) -> tuple:
        return self.steps[-1].locator


@dataclass(frozen=True)
class CompletionFlags:
    weak: bool
    sentential: bool
    regularity_preserving: bool

    @property
    def nice(self) -> bool:
        return self.sentential and self.regularity_preserving

    def as_dict(self) -> dict:
        return {
            "weak": self.weak,
            "sentential": self.sentential,
            "regularity_preserving": self.regularity_preserving,
            "nice": self.nice,
        }


def _describe(n) -> str:
    if isinstance(n, Quant):
        s = ("∀" if n.kind == "A" else "∃") + n.var
        return f"({s}/{{{','.join(sorted(n.slash))}}})" if n.slash else s
    if isinstance(n, And):
        return "∧"
    if isinstance(n, Or):
        return "∨"
    return f"[{n.id}]"


def prefix_tree(f, avoid_quantifier_free: bool = True) -> PrefixTree:
    """Maximal positive initial tree of f.

    Each branch is cut at its first atom or negation. With the default
    convention the cut also happens at any quantifier-free subformula, so
    such a subformula becomes a single gap.
    """
    counter = [0]

    def gap():
        counter[0] += 1
        return Gap(counter[0] - 1)

    def go(g):
        if isinstance(g, (Atom, Eq, Neg, Gap)):
            return gap()
        if avoid_quantifier_free and quantifier_free(g):
            return gap()
        if isinstance(g, Quant):
            return Quant(g.kind, g.var, g.slash, go(g.body))
        left = go(g.left)
        return with_children(g, [left, go(g.right)])

    return PrefixTree(go(f))


def paths(t: PrefixTree) -> list:
    out = []

    def go(n, loc, steps, bound):
        steps = steps + (PathStep(loc, _describe(n)),)
        if isinstance(n, Gap):
            out.append(Path(n.id, steps, frozenset(bound)))
            return
        if isinstance(n, Quant):
            bound = bound | {n.var}
        for i, c in enumerate(children(n)):
            go(c, loc + (i,), steps, bound)

    go(t.root, (), (), frozenset())
    return sorted(out, key=lambda p: p.gap)


def _check_total(t: PrefixTree, e: dict):
    want = set(range(t.gap_count))
    if set(e) != want:
        raise TreeError(f"completion must be defined exactly on gaps {sorted(want)}, got {sorted(e)}")


def complete(t: PrefixTree, e: dict):
    """Attach e[gap] at the end of each path."""
    _check_total(t, e)
    for gid, g in e.items():
        if not is_regular(g):
            raise TreeError(f"completion for gap {gid} is not a regular formula: {render_formula(g)}")

    def go(n):
        if isinstance(n, Gap):
            return e[n.id]
        kids = children(n)
        if not kids:
            return n
        return with_children(n, [go(c) for c in kids])

    return go(t.root)


def completion_flags(t: PrefixTree, e: dict) -> CompletionFlags:
    _check_total(t, e)
    weak = sentential = preserving = True
    for p in paths(t):
        g = e[p.gap]
        weak &= quantifier_free(g)
        sentential &= free_vars(g) <= p.bound
        preserving &= not (bound_vars(g) & p.bound)
    return CompletionFlags(weak, sentential, preserving)


def tree_regularity(t: PrefixTree) -> tuple:
    return regularity(t.root)
