"""IF formula AST, variable bookkeeping, regularity and slash-set operations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self) -> str:
        return self.name


Term = Union[str, Const]


@dataclass(frozen=True)
class Atom:
    rel: str
    args: tuple


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Neg:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Quant:
    kind: str  # "A" or "E"
    var: str
    slash: frozenset
    body: "Formula"

    def __post_init__(self):
        if self.kind not in ("A", "E"):
            raise ValueError(f"quantifier kind must be 'A' or 'E', got {self.kind!r}")
        if not isinstance(self.slash, frozenset):
            object.__setattr__(self, "slash", frozenset(self.slash))
        if self.var in self.slash:
            raise ValueError(f"slash set of {self.var} mentions its own variable")


@dataclass(frozen=True)
class Gap:
    id: int


Formula = Union[Atom, Eq, Neg, And, Or, Quant, Gap]
Binary = (And, Or)


def forall(var: str, body, slash=()) -> Quant:
    return Quant("A", var, frozenset(slash), body)


def exists(var: str, body, slash=()) -> Quant:
    return Quant("E", var, frozenset(slash), body)


def is_var(t: Term) -> bool:
    return isinstance(t, str)


def term_vars(terms) -> set:
    return {t for t in terms if isinstance(t, str)}


def children(f) -> tuple:
    if isinstance(f, (And, Or)):
        return (f.left, f.right)
    if isinstance(f, Quant):
        return (f.body,)
    if isinstance(f, Neg):
        return (f.sub,)
    return ()


def with_children(f, kids):
    if isinstance(f, And):
        return And(kids[0], kids[1])
    if isinstance(f, Or):
        return Or(kids[0], kids[1])
    if isinstance(f, Quant):
        return Quant(f.kind, f.var, f.slash, kids[0])
    if isinstance(f, Neg):
        return Neg(kids[0])
    return f


def walk(f, loc: tuple = ()) -> Iterator[tuple]:
    """Pre-order (locator, node) pairs."""
    yield loc, f
    for i, c in enumerate(children(f)):
        yield from walk(c, loc + (i,))


def node_at(f, loc) -> Formula:
    for i in loc:
        kids = children(f)
        if i >= len(kids):
            raise IndexError(f"locator {tuple(loc)} leaves the tree")
        f = kids[i]
    return f


def replace_at(f, loc, new) -> Formula:
    if not loc:
        return new
    kids = list(children(f))
    if loc[0] >= len(kids):
        raise IndexError(f"locator {tuple(loc)} leaves the tree")
    kids[loc[0]] = replace_at(kids[loc[0]], loc[1:], new)
    return with_children(f, kids)


def gaps(f) -> list:
    return [n for _, n in walk(f) if isinstance(n, Gap)]


def quantifier_free(f) -> bool:
    return not any(isinstance(n, Quant) for _, n in walk(f))


def is_literal(f) -> bool:
    return isinstance(f, (Atom, Eq)) or (isinstance(f, Neg) and isinstance(f.sub, (Atom, Eq)))


def is_nnf(f) -> bool:
    return all(isinstance(n.sub, (Atom, Eq)) for _, n in walk(f) if isinstance(n, Neg))


def free_vars(f) -> frozenset:
    if isinstance(f, Atom):
        return frozenset(term_vars(f.args))
    if isinstance(f, Eq):
        return frozenset(term_vars((f.left, f.right)))
    if isinstance(f, Gap):
        return frozenset()
    if isinstance(f, Quant):
        return (free_vars(f.body) - {f.var}) | f.slash
    out = frozenset()
    for c in children(f):
        out |= free_vars(c)
    return out


def bound_vars(f) -> frozenset:
    return frozenset(n.var for _, n in walk(f) if isinstance(n, Quant))


def var_sets(f) -> tuple:
    free, bound = free_vars(f), bound_vars(f)
    return free, bound, free | bound


def all_names(f) -> set:
    """Every variable name that occurs anywhere, slash sets included."""
    out = set()
    for _, n in walk(f):
        if isinstance(n, Atom):
            out |= term_vars(n.args)
        elif isinstance(n, Eq):
            out |= term_vars((n.left, n.right))
        elif isinstance(n, Quant):
            out.add(n.var)
            out |= n.slash
    return out


def _no_requantification(f, above: frozenset) -> bool:
    if isinstance(f, Quant):
        if f.var in above:
            return False
        above = above | {f.var}
    return all(_no_requantification(c, above) for c in children(f))


def regularity(f) -> tuple:
    """(regular, strongly_regular)."""
    free, bound, _ = var_sets(f)
    clause1 = not (free & bound)
    regular = clause1 and _no_requantification(f, frozenset())
    qvars = [n.var for _, n in walk(f) if isinstance(n, Quant)]
    strong = clause1 and len(qvars) == len(set(qvars))
    return regular, strong


def is_regular(f) -> bool:
    return regularity(f)[0]


def subst(f, u: str, v: str):
    """Replace free occurrences of u by v, slash sets included."""
    sw = lambda t: v if t == u else t
    if isinstance(f, Atom):
        return Atom(f.rel, tuple(sw(t) for t in f.args))
    if isinstance(f, Eq):
        return Eq(sw(f.left), sw(f.right))
    if isinstance(f, Gap):
        return f
    if isinstance(f, Quant):
        slash = frozenset(sw(w) for w in f.slash)
        body = f.body if f.var == u else subst(f.body, u, v)
        return Quant(f.kind, f.var, slash, body)
    return with_children(f, [subst(c, u, v) for c in children(f)])


def _map_quants(f, fn):
    if isinstance(f, Quant):
        return fn(Quant(f.kind, f.var, f.slash, _map_quants(f.body, fn)))
    kids = children(f)
    if not kids:
        return f
    return with_children(f, [_map_quants(c, fn) for c in kids])


def slash_all(f, u: str):
    """Add u to every slash set (the quantifier over u itself excepted)."""
    return _map_quants(f, lambda q: q if q.var == u else Quant(q.kind, q.var, q.slash | {u}, q.body))


def slash_nonempty(f, u: str):
    """Add u to the slash sets that are already nonempty."""
    return _map_quants(
        f, lambda q: Quant(q.kind, q.var, q.slash | {u}, q.body) if q.slash and q.var != u else q
    )


def drop_vacuous_slashes(f, above: frozenset = frozenset()):
    """Remove slash variables not quantified above their quantifier."""
    if isinstance(f, Quant):
        inner = above | {f.var}
        return Quant(f.kind, f.var, f.slash & above, drop_vacuous_slashes(f.body, inner))
    kids = children(f)
    if not kids:
        return f
    return with_children(f, [drop_vacuous_slashes(c, above) for c in kids])


def dual(f):
    """The negation of f pushed to the literals: quantifiers and connectives swap, slashes stay."""
    if isinstance(f, (Atom, Eq)):
        return Neg(f)
    if isinstance(f, Neg):
        return f.sub if isinstance(f.sub, (Atom, Eq)) else dual(dual(f.sub))
    if isinstance(f, And):
        return Or(dual(f.left), dual(f.right))
    if isinstance(f, Or):
        return And(dual(f.left), dual(f.right))
    if isinstance(f, Quant):
        return Quant("E" if f.kind == "A" else "A", f.var, f.slash, dual(f.body))
    raise TypeError(f"cannot dualize {f!r}")


def relation_arities(f) -> dict:
    out: dict = {}
    for _, n in walk(f):
        if isinstance(n, Atom):
            if out.setdefault(n.rel, len(n.args)) != len(n.args):
                raise ValueError(f"relation {n.rel} used with arities {out[n.rel]} and {len(n.args)}")
    return out


def constants_of(f) -> set:
    out = set()
    for _, n in walk(f):
        terms = n.args if isinstance(n, Atom) else (n.left, n.right) if isinstance(n, Eq) else ()
        out |= {t.name for t in terms if isinstance(t, Const)}
    return out


# rendering

def _term(t) -> str:
    return t.name if isinstance(t, Const) else t


def _wrap(f) -> str:
    s = render_formula(f)
    return f"({s})" if isinstance(f, (And, Or, Quant)) else s


def render_formula(f) -> str:
    if isinstance(f, Gap):
        return "[]"
    if isinstance(f, Atom):
        return f"{f.rel}({','.join(_term(t) for t in f.args)})"
    if isinstance(f, Eq):
        return f"{_term(f.left)}={_term(f.right)}"
    if isinstance(f, Neg):
        if isinstance(f.sub, Eq):
            return f"{_term(f.sub.left)}!={_term(f.sub.right)}"
        if isinstance(f.sub, Atom):
            return "~" + render_formula(f.sub)
        return f"~({render_formula(f.sub)})"
    if isinstance(f, (And, Or)):
        op = " & " if isinstance(f, And) else " | "
        return _wrap(f.left) + op + _wrap(f.right)
    if isinstance(f, Quant):
        head = f"{f.kind} {f.var}"
        if f.slash:
            head = f"({head}/{{{','.join(sorted(f.slash))}}})"
        body = render_formula(f.body)
        if isinstance(f.body, (And, Or)):
            body = f"({body})"
        return f"{head} {body}"
    raise TypeError(f"not a formula: {f!r}")


_PRETTY = {"A": "∀", "E": "∃"}


def pretty(f) -> str:
    """Compact symbolic rendering for reports and reprs."""
    if isinstance(f, Quant):
        head = _PRETTY[f.kind] + f.var
        if f.slash:
            head = f"({head}/{{{','.join(sorted(f.slash))}}})"
        body = pretty(f.body)
        return head + (f"({body})" if isinstance(f.body, (And, Or)) else body)
    if isinstance(f, (And, Or)):
        op = " ∧ " if isinstance(f, And) else " ∨ "
        l, r = pretty(f.left), pretty(f.right)
        if isinstance(f.left, (And, Or, Quant)):
            l = f"({l})"
        if isinstance(f.right, (And, Or)):
            r = f"({r})"
        return l + op + r
    if isinstance(f, Gap):
        return "[ ]"
    return render_formula(f)
