"""Quantifier dependence, prefix patterns, tree extension and the complexity verdicts."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .syntax import And, Gap, Or, PrefixTree, Quant, drop_vacuous_slashes, regularity, walk

FO = "FO"
NP_COMPLETE = "NPComplete"
UNKNOWN = "Unknown"


class PatternError(ValueError):
    pass


@dataclass(frozen=True)
class Op:
    """A quantifier or connective occurrence of a tree."""
    loc: tuple
    kind: str  # "A", "E", "and", "or"
    var: str | None = None
    slash: frozenset = frozenset()

    @property
    def is_quant(self) -> bool:
        return self.kind in ("A", "E")

    def label(self) -> str:
        if self.kind == "and":
            return "∧"
        if self.kind == "or":
            return "∨"
        s = ("∀" if self.kind == "A" else "∃") + self.var
        return f"({s}/{{{','.join(sorted(self.slash))}}})" if self.slash else s


def operators(t: PrefixTree) -> list:
    out = []
    for loc, n in walk(t.root):
        if isinstance(n, Quant):
            out.append(Op(loc, n.kind, n.var, n.slash))
        elif isinstance(n, And):
            out.append(Op(loc, "and"))
        elif isinstance(n, Or):
            out.append(Op(loc, "or"))
    return out


def above(a: Op, b: Op) -> bool:
    """a ≺ b: a is a proper ancestor of b."""
    return len(a.loc) < len(b.loc) and b.loc[: len(a.loc)] == a.loc


def comparable(a: Op, b: Op) -> bool:
    return above(a, b) or above(b, a) or a.loc == b.loc


def depends(b: Op, a: Op) -> bool:
    """Does b depend on a?"""
    if not above(a, b):
        return False
    if a.is_quant and b.is_quant:
        return a.var not in b.slash
    return True


@dataclass(frozen=True)
class DependenceGraph:
    nodes: tuple
    edges: frozenset

    def has_edge(self, a: tuple, b: tuple) -> bool:
        return (a, b) in self.edges


def dependence_graph(t: PrefixTree) -> DependenceGraph:
    qs = [o for o in operators(t) if o.is_quant]
    edges = frozenset((a.loc, b.loc) for a in qs for b in qs if depends(b, a))
    return DependenceGraph(tuple(q.loc for q in qs), edges)


# pattern predicates; each takes operator tuples in witness order

def is_henkin(x: Op, y: Op, z: Op, w: Op) -> bool:
    if (x.kind, y.kind, z.kind, w.kind) != ("A", "E", "A", "E"):
        return False
    if not all(comparable(a, b) for a, b in itertools.combinations((x, y, z, w), 2)):
        return False
    return (depends(y, x) and not depends(y, z) and not depends(y, w)
            and depends(w, z) and not depends(w, x) and not depends(w, y))


def is_signalling(x: Op, y: Op, z: Op) -> bool:
    if (x.kind, y.kind, z.kind) != ("A", "E", "E"):
        return False
    if not all(comparable(a, b) for a, b in itertools.combinations((x, y, z), 2)):
        return False
    return depends(y, x) and depends(z, y) and not depends(z, x)


def is_generalized_henkin(x: Op, y: Op, u: Op, v: Op) -> bool:
    if (x.kind, y.kind, u.kind, v.kind) != ("A", "A", "E", "E") or x == y or u == v:
        return False
    return (above(x, u) and above(x, v)
            and depends(u, x) and not depends(u, y) and not depends(u, v)
            and depends(v, y) and not depends(v, x) and not depends(v, u))


def is_coordinated(x: Op, c: Op, y: Op, z: Op, u: Op, w: Op, connective: str = "or") -> bool:
    if (x.kind, c.kind, y.kind, z.kind, u.kind, w.kind) != ("A", connective, "A", "A", "E", "E"):
        return False
    if len({x.loc, y.loc, z.loc}) < 3 or u == w:
        return False
    return (depends(u, y) and depends(u, c) and not depends(u, x) and not depends(u, z)
            and not depends(u, w)
            and depends(w, z) and depends(w, c) and not depends(w, x) and not depends(w, y)
            and not depends(w, u)
            and depends(c, x))


def lowest_common_ancestor(t: PrefixTree, a: Op, b: Op) -> tuple:
    k = 0
    while k < min(len(a.loc), len(b.loc)) and a.loc[k] == b.loc[k]:
        k += 1
    return a.loc[:k]


def _op_at(ops: list, loc: tuple) -> Op:
    for o in ops:
        if o.loc == loc:
            return o
    raise PatternError(f"no operator at {loc}")


def gh_subclass(t: PrefixTree, x: Op, y: Op, u: Op, v: Op) -> str | None:
    """GH1/GH2 and the connective for a witness whose existentials branch apart.

    The deciding connective is the one where the two existentials part
    ways. GH2 when both universals sit above it.
    """
    if comparable(u, v):
        return None
    c = _op_at(operators(t), lowest_common_ancestor(t, u, v))
    level = 2 if above(x, c) and above(y, c) else 1
    return f"GH{level}_{c.kind}"


def coordinated_kind(c: Op, u: Op, w: Op) -> str:
    d = len(c.loc)
    return "first" if u.loc[d] != w.loc[d] else "second"


@dataclass
class PatternReport:
    signalling: bool = False
    henkin: bool = False
    generalized_henkin: bool = False
    gh_subclasses: tuple = ()
    coordinated: bool = False
    coordinated_kinds: tuple = ()
    and_coordinated: bool = False
    first_order: bool = False
    witnesses: dict = field(default_factory=dict)

    @property
    def modest(self) -> bool:
        return not (self.signalling or self.generalized_henkin or self.coordinated)

    def as_dict(self) -> dict:
        return {
            "signalling": self.signalling,
            "henkin": self.henkin,
            "generalized_henkin": self.generalized_henkin,
            "gh_subclasses": list(self.gh_subclasses),
            "coordinated": self.coordinated,
            "coordinated_kinds": list(self.coordinated_kinds),
            "and_coordinated": self.and_coordinated,
            "modest": self.modest,
            "first_order": self.first_order,
            "witnesses": {k: [list(l) for l in v] for k, v in self.witnesses.items()},
        }


def effective_tree(t: PrefixTree) -> PrefixTree:
    """t without slash variables that no quantifier above binds.

    Such variables never enter the team domain of their quantifier and
    play no part in dependence, so they are dropped before analysis.
    """
    if not isinstance(t, PrefixTree):
        raise PatternError("expected a PrefixTree")
    return PrefixTree(drop_vacuous_slashes(t.root))


def _require_regular(t: PrefixTree) -> PrefixTree:
    t = effective_tree(t)
    if not regularity(t.root)[0]:
        raise PatternError("tree is not regular")
    return t


def detect_patterns(t: PrefixTree) -> PatternReport:
    t = _require_regular(t)
    ops = operators(t)
    univ = [o for o in ops if o.kind == "A"]
    exis = [o for o in ops if o.kind == "E"]
    rep = PatternReport()
    rep.first_order = all(not o.slash for o in ops if o.is_quant)
    wit = rep.witnesses

    for x, y, z, w in itertools.product(univ, exis, univ, exis):
        if is_henkin(x, y, z, w):
            rep.henkin = True
            wit["henkin"] = tuple(o.loc for o in (x, y, z, w))
            break
    for x, y, z in itertools.product(univ, exis, exis):
        if is_signalling(x, y, z):
            rep.signalling = True
            wit["signalling"] = tuple(o.loc for o in (x, y, z))
            break
    subclasses = set()
    for x, y, u, v in itertools.product(univ, univ, exis, exis):
        if is_generalized_henkin(x, y, u, v):
            if not rep.generalized_henkin:
                rep.generalized_henkin = True
                wit["generalized_henkin"] = tuple(o.loc for o in (x, y, u, v))
            sub = gh_subclass(t, x, y, u, v)
            if sub and sub not in subclasses:
                subclasses.add(sub)
                wit[sub] = tuple(o.loc for o in (x, y, u, v))
    rep.gh_subclasses = tuple(sorted(subclasses))

    kinds = set()
    for conn in ("or", "and"):
        for c in (o for o in ops if o.kind == conn):
            xs = [o for o in univ if above(o, c)]
            below = [o for o in exis if above(c, o)]
            for x, u, w in itertools.product(xs, below, below):
                for y, z in itertools.product(univ, univ):
                    if not is_coordinated(x, c, y, z, u, w, conn):
                        continue
                    locs = tuple(o.loc for o in (x, c, y, z, u, w))
                    if conn == "and":
                        rep.and_coordinated = True
                        wit.setdefault("and_coordinated", locs)
                        continue
                    kind = coordinated_kind(c, u, w)
                    rep.coordinated = True
                    wit.setdefault("coordinated", locs)
                    if kind not in kinds:
                        kinds.add(kind)
                        wit[f"coordinated_{kind}"] = locs
                    if kind == "first":
                        tag = "coordinated_first_C1" if not (above(y, c) or above(z, c)) else "coordinated_first_C2"
                        wit.setdefault(tag, locs)
    rep.coordinated_kinds = tuple(sorted(kinds))
    return rep


def check_witness(t: PrefixTree, family: str, locs) -> bool:
    """Re-run the defining predicate of a pattern on a reported witness."""
    t = effective_tree(t)
    ops = operators(t)
    try:
        nodes = [_op_at(ops, tuple(l)) for l in locs]
    except PatternError:
        return False
    if family == "henkin":
        return is_henkin(*nodes)
    if family == "signalling":
        return is_signalling(*nodes)
    if family == "generalized_henkin":
        return is_generalized_henkin(*nodes)
    if family.startswith("GH"):
        return is_generalized_henkin(*nodes) and gh_subclass(t, *nodes) == family
    if family == "and_coordinated":
        return is_coordinated(*nodes, connective="and")
    if family.startswith("coordinated"):
        if not is_coordinated(*nodes):
            return False
        kind = coordinated_kind(nodes[1], nodes[4], nodes[5])
        if family.startswith("coordinated_first"):
            return kind == "first"
        if family == "coordinated_second":
            return kind == "second"
        return True
    raise PatternError(f"unknown pattern family {family!r}")


# extension between trees

def extends(u: PrefixTree, t: PrefixTree) -> dict | None:
    """An embedding of t's operators into u's, or None.

    Kinds and connectives are kept, variables are renamed injectively,
    subordination and dependence are preserved in both directions, and
    the two sides of each connective of t land on different sides of its
    image.
    """
    t_ops, u_ops = operators(effective_tree(t)), operators(effective_tree(u))
    mu: dict = {}
    var_map: dict = {}
    used_vars: set = set()
    sides: dict = {}

    def side(c: Op, n: Op) -> int:
        return n.loc[len(c.loc)]

    def consistent(a: Op, b: Op) -> bool:
        for p, q in mu.items():
            # p already mapped to q; check the new pair (a -> b)
            if above(p, a) != above(q, b) or above(a, p) != above(b, q):
                return False
            if p.is_quant and a.is_quant:
                if depends(a, p) != depends(b, q) or depends(p, a) != depends(q, b):
                    return False
            if not p.is_quant and above(p, a):
                s_t, s_u = side(p, a), side(q, b)
                known = sides.get(p, {})
                if s_t in known and known[s_t] != s_u:
                    return False
                if s_t not in known and s_u in known.values():
                    return False
        return True

    def record_sides(a: Op, b: Op) -> list:
        added = []
        for p, q in mu.items():
            if not p.is_quant and above(p, a):
                known = sides.setdefault(p, {})
                s_t = side(p, a)
                if s_t not in known:
                    known[s_t] = side(q, b)
                    added.append((p, s_t))
        return added

    def go(i: int) -> bool:
        if i == len(t_ops):
            return True
        a = t_ops[i]
        for b in u_ops:
            if b.kind != a.kind or b in mu.values():
                continue
            if a.is_quant:
                if a.var in var_map:
                    if var_map[a.var] != b.var:
                        continue
                elif b.var in used_vars:
                    continue
            if not consistent(a, b):
                continue
            new_var = a.is_quant and a.var not in var_map
            if new_var:
                var_map[a.var] = b.var
                used_vars.add(b.var)
            added = record_sides(a, b)
            mu[a] = b
            if go(i + 1):
                return True
            del mu[a]
            for p, s in added:
                del sides[p][s]
            if new_var:
                del var_map[a.var]
                used_vars.discard(b.var)
        return False

    if go(0):
        return {a.loc: b.loc for a, b in mu.items()}
    return None


# canonical comparison up to renaming

def _variants(node):
    """Trees equal up to swapping connective children and reordering
    runs of unslashed universals."""
    if isinstance(node, Gap):
        yield Gap(0)
        return
    if isinstance(node, Quant):
        run, cur = [], node
        while isinstance(cur, Quant) and cur.kind == node.kind and not cur.slash:
            run.append(cur)
            cur = cur.body
        if len(run) > 1:
            for perm in set(itertools.permutations([q.var for q in run])):
                for body in _variants(cur):
                    out = body
                    for var in reversed(perm):
                        out = Quant(node.kind, var, frozenset(), out)
                    yield out
            return
        for body in _variants(node.body):
            yield Quant(node.kind, node.var, node.slash, body)
        return
    for l in _variants(node.left):
        for r in _variants(node.right):
            yield type(node)(l, r)
            yield type(node)(r, l)


def _relabel(node) -> str:
    names: dict = {}

    def go(n) -> str:
        if isinstance(n, Gap):
            return "[]"
        if isinstance(n, Quant):
            names.setdefault(n.var, f"v{len(names)}")
            sl = ",".join(sorted(names.get(w, "?" + w) for w in n.slash))
            return f"{n.kind}{names[n.var]}/{{{sl}}}.{go(n.body)}"
        op = "&" if isinstance(n, And) else "|"
        return f"({go(n.left)}{op}{go(n.right)})"

    return go(node)


def canonical_form(t: PrefixTree) -> str:
    return min(_relabel(v) for v in _variants(t.root))


def same_up_to_renaming(a: PrefixTree, b: PrefixTree) -> bool:
    return canonical_form(a) == canonical_form(b)


# the named trees of the classification table

NAMED_TREES = {
    "henkin_linear": "A x E y A z (E w/{x,y}) []",
    "henkin_branching": "A x A z (E y/{z}) (E w/{x,y}) []",
    "signalling": "A x E z (E y/{x}) []",
    "GH1_and": "A x ((A y (E v/{x}) []) & ((E u/{y}) []))",
    "GH2_and": "A x A y (((E v/{x}) []) & ((E u/{y}) []))",
    "GH1_or": "A x ((A y (E v/{x}) []) | ((E u/{y}) []))",
    "GH2_or": "A x A y (((E v/{x}) []) | ((E u/{y}) []))",
    "C1": "A x ((A y (E u/{x}) []) | (A z (E v/{x}) []))",
    "C2": "A x A y (((E u/{x}) []) | (A z (E v/{x,y}) []))",
    "C3": "A x A y A z (((E u/{x,z}) []) | ((E v/{x,y}) []))",
    "C1'": "A x ([] | ((A y (E u/{x}) []) & (A z (E v/{x}) [])))",
    "C2'": "A x ([] | (A y (((E u/{x}) []) & (A z (E v/{x,y}) []))))",
    "C3'": "A x ([] | (A y A z (((E u/{x,z}) []) & ((E v/{x,y}) []))))",
    "C4'": "A x A y ([] | (((E u/{x}) []) & (A z (E v/{x,y}) [])))",
    "C5'": "A x A y ([] | (A z (((E u/{x,z}) []) & ((E v/{x,y}) []))))",
    "C6'": "A x A y A z ([] | (((E u/{x,z}) []) & ((E v/{x,y}) [])))",
}

SECOND_KIND_MINIMAL = ("C1'", "C2'", "C3'", "C4'", "C5'", "C6'")


def named_tree(name: str) -> PrefixTree:
    from .syntax import parse_tree

    return parse_tree(NAMED_TREES[name])


@dataclass(frozen=True)
class Verdict:
    kind: str
    problem: str | None = None
    witness: tuple = ()
    reason: str = ""
    branch: int = 0
    diagnostics: tuple = ()

    def as_dict(self) -> dict:
        return {
            "verdict": self.kind,
            "problem": self.problem,
            "witness_locators": [list(l) for l in self.witness],
            "reason": self.reason,
            "branch": self.branch,
            "diagnostics": list(self.diagnostics),
        }


_second_kind_forms = None


def _second_kind_canon() -> dict:
    global _second_kind_forms
    if _second_kind_forms is None:
        _second_kind_forms = {canonical_form(named_tree(n)): n for n in SECOND_KIND_MINIMAL}
    return _second_kind_forms


def classify(t: PrefixTree) -> Verdict:
    t = _require_regular(t)
    rep = detect_patterns(t)
    w = rep.witnesses
    kinds = {o.kind for o in operators(t)}
    if rep.henkin:
        return Verdict(NP_COMPLETE, "3-COLORING", w["henkin"], "Henkin pattern", 1)
    if rep.signalling:
        return Verdict(NP_COMPLETE, "EXACT COVER BY 3-SETS", w["signalling"], "signalling pattern", 2)
    if "GH2_or" in rep.gh_subclasses:
        return Verdict(NP_COMPLETE, "SAT", w["GH2_or"], "generalized Henkin pattern GH2(∨)", 3)
    if "first" in rep.coordinated_kinds:
        if "coordinated_first_C1" in w:
            return Verdict(NP_COMPLETE, "SET SPLITTING", w["coordinated_first_C1"],
                           "coordinated pattern of the first kind (C1 shape)", 4)
        return Verdict(NP_COMPLETE, "SAT", w["coordinated_first_C2"],
                       "coordinated pattern of the first kind (C2 shape)", 4)
    if rep.modest:
        return Verdict(FO, reason="modest tree", branch=5)
    name = _second_kind_canon().get(canonical_form(t))
    if name:
        return Verdict(FO, reason=f"minimal coordinated tree of the second kind {name}", branch=6)
    if "or" not in kinds:
        return Verdict(FO, reason="disjunction-free generalized Henkin tree", branch=7)
    if "and" not in kinds and not any(s.startswith("GH2") for s in rep.gh_subclasses) and not rep.coordinated:
        return Verdict(FO, reason="conjunction-free tree without GH2 or coordinated patterns", branch=8)
    diags = []
    for sub in rep.gh_subclasses:
        diags.append(f"extension* of {sub.replace('_and', '(∧)').replace('_or', '(∨)')}")
    if "second" in rep.coordinated_kinds:
        diags.append("extension* of C1'-C6' (coordinated, second kind)")
    if rep.and_coordinated:
        diags.append("contains a coordinated-like pattern with ∧ in place of ∨")
    return Verdict(UNKNOWN, reason="open family", branch=9, diagnostics=tuple(diags))
