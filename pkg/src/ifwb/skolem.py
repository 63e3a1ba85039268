"""Truth of IF sentences through Skolem functions and backtracking over their tables."""
from __future__ import annotations

import functools
import itertools
import os
import sys
from dataclasses import dataclass

from .syntax import (
    And, Atom, Const, Eq, Neg, Or, Quant,
    children, dual, is_nnf, is_regular, render_formula, subst, with_children,
)
from .teams import SemanticsError, Structure, prepare_sentence

DEFAULT_BUDGET = 10 ** 8


class SkolemError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    def __init__(self, budget: int):
        super().__init__(f"Skolem search budget of {budget} nodes exceeded")
        self.budget = budget


@dataclass(frozen=True)
class SkolemFunction:
    name: str
    var: str
    args: tuple


@dataclass(frozen=True)
class SkolemPlan:
    universals: tuple
    functions: tuple
    matrix: object
    renaming: tuple = ()

    def function_for(self, var: str) -> SkolemFunction:
        for fn in self.functions:
            if fn.var == var:
                return fn
        raise KeyError(var)

    def term(self, var: str) -> str:
        """Nested Skolem term standing for an existential variable."""
        try:
            fn = self.function_for(var)
        except KeyError:
            return var
        return f"{fn.name}({','.join(self.term(a) for a in fn.args)})"

    def render_matrix(self) -> str:
        body = self.matrix
        for fn in self.functions:
            body = subst(body, fn.var, self.term(fn.var))
        prefix = "".join(f"A {u} " for u in self.universals)
        return prefix + render_formula(body)


def _unique_names(f, used: set, scope: dict):
    """Give every quantifier occurrence its own variable name."""
    if isinstance(f, Quant):
        slash = frozenset(scope.get(w, w) for w in f.slash)
        name = f.var
        if name in used:
            k = 1
            while f"{f.var}{k}" in used:
                k += 1
            name = f"{f.var}{k}"
        used.add(name)
        return Quant(f.kind, name, slash, _unique_names(f.body, used, {**scope, f.var: name}))
    if isinstance(f, Atom):
        return Atom(f.rel, tuple(scope.get(t, t) if isinstance(t, str) else t for t in f.args))
    if isinstance(f, Eq):
        sw = lambda t: scope.get(t, t) if isinstance(t, str) else t
        return Eq(sw(f.left), sw(f.right))
    kids = children(f)
    if not kids:
        return f
    return with_children(f, [_unique_names(c, used, scope) for c in kids])


def skolemize(sentence) -> SkolemPlan:
    """One function per existential, taking the non-slashed variables quantified above it.

    Existential arguments stay arguments (so tables may be indexed by the
    values of earlier existentials); all quantifiers are then pulled out,
    which is sound because every quantifier occurrence carries its own name.
    """
    if not is_nnf(sentence):
        raise SkolemError("sentence must be in negation normal form")
    try:
        s = prepare_sentence(sentence)
    except SemanticsError as exc:
        raise SkolemError(str(exc)) from None
    if not is_regular(s):
        raise SkolemError(f"sentence is not regular: {render_formula(sentence)}")
    s = _unique_names(s, set(), {})
    universals: list = []
    functions: list = []

    def go(f, scope: tuple):
        if isinstance(f, Quant):
            if f.kind == "A":
                universals.append(f.var)
            else:
                args = tuple(w for w in scope if w not in f.slash)
                functions.append(SkolemFunction(f"f_{f.var}", f.var, args))
            return go(f.body, scope + (f.var,))
        kids = children(f)
        if not kids:
            return f
        return with_children(f, [go(c, scope) for c in kids])

    matrix = go(s, ())
    return SkolemPlan(tuple(universals), tuple(functions), matrix)


@functools.lru_cache(maxsize=4096)
def _cached_plan(sentence) -> SkolemPlan:
    return skolemize(sentence)


class _Search:
    def __init__(self, m: Structure, plan: SkolemPlan, budget: int):
        self.m = m
        self.plan = plan
        self.budget = budget
        self.nodes = 0
        self.tables = {fn.var: {} for fn in plan.functions}
        self.fn_args = {fn.var: fn.args for fn in plan.functions}
        self.pending = None
        self.uindex = {u: i for i, u in enumerate(plan.universals)}
        self.check = self._compile(plan.matrix)

    def _term(self, t):
        """Compile a term to point -> value-or-None."""
        if isinstance(t, Const):
            val = self.m.constants[t.name]
            return lambda pt: val
        if t in self.uindex:
            i = self.uindex[t]
            return lambda pt: pt[i]
        if t not in self.tables:
            raise SkolemError(f"unbound variable {t}")
        table = self.tables[t]
        getters = [self._term(a) for a in self.fn_args[t]]

        def get(pt):
            key = []
            for g in getters:
                v = g(pt)
                if v is None:
                    return None
                key.append(v)
            key = tuple(key)
            v = table.get(key)
            if v is None and self.pending is None:
                self.pending = (t, key)
            return v

        return get

    def _compile(self, f):
        """Compile the matrix to point -> True / False / None (Kleene)."""
        if isinstance(f, Atom):
            rel = self.m.relations.get(f.rel, frozenset())
            gs = [self._term(t) for t in f.args]

            def atom(pt):
                vals = tuple(g(pt) for g in gs)
                return None if None in vals else vals in rel

            return atom
        if isinstance(f, Eq):
            gl, gr = self._term(f.left), self._term(f.right)

            def eq(pt):
                a, b = gl(pt), gr(pt)
                return None if a is None or b is None else a == b

            return eq
        if isinstance(f, Neg):
            inner = self._compile(f.sub)

            def neg(pt):
                v = inner(pt)
                return None if v is None else not v

            return neg
        if isinstance(f, (And, Or)):
            l, r = self._compile(f.left), self._compile(f.right)
            stop = not isinstance(f, And)  # value that decides the connective

            def conn(pt):
                a = l(pt)
                if a is stop:
                    return stop
                b = r(pt)
                if b is stop:
                    return stop
                if a is None or b is None:
                    return None
                return not stop

            return conn
        raise SkolemError(f"unexpected node in matrix: {f!r}")

    def run(self) -> bool:
        points = list(itertools.product(range(self.m.size), repeat=len(self.plan.universals)))
        return self._solve(points, 0)

    def _solve(self, points, i) -> bool:
        while i < len(points):
            self.pending = None
            v = self.check(points[i])
            if v is True:
                i += 1
                continue
            if v is False:
                return False
            var, key = self.pending
            table = self.tables[var]
            for a in range(self.m.size):
                self.nodes += 1
                if self.nodes > self.budget:
                    raise BudgetExceeded(self.budget)
                table[key] = a
                if self._solve(points, i):
                    return True
                del table[key]
            return False
        return True


def budget_from_env() -> int:
    raw = os.environ.get("IFWB_BUDGET")
    if not raw:
        return DEFAULT_BUDGET
    try:
        return int(float(raw))
    except ValueError:
        raise SkolemError(f"IFWB_BUDGET must be a number, got {raw!r}") from None


def truth_by_skolem(m: Structure, sentence, budget: int | None = None, plan: SkolemPlan | None = None) -> bool:
    plan = plan or _cached_plan(sentence)
    m.check_signature(plan.matrix)
    search = _Search(m, plan, budget if budget is not None else budget_from_env())
    limit = sys.getrecursionlimit()
    need = sum(m.size ** len(fn.args) for fn in plan.functions) + 100
    if need > limit:
        sys.setrecursionlimit(need)
    return search.run()


def falsity_by_skolem(m: Structure, sentence, budget: int | None = None) -> bool:
    """Falsity is truth of the dual sentence."""
    return truth_by_skolem(m, dual(sentence), budget)


def truth_value_by_skolem(m: Structure, sentence, budget: int | None = None):
    from .teams import Truth
    if truth_by_skolem(m, sentence, budget):
        return Truth.TRUE
    return Truth.FALSE if falsity_by_skolem(m, sentence, budget) else Truth.UNDETERMINED


def skolem_table_sizes(plan: SkolemPlan, n: int) -> dict:
    return {fn.name: n ** len(fn.args) for fn in plan.functions}


__all__ = [
    "BudgetExceeded", "SkolemError", "SkolemFunction", "SkolemPlan",
    "falsity_by_skolem", "skolemize", "truth_by_skolem", "truth_value_by_skolem", "budget_from_env", "skolem_table_sizes",
]
