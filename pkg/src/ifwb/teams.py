"""Lax team semantics for IF logic on finite structures."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Mapping

from .syntax import (
    And, Atom, Const, Eq, Gap, Neg, Or, Quant,
    drop_vacuous_slashes, free_vars, render_formula, walk,
)


class SemanticsError(ValueError):
    pass


class Truth(str, Enum):
    TRUE = "True"
    FALSE = "False"
    UNDETERMINED = "Undetermined"

    def __str__(self) -> str:
        return self.value


class Structure:
    """Finite structure with domain {0, ..., size-1}."""

    __slots__ = ("size", "relations", "arities", "constants")

    def __init__(self, size: int, relations: Mapping | None = None,
                 constants: Mapping | None = None, arities: Mapping | None = None):
        if not isinstance(size, int) or size < 1:
            raise SemanticsError(f"domain size must be a positive integer, got {size!r}")
        self.size = size
        self.relations: dict = {}
        self.arities: dict = dict(arities or {})
        for name, tuples in (relations or {}).items():
            ts = frozenset(tuple(int(a) for a in t) for t in tuples)
            lens = {len(t) for t in ts}
            if len(lens) > 1:
                raise SemanticsError(f"relation {name} has tuples of mixed arity {sorted(lens)}")
            if lens:
                ar = lens.pop()
                if self.arities.setdefault(name, ar) != ar:
                    raise SemanticsError(f"relation {name} declared arity {self.arities[name]}, tuples have {ar}")
            for t in ts:
                if any(a < 0 or a >= size for a in t):
                    raise SemanticsError(f"relation {name} tuple {t} leaves the domain 0..{size - 1}")
            self.relations[name] = ts
        self.constants = {}
        for name, val in (constants or {}).items():
            if not isinstance(val, int) or not 0 <= val < size:
                raise SemanticsError(f"constant {name} interpreted outside the domain: {val!r}")
            self.constants[str(name)] = val

    def __eq__(self, other):
        return (isinstance(other, Structure) and self.size == other.size
                and self.relations == other.relations and self.constants == other.constants)

    def __hash__(self):
        return hash((self.size, frozenset(self.relations.items()), frozenset(self.constants.items())))

    def __repr__(self):
        return f"Structure({self.to_json()})"

    def to_json(self) -> dict:
        return {
            "domain": self.size,
            "relations": {k: sorted(list(t) for t in v) for k, v in sorted(self.relations.items())},
            "constants": dict(sorted(self.constants.items())),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Structure":
        if "domain" not in data:
            raise SemanticsError("structure JSON needs a 'domain' field")
        return cls(int(data["domain"]), data.get("relations", {}), data.get("constants", {}),
                   data.get("arities"))

    @classmethod
    def load(cls, path) -> "Structure":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def check_signature(self, f) -> None:
        for _, n in walk(f):
            if isinstance(n, Atom):
                if n.rel not in self.relations and n.rel not in self.arities:
                    raise SemanticsError(f"relation {n.rel} is not interpreted in the structure")
                ar = self.arities.get(n.rel)
                if ar is not None and ar != len(n.args):
                    raise SemanticsError(f"relation {n.rel} has arity {ar} but is used with {len(n.args)} arguments")
            terms = n.args if isinstance(n, Atom) else (n.left, n.right) if isinstance(n, Eq) else ()
            for t in terms:
                if isinstance(t, Const) and t.name not in self.constants:
                    raise SemanticsError(f"constant {t.name} is not interpreted in the structure")


@dataclass(frozen=True)
class Team:
    vars: tuple
    rows: frozenset

    def __post_init__(self):
        if len(set(self.vars)) != len(self.vars):
            raise SemanticsError(f"team domain repeats a variable: {self.vars}")
        for r in self.rows:
            if len(r) != len(self.vars):
                raise SemanticsError(f"row {r} does not match domain {self.vars}")

    @classmethod
    def unit(cls) -> "Team":
        """The team {∅} holding only the empty assignment."""
        return cls((), frozenset({()}))

    @classmethod
    def from_assignments(cls, assignments: Iterable[Mapping], var_domain=None) -> "Team":
        assignments = list(assignments)
        if var_domain is None:
            var_domain = sorted(assignments[0]) if assignments else ()
        var_domain = tuple(var_domain)
        rows = set()
        for s in assignments:
            if set(s) != set(var_domain):
                raise SemanticsError(f"assignment {dict(s)} does not have domain {var_domain}")
            rows.add(tuple(int(s[v]) for v in var_domain))
        return cls(var_domain, frozenset(rows))

    def assignments(self) -> list:
        return [dict(zip(self.vars, r)) for r in sorted(self.rows)]

    def __len__(self) -> int:
        return len(self.rows)

    def to_json(self) -> dict:
        return {"vars": list(self.vars), "rows": [list(r) for r in sorted(self.rows)]}

    @classmethod
    def from_json(cls, data) -> "Team":
        if isinstance(data, list):
            return cls.from_assignments(data)
        return cls(tuple(data["vars"]), frozenset(tuple(r) for r in data["rows"]))


def _extend(vars_: tuple, v: str) -> tuple:
    """New domain and the position v occupies in it."""
    if v in vars_:
        return vars_, vars_.index(v)
    return vars_ + (v,), len(vars_)


def _put(row: tuple, pos: int, a: int) -> tuple:
    if pos == len(row):
        return row + (a,)
    return row[:pos] + (a,) + row[pos + 1:]


def duplicate(x: Team, v: str, m: Structure) -> Team:
    vars_, pos = _extend(x.vars, v)
    return Team(vars_, frozenset(_put(r, pos, a) for r in x.rows for a in range(m.size)))


@dataclass(frozen=True)
class ChoiceFunction:
    """A function from the rows of a team to domain elements."""
    vars: tuple
    values: Mapping

    @classmethod
    def from_callable(cls, x: Team, fn: Callable) -> "ChoiceFunction":
        return cls(x.vars, {r: int(fn(dict(zip(x.vars, r)))) for r in x.rows})

    def __call__(self, row: tuple) -> int:
        return self.values[row]


def supplement(x: Team, f: ChoiceFunction, v: str) -> Team:
    missing = [r for r in x.rows if r not in f.values]
    if missing:
        raise SemanticsError(f"choice function undefined on rows {sorted(missing)}")
    vars_, pos = _extend(x.vars, v)
    return Team(vars_, frozenset(_put(r, pos, f(r)) for r in x.rows))


def _class_key(vars_: tuple, slash) -> Callable:
    keep = [i for i, w in enumerate(vars_) if w not in slash]
    return lambda r: tuple(r[i] for i in keep)


def is_uniform(f: ChoiceFunction, x: Team, v_set) -> bool:
    key = _class_key(x.vars, v_set)
    seen: dict = {}
    for r in x.rows:
        if seen.setdefault(key(r), f(r)) != f(r):
            return False
    return True


def uniform_classes(x: Team, v_set) -> list:
    key = _class_key(x.vars, v_set)
    classes: dict = {}
    for r in sorted(x.rows):
        classes.setdefault(key(r), []).append(r)
    return list(classes.values())


SEARCH_MODES = ("pruned", "partition", "cover")


def _subsets(items: list):
    for k in range(len(items) + 1):
        yield from itertools.combinations(items, k)


class TeamEvaluator:
    """One evaluation context: a structure, a search mode and a memo table.

    `pruned` uses flatness of slash-free subformulas, singleton pruning of
    disjunction splits and per-class candidate filtering; both shortcuts are
    sound because IF satisfaction is downward closed. `partition` and
    `cover` are the plain searches over partitions resp. covers of a team.
    """

    def __init__(self, m: Structure, mode: str = "pruned"):
        if mode not in SEARCH_MODES:
            raise SemanticsError(f"unknown search mode {mode!r}")
        self.m = m
        self.mode = mode
        self.memo: dict = {}
        self._flat: dict = {}
        self._keep: list = []  # holds formulas alive so ids stay unique

    def sat(self, f, x: Team) -> bool:
        self._keep.append(f)
        return self._ev(f, True, x.vars, x.rows)

    def neg_sat(self, f, x: Team) -> bool:
        self._keep.append(f)
        return self._ev(f, False, x.vars, x.rows)

    # helpers
    def _is_flat(self, f) -> bool:
        k = id(f)
        if k not in self._flat:
            self._flat[k] = all(not (isinstance(n, Quant) and n.slash) for _, n in walk(f))
        return self._flat[k]

    def _val(self, t, env):
        return self.m.constants[t.name] if isinstance(t, Const) else env[t]

    def _classical(self, f, env: dict) -> bool:
        """First-order truth at a single assignment (used for flat formulas)."""
        if isinstance(f, Atom):
            return tuple(self._val(t, env) for t in f.args) in self.m.relations.get(f.rel, ())
        if isinstance(f, Eq):
            return self._val(f.left, env) == self._val(f.right, env)
        if isinstance(f, Neg):
            return not self._classical(f.sub, env)
        if isinstance(f, And):
            return self._classical(f.left, env) and self._classical(f.right, env)
        if isinstance(f, Or):
            return self._classical(f.left, env) or self._classical(f.right, env)
        if isinstance(f, Quant):
            test = all if f.kind == "A" else any
            return test(self._classical(f.body, {**env, f.var: a}) for a in range(self.m.size))
        raise SemanticsError(f"cannot evaluate {f!r}")

    def _flat_row(self, f, pos: bool, vars_: tuple, row: tuple) -> bool:
        key = (id(f), pos, vars_, row)
        hit = self.memo.get(key)
        if hit is None:
            hit = self._classical(f, dict(zip(vars_, row))) == pos
            self.memo[key] = hit
        return hit

    def _ev(self, f, pos: bool, vars_: tuple, rows: frozenset) -> bool:
        if not rows:
            return True
        key = (id(f), pos, vars_, rows)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if self.mode == "pruned" and self._is_flat(f):
            out = all(self._flat_row(f, pos, vars_, r) for r in rows)
        else:
            out = self._dispatch(f, pos, vars_, rows)
        self.memo[key] = out
        return out

    def _dispatch(self, f, pos, vars_, rows) -> bool:
        if isinstance(f, (Atom, Eq)):
            return all(self._classical(f, dict(zip(vars_, r))) == pos for r in rows)
        if isinstance(f, Neg):
            return self._ev(f.sub, not pos, vars_, rows)
        if isinstance(f, (And, Or)):
            split = isinstance(f, Or) == pos
            if split:
                return self._split(f.left, f.right, pos, vars_, rows)
            return self._ev(f.left, pos, vars_, rows) and self._ev(f.right, pos, vars_, rows)
        if isinstance(f, Quant):
            if (f.kind == "A") == pos:
                vs, p = _extend(vars_, f.var)
                new = frozenset(_put(r, p, a) for r in rows for a in range(self.m.size))
                return self._ev(f.body, pos, vs, new)
            return self._choose(f, pos, vars_, rows)
        if isinstance(f, Gap):
            raise SemanticsError("cannot evaluate a tree with gaps")
        raise SemanticsError(f"cannot evaluate {f!r}")

    def _split(self, left, right, pos, vars_, rows) -> bool:
        ordered = sorted(rows)
        if self.mode == "cover":
            # every row goes left, right, or both
            for choice in itertools.product((0, 1, 2), repeat=len(ordered)):
                y = frozenset(r for r, c in zip(ordered, choice) if c != 1)
                z = frozenset(r for r, c in zip(ordered, choice) if c != 0)
                if self._ev(left, pos, vars_, y) and self._ev(right, pos, vars_, z):
                    return True
            return False
        if self.mode == "partition":
            for ys in _subsets(ordered):
                y = frozenset(ys)
                if self._ev(left, pos, vars_, y) and self._ev(right, pos, vars_, rows - y):
                    return True
            return False
        if self._ev(left, pos, vars_, rows) or self._ev(right, pos, vars_, rows):
            return True
        to_left, to_right, free = [], [], []
        for r in ordered:
            one = frozenset((r,))
            a = self._ev(left, pos, vars_, one)
            b = self._ev(right, pos, vars_, one)
            if not (a or b):
                return False
            (free if a and b else to_left if a else to_right).append(r)
        base_l, base_r = frozenset(to_left), frozenset(to_right)
        if not self._ev(left, pos, vars_, base_l) or not self._ev(right, pos, vars_, base_r):
            return False
        for ys in _subsets(free):
            y = base_l | frozenset(ys)
            if self._ev(left, pos, vars_, y) and self._ev(right, pos, vars_, rows - y):
                return True
        return False

    def _choose(self, q: Quant, pos, vars_, rows) -> bool:
        """Is there a slash-uniform choice for q.var making the body hold?"""
        vs, p = _extend(vars_, q.var)
        key = _class_key(vars_, q.slash)
        classes: dict = {}
        for r in sorted(rows):
            classes.setdefault(key(r), []).append(r)
        groups = list(classes.values())
        values = range(self.m.size)
        if self.mode != "pruned":
            for pick in itertools.product(values, repeat=len(groups)):
                new = frozenset(_put(r, p, a) for g, a in zip(groups, pick) for r in g)
                if self._ev(q.body, pos, vs, new):
                    return True
            return False
        cands = []
        for g in groups:
            ok = [a for a in values if self._ev(q.body, pos, vs, frozenset(_put(r, p, a) for r in g))]
            if not ok:
                return False
            cands.append(ok)
        if self._is_flat(q.body):
            return True
        for pick in itertools.product(*cands):
            new = frozenset(_put(r, p, a) for g, a in zip(groups, pick) for r in g)
            if self._ev(q.body, pos, vs, new):
                return True
        return False



def _check_suitable(m: Structure, x: Team, f) -> None:
    missing = free_vars(f) - set(x.vars)
    if missing:
        raise SemanticsError(f"team domain {x.vars} is not suitable: free variables {sorted(missing)} missing")
    m.check_signature(f)


def satisfies(m: Structure, x: Team, f, mode: str = "pruned") -> bool:
    _check_suitable(m, x, f)
    return TeamEvaluator(m, mode).sat(f, x)


def neg_satisfies(m: Structure, x: Team, f, mode: str = "pruned") -> bool:
    _check_suitable(m, x, f)
    return TeamEvaluator(m, mode).neg_sat(f, x)


def prepare_sentence(sentence):
    """Drop slash variables that are not quantified above their quantifier.

    From the team {∅} such variables never belong to the team domain, so
    they cannot affect uniformity. What remains must be closed.
    """
    s = drop_vacuous_slashes(sentence)
    fv = free_vars(s)
    if fv:
        raise SemanticsError(f"not a sentence: free variables {sorted(fv)} in {render_formula(sentence)}")
    return s


def truth_value(m: Structure, sentence, mode: str = "pruned") -> Truth:
    s = prepare_sentence(sentence)
    m.check_signature(s)
    ev = TeamEvaluator(m, mode)
    unit = Team.unit()
    t = ev.sat(s, unit)
    f = ev.neg_sat(s, unit)
    if t and f:
        raise AssertionError(f"sentence both true and false: {render_formula(sentence)}")
    return Truth.TRUE if t else Truth.FALSE if f else Truth.UNDETERMINED
