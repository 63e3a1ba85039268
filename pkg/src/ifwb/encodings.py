"""The four fixed NP sentences, structure encoders for their problems, and brute-force oracles."""
from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass

from .syntax import parse_formula
from .teams import Structure


class EncodingError(ValueError):
    pass


# --- instances ---------------------------------------------------------------

@dataclass(frozen=True)
class CnfInstance:
    """Clauses are tuples of nonzero ints in DIMACS style: k means letter k, -k its negation."""

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(int(l) for l in c) for c in self.clauses))
        for c in self.clauses:
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise EncodingError(f"literal {lit} outside letters 1..{self.num_vars}")

    def letters(self, clause) -> set:
        return {abs(l) for l in clause}

    def validate(self, min_letters: int) -> None:
        for i, c in enumerate(self.clauses):
            if not c:
                raise EncodingError(f"clause {i + 1} is empty; every clause needs at least one literal")
            if any(-l in c for l in c):
                raise EncodingError(f"clause {i + 1} contains a letter with both signs")
            if len(self.letters(c)) < min_letters:
                raise EncodingError(f"clause {i + 1} mentions fewer than {min_letters} distinct letters")

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(map(str, c)) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SetSplitInstance:
    """Ground set {1..size}; blocks are sets of ground elements."""

    size: int
    blocks: tuple

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(frozenset(int(a) for a in b) for b in self.blocks))

    def validate(self) -> None:
        if self.size < 1:
            raise EncodingError("the ground set must be nonempty")
        for i, b in enumerate(self.blocks):
            if any(a < 1 or a > self.size for a in b):
                raise EncodingError(f"block {i + 1} has elements outside 1..{self.size}")
            if len(b) < 2:
                raise EncodingError(f"block {i + 1} has fewer than 2 elements")

    def to_json(self) -> dict:
        return {"A": self.size, "blocks": [sorted(b) for b in self.blocks]}


@dataclass(frozen=True)
class Graph:
    """Vertices 0..n-1 and undirected edges as 2-element frozensets."""

    n: int
    edges: frozenset

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(frozenset(e) for e in self.edges))

    def validate(self) -> None:
        if self.n < 1:
            raise EncodingError("a graph needs at least one vertex")
        for e in self.edges:
            if len(e) != 2:
                raise EncodingError(f"self-loop on vertex {min(e)} is not allowed")
            if any(v < 0 or v >= self.n for v in e):
                raise EncodingError(f"edge {sorted(e)} leaves the vertex range")


# --- sentences ---------------------------------------------------------------

def _occ(a: str, b: str, flipped: bool = False) -> str:
    """a occurs in b (letter a, clause b); flipped: clause a, letter b."""
    c1, c2 = ("C", "~C") if flipped else ("~C", "C")
    return f"({c1}({a}) & {c2}({b}) & (P({a},{b}) | N({a},{b})))"


def _not_occ(a: str, b: str, flipped: bool = False) -> str:
    c1, c2 = ("~C", "C") if flipped else ("C", "~C")
    return f"({c1}({a}) | {c2}({b}) | (~P({a},{b}) & ~N({a},{b})))"


_PSI1 = f"{_occ('x', 'y')} & (~P(x,y) | u = 1) & (~N(x,y) | u = 0)"
_PSI2 = f"{_occ('v', 'y')} & ({_not_occ('x', 'y')} | x != v)"

_CHI1 = f"{_occ('x', 'y', True)} & (~P(x,y) | u = 1) & (~N(x,y) | u = 0)"
_CHI2 = f"z != x | {_not_occ('x', 'y', True)} | (v != y & {_occ('x', 'v', True)})"

SOURCES = {
    "phi_sat": f"A x A y (((E u/{{y}}) ({_PSI1})) | ((E v/{{x}}) ({_PSI2})))",
    "theta_sat": f"A x A y (((E u/{{x}}) ({_CHI1})) | (A z (E v/{{x,y}}) ({_CHI2})))",
    "eta_split": "A x ((A y (E u/{x}) (~A(x) | ~B(y) | (u != x & In(u,y))))"
                 " | (A z (E v/{x}) (~A(x) | ~B(z) | (v != x & In(v,z)))))",
    "xi_2col": "A x ((A y (E u/{x}) (~E(x,y) | (u = y & u != x)))"
               " | (A z (E v/{x,y}) (~E(x,z) | (v = z & v != x))))",
}

PROBLEMS = {
    "sat-gh2": "phi_sat",
    "sat-c2": "theta_sat",
    "set-splitting": "eta_split",
    "2col": "xi_2col",
}

_CACHE: dict = {}


def builtin_names() -> list:
    return list(SOURCES)


def builtin_sentence(name: str):
    if name not in SOURCES:
        raise EncodingError(f"unknown builtin sentence {name!r}; choose from {', '.join(SOURCES)}")
    if name not in _CACHE:
        _CACHE[name] = parse_formula(SOURCES[name])
    return _CACHE[name]


def sentence_for(problem: str):
    return builtin_sentence(_problem(problem))


def _problem(problem: str) -> str:
    if problem not in PROBLEMS:
        raise EncodingError(f"unknown problem {problem!r}; choose from {', '.join(PROBLEMS)}")
    return PROBLEMS[problem]


# --- encoders ----------------------------------------------------------------

def _encode_sat(cnf: CnfInstance, flipped: bool) -> Structure:
    k, m = cnf.num_vars, len(cnf.clauses)
    letter = lambda l: abs(l) - 1
    clause = lambda i: k + i
    pos, neg = set(), set()
    for i, c in enumerate(cnf.clauses):
        for l in c:
            pair = (clause(i), letter(l)) if flipped else (letter(l), clause(i))
            (pos if l > 0 else neg).add(pair)
    return Structure(
        k + m + 2,
        {"P": pos, "N": neg, "C": {(clause(i),) for i in range(m)}},
        {"0": k + m, "1": k + m + 1},
        {"P": 2, "N": 2, "C": 1},
    )


def _encode_split(inst: SetSplitInstance) -> Structure:
    k = inst.size
    blocks = range(k, k + len(inst.blocks))
    member = {(a - 1, k + j) for j, b in enumerate(inst.blocks) for a in b}
    return Structure(
        k + len(inst.blocks),
        {"A": {(a,) for a in range(k)}, "B": {(b,) for b in blocks}, "In": member},
        {},
        {"A": 1, "B": 1, "In": 2},
    )


def _encode_graph(g: Graph) -> Structure:
    e = set()
    for a, b in (tuple(x) for x in g.edges):
        e |= {(a, b), (b, a)}
    return Structure(g.n, {"E": e}, {}, {"E": 2})


def _check(problem: str, instance) -> None:
    expected = {"sat-gh2": CnfInstance, "sat-c2": CnfInstance,
                "set-splitting": SetSplitInstance, "2col": Graph}[problem]
    if not isinstance(instance, expected):
        raise EncodingError(f"{problem} expects a {expected.__name__}")
    if problem == "sat-gh2":
        instance.validate(min_letters=2)
    elif problem == "sat-c2":
        instance.validate(min_letters=1)
    else:
        instance.validate()


def encode_instance(problem: str, instance) -> Structure:
    _problem(problem)
    _check(problem, instance)
    if problem == "sat-gh2":
        return _encode_sat(instance, flipped=False)
    if problem == "sat-c2":
        return _encode_sat(instance, flipped=True)
    if problem == "set-splitting":
        return _encode_split(instance)
    return _encode_graph(instance)


# --- oracles -----------------------------------------------------------------

def sat_oracle(cnf: CnfInstance) -> bool:
    for bits in itertools.product((False, True), repeat=cnf.num_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in cnf.clauses):
            return True
    return False


def split_oracle(inst: SetSplitInstance) -> bool:
    for bits in itertools.product((0, 1), repeat=inst.size):
        if all(len({bits[a - 1] for a in b}) == 2 for b in inst.blocks):
            return True
    return False


def two_col_oracle(g: Graph) -> bool:
    adj = {v: set() for v in range(g.n)}
    for a, b in (tuple(e) for e in g.edges):
        adj[a].add(b)
        adj[b].add(a)
    colour: dict = {}
    for start in range(g.n):
        if start in colour:
            continue
        colour[start] = 0
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in colour:
                    colour[w] = 1 - colour[v]
                    queue.append(w)
                elif colour[w] == colour[v]:
                    return False
    return True


def oracle_solve(problem: str, instance) -> bool:
    _problem(problem)
    _check(problem, instance)
    if problem in ("sat-gh2", "sat-c2"):
        return sat_oracle(instance)
    if problem == "set-splitting":
        return split_oracle(instance)
    return two_col_oracle(instance)


# --- input formats -----------------------------------------------------------

def parse_dimacs(text: str) -> CnfInstance:
    num_vars = None
    clauses, current = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line[0] in "c%":
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise EncodingError(f"line {lineno}: bad header {line!r}")
            try:
                num_vars = int(parts[2])
            except ValueError:
                raise EncodingError(f"line {lineno}: bad header {line!r}") from None
            continue
        if num_vars is None:
            raise EncodingError(f"line {lineno}: clause before the 'p cnf' header")
        try:
            lits = [int(w) for w in line.split()]
        except ValueError:
            raise EncodingError(f"line {lineno}: non-integer literal in {line!r}") from None
        for lit in lits:
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if num_vars is None:
        raise EncodingError("missing 'p cnf' header")
    if current:
        clauses.append(tuple(current))
    return CnfInstance(num_vars, tuple(clauses))


def parse_set_splitting(text: str) -> SetSplitInstance:
    try:
        data = json.loads(text)
        size = int(data["A"])
        blocks = tuple(frozenset(int(a) for a in b) for b in data["blocks"])
    except (ValueError, KeyError, TypeError) as exc:
        raise EncodingError(f'set splitting input must be JSON {{"A": k, "blocks": [[...]]}}: {exc}') from None
    for i, b in enumerate(blocks):
        if any(a < 1 or a > size for a in b):
            raise EncodingError(f"block {i + 1} has elements outside 1..{size}")
    return SetSplitInstance(size, blocks)


def parse_edge_list(text: str) -> Graph:
    """Header 'p vertices n', then one 'u v' per line with vertices numbered from 1."""
    n = None
    edges = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line or line.startswith("c "):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 3 or parts[1] != "vertices":
                raise EncodingError(f"line {lineno}: header must read 'p vertices n'")
            try:
                n = int(parts[2])
            except ValueError:
                raise EncodingError(f"line {lineno}: header must read 'p vertices n'") from None
            continue
        if n is None:
            raise EncodingError(f"line {lineno}: edge before the 'p vertices n' header")
        if len(parts) != 2:
            raise EncodingError(f"line {lineno}: expected 'u v'")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise EncodingError(f"line {lineno}: non-integer vertex in {line!r}") from None
        if not (1 <= a <= n and 1 <= b <= n):
            raise EncodingError(f"line {lineno}: vertex outside 1..{n}")
        edges.add(frozenset((a - 1, b - 1)))
    if n is None:
        raise EncodingError("missing 'p vertices n' header")
    return Graph(n, frozenset(edges))


def graph_to_edge_list(g: Graph) -> str:
    lines = [f"p vertices {g.n}"]
    lines += [f"{a + 1} {b + 1}" for a, b in sorted(tuple(sorted(e)) for e in g.edges)]
    return "\n".join(lines) + "\n"


def load_instance(problem: str, text: str):
    _problem(problem)
    if problem in ("sat-gh2", "sat-c2"):
        return parse_dimacs(text)
    if problem == "set-splitting":
        return parse_set_splitting(text)
    return parse_edge_list(text)


__all__ = [
    "CnfInstance", "EncodingError", "Graph", "PROBLEMS", "SOURCES", "SetSplitInstance",
    "builtin_names", "builtin_sentence", "encode_instance", "graph_to_edge_list", "load_instance",
    "oracle_solve", "parse_dimacs", "parse_edge_list", "parse_set_splitting", "sat_oracle",
    "sentence_for", "split_oracle", "two_col_oracle",
]
