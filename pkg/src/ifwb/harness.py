"""Structure enumeration, bounded equivalence, corpora and the verification suites."""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

from . import encodings as enc
from .patterns import FO, NP_COMPLETE, classify, named_tree
from .rewrite import PRESERVES_C, Rule, apply_rule, is_prenex, prenex, rule_sites, transport_completion
from .skolem import truth_by_skolem
from .syntax import (
    And, Atom, Eq, Gap, Neg, Or, PrefixTree, Quant,
    complete, completion_flags, free_vars, paths, regularity, render_formula,
)
from .teams import Structure, Team, Truth, neg_satisfies, satisfies, truth_value


# --- signatures and structures -------------------------------------------------

@dataclass(frozen=True)
class SignatureSpec:
    relations: tuple = ()  # (name, arity) pairs
    constants: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple((str(r), int(a)) for r, a in dict(self.relations).items()))
        object.__setattr__(self, "constants", tuple(self.constants))
        names = [r for r, _ in self.relations] + list(self.constants)
        if len(set(names)) != len(names):
            raise ValueError(f"signature names must be distinct: {names}")

    @property
    def arities(self) -> dict:
        return dict(self.relations)


ONE_BINARY = SignatureSpec({"R": 2})
ONE_BINARY_TWO_CONSTANTS = SignatureSpec({"R": 2}, ("c", "d"))


def enum_structures(sig: SignatureSpec, n: int):
    """Every structure with domain {0..n-1} over sig, in a fixed order."""
    if n < 1:
        raise ValueError("domain size must be at least 1")
    spaces = [list(itertools.product(range(n), repeat=ar)) for _, ar in sig.relations]
    for masks in itertools.product(*[range(1 << len(s)) for s in spaces]):
        rels = {name: {t for i, t in enumerate(space) if mask >> i & 1}
                for (name, _), space, mask in zip(sig.relations, spaces, masks)}
        for consts in itertools.product(range(n), repeat=len(sig.constants)):
            yield Structure(n, rels, dict(zip(sig.constants, consts)), sig.arities)


def count_structures(sig: SignatureSpec, n: int) -> int:
    return 2 ** sum(n ** ar for _, ar in sig.relations) * n ** len(sig.constants)


# --- bounded equivalence -----------------------------------------------------

TRUTH_EQUIVALENT = "truth_equivalent"
STRONGLY_EQUIVALENT = "strongly_equivalent"


@dataclass(frozen=True)
class EquivalenceReport:
    mode: str
    bound: int
    equal: bool
    counterexample: Structure | None = None
    values: tuple = ()

    def to_json(self) -> dict:
        out = {"mode": self.mode, "bound": self.bound, "verdict": "equal" if self.equal else "counterexample"}
        if not self.equal:
            out["structure"] = self.counterexample.to_json()
            out["values"] = [v.value for v in self.values]
        return out


def equivalent_bounded(f, g, sig: SignatureSpec, max_n: int = 3, mode: str = TRUTH_EQUIVALENT) -> EquivalenceReport:
    if mode not in (TRUTH_EQUIVALENT, STRONGLY_EQUIVALENT):
        raise ValueError(f"unknown mode {mode!r}")
    for h in (f, g):
        if free_vars(h):
            raise ValueError(f"not a sentence: {render_formula(h)}")
    for n in range(1, max_n + 1):
        for m in enum_structures(sig, n):
            a, b = truth_value(m, f), truth_value(m, g)
            same = a == b if mode == STRONGLY_EQUIVALENT else (a == Truth.TRUE) == (b == Truth.TRUE)
            if not same:
                return EquivalenceReport(mode, max_n, False, m, (a, b))
    return EquivalenceReport(mode, max_n, True)


# --- random generation -------------------------------------------------------

VAR_POOL = ("x", "y", "z", "u", "v", "w")


def random_literal(rng: random.Random, terms, relations=(("R", 2),)):
    terms = list(terms)
    if relations and rng.random() < 0.6:
        rel, ar = rng.choice(list(relations))
        f = Atom(rel, tuple(rng.choice(terms) for _ in range(ar)))
    else:
        f = Eq(rng.choice(terms), rng.choice(terms))
    return Neg(f) if rng.random() < 0.4 else f


def random_qf(rng: random.Random, terms, relations=(("R", 2),)):
    """A literal, or two literals joined by one connective."""
    f = random_literal(rng, terms, relations)
    if rng.random() < 0.5:
        g = random_literal(rng, terms, relations)
        f = And(f, g) if rng.random() < 0.5 else Or(f, g)
    return f


def _term_pool(bound, constants):
    from .syntax import Const
    return sorted(bound) + [Const(c) for c in constants]


def random_completion(rng: random.Random, t: PrefixTree, constants=(), relations=(("R", 2),)) -> dict:
    """A weak nice completion: quantifier-free, using only variables bound on each path."""
    return {p.gap: random_qf(rng, _term_pool(p.bound, constants), relations) for p in paths(t)}


def random_tree(rng: random.Random, max_depth: int = 4, max_quants: int = 4) -> PrefixTree:
    """A regular positive initial tree rooted at a quantifier."""
    budget = [max_quants]

    def quant(above: tuple, depth: int):
        budget[0] -= 1
        free = [v for v in VAR_POOL if v not in above]
        var = rng.choice(free)
        kind = "A" if not above else rng.choice("AE")
        slash = frozenset(w for w in above if rng.random() < 0.35)
        return Quant(kind, var, slash, node(above + (var,), depth + 1))

    def node(above: tuple, depth: int):
        r = rng.random()
        if depth >= max_depth or r < 0.25:
            return Gap(0)
        if budget[0] > 0 and len(above) < len(VAR_POOL) and r < 0.75:
            return quant(above, depth)
        conn = And if rng.random() < 0.5 else Or
        return conn(node(above, depth + 1), node(above, depth + 1))

    from .syntax import renumber_gaps
    root, _ = renumber_gaps(quant((), 0))
    return PrefixTree(root)


SEED_TREES = (
    "signalling", "henkin_linear", "henkin_branching", "GH1_and", "GH2_and", "GH1_or", "GH2_or",
    "C1", "C2", "C1'",
)

MODEST_EXEMPLARS = {
    "modest_AE": "A x E y []",
    "modest_AEAE": "A x E y A z E w []",
    "modest_branching": "A x ((E y []) | (A z E w []))",
}


def tree_corpus(seed: int = 1, count: int = 24, max_depth: int = 4, max_quants: int = 4) -> list:
    """Pattern exemplars first, then seeded random regular trees."""
    from .syntax import parse_tree
    corpus = [named_tree(n) for n in SEED_TREES] + [parse_tree(s) for s in MODEST_EXEMPLARS.values()]
    corpus = corpus[:count]
    rng = random.Random(seed)
    seen = {t.render() for t in corpus}
    while len(corpus) < count:
        t = random_tree(rng, max_depth, max_quants)
        if t.render() not in seen and regularity(t.root)[0]:
            seen.add(t.render())
            corpus.append(t)
    return corpus


def random_formula(rng: random.Random, free: tuple, depth: int = 3, relations=(("R", 2),), constants=()):
    """An NNF IF formula whose free variables lie in `free`."""

    def go(scope: tuple, d: int):
        r = rng.random()
        if d <= 0 or r < 0.25:
            return random_literal(rng, _term_pool(scope, constants) or ["x"], relations)
        avail = [v for v in VAR_POOL if v not in scope]
        if avail and r < 0.65:
            var = rng.choice(avail)
            slash = frozenset(w for w in scope if rng.random() < 0.4)
            return Quant(rng.choice("AE"), var, slash, go(scope + (var,), d - 1))
        conn = And if rng.random() < 0.5 else Or
        return conn(go(scope, d - 1), go(scope, d - 1))

    return go(tuple(free), depth)


def random_team(rng: random.Random, vars_: tuple, n: int, max_rows: int = 4, min_rows: int = 0) -> Team:
    rows = {tuple(rng.randrange(n) for _ in vars_) for _ in range(rng.randint(min_rows, max_rows))}
    return Team(tuple(vars_), frozenset(rows))


def random_structure(rng: random.Random, sig: SignatureSpec, n: int) -> Structure:
    rels = {name: {t for t in itertools.product(range(n), repeat=ar) if rng.random() < 0.5}
            for name, ar in sig.relations}
    return Structure(n, rels, {c: rng.randrange(n) for c in sig.constants}, sig.arities)


# --- suite plumbing ----------------------------------------------------------

@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    elapsed: float
    detail: str = ""
    failures: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.checked} checks in {self.elapsed:.1f}s{'; ' + self.detail if self.detail else ''}"

    def to_json(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "checked": self.checked,
                "elapsed": round(self.elapsed, 3), "detail": self.detail, "failures": self.failures[:10]}


def _timed(name, fn, limit=None):
    start = time.perf_counter()
    checked, failures, detail = fn()
    elapsed = time.perf_counter() - start
    ok = not failures and (limit is None or elapsed < limit)
    if limit is not None and elapsed >= limit:
        detail = (detail + "; " if detail else "") + f"over the {limit}s limit"
    return SuiteResult(name, ok, checked, elapsed, detail, failures)


# --- encoding suites ---------------------------------------------------------

def gh2_instances() -> list:
    """CNFs over letters 1,2 with one or two clauses, each clause one literal of each letter."""
    kinds = [(a, 2 * b) for a in (1, -1) for b in (1, -1)]
    picks = [(c,) for c in kinds] + list(itertools.combinations_with_replacement(kinds, 2))
    return [enc.CnfInstance(2, p) for p in picks]


def _clauses(num_vars: int) -> list:
    lits = [s * v for v in range(1, num_vars + 1) for s in (1, -1)]
    return [c for r in range(1, len(lits) + 1) for c in itertools.combinations(lits, r)
            if not any(-l in c for l in c)]


def c2_instances() -> list:
    one = [enc.CnfInstance(k, (c,)) for k in (1, 2) for c in _clauses(k)]
    two = [enc.CnfInstance(2, p) for p in itertools.combinations_with_replacement(_clauses(2), 2)]
    return one + two


def split_instances(max_size: int = 3, max_blocks: int = 3) -> list:
    out = []
    for k in range(1, max_size + 1):
        blocks = [frozenset(c) for r in range(2, k + 1) for c in itertools.combinations(range(1, k + 1), r)]
        for b in range(0, max_blocks + 1):
            for fam in itertools.combinations(blocks, b):
                out.append(enc.SetSplitInstance(k, fam))
    return out


def _canonical_graph(n: int, edges) -> tuple:
    return min(tuple(sorted(tuple(sorted((p[a], p[b]))) for a, b in edges))
               for p in itertools.permutations(range(n)))


def graph_classes(n: int) -> list:
    """One representative per isomorphism class of graphs on exactly n vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    reps = {}
    for mask in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        reps.setdefault(_canonical_graph(n, edges), edges)
    return [enc.Graph(n, frozenset(frozenset(e) for e in es)) for _, es in sorted(reps.items())]


def graph_instances(max_n: int = 4) -> list:
    return [g for n in range(1, max_n + 1) for g in graph_classes(n)]


def _agreement(problem: str, instances: list):
    def run():
        sentence = enc.sentence_for(problem)
        failures = []
        for inst in instances:
            want = enc.oracle_solve(problem, inst)
            got = truth_by_skolem(enc.encode_instance(problem, inst), sentence)
            if got != want:
                failures.append({"instance": _describe_instance(inst), "oracle": want, "sentence": got})
        detail = f"{len(instances) - len(failures)}/{len(instances)} agree"
        return len(instances), failures, detail
    return run


def _describe_instance(inst) -> str:
    if isinstance(inst, enc.CnfInstance):
        return " & ".join("(" + " | ".join(("~" if l < 0 else "") + f"p{abs(l)}" for l in c) + ")"
                          for c in inst.clauses)
    if isinstance(inst, enc.SetSplitInstance):
        return str(inst.to_json())
    return enc.graph_to_edge_list(inst).strip().replace("\n", "; ")


def suite_sat_gh2() -> SuiteResult:
    return _timed("SAT via the GH2(∨) sentence", _agreement("sat-gh2", gh2_instances()), 60)


def suite_sat_c2() -> SuiteResult:
    return _timed("SAT via the C2 sentence", _agreement("sat-c2", c2_instances()), 300)


def suite_set_splitting() -> SuiteResult:
    return _timed("SET SPLITTING via the C1 sentence", _agreement("set-splitting", split_instances()), 60)


def suite_two_col(max_n: int = 4) -> SuiteResult:
    return _timed("2-COLORABILITY via the C1 sentence", _agreement("2col", graph_instances(max_n)), 60)


# --- classifier suite --------------------------------------------------------

CONFORMANCE_TABLE = (
    ("henkin_linear", NP_COMPLETE, "3-COLORING"),
    ("henkin_branching", NP_COMPLETE, "3-COLORING"),
    ("signalling", NP_COMPLETE, "EXACT COVER BY 3-SETS"),
    ("GH1_and", FO, None),
    ("GH2_and", FO, None),
    ("GH1_or", FO, None),
    ("GH2_or", NP_COMPLETE, "SAT"),
    ("C1", NP_COMPLETE, "SET SPLITTING"),
    ("C2", NP_COMPLETE, "SAT"),
    ("C3", NP_COMPLETE, "SAT"),
    (("C1'", "C2'", "C3'", "C4'", "C5'", "C6'"), FO, None),
    ("modest_AE", FO, None),
    ("modest_AEAE", FO, None),
)


def _conformance_tree(name: str) -> PrefixTree:
    from .syntax import parse_tree
    return parse_tree(MODEST_EXEMPLARS[name]) if name in MODEST_EXEMPLARS else named_tree(name)


def suite_classifier() -> SuiteResult:
    def run():
        failures = []
        for names, kind, problem in CONFORMANCE_TABLE:
            for name in (names if isinstance(names, tuple) else (names,)):
                v = classify(_conformance_tree(name))
                if v.kind != kind or v.problem != problem:
                    failures.append({"tree": name, "expected": [kind, problem], "got": [v.kind, v.problem]})
        rows = len(CONFORMANCE_TABLE)
        bad_rows = len({f["tree"] for f in failures})
        return rows, failures, f"{rows - bad_rows}/{rows} rows exact"
    return _timed("classifier table conformance", run)


# --- rewrite soundness -------------------------------------------------------

def three_valued(m: Structure, sentence) -> Truth:
    """Truth through the Skolem engine, falsity through team semantics."""
    if truth_by_skolem(m, sentence):
        return Truth.TRUE
    return Truth.FALSE if neg_satisfies(m, Team.unit(), _prepared(sentence)) else Truth.UNDETERMINED


def _prepared(sentence):
    from .teams import prepare_sentence
    return prepare_sentence(sentence)


class SoundnessChecker:
    """Compares completed trees before and after a rewrite step on every small structure."""

    def __init__(self, sig: SignatureSpec = ONE_BINARY, max_n: int = 3):
        self.sig = sig
        self.max_n = max_n
        self.structures = [m for n in range(1, max_n + 1) for m in enum_structures(sig, n)]
        self._cache: dict = {}

    def verdicts(self, sentence, full: bool) -> tuple:
        key = (sentence, full)
        if key not in self._cache:
            if full:
                vals = tuple(three_valued(m, sentence) for m in self.structures)
            else:
                vals = tuple(Truth.TRUE if truth_by_skolem(m, sentence) else None for m in self.structures)
            self._cache[key] = vals
        return self._cache[key]

    def compare(self, before, after, full: bool):
        """First structure (in sweep order) where the verdicts differ, or None."""
        a, b = self.verdicts(before, full), self.verdicts(after, full)
        for m, x, y in zip(self.structures, a, b):
            if x != y:
                return m, x, y
        return None


def check_step(checker: SoundnessChecker, t: PrefixTree, result, completions: list) -> list:
    """Counterexamples for one rewrite step across the given completions of t."""
    full = result.step.complexity_note == PRESERVES_C
    bad = []
    for e in completions:
        before = complete(t, e)
        after = complete(result.tree, transport_completion(result.step, e))
        hit = checker.compare(before, after, full)
        if hit:
            m, x, y = hit
            bad.append({
                "rule": result.step.rule.value, "at": list(result.step.locator),
                "before": render_formula(before), "after": render_formula(after),
                "structure": m.to_json(),
                "values": [x.value if x else "not True", y.value if y else "not True"],
            })
    return bad


def check_rule_soundness(rule, corpus, completions_per_tree: int = 3, sig: SignatureSpec = ONE_BINARY,
                         max_n: int = 3, seed: int = 0, rewriter=None, checker=None) -> dict:
    """corpus holds (tree, locator) or (tree, locator, params) entries."""
    rule = Rule(rule)
    rewriter = rewriter or (lambda t, loc, params: apply_rule(t, rule, loc, **params))
    checker = checker or SoundnessChecker(sig, max_n)
    rng = random.Random(seed)
    rels = sig.relations
    checked, failures = 0, []
    for entry in corpus:
        t, loc = entry[0], entry[1]
        params = entry[2] if len(entry) > 2 else {}
        result = rewriter(t, loc, params)
        comps = [random_completion(rng, t, sig.constants, rels) for _ in range(completions_per_tree)]
        failures += check_step(checker, t, result, comps)
        checked += len(comps)
    return {"rule": rule.value, "checked": checked, "counterexamples": failures}


def suite_rewrite_soundness(seed: int = 1, trees: int = 20, completions: int = 3, max_n: int = 3) -> SuiteResult:
    def run():
        checker = SoundnessChecker(ONE_BINARY, max_n)
        rng = random.Random(seed)
        checked, failures, steps = 0, [], 0
        for t in tree_corpus(seed, trees):
            comps = [random_completion(rng, t) for _ in range(completions)]
            for rule, loc, params in rule_sites(t):
                result = apply_rule(t, rule, loc, **params)
                failures += check_step(checker, t, result, comps)
                checked += len(comps) * len(checker.structures)
                steps += 1
        return checked, failures, f"{steps} rule applications, {len(failures)} counterexamples"
    return _timed("rewrite soundness", run, 600)


# --- evaluator bridge --------------------------------------------------------

def sentence_corpus(seed: int = 1, count: int = 50, sig: SignatureSpec = ONE_BINARY_TWO_CONSTANTS) -> list:
    rng = random.Random(seed)
    out, seen = [], set()
    trees = tree_corpus(seed, max(count, 24))
    while len(out) < count:
        t = trees[len(out) % len(trees)]
        s = complete(t, random_completion(rng, t, sig.constants, sig.relations))
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


def suite_bridge(seed: int = 1, count: int = 50, max_n: int = 3) -> SuiteResult:
    def run():
        sig = ONE_BINARY_TWO_CONSTANTS
        structures = [m for n in range(1, max_n + 1) for m in enum_structures(sig, n)]
        checked, failures = 0, []
        for s in sentence_corpus(seed, count, sig):
            for m in structures:
                a = truth_value(m, s) == Truth.TRUE
                b = truth_by_skolem(m, s)
                checked += 1
                if a != b:
                    failures.append({"sentence": render_formula(s), "structure": m.to_json(),
                                     "teams": a, "skolem": b})
        return checked, failures, f"{checked - len(failures)}/{checked} agree"
    return _timed("evaluator bridge", run)


# --- team semantics properties -----------------------------------------------

def _subteams(x: Team):
    rows = sorted(x.rows)
    for r in range(len(rows) + 1):
        for sub in itertools.combinations(rows, r):
            yield Team(x.vars, frozenset(sub))


def suite_semantics(seed: int = 1, triples: int = 1000, max_n: int = 3) -> SuiteResult:
    def run():
        rng = random.Random(seed)
        sig = ONE_BINARY_TWO_CONSTANTS
        failures = []
        for _ in range(triples):
            n = rng.randint(1, max_n)
            free = tuple(rng.sample(("x", "y", "z"), rng.randint(1, 2)))
            f = random_formula(rng, free, rng.randint(1, 3), sig.relations, sig.constants)
            dom = tuple(sorted(set(free) | free_vars(f)))
            m = random_structure(rng, sig, n)
            x = random_team(rng, dom, n, min_rows=1)
            empty = Team(dom, frozenset())
            if not (satisfies(m, empty, f) and neg_satisfies(m, empty, f)):
                failures.append({"property": "empty team", "formula": render_formula(f)})
            for sat in (satisfies, neg_satisfies):
                if sat(m, x, f):
                    for y in _subteams(x):
                        if not sat(m, y, f):
                            failures.append({"property": "downward closure", "formula": render_formula(f),
                                             "structure": m.to_json(), "team": x.to_json(), "subteam": y.to_json()})
                            break
        return triples, failures, f"{len(failures)} violations"
    return _timed("team semantics properties", run)


# --- prenex contract ---------------------------------------------------------

def transport_through(steps, e: dict) -> dict:
    for s in steps:
        e = transport_completion(s, e)
    return e


def suite_prenex(seed: int = 1, trees: int = 24, completions: int = 3, max_n: int = 3) -> SuiteResult:
    def run():
        checker = SoundnessChecker(ONE_BINARY, max_n)
        rng = random.Random(seed)
        checked, failures = 0, []
        for t in tree_corpus(seed, trees):
            p, steps = prenex(t)
            shape = is_prenex(p) and regularity(p.root)[0] and p.gap_count == t.gap_count
            if not shape:
                failures.append({"tree": t.render(), "prenex": p.render(), "problem": "shape"})
                continue
            for _ in range(completions):
                e = random_completion(rng, t)
                before, after = complete(t, e), complete(p, transport_through(steps, e))
                hit = checker.compare(before, after, full=False)
                checked += 1
                if hit:
                    failures.append({"tree": t.render(), "before": render_formula(before),
                                     "after": render_formula(after), "structure": hit[0].to_json()})
        return checked, failures, f"{trees} trees"
    return _timed("prenex contract", run)


# --- named suites ------------------------------------------------------------

SUITES = {
    "encodings": (suite_sat_gh2, suite_sat_c2, suite_set_splitting, suite_two_col),
    "classifier": (suite_classifier,),
    "rules": (suite_rewrite_soundness, suite_prenex),
    "semantics": (suite_bridge, suite_semantics),
}


__all__ = [
    "EquivalenceReport", "SignatureSpec", "SoundnessChecker", "SuiteResult", "SUITES",
    "ONE_BINARY", "ONE_BINARY_TWO_CONSTANTS", "STRONGLY_EQUIVALENT", "TRUTH_EQUIVALENT",
    "c2_instances", "check_rule_soundness", "check_step", "count_structures", "enum_structures",
    "equivalent_bounded", "gh2_instances", "graph_classes", "graph_instances", "random_completion",
    "random_formula", "random_tree", "sentence_corpus", "split_instances", "three_valued",
    "tree_corpus", "transport_through",
    "suite_bridge", "suite_classifier", "suite_prenex", "suite_rewrite_soundness", "suite_sat_c2",
    "suite_sat_gh2", "suite_semantics", "suite_set_splitting", "suite_two_col",
]
