import json
import random

import pytest
from hypothesis import given, settings

from ifwb.harness import (
    ONE_BINARY, STRONGLY_EQUIVALENT, TRUTH_EQUIVALENT, SignatureSpec, SoundnessChecker, SuiteResult,
    c2_instances, check_rule_soundness, count_structures, enum_structures, equivalent_bounded,
    gh2_instances, graph_classes, graph_instances, random_completion, random_tree, sentence_corpus,
    split_instances, tree_corpus,
)
from ifwb.patterns import detect_patterns
from ifwb.rewrite import RewriteResult, Rule, apply_rule, rule_sites
from ifwb.syntax import (
    PrefixTree, Quant, completion_flags, drop_vacuous_slashes, free_vars, parse_formula, parse_tree, regularity, slash_all,
)
from ifwb.teams import Truth, truth_value

from strategies import sentences

P = parse_formula
UNARY = SignatureSpec({"P": 1})


def test_enum_counts():
    assert len(list(enum_structures(UNARY, 1))) == 2
    assert len(list(enum_structures(UNARY, 2))) == 4
    assert len(list(enum_structures(SignatureSpec(constants=("c",)), 3))) == 3


def test_enum_matches_count_and_is_deterministic():
    sig = SignatureSpec({"R": 2}, ("c",))
    a = list(enum_structures(sig, 2))
    assert len(a) == count_structures(sig, 2) == 32
    assert len(set(a)) == 32
    assert a == list(enum_structures(sig, 2))


def test_signature_names_distinct():
    with pytest.raises(ValueError):
        SignatureSpec({"c": 1}, ("c",))
    with pytest.raises(ValueError):
        list(enum_structures(UNARY, 0))


def test_distribution_equivalence():
    sig = SignatureSpec({"P": 1, "Q": 1})
    rep = equivalent_bounded(P("A u (P(u) & Q(u))"), P("(A u P(u)) & (A u Q(u))"), sig, 3, STRONGLY_EQUIVALENT)
    assert rep.equal and rep.bound == 3


def test_counterexample_at_size_two():
    f, g = P("A x E y x=y"), P("A x (E y/{x}) x=y")
    rep = equivalent_bounded(f, g, SignatureSpec(), 3)
    assert not rep.equal and rep.counterexample.size == 2
    assert rep.values == (Truth.TRUE, Truth.UNDETERMINED)
    # the counterexample re-checks
    assert truth_value(rep.counterexample, f) is Truth.TRUE
    assert truth_value(rep.counterexample, g) is not Truth.TRUE
    assert json.loads(json.dumps(rep.to_json()))["verdict"] == "counterexample"


def test_self_equivalence():
    f = P("A x (E y/{x}) R(x,y)")
    assert equivalent_bounded(f, f, ONE_BINARY, 2, STRONGLY_EQUIVALENT).equal


def test_open_formula_rejected():
    with pytest.raises(ValueError):
        equivalent_bounded(P("R(x,x)"), P("A x R(x,x)"), ONE_BINARY, 1)


def test_truth_but_not_strong_equivalence():
    # false versus undetermined only shows up in strong mode
    f, g = P("E x A y x=y"), P("A x (E y/{x}) x=y")
    sig = SignatureSpec()
    assert not equivalent_bounded(f, g, sig, 2, STRONGLY_EQUIVALENT).equal
    assert equivalent_bounded(f, g, sig, 2, TRUTH_EQUIVALENT).equal


@settings(max_examples=40, deadline=None)
@given(sentences(depth=2), sentences(depth=2))
def test_strong_implies_truth_equivalence(f, g):
    sig = SignatureSpec({"R": 2, "P": 1})
    if equivalent_bounded(f, g, sig, 2, STRONGLY_EQUIVALENT).equal:
        assert equivalent_bounded(f, g, sig, 2, TRUTH_EQUIVALENT).equal


def test_first_counterexample_is_minimal():
    f, g = P("A x A y x=y"), P("E x x=x")
    rep = equivalent_bounded(f, g, SignatureSpec(), 3)
    assert rep.counterexample.size == 2


# corpora

def test_tree_corpus_contract():
    corpus = tree_corpus(seed=1, count=10)
    assert len(corpus) == 10
    # named trees may slash variables bound only on another branch; those slashes are vacuous
    assert all(regularity(drop_vacuous_slashes(t.root))[0] for t in corpus)
    assert any(detect_patterns(t).signalling for t in corpus)
    assert [t.render() for t in corpus] == [t.render() for t in tree_corpus(seed=1, count=10)]


def test_tree_corpus_covers_pattern_classes():
    reps = [detect_patterns(t) for t in tree_corpus(seed=1, count=24)]
    subs = {s for r in reps for s in r.gh_subclasses}
    assert subs == {"GH1_and", "GH1_or", "GH2_and", "GH2_or"}
    assert any(r.henkin for r in reps) and any(r.modest for r in reps)
    assert any("first" in r.coordinated_kinds for r in reps)
    assert any("second" in r.coordinated_kinds for r in reps)


def test_random_trees_are_regular():
    rng = random.Random(7)
    for _ in range(100):
        t = random_tree(rng)
        assert isinstance(t, PrefixTree) and regularity(t.root)[0] and isinstance(t.root, Quant)


def test_random_completions_are_weak_and_nice():
    rng = random.Random(3)
    for t in tree_corpus(seed=4, count=20):
        e = random_completion(rng, t, ("c",))
        flags = completion_flags(t, e)
        assert flags.weak and flags.nice


def test_sentence_corpus():
    corpus = sentence_corpus(seed=1, count=50)
    assert len(corpus) == len(set(corpus)) == 50
    assert all(not free_vars(drop_vacuous_slashes(s)) for s in corpus)


def test_instance_counts():
    assert len(gh2_instances()) == 14
    assert len(c2_instances()) == 46
    assert len(split_instances(3, 3)) == 18
    assert len(graph_classes(4)) == 11
    assert len(graph_instances(4)) == 18


# rule soundness

def _sites(rule, count=30):
    out = []
    for t in tree_corpus(seed=9, count=count):
        out += [(t, loc, params) for r, loc, params in rule_sites(t) if r == rule]
    return out


def test_swap_sound():
    corpus = _sites(Rule.SWAP) + [(parse_tree("A u (E v/{u}) []"), ())]
    rep = check_rule_soundness(Rule.SWAP, corpus, completions_per_tree=3, max_n=2)
    assert rep["checked"] > 0 and rep["counterexamples"] == []


def test_drop_ex_slash_sound():
    corpus = [(parse_tree("E x (E y/{x}) []"), (0,)), (parse_tree("E z E x (E y/{x,z}) []"), (0, 0))]
    corpus += _sites(Rule.DROP_EX_SLASH)
    rep = check_rule_soundness(Rule.DROP_EX_SLASH, corpus, completions_per_tree=4, max_n=2)
    assert rep["counterexamples"] == []


def test_corrupted_rule_is_caught():
    def corrupted(t, loc, params):
        # a correct DropExSlash followed by a bogus slash cutting the root universal
        r = apply_rule(t, Rule.DROP_EX_SLASH, loc)
        root = r.tree.root
        bad = PrefixTree(Quant(root.kind, root.var, root.slash, slash_all(root.body, root.var)))
        return RewriteResult(bad, r.step)

    corpus = [(parse_tree("A x E y (E z/{y}) []"), (0, 0))] * 4
    rep = check_rule_soundness(Rule.DROP_EX_SLASH, corpus, completions_per_tree=10, max_n=2,
                               seed=1, rewriter=corrupted)
    assert rep["counterexamples"]


def test_checker_reports_first_difference():
    checker = SoundnessChecker(SignatureSpec(), 3)
    hit = checker.compare(P("A x E y x=y"), P("A x (E y/{x}) x=y"), full=True)
    assert hit[0].size == 2


def test_suite_result_line():
    r = SuiteResult("demo", True, 3, 0.5, "ok")
    assert r.line().startswith("PASS demo")
    assert SuiteResult("demo", False, 3, 0.5, "bad").line().startswith("FAIL demo")
