import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ifwb.harness import tree_corpus
from ifwb.patterns import (
    FO, NAMED_TREES, NP_COMPLETE, UNKNOWN, PatternError, canonical_form, check_witness, classify,
    dependence_graph, detect_patterns, extends, named_tree, same_up_to_renaming,
)
from ifwb.syntax import And, Gap, Or, PrefixTree, Quant, gaps, node_at, parse_tree, replace_at, walk
from ifwb.syntax.trees import renumber_gaps

from strategies import trees

T = parse_tree

FAMILIES = ("signalling", "henkin", "generalized_henkin", "coordinated")


def test_dependence_graph_examples():
    g = dependence_graph(T("A x E y []"))
    assert g.has_edge((), (0,))
    assert not dependence_graph(T("A x (E y/{x}) []")).edges
    g = dependence_graph(T("A x E z (E y/{x}) []"))
    assert g.has_edge((), (0,)) and g.has_edge((0,), (0, 0))
    assert not g.has_edge((), (0, 0))


def test_dependence_edges_respect_order_and_slashes():
    for t in tree_corpus(seed=3, count=20):
        g = dependence_graph(t)
        for a, b in g.edges:
            assert len(a) < len(b) and b[: len(a)] == a
            q, r = node_at(t.root, a), node_at(t.root, b)
            assert q.var not in r.slash


def test_detect_signalling():
    rep = detect_patterns(T("A x E z (E y/{x}) []"))
    assert rep.signalling and not rep.modest


def test_detect_henkin():
    rep = detect_patterns(T("A x E y A z (E w/{x,y}) []"))
    assert rep.henkin and rep.generalized_henkin


def test_detect_gh2_or():
    rep = detect_patterns(T("A x A y (((E u/{y}) []) | ((E v/{x}) []))"))
    assert rep.generalized_henkin and rep.gh_subclasses == ("GH2_or",)
    assert not (rep.coordinated or rep.henkin or rep.signalling)


@pytest.mark.parametrize("name,sub", [("GH1_and", "GH1_and"), ("GH2_and", "GH2_and"),
                                      ("GH1_or", "GH1_or"), ("GH2_or", "GH2_or")])
def test_gh_subclasses(name, sub):
    assert sub in detect_patterns(named_tree(name)).gh_subclasses


def test_coordinated_kinds():
    assert detect_patterns(named_tree("C1")).coordinated_kinds == ("first",)
    assert detect_patterns(named_tree("C2")).coordinated_kinds == ("first",)
    for n in ("C1'", "C2'", "C3'", "C4'", "C5'", "C6'"):
        rep = detect_patterns(named_tree(n))
        assert rep.coordinated_kinds == ("second",), n


def test_modest_exemplars():
    for s in ("A x E y []", "A x E y A z E w []", "A x ((E y []) | (A z E w []))"):
        assert detect_patterns(T(s)).modest


def test_irregular_tree_rejected():
    with pytest.raises(PatternError):
        detect_patterns(T("A x A x []"))
    with pytest.raises(PatternError):
        classify(T("A x A x []"))


@pytest.mark.parametrize("name", sorted(NAMED_TREES))
def test_witnesses_recheck(name):
    t = named_tree(name)
    rep = detect_patterns(t)
    for family, locs in rep.witnesses.items():
        assert check_witness(t, family, locs), family
    v = classify(t)
    if v.kind == NP_COMPLETE:
        assert v.witness


def test_classify_examples():
    assert classify(T("A x E y []")).kind == FO
    v = classify(named_tree("GH2_or"))
    assert (v.kind, v.problem) == (NP_COMPLETE, "SAT")
    v = classify(T("A x ((A y (E u/{x}) []) | (A z (E v/{x}) []))"))
    assert (v.kind, v.problem) == (NP_COMPLETE, "SET SPLITTING")


def test_classify_signalling_and_henkin():
    assert classify(named_tree("signalling")).problem == "EXACT COVER BY 3-SETS"
    assert classify(named_tree("henkin_linear")).problem == "3-COLORING"
    assert classify(named_tree("henkin_branching")).problem == "3-COLORING"


def test_second_kind_minimal_trees_are_fo_up_to_renaming():
    t = T("A a ([] | ((A b (E c/{a}) []) & (A d (E e/{a}) [])))")
    v = classify(t)
    assert v.kind == FO and v.branch == 6


def test_unknown_names_open_family():
    # C1' with an extra universal under the disjunction escapes the minimal forms
    t = T("A x ([] | (A q ((A y (E u/{x}) []) & (A z (E v/{x}) []))))")
    v = classify(t)
    assert v.kind == UNKNOWN
    assert any("C1'-C6'" in d for d in v.diagnostics)


def test_and_coordinated_reported_only_as_diagnostic():
    t = T("A x ((A y (E u/{x}) []) & (A z (E v/{x}) []))")
    rep = detect_patterns(t)
    assert rep.and_coordinated and not rep.coordinated
    v = classify(t)
    assert v.kind != NP_COMPLETE


def test_extends_examples():
    t = T("A x A z (E y/{z}) (E w/{x,y}) []")
    assert extends(t, t) == {loc: loc for loc, n in walk(t.root) if not isinstance(n, Gap)}
    bigger = T("A x A z (E y/{z}) (E w/{x,y}) ([] & [])")
    assert extends(bigger, t) is not None
    assert extends(T("A x E y []"), T("A x (E y/{x}) []")) is None


def test_extends_allows_renaming():
    assert extends(T("A a E b []"), T("A x E y []")) is not None


def test_canonical_form():
    assert same_up_to_renaming(T("A x A y ((E u []) | (E v []))"), T("A b A a ((E q []) | (E p []))"))
    assert canonical_form(T("A x E y []")) != canonical_form(T("E x A y []"))


# modest iff the classifier stops at the modest branch
@pytest.mark.parametrize("t", tree_corpus(seed=1, count=30), ids=lambda t: t.render())
def test_modest_iff_modest_branch(t):
    assert detect_patterns(t).modest == (classify(t).branch == 5)


def test_henkin_implies_generalized_henkin():
    for t in tree_corpus(seed=5, count=40):
        rep = detect_patterns(t)
        assert rep.generalized_henkin or not rep.henkin


@settings(max_examples=200, deadline=None)
@given(trees())
def test_renaming_invariance(t):
    names = {}
    for _, n in walk(t.root):
        if isinstance(n, Quant):
            names.setdefault(n.var, f"r{len(names)}")
    renamed = T(_rename_text(t.render(), names))
    assert classify(t).as_dict()["verdict"] == classify(renamed).kind
    assert detect_patterns(t).as_dict() == detect_patterns(renamed).as_dict()


def _rename_text(text, names):
    import re
    return re.sub(r"\b[a-z]\w*\b", lambda m: names.get(m.group(0), m.group(0)), text)


@settings(max_examples=200, deadline=None)
@given(trees())
def test_witness_validity(t):
    rep = detect_patterns(t)
    for family, locs in rep.witnesses.items():
        assert check_witness(t, family, locs)
    assert rep.modest == (not (rep.signalling or rep.generalized_henkin or rep.coordinated))


@st.composite
def grafted(draw):
    """A named tree and an extension of it built by grafting below gaps."""
    base = named_tree(draw(st.sampled_from(sorted(NAMED_TREES))))
    root = base.root
    fresh = iter(f"g{k}" for k in range(10))
    for _ in range(draw(st.integers(1, 3))):
        spots = [(loc, n) for loc, n in walk(root) if isinstance(n, Gap)]
        loc, _ = draw(st.sampled_from(spots))
        above = [node_at(root, loc[:i]).var for i in range(len(loc))
                 if isinstance(node_at(root, loc[:i]), Quant)]
        if draw(st.booleans()):
            slash = frozenset(draw(st.lists(st.sampled_from(above), max_size=2))) if above else frozenset()
            new = Quant(draw(st.sampled_from("AE")), next(fresh), slash, Gap(0))
        else:
            new = draw(st.sampled_from([And, Or]))(Gap(0), Gap(1))
        root = replace_at(root, loc, new)
    root, _ = renumber_gaps(root)
    return base, PrefixTree(root)


@settings(max_examples=200, deadline=None)
@given(grafted())
def test_pattern_monotone_under_extension(pair):
    t, u = pair
    assert extends(u, t) is not None
    rt, ru = detect_patterns(t), detect_patterns(u)
    for fam in FAMILIES:
        if getattr(rt, fam):
            assert getattr(ru, fam), fam


def test_pattern_monotone_on_corpus_pairs():
    corpus = tree_corpus(seed=2, count=20)
    checked = 0
    for t, u in itertools.permutations(corpus, 2):
        if extends(u, t) is None:
            continue
        checked += 1
        rt, ru = detect_patterns(t), detect_patterns(u)
        for fam in FAMILIES:
            assert getattr(ru, fam) or not getattr(rt, fam)
    assert checked > 0
