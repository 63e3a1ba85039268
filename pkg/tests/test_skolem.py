import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ifwb.encodings import builtin_sentence, encode_instance, CnfInstance
from ifwb.skolem import (
    BudgetExceeded, SkolemError, falsity_by_skolem, skolem_table_sizes, skolemize,
    truth_by_skolem, truth_value_by_skolem,
)
from ifwb.syntax import Quant, parse_formula, walk
from ifwb.teams import Structure, Truth, truth_value

from strategies import sentences, structures

P = parse_formula


def _args(plan):
    return {fn.var: fn.args for fn in plan.functions}


def test_plan_for_branching_disjunction():
    plan = skolemize(P("A x (A y (E u/{x}) R(y,u)) | (A z (E v/{x}) R(z,v))"))
    assert plan.universals == ("x", "y", "z")
    assert _args(plan) == {"u": ("y",), "v": ("z",)}
    assert plan.render_matrix() == "A x A y A z R(y,f_u(y)) | R(z,f_v(z))"


def test_plan_examples():
    plan = skolemize(P("A x E y x=y"))
    assert _args(plan) == {"y": ("x",)}
    assert plan.render_matrix() == "A x x=f_y(x)"
    plan = skolemize(P("A x (E y/{x}) x=y"))
    assert _args(plan) == {"y": ()}
    assert plan.render_matrix() == "A x x=f_y()"


def test_existential_arguments_are_kept():
    plan = skolemize(P("A x E z (E y/{x}) R(y,z)"))
    assert _args(plan) == {"z": ("x",), "y": ("z",)}
    assert plan.term("y") == "f_y(f_z(x))"


def test_universal_slashes_erased():
    plan = skolemize(P("A x (A y/{x}) E z R(x,z)"))
    assert _args(plan) == {"z": ("x", "y")}


def test_table_sizes():
    assert skolem_table_sizes(skolemize(P("A x E y x=y")), 3) == {"f_y": 3}


def test_truth_examples():
    assert truth_by_skolem(Structure(3), P("A x E y x=y"))
    assert not truth_by_skolem(Structure(2), P("A x (E y/{x}) x=y"))
    assert truth_by_skolem(Structure(1), P("A x (E y/{x}) x=y"))


def test_phi_on_small_instance_matches_semantics():
    m = encode_instance("sat-gh2", CnfInstance(2, [[1, 2], [-1, -2]]))
    phi = builtin_sentence("phi_sat")
    assert truth_by_skolem(m, phi) == (truth_value(m, phi) is Truth.TRUE)


def test_budget_exceeded():
    m = Structure(3, {"R": {(0, 1)}})
    s = P("A x A y E z (E w/{x}) (R(x,w) | z=y)")
    with pytest.raises(BudgetExceeded) as exc:
        truth_by_skolem(m, s, budget=3)
    assert exc.value.budget == 3


def test_irregular_rejected():
    with pytest.raises(SkolemError):
        skolemize(P("A x A x P(x)"))


def test_budget_env(monkeypatch):
    from ifwb.skolem import budget_from_env
    monkeypatch.setenv("IFWB_BUDGET", "1234")
    assert budget_from_env() == 1234
    monkeypatch.delenv("IFWB_BUDGET")
    assert budget_from_env() == 10 ** 8


def test_falsity_examples():
    assert falsity_by_skolem(Structure(2), P("E x A y x=y"))
    assert not falsity_by_skolem(Structure(2), P("A x (E y/{x}) x=y"))
    assert truth_value_by_skolem(Structure(2), P("A x (E y/{x}) x=y")) is Truth.UNDETERMINED


# properties

@settings(max_examples=300, deadline=None)
@given(structures(max_n=3, constants=("c",)), sentences(depth=3, constants=("c",)))
def test_bridge(m, s):
    assert truth_by_skolem(m, s) == (truth_value(m, s) is Truth.TRUE)


@settings(max_examples=200, deadline=None)
@given(structures(max_n=2), sentences(depth=3))
def test_three_valued_bridge(m, s):
    assert truth_value_by_skolem(m, s) is truth_value(m, s)


def _slash_universals(f, extra):
    from ifwb.syntax import with_children, children
    if isinstance(f, Quant):
        body = _slash_universals(f.body, extra | {f.var})
        slash = f.slash | (extra - {f.var}) if f.kind == "A" else f.slash
        return Quant(f.kind, f.var, frozenset(slash), body)
    kids = children(f)
    return with_children(f, tuple(_slash_universals(k, extra) for k in kids)) if kids else f


@settings(max_examples=200, deadline=None)
@given(structures(max_n=3), sentences(depth=3))
def test_universal_slashes_do_not_matter(m, s):
    s2 = _slash_universals(s, frozenset())
    assert truth_by_skolem(m, s) == truth_by_skolem(m, s2)


@settings(max_examples=100, deadline=None)
@given(structures(max_n=3), sentences(depth=3), st.integers(50, 400))
def test_budget_is_monotone(m, s, budget):
    try:
        low = truth_by_skolem(m, s, budget=budget)
    except BudgetExceeded:
        return
    assert truth_by_skolem(m, s, budget=budget * 10) == low
